#pragma once

// Chekhov-Fock triangle algebra of the once-punctured torus and its
// standard level-n representation:
//   X1 w_i = r1 q^i w_i,   X2 w_i = r2 q^{-i} w_{i+1},   X3 w_i = r3 w_{i-1},
// with X1 X2 = q X2 X1, X2 X3 = q X3 X2, X3 X1 = q X1 X3.
//
// Skein generators embed through Weyl-symmetrized monomials
//   K1 = [X2 X3] + [X2^{-1} X3^{-1}] + [X2 X3^{-1}]   (indices cyclic),
//   P  = [X1^2 X2^2 X3^2] + [X1^{-2} X2^{-2} X3^{-2}]  (central scalar),
// where [U1...Uk] = q^{-(1/2) sum_{j<l} comm(Uj,Ul)} U1...Uk.
//
// The square of the representation (q^4-commuting triple Y1, Y2, Y3) carries
// an order-three symmetry Y1 -> Y3 -> Y2 -> Y1 realized by the intertwiner
//   Lambda_{i,k} = q^{k^2 + i^2 + 4ik + i - k},
// whose trace is the quadratic sum  sum_i q^{6 i^2}.

#include <vector>

#include "qti/intertwiner.hpp"
#include "qti/matrices.hpp"

namespace qti::pt {

using cyc::CycInt;
using cyc::CycScalar;
using cyc::QRing;
using mat::CycMatrix;
using mat::ScaledPermMatrix;

struct CFRep {
    QRing ring;
    CycScalar r1, r2, r3;
    ScaledPermMatrix X1, X2, X3;
    long long n() const { return ring.n; }
};

// Builds the representation and verifies the three q-commutation relations
// exactly.
CFRep build_cf_rep(const QRing& ring, const CycScalar& r1, const CycScalar& r2,
                   const CycScalar& r3);

struct CFWord {
    int gen;      // 1, 2, or 3
    long long e;  // power of the generator
};

// Weyl-symmetrized product of generator powers.  The commutation exponents
// come from the structure constants c(i, i+1) = 1 (cyclic); each pairwise
// constant is re-verified against the matrices before use.
ScaledPermMatrix weyl_bracket(const CFRep& rho, const std::vector<CFWord>& word);

struct SkeinGenerators {
    CycMatrix K1, K2, K3;
    CycMatrix P;
    CycInt puncture_scalar;  // P = p Id

    SkeinGenerators(long long n, long long order)
        : K1(n, order), K2(n, order), K3(n, order), P(n, order), puncture_scalar(order) {}
};

// The three loop generators and the puncture element.  Verifies the cyclic
// skein relations  q^{-1/2} Ki Kj - q^{1/2} Kj Ki = (q^{-1} - q) Kl  and that
// P is the central scalar (r1 r2 r3)^2 q + (r1 r2 r3)^{-2} q^{-1}.
SkeinGenerators embed_skein_generators(const CFRep& rho);

struct ShadowCheck {
    CycInt t1, t2, t3;       // scalars of T_n(Ki)
    CycInt puncture_scalar;  // p
    CycInt puncture_trace;   // T_n(p)
    bool boundary_match = false;  // ti == -(r^n products) closed form
    bool chebyshev_match = false;  // full Chebyshev recurrence on the matrices
    bool matrix_checked = false;  // whether the recurrence path ran
    bool puncture_match = false;  // T_n(p) == -t1 t2 t3 - t1^2 - t2^2 - t3^2 + 2

    ShadowCheck(long long order)
        : t1(order), t2(order), t3(order), puncture_scalar(order), puncture_trace(order) {}
};

// Shadow of the representation: evaluates T_n on the skein generators.  The
// scalars are computed through generalized-permutation powers of the bracket
// summands; with_matrix_chebyshev additionally runs the full matrix
// recurrence T_0 = 2 Id, T_1 = K, T_k = K T_{k-1} - T_{k-2} and compares.
ShadowCheck shadow_equations_check(const CFRep& rho, bool with_matrix_chebyshev = false);

struct SqCFRep {
    QRing ring;
    CycScalar y1, y2, y3;
    ScaledPermMatrix Y1, Y2, Y3;
    long long n() const { return ring.n; }
};

// Y1 w_i = y1 q^{4i} w_i, Y2 w_i = y2 q^{-2i} w_{i+1}, Y3 w_i = y3 q^{-2i} w_{i-1};
// verifies the q^4-commutation relations exactly.
SqCFRep build_sq_rep(const QRing& ring, const CycScalar& y1, const CycScalar& y2,
                     const CycScalar& y3);

struct PeriodicIntertwiner {
    long long n = 0;
    ScaledPermMatrix lambda;       // unnormalized; |det| = n^{n/2}
    CycInt trace_unnormalized;     // sum_i q^{6 i^2}
    bool conjugation_ok = false;   // Y3 L = L Y1, Y1 L = L Y2, Y2 L = L Y3

    PeriodicIntertwiner(long long n_, long long order)
        : n(n_), lambda(n_, order), trace_unnormalized(order) {}
};

// Intertwiner of the order-three symmetry of the squared representation.
// Requires y1 == y2 == y3 (the symmetry fixes the character).
PeriodicIntertwiner build_periodic_intertwiner(const SqCFRep& rho);

// Normalized trace rows of the order-three intertwiner over odd levels; the
// trace has the closed form sum_i q^{6 i^2}, so |Trace|^2 = gcd(6, n) exactly.
std::vector<itw::SweepRow> periodic_trace_sweep(long long n_min, long long n_max);

}  // namespace qti::pt
