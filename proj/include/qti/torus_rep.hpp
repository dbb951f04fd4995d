#pragma once

// Irreducible representations of the quantum torus at odd level n:
//   rho(X) e_i = u q^i e_i,   rho(Y) e_i = v e_{i+1}   (indices mod n),
// their classical shadows, the characters fixed by a mapping class, and the
// two-block decomposition at the sign-degenerate characters u, v = ±1.

#include <vector>

#include "qti/matrices.hpp"
#include "qti/quantum_torus.hpp"

namespace qti::rep {

using cyc::CycInt;
using cyc::CycScalar;
using cyc::QRing;
using mat::CycMatrix;
using mat::ScaledPermMatrix;

// A point of the representation variety: eigenvalue pair lambda_i =
// exp(2*pi*i*x_i) in exact rational angles, the branch sign used to lift to
// (u, v), and q-power lift offsets (r1, r2).
//
// Lifts: plus   u = -exp(i*theta_1/n) q^{r1},  v = -exp(i*theta_2/n) q^{r2}
//        minus  u = -exp(-i*theta_1/n) q^{r1}, v = -exp(-i*theta_2/n) q^{r2}
// so that u^n = -lambda_1^{±1}, v^n = -lambda_2^{±1} (n odd).
struct TorusCharacter {
    Fraction x1{0, 1}, x2{0, 1};
    qt::FSign sign = qt::FSign::Plus;
    long long r1 = 0, r2 = 0;

    static TorusCharacter trivial(qt::FSign s) { return TorusCharacter{{0, 1}, {0, 1}, s, 0, 0}; }

    // Smallest ring hosting q^{1/2} and both lifted eigenvalue angles.
    QRing ring_for(long long n) const;

    CycScalar lambda1(const QRing& ring) const { return ring.angle(x1); }
    CycScalar lambda2(const QRing& ring) const { return ring.angle(x2); }
    CycScalar u(const QRing& ring) const;
    CycScalar v(const QRing& ring) const;
};

struct TorusRep {
    QRing ring;
    CycScalar u, v;
    ScaledPermMatrix X, Y;
    long long n() const { return ring.n; }
};

TorusRep build_rho(const QRing& ring, const CycScalar& u, const CycScalar& v);
TorusRep build_rho(long long n, const TorusCharacter& chi);

// rho extended to theta-basis elements: theta_{(a,b)} -> q^{-ab/2} X^a Y^b.
ScaledPermMatrix evaluate_theta(const TorusRep& rho, long long a, long long b);
CycMatrix evaluate_qt(const TorusRep& rho, const qt::QTElement& x);

// Checks rho(theta_{(na,nb)} + theta_{(-na,-nb)}) ==
//   (-1)^{ab+a+b} (lambda_1^a lambda_2^b + lambda_1^{-a} lambda_2^{-b}) * Id
// and returns the scalar; throws ShadowFailure on mismatch.
CycInt classical_shadow_check(const TorusRep& rho, const TorusCharacter& chi, long long a,
                              long long b);

// Characters fixed by F_{A,±}: the angle system
//   (a -+ 1) x1 + b x2 = k1,   c x1 + (d -+ 1) x2 = k2
// over rationals, determinant 2 -+ (a+d).  Nonzero determinant gives the
// finite solution for the supplied (k1, k2) (and forces lambda_i^{|det|} = 1);
// zero determinant is reported as the integrality constraints that remain.
struct CharacterSolution {
    qt::FSign sign;
    long long det = 0;
    bool finite = false;
    Fraction x1, x2;  // valid when finite
    std::vector<std::pair<long long, long long>> constraints;  // rows (p, q): p*x1 + q*x2 in Z
};

CharacterSolution solve_invariant_characters(const qt::MappingClass& A, qt::FSign sign,
                                             long long k1, long long k2);

// At u, v = ±1 (and only there) the representation splits as V1 + V2 with
//   V1 = <e_0, e_j + e_{n-j}>  (dim (n+1)/2),
//   V2 = <e_j - e_{n-j}>       (dim (n-1)/2).
// Bases are integer coordinate vectors; the struct also carries the outcome
// of the invariance checks under the images of the (1,0), (0,1), (1,1) links
// and the exact rank test of the concatenated bases.
struct SubrepBases {
    std::vector<std::vector<long long>> v1, v2;
    bool closure_verified = false;
    bool intersection_trivial = false;
};

SubrepBases decompose_subreps(const TorusRep& rho);

}  // namespace qti::rep
