#pragma once

// Intertwiners between rho and rho ∘ F_{A,±} at an A-invariant character.
//
// Plus branch (weights r_k, m = gcd(b,n), n' = n/m, Bezout b r + s n = m):
//   k0 is the unique index in [0, m) with
//       v^{n'b} u^{n'(a-1)} q^{a b n'^2 / 2} q^{a n' k0} = 1;
//   r_{k0 + t b} = v^{tb} u^{t(a-1)} q^{a(t k0 + b t^2/2)}, zero off k0 + mZ;
//   entries  L_{k,t} = r_{k - t d} (v^{d-1} u^c)^t q^{c(t k - d t^2/2)}.
//
// Minus branch:
//   k0:  (v^{-b} u^{-a-1})^{n'} q^{a b n'^2/2} q^{-n' a k0} = 1;
//   r_{k0 - t m} = (v^{-b} u^{-a-1})^{t r} q^{-t r a k0 + a b t^2 r^2 / 2};
//   entries  L_{k,t} = r_{k + t d} (v^{-d-1} u^{-c})^t q^{-t c k - c d t^2/2}
//   (with a documented fallback that flips the index shift to r_{k - t d}).
//
// The unnormalized matrix has |det| = n'^{n/2}; the intertwiner is
// n'^{-1/2} times it.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qti/torus_rep.hpp"

namespace qti::itw {

using cyc::BigInt;
using cyc::CycInt;
using cyc::CycScalar;
using cyc::QRing;
using mat::ScaledPermMatrix;
using qt::FSign;
using qt::MappingClass;
using rep::TorusCharacter;
using rep::TorusRep;

struct RCoefficients {
    long long n = 0;
    long long m = 0;       // gcd(b, n)
    long long nprime = 0;  // n / m
    long long r = 0, s = 0;  // Bezout pair: b r + s n = m
    long long k0 = 0;        // unique base index in [0, m)
    std::vector<CycScalar> values;  // length n, supported on k0 + mZ
};

// Weight system for the intertwiner.  Checks that the character carried by
// rho is fixed by F_{A,sign} (NotInvariant otherwise) and that the base-index
// condition has exactly one solution (InvalidWeightSystem otherwise).
RCoefficients build_r_coeffs(const MappingClass& A, FSign sign, const TorusRep& rho);

struct IntertwinerResult {
    MappingClass A;
    FSign sign;
    long long n = 0;
    RCoefficients rc;
    ScaledPermMatrix lambda;        // unnormalized, n' unit entries per row/column
    CycInt trace_unnormalized;      // exact diagonal sum
    double normalization = 1.0;     // multiply lambda by this (= n'^{-1/2})
    bool minus_index_flipped = false;  // minus-branch fallback fired

    IntertwinerResult(const MappingClass& A_, FSign s_, long long n_, long long order)
        : A(A_), sign(s_), n(n_), lambda(n_, order), trace_unnormalized(order) {}

    // |Trace| of the normalized intertwiner, and its exact square when the
    // square is a rational integer.
    double abs_trace() const;
    std::optional<BigInt> abs_trace_sq_exact() const;
};

// Builds the unnormalized intertwiner.  Verifies the intertwining equations
// on the minus branch to decide the index-shift fallback.
IntertwinerResult build_intertwiner(const MappingClass& A, FSign sign, const TorusRep& rho);

inline constexpr long long kDetCap = 401;

// Exact check of  lambda rho(W) == rho(F_A(W)) lambda  for W in
// {X, Y, X^{-1}, Y^{-1}}.
bool verify_intertwining(const IntertwinerResult& it, const TorusRep& rho);

struct DetCheck {
    double abs_det_log = 0.0;   // LU of the full matrix
    double expected_log = 0.0;  // (n/2) log n'
    bool total_ok = false;
    std::vector<double> block_det_logs;  // m diagonal blocks, each expected n'^{n'/2}
    bool blocks_ok = false;
};

// Float-LU determinant law |det| = n'^{n/2} with per-block structure check;
// TooLarge beyond kDetCap.
DetCheck abs_det_check(const IntertwinerResult& it);

// Trace bound |Trace(normalized)| <= n^{3/2}, exact when |Trace|^2 is a
// rational integer (compares n' n^3 against the exact square), float otherwise.
bool trace_bound_ok(const IntertwinerResult& it);

struct ClosedFormTrace {
    long long s1 = 0, s2 = 0, r = 0;
    CycInt variant_display;  // linear coefficient  s1 (1 + d) - s2 b
    CycInt variant_proof;    // linear coefficient  s1 (1 - d) + s2 b
    // Filled when a matrix trace is supplied: "proof" / "display" / "both" /
    // "none", with "(abs)" appended when only |.|^2 matches.
    std::string matched;

    ClosedFormTrace(long long order)
        : variant_display(order), variant_proof(order) {}
};

// Gauss-sum closed form of the unnormalized trace, both linear-coefficient
// variants.  Requires gcd(b, n) = 1 (NotCoprime).  The exponents s1, s2 are
// read off exactly from u^{a∓1} v^b = (-1)^{a+b∓1} q^{s1},
// u^c v^{d∓1} = (-1)^{c+d∓1} q^{s2}.
ClosedFormTrace closed_form_trace(const MappingClass& A, FSign sign, const TorusRep& rho,
                                  const std::optional<CycInt>& matrix_trace = std::nullopt);

// Sum_{t=0}^{n-1} (-q^{1/2})^{k t^2} in mu_2n; |sum|^2 = gcd(k, n) * n.
CycInt gauss_sum(long long k, long long n);

struct PowerCheck {
    long long order = 0;          // order of the realized class: A (plus) or -A (minus)
    bool is_scalar = false;       // lambda^order proportional to Id
    CycInt scalar_unnormalized;   // diagonal value of lambda^order
    bool unit_modulus = false;    // |scalar / n'^{order/2}| = 1, checked exactly
    std::complex<double> scalar_normalized;

    PowerCheck(long long ring_order) : scalar_unnormalized(ring_order) {}
};

// Exact matrix power of the unnormalized intertwiner for a periodic A
// (NotPeriodic otherwise); asserts scalar-ness and unit modulus of the
// normalized scalar via abs_sq(scalar) == n'^order.  The power used is the
// order of the realized class (-A on the minus branch: the intertwiner there
// carries the inversion automorphism along, e.g. an a+d = -1 class powers to
// a scalar at 6, not 3).
PowerCheck periodic_power_check(const IntertwinerResult& it);

// abs_sq of the unnormalized trace is independent of the lift offsets: builds
// the intertwiner for each (r1, r2) pair and compares the exact squares.
bool trace_independence_check(const MappingClass& A, FSign sign, const TorusCharacter& chi,
                              long long n,
                              const std::vector<std::pair<long long, long long>>& lifts);

struct SweepRow {
    long long n = 0;
    double abs_trace = 0.0;                      // normalized
    std::optional<BigInt> abs_trace_sq_exact;    // when a rational integer
    double log_trace_over_n = 0.0;               // -HUGE_VAL on exact zeros
    bool is_exact_zero = false;
    std::string path;     // closed_form | exact_matrix | float_matrix
    std::string variant;  // closed-form rows: linear-coefficient variant used
};

// Populates the trace-derived fields of a row (n must already be set) from an
// exact unnormalized trace and the normalization n'.
void fill_sweep_row(SweepRow& row, const CycInt& trace_unnormalized, long long nprime);

enum class SweepMode { Auto, Exact, Float };

struct SweepOptions {
    long long n_min = 3;
    long long n_max = 99;
    SweepMode mode = SweepMode::Auto;
    int workers = 1;
};

// Rows over odd n in [n_min, n_max].  Path per row: closed form when
// gcd(b, n) = 1 (variant calibrated against one small exact matrix build),
// exact matrix while the ring order fits the cap, float beyond.
std::vector<SweepRow> asymptotic_sweep(const MappingClass& A, FSign sign,
                                       const TorusCharacter& chi, const SweepOptions& opt);

}  // namespace qti::itw
