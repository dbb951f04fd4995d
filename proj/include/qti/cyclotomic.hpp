#pragma once

// Exact arithmetic in rings of cyclotomic integers Z[zeta_N].
//
// Three layers:
//   * RootOfUnity  -- a single root exp(2*pi*i*e/N), closed under *, ^, conj.
//   * CycScalar    -- zero or a RootOfUnity; the entry type of the sparse
//                     matrices built elsewhere (all nonzero entries are units).
//   * CycInt       -- a Z-linear combination of roots of a common order, with
//                     canonical reduction modulo the N-th cyclotomic polynomial.
//
// Every job fixes one even order N (a multiple of 2n, where n is the odd
// level) and performs all arithmetic inside mu_N.  q^{1/2} is the primitive
// 2n-th root zeta_N^{N/(2n)}, so integer powers of q^{1/2} cover every scalar
// that appears in the constructions.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qti/common.hpp"

namespace qti::cyc {

using BigInt = boost::multiprecision::cpp_int;

// Largest order accepted by exact mode.  Reduction modulo Phi_N is polynomial
// division of degree-N dense polynomials; beyond this cap jobs must fall back
// to the float backend.
inline constexpr long long kMaxExactOrder = 20000;

long long lcm_checked(long long a, long long b);

// ---------------------------------------------------------------------------
// RootOfUnity

struct RootOfUnity {
    long long order;     // N >= 1
    long long exponent;  // canonical: 0 <= exponent < order

    RootOfUnity(long long N, long long e) : order(N), exponent(mod_floor(e, N)) {
        require(N >= 1, Err::InvalidArgument, "root-of-unity order must be positive");
    }

    static RootOfUnity one(long long N) { return RootOfUnity(N, 0); }

    RootOfUnity rescaled(long long M) const;  // M must be a multiple of order
    RootOfUnity operator*(const RootOfUnity& o) const;
    RootOfUnity pow(long long k) const { return RootOfUnity(order, mod_floor(exponent * k, order)); }
    RootOfUnity inverse() const { return RootOfUnity(order, -exponent); }
    RootOfUnity conj() const { return inverse(); }

    bool is_one() const;
    bool operator==(const RootOfUnity& o) const;

    std::complex<double> to_complex() const;
};

// ---------------------------------------------------------------------------
// CycScalar: zero or a root of unity.

struct CycScalar {
    bool zero;
    RootOfUnity root;  // meaningful only when !zero

    static CycScalar zero_of(long long N) { return CycScalar{true, RootOfUnity::one(N)}; }
    static CycScalar unit(RootOfUnity r) { return CycScalar{false, r}; }

    long long order() const { return root.order; }

    CycScalar operator*(const CycScalar& o) const {
        if (zero || o.zero) return zero_of(lcm_checked(order(), o.order()));
        return unit(root * o.root);
    }
    CycScalar pow(long long k) const {
        require(!zero || k >= 0, Err::InvalidArgument, "negative power of zero");
        return zero ? (k == 0 ? unit(RootOfUnity::one(order())) : *this) : unit(root.pow(k));
    }
    CycScalar inverse() const {
        require(!zero, Err::InvalidArgument, "inverse of zero scalar");
        return unit(root.inverse());
    }
    CycScalar conj() const { return zero ? *this : unit(root.conj()); }

    // -x.  Requires an even order so that -1 = zeta_N^{N/2} stays in mu_N;
    // odd-order scalars are rescaled to 2N first.
    CycScalar negated() const;

    bool operator==(const CycScalar& o) const {
        if (zero != o.zero) return false;
        return zero || root == o.root;
    }

    std::complex<double> to_complex() const {
        return zero ? std::complex<double>(0.0, 0.0) : root.to_complex();
    }
};

// ---------------------------------------------------------------------------
// Integer polynomials (dense, ascending powers, no trailing zeros).

using Poly = std::vector<BigInt>;

Poly poly_trim(Poly p);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
// Exact division of integer polynomials with monic divisor; throws if not exact.
Poly poly_div_exact(const Poly& a, const Poly& b);
// Remainder of a modulo monic b.
Poly poly_rem(Poly a, const Poly& b);

// N-th cyclotomic polynomial, computed by iterated exact division of x^N - 1
// by Phi_d over the proper divisors d of N.
Poly cyclotomic_poly(long long N);

// Chebyshev-like polynomials in the trace normalization:
//   T_0 = 2, T_1 = x, T_k = x T_{k-1} - T_{k-2},
// so that T_k(z + 1/z) = z^k + z^{-k}.
Poly chebyshev_T(long long k);

// ---------------------------------------------------------------------------
// CycInt

class CycInt {
  public:
    explicit CycInt(long long N) : order_(N) {
        require(N >= 1, Err::InvalidArgument, "cyclotomic order must be positive");
    }

    static CycInt zero(long long N) { return CycInt(N); }
    static CycInt one(long long N) { return integer(N, 1); }
    static CycInt integer(long long N, BigInt v);
    static CycInt from_root(const RootOfUnity& r);
    static CycInt from_scalar(const CycScalar& s);

    long long order() const { return order_; }
    const std::map<long long, BigInt>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    // Adds c * zeta^e in place (exponent taken mod N, zero coefficients dropped).
    void add_term(long long e, const BigInt& c);

    CycInt rescaled(long long M) const;  // M multiple of order

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator*(const CycInt& o) const;
    CycInt operator-() const;
    CycInt operator*(const CycScalar& s) const;
    CycInt& operator+=(const CycInt& o);

    CycInt conj() const;

    // Canonical form: remainder modulo Phi_N, so exponents < deg Phi_N and the
    // representation of every value is unique.
    CycInt reduce() const;

    bool is_zero() const { return reduce().empty(); }
    bool operator==(const CycInt& o) const { return (*this - o).is_zero(); }

    // reduce(z * conj(z)); exact |z|^2.
    CycInt abs_sq() const;

    // The value as a rational integer, if its canonical form is one.
    std::optional<BigInt> as_integer() const;

    std::complex<double> eval_complex() const;

    // Canonical serialized form: pairs (exponent, coefficient-as-decimal-string),
    // exponents ascending, taken from the reduced representation.
    std::vector<std::pair<long long, std::string>> canonical_terms() const;

  private:
    long long order_;
    std::map<long long, BigInt> terms_;
};

// ---------------------------------------------------------------------------
// QRing: the ambient mu_N for one job at odd level n.

struct QRing {
    long long n;  // odd level (dimension of the standard representation)
    long long N;  // even order, multiple of 2n, N <= kMaxExactOrder

    QRing(long long level, long long order);

    // Smallest valid ring for level n whose order is divisible by every entry
    // of extra_orders (used to host character angles).
    static QRing for_level(long long level, const std::vector<long long>& extra_orders = {});

    RootOfUnity zeta(long long e) const { return RootOfUnity(N, e); }
    CycScalar unit(long long e) const { return CycScalar::unit(zeta(e)); }
    CycScalar zero() const { return CycScalar::zero_of(N); }
    CycScalar one() const { return unit(0); }
    CycScalar minus_one() const { return unit(N / 2); }

    // (q^{1/2})^j with q^{1/2} = zeta_N^{N/(2n)} = exp(pi i / n).
    CycScalar q_half(long long j) const { return unit(mod_floor(j, 2 * n) * (N / (2 * n))); }
    // q^j with q = exp(2 pi i / n).
    CycScalar q(long long j) const { return unit(mod_floor(j, n) * (N / n)); }

    // exp(2*pi*i * f), f a rational angle fraction; f.den must divide N.
    CycScalar angle(const Fraction& f) const;

    CycInt zero_int() const { return CycInt::zero(N); }
};

}  // namespace qti::cyc
