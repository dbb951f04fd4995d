#include "qti/cyclotomic.hpp"

#include <algorithm>
#include <cmath>

namespace qti {

const char* err_name(Err code) {
    switch (code) {
        case Err::OrderMismatch: return "OrderMismatch";
        case Err::EvenLevel: return "EvenLevel";
        case Err::UndefinedLink: return "UndefinedLink";
        case Err::NotDegenerate: return "NotDegenerate";
        case Err::TooSmall: return "TooSmall";
        case Err::InvalidWeightSystem: return "InvalidWeightSystem";
        case Err::NotInvariant: return "NotInvariant";
        case Err::NotCoprime: return "NotCoprime";
        case Err::TooLarge: return "TooLarge";
        case Err::NotPeriodic: return "NotPeriodic";
        case Err::ShadowFailure: return "ShadowFailure";
        case Err::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

}  // namespace qti

namespace qti::cyc {

long long lcm_checked(long long a, long long b) {
    long long g = std::gcd(a, b);
    long long l = a / g;
    require(l <= (1LL << 40) / b, Err::TooLarge, "root-of-unity order overflow in lcm");
    return l * b;
}

// ---------------------------------------------------------------------------
// RootOfUnity

RootOfUnity RootOfUnity::rescaled(long long M) const {
    require(M % order == 0, Err::OrderMismatch,
            "cannot rescale order " + std::to_string(order) + " to " + std::to_string(M));
    return RootOfUnity(M, exponent * (M / order));
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
    if (order == o.order) return RootOfUnity(order, exponent + o.exponent);
    long long M = lcm_checked(order, o.order);
    return RootOfUnity(M, exponent * (M / order) + o.exponent * (M / o.order));
}

bool RootOfUnity::is_one() const { return exponent == 0; }

bool RootOfUnity::operator==(const RootOfUnity& o) const {
    if (order == o.order) return exponent == o.exponent;
    long long M = lcm_checked(order, o.order);
    return exponent * (M / order) == o.exponent * (M / o.order);
}

std::complex<double> RootOfUnity::to_complex() const {
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::polar(1.0, two_pi * static_cast<double>(exponent) / static_cast<double>(order));
}

CycScalar CycScalar::negated() const {
    if (zero) return *this;
    RootOfUnity r = root.order % 2 == 0 ? root : root.rescaled(2 * root.order);
    return unit(RootOfUnity(r.order, r.exponent + r.order / 2));
}

// ---------------------------------------------------------------------------
// Polynomials

Poly poly_trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, BigInt(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return poly_trim(std::move(r));
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly r = a;
    if (b.size() > r.size()) r.resize(b.size(), BigInt(0));
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return poly_trim(std::move(r));
}

namespace {

// Indices of nonzero coefficients of b below its leading term; long division
// touches only these per step, which matters because cyclotomic divisors are
// typically sparse.
std::vector<size_t> support_below_lead(const Poly& b) {
    std::vector<size_t> s;
    for (size_t j = 0; j + 1 < b.size(); ++j)
        if (b[j] != 0) s.push_back(j);
    return s;
}

}  // namespace

Poly poly_div_exact(const Poly& a, const Poly& b) {
    require(!b.empty(), Err::InvalidArgument, "polynomial division by zero");
    if (a.empty()) return {};
    require(a.size() >= b.size(), Err::InvalidArgument, "inexact polynomial division");
    const BigInt& lead = b.back();
    const long long db = static_cast<long long>(b.size()) - 1;
    const long long da = static_cast<long long>(a.size()) - 1;
    Poly rem = a;
    Poly quot(static_cast<size_t>(da - db + 1), BigInt(0));
    auto supp = support_below_lead(b);
    for (long long i = da; i >= db; --i) {
        if (rem[static_cast<size_t>(i)] == 0) continue;
        BigInt c = rem[static_cast<size_t>(i)] / lead;
        require(c * lead == rem[static_cast<size_t>(i)], Err::InvalidArgument,
                "inexact polynomial division");
        const size_t shift = static_cast<size_t>(i - db);
        quot[shift] = c;
        rem[static_cast<size_t>(i)] = 0;
        for (size_t j : supp) rem[shift + j] -= c * b[j];
    }
    require(poly_trim(std::move(rem)).empty(), Err::InvalidArgument, "inexact polynomial division");
    return poly_trim(std::move(quot));
}

Poly poly_rem(Poly a, const Poly& b) {
    require(!b.empty() && b.back() == 1, Err::InvalidArgument, "poly_rem needs a monic divisor");
    const long long db = static_cast<long long>(b.size()) - 1;
    auto supp = support_below_lead(b);
    for (long long i = static_cast<long long>(a.size()) - 1; i >= db; --i) {
        if (a[static_cast<size_t>(i)] == 0) continue;
        BigInt c = a[static_cast<size_t>(i)];
        const size_t shift = static_cast<size_t>(i - db);
        a[static_cast<size_t>(i)] = 0;
        for (size_t j : supp) a[shift + j] -= c * b[j];
    }
    return poly_trim(std::move(a));
}

Poly cyclotomic_poly(long long N) {
    require(N >= 1, Err::InvalidArgument, "cyclotomic order must be positive");
    require(N <= kMaxExactOrder, Err::TooLarge,
            "cyclotomic order " + std::to_string(N) + " exceeds exact-mode cap");
    std::vector<long long> divisors;
    for (long long d = 1; d * d <= N; ++d) {
        if (N % d == 0) {
            divisors.push_back(d);
            if (d != N / d) divisors.push_back(N / d);
        }
    }
    std::sort(divisors.begin(), divisors.end());
    std::map<long long, Poly> phi;
    for (long long d : divisors) {
        Poly p(d + 1, BigInt(0));  // x^d - 1
        p[0] = -1;
        p[d] = 1;
        for (long long e : divisors) {
            if (e < d && d % e == 0) p = poly_div_exact(p, phi.at(e));
        }
        phi[d] = std::move(p);
    }
    return phi.at(N);
}

Poly chebyshev_T(long long k) {
    require(k >= 0, Err::InvalidArgument, "Chebyshev index must be nonnegative");
    Poly prev = {BigInt(2)};      // T_0
    if (k == 0) return prev;
    Poly cur = {BigInt(0), BigInt(1)};  // T_1 = x
    for (long long i = 2; i <= k; ++i) {
        Poly next(cur.size() + 1, BigInt(0));
        for (size_t j = 0; j < cur.size(); ++j) next[j + 1] = cur[j];  // x * T_{i-1}
        next = poly_sub(next, prev);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// CycInt

CycInt CycInt::integer(long long N, BigInt v) {
    CycInt z(N);
    z.add_term(0, v);
    return z;
}

CycInt CycInt::from_root(const RootOfUnity& r) {
    CycInt z(r.order);
    z.add_term(r.exponent, 1);
    return z;
}

CycInt CycInt::from_scalar(const CycScalar& s) {
    if (s.zero) return CycInt(s.order());
    return from_root(s.root);
}

void CycInt::add_term(long long e, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(mod_floor(e, order_), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

CycInt CycInt::rescaled(long long M) const {
    require(M % order_ == 0, Err::OrderMismatch,
            "cannot rescale order " + std::to_string(order_) + " to " + std::to_string(M));
    CycInt z(M);
    long long f = M / order_;
    for (const auto& [e, c] : terms_) z.terms_.emplace(e * f, c);
    return z;
}

namespace {

// Lifts both operands to a common order.
std::pair<CycInt, CycInt> aligned(const CycInt& a, const CycInt& b) {
    if (a.order() == b.order()) return {a, b};
    long long M = lcm_checked(a.order(), b.order());
    return {a.rescaled(M), b.rescaled(M)};
}

}  // namespace

CycInt CycInt::operator+(const CycInt& o) const {
    auto [a, b] = aligned(*this, o);
    for (const auto& [e, c] : b.terms()) a.add_term(e, c);
    return a;
}

CycInt& CycInt::operator+=(const CycInt& o) {
    if (o.order() == order_) {
        for (const auto& [e, c] : o.terms()) add_term(e, c);
        return *this;
    }
    *this = *this + o;
    return *this;
}

CycInt CycInt::operator-(const CycInt& o) const {
    auto [a, b] = aligned(*this, o);
    for (const auto& [e, c] : b.terms()) a.add_term(e, -c);
    return a;
}

CycInt CycInt::operator-() const {
    CycInt z(order_);
    for (const auto& [e, c] : terms_) z.terms_.emplace(e, -c);
    return z;
}

CycInt CycInt::operator*(const CycInt& o) const {
    auto [a, b] = aligned(*this, o);
    CycInt z(a.order());
    if (a.terms().empty() || b.terms().empty()) return z;
    // Dense scratch keyed by exponent: product support is bounded by the ring
    // order, which keeps large-operand products (traces, |z|^2) linear-ish.
    if (a.terms().size() * b.terms().size() > 64 &&
        a.order() <= static_cast<long long>(1 << 22)) {
        std::vector<BigInt> buf(static_cast<size_t>(a.order()));
        for (const auto& [e1, c1] : a.terms())
            for (const auto& [e2, c2] : b.terms()) {
                long long e = e1 + e2;
                if (e >= a.order()) e -= a.order();
                buf[static_cast<size_t>(e)] += c1 * c2;
            }
        for (long long e = 0; e < a.order(); ++e)
            if (buf[static_cast<size_t>(e)] != 0)
                z.terms_.emplace(e, std::move(buf[static_cast<size_t>(e)]));
        return z;
    }
    for (const auto& [e1, c1] : a.terms())
        for (const auto& [e2, c2] : b.terms()) z.add_term(e1 + e2, c1 * c2);
    return z;
}

CycInt CycInt::operator*(const CycScalar& s) const {
    CycScalar t = s;
    if (t.order() != order_) {
        long long M = lcm_checked(order_, t.order());
        if (M != order_) return (*this) * CycInt::from_scalar(s);
        t = t.zero ? CycScalar::zero_of(M) : CycScalar::unit(t.root.rescaled(M));
    }
    CycInt z(order_);
    if (t.zero) return z;
    for (const auto& [e, c] : terms_) z.terms_.emplace(mod_floor(e + t.root.exponent, order_), c);
    return z;
}

CycInt CycInt::conj() const {
    CycInt z(order_);
    for (const auto& [e, c] : terms_) z.add_term(-e, c);
    return z;
}

CycInt CycInt::reduce() const {
    if (terms_.empty()) return *this;
    Poly p(static_cast<size_t>(order_), BigInt(0));
    for (const auto& [e, c] : terms_) p[static_cast<size_t>(e)] = c;
    Poly r = poly_rem(poly_trim(std::move(p)), cyclotomic_poly(order_));
    CycInt z(order_);
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i] != 0) z.terms_.emplace(static_cast<long long>(i), r[i]);
    return z;
}

CycInt CycInt::abs_sq() const { return ((*this) * conj()).reduce(); }

std::optional<BigInt> CycInt::as_integer() const {
    CycInt r = reduce();
    if (r.terms_.empty()) return BigInt(0);
    if (r.terms_.size() == 1 && r.terms_.begin()->first == 0) return r.terms_.begin()->second;
    return std::nullopt;
}

std::complex<double> CycInt::eval_complex() const {
    constexpr double two_pi = 6.283185307179586476925286766559;
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [e, c] : terms_) {
        acc += static_cast<double>(c) *
               std::polar(1.0, two_pi * static_cast<double>(e) / static_cast<double>(order_));
    }
    return acc;
}

std::vector<std::pair<long long, std::string>> CycInt::canonical_terms() const {
    CycInt r = reduce();
    std::vector<std::pair<long long, std::string>> out;
    out.reserve(r.terms_.size());
    for (const auto& [e, c] : r.terms_) out.emplace_back(e, c.str());
    return out;
}

// ---------------------------------------------------------------------------
// QRing

QRing::QRing(long long level, long long order) : n(level), N(order) {
    require(n >= 1, Err::TooSmall, "level must be >= 1");
    require(n % 2 == 1, Err::EvenLevel, "level must be odd, got " + std::to_string(n));
    require(N % (2 * n) == 0, Err::OrderMismatch, "ring order must be a multiple of 2n");
    require(N <= kMaxExactOrder, Err::TooLarge,
            "ring order " + std::to_string(N) + " exceeds exact-mode cap " +
                std::to_string(kMaxExactOrder));
}

QRing QRing::for_level(long long level, const std::vector<long long>& extra_orders) {
    require(level >= 1, Err::TooSmall, "level must be >= 1");
    require(level % 2 == 1, Err::EvenLevel, "level must be odd, got " + std::to_string(level));
    long long N = 2 * level;
    for (long long m : extra_orders) {
        require(m >= 1, Err::InvalidArgument, "extra order must be positive");
        N = lcm_checked(N, m);
    }
    return QRing(level, N);
}

CycScalar QRing::angle(const Fraction& f) const {
    require(N % f.den == 0, Err::OrderMismatch,
            "angle denominator " + std::to_string(f.den) + " does not divide ring order");
    return unit(mod_floor(f.num, f.den) * (N / f.den));
}

}  // namespace qti::cyc
