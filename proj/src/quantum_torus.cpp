#include "qti/quantum_torus.hpp"

#include <numeric>

namespace qti::qt {

long long MappingClass::order() const {
    require(is_periodic(), Err::NotPeriodic, "mapping class " + str() + " has infinite order");
    MappingClass p = *this;
    for (long long k = 1; k <= 12; ++k) {
        if (p.is_identity()) return k;
        p = p * (*this);
    }
    fail(Err::NotPeriodic, "no order <= 12 found for " + str());
}

ThetaMonomial theta_mul(const QRing& ring, const ThetaMonomial& m1, const ThetaMonomial& m2) {
    long long det = m1.a * m2.b - m1.b * m2.a;
    return ThetaMonomial{m1.scalar * m2.scalar * ring.q_half(det), m1.a + m2.a, m1.b + m2.b};
}

QTElement QTElement::theta(const QRing& ring, long long a, long long b) {
    QTElement x(ring);
    x.add_term(a, b, CycInt::one(ring.N));
    return x;
}

QTElement QTElement::monomial(const QRing& ring, const ThetaMonomial& m) {
    QTElement x(ring);
    x.add_term(m.a, m.b, CycInt::from_scalar(m.scalar));
    return x;
}

void QTElement::add_term(long long a, long long b, const CycInt& coeff) {
    if (coeff.empty()) return;
    auto key = std::make_pair(a, b);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, coeff);
    } else {
        it->second += coeff;
        if (it->second.empty()) terms_.erase(it);
    }
}

QTElement QTElement::operator+(const QTElement& o) const {
    QTElement x = *this;
    for (const auto& [v, c] : o.terms_) x.add_term(v.first, v.second, c);
    return x;
}

QTElement QTElement::operator-(const QTElement& o) const {
    QTElement x = *this;
    for (const auto& [v, c] : o.terms_) x.add_term(v.first, v.second, -c);
    return x;
}

QTElement QTElement::operator*(const QTElement& o) const {
    QTElement x(ring_);
    for (const auto& [u, cu] : terms_) {
        for (const auto& [v, cv] : o.terms_) {
            long long det = u.first * v.second - u.second * v.first;
            CycInt coeff = (cu * cv) * ring_.q_half(det);
            x.add_term(u.first + v.first, u.second + v.second, coeff);
        }
    }
    return x;
}

QTElement QTElement::operator*(const CycInt& c) const {
    QTElement x(ring_);
    for (const auto& [v, cv] : terms_) x.add_term(v.first, v.second, cv * c);
    return x;
}

QTElement QTElement::operator-() const {
    QTElement x(ring_);
    for (const auto& [v, c] : terms_) x.add_term(v.first, v.second, -c);
    return x;
}

QTElement QTElement::inverse_monomial() const {
    require(terms_.size() == 1, Err::InvalidArgument, "inverse of a non-monomial element");
    const auto& [v, c] = *terms_.begin();
    auto unit = c.as_integer();
    QTElement x(ring_);
    if (unit.has_value()) {
        require(*unit == 1 || *unit == -1, Err::InvalidArgument,
                "inverse needs a unit coefficient");
        x.add_term(-v.first, -v.second, CycInt::integer(ring_.N, *unit));
        return x;
    }
    // Single root-of-unity coefficient: invert by conjugation.
    CycInt cc = c.reduce();
    require(*c.abs_sq().as_integer() == 1, Err::InvalidArgument, "inverse needs a unit coefficient");
    x.add_term(-v.first, -v.second, cc.conj());
    return x;
}

bool QTElement::is_zero() const {
    for (const auto& [v, c] : terms_)
        if (!c.is_zero()) return false;
    return true;
}

QTElement fg_image(const QRing& ring, long long a, long long b) {
    require(a != 0 || b != 0, Err::UndefinedLink, "(0,0) is not a torus link");
    long long k = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
    long long pa = a / k, pb = b / k;
    QTElement w = QTElement::theta(ring, pa, pb) + QTElement::theta(ring, -pa, -pb);
    cyc::Poly T = cyc::chebyshev_T(k);
    // Horner in the commutative subalgebra generated by theta_{(pa,pb)}.
    QTElement acc(ring);
    for (size_t i = T.size(); i-- > 0;) {
        acc = acc * w;
        acc.add_term(0, 0, CycInt::integer(ring.N, T[i]));
    }
    return acc;
}

QTElement apply_FA(const MappingClass& A, FSign sign, const QTElement& x) {
    QTElement y(x.ring());
    for (const auto& [v, c] : x.terms()) {
        auto [i, j] = sign == FSign::Plus ? A.row_image(v.first, v.second)
                                          : A.row_image(-v.first, -v.second);
        y.add_term(i, j, c);
    }
    return y;
}

bool gcd_parity_check(long long a, long long b) {
    long long g = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
    return mod_floor(a * b + a + b, 2) == mod_floor(g, 2);
}

}  // namespace qti::qt
