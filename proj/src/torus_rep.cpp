#include "qti/torus_rep.hpp"

#include <numeric>

namespace qti::rep {

QRing TorusCharacter::ring_for(long long n) const {
    long long extra = cyc::lcm_checked(2, cyc::lcm_checked(x1.den, x2.den));
    return QRing(n, n * extra);
}

CycScalar TorusCharacter::u(const QRing& ring) const {
    long long s = sign == qt::FSign::Plus ? 1 : -1;
    return ring.minus_one() * ring.angle(Fraction(s * x1.num, x1.den * ring.n)) * ring.q(r1);
}

CycScalar TorusCharacter::v(const QRing& ring) const {
    long long s = sign == qt::FSign::Plus ? 1 : -1;
    return ring.minus_one() * ring.angle(Fraction(s * x2.num, x2.den * ring.n)) * ring.q(r2);
}

TorusRep build_rho(const QRing& ring, const CycScalar& u, const CycScalar& v) {
    require(!u.zero && !v.zero, Err::InvalidArgument, "rho needs nonzero u, v");
    const long long n = ring.n;
    std::vector<CycScalar> xdiag;
    xdiag.reserve(static_cast<size_t>(n));
    for (long long i = 0; i < n; ++i) xdiag.push_back(u * ring.q(i));
    ScaledPermMatrix X = ScaledPermMatrix::diagonal(ring.N, xdiag);
    ScaledPermMatrix Y(n, ring.N);
    for (long long i = 0; i < n; ++i) Y.set(mod_floor(i + 1, n), i, v);  // Y e_i = v e_{i+1}
    return TorusRep{ring, u, v, std::move(X), std::move(Y)};
}

TorusRep build_rho(long long n, const TorusCharacter& chi) {
    QRing ring = chi.ring_for(n);
    return build_rho(ring, chi.u(ring), chi.v(ring));
}

ScaledPermMatrix evaluate_theta(const TorusRep& rho, long long a, long long b) {
    // theta_{(a,b)} = q^{-ab/2} X^a Y^b
    return (rho.X.pow(a) * rho.Y.pow(b)).scaled(rho.ring.q_half(-(a * b)));
}

CycMatrix evaluate_qt(const TorusRep& rho, const qt::QTElement& x) {
    require(x.ring().N == rho.ring.N && x.ring().n == rho.ring.n, Err::OrderMismatch,
            "element and representation live in different rings");
    CycMatrix out(rho.n(), rho.ring.N);
    for (const auto& [v, c] : x.terms()) {
        ScaledPermMatrix m = rho.X.pow(v.first) * rho.Y.pow(v.second);
        out.accumulate(c * rho.ring.q_half(-(v.first * v.second)), m);
    }
    return out;
}

CycInt classical_shadow_check(const TorusRep& rho, const TorusCharacter& chi, long long a,
                              long long b) {
    const QRing& ring = rho.ring;
    const long long n = ring.n;
    qt::QTElement elt =
        qt::QTElement::theta(ring, n * a, n * b) + qt::QTElement::theta(ring, -n * a, -n * b);
    CycMatrix M = evaluate_qt(rho, elt);

    CycScalar l1 = chi.lambda1(ring), l2 = chi.lambda2(ring);
    CycInt sum = CycInt::from_scalar(l1.pow(a) * l2.pow(b)) +
                 CycInt::from_scalar(l1.pow(-a) * l2.pow(-b));
    CycInt expected = mod_floor(a * b + a + b, 2) == 0 ? sum : -sum;

    auto scal = M.scalar_of_identity();
    require(scal.has_value(), Err::ShadowFailure,
            "shadow image of (" + std::to_string(a) + "," + std::to_string(b) +
                ") is not a scalar matrix");
    require(*scal == expected, Err::ShadowFailure,
            "shadow scalar mismatch at (" + std::to_string(a) + "," + std::to_string(b) + ")");
    return *scal;
}

CharacterSolution solve_invariant_characters(const qt::MappingClass& A, qt::FSign sign,
                                             long long k1, long long k2) {
    const long long t = sign == qt::FSign::Plus ? 1 : -1;
    const long long p = A.a - t, q = A.b, r = A.c, s = A.d - t;
    CharacterSolution sol;
    sol.sign = sign;
    sol.det = p * s - q * r;  // = 2 -+ (a+d)
    if (sol.det != 0) {
        sol.finite = true;
        sol.x1 = Fraction(s * k1 - q * k2, sol.det);
        sol.x2 = Fraction(p * k2 - r * k1, sol.det);
    } else {
        if (p != 0 || q != 0) sol.constraints.emplace_back(p, q);
        if (r != 0 || s != 0) sol.constraints.emplace_back(r, s);
    }
    return sol;
}

SubrepBases decompose_subreps(const TorusRep& rho) {
    const QRing& ring = rho.ring;
    const long long n = ring.n;
    require(n >= 3, Err::TooSmall, "decomposition needs n >= 3");
    auto is_pm_one = [&](const CycScalar& s) {
        return s == ring.one() || s == ring.minus_one();
    };
    require(is_pm_one(rho.u) && is_pm_one(rho.v), Err::NotDegenerate,
            "decomposition exists only at u, v = ±1");

    SubrepBases out;
    std::vector<long long> e0(static_cast<size_t>(n), 0);
    e0[0] = 1;
    out.v1.push_back(e0);
    for (long long j = 1; j <= (n - 1) / 2; ++j) {
        std::vector<long long> sym(static_cast<size_t>(n), 0), asym(static_cast<size_t>(n), 0);
        sym[static_cast<size_t>(j)] = 1;
        sym[static_cast<size_t>(n - j)] = 1;
        asym[static_cast<size_t>(j)] = 1;
        asym[static_cast<size_t>(n - j)] = -1;
        out.v1.push_back(sym);
        out.v2.push_back(asym);
    }

    // Invariance of both spans under the images of the (1,0), (0,1), (1,1)
    // links.  Membership in V1 (resp. V2) is exactly coordinate symmetry
    // (resp. antisymmetry with vanishing 0-coordinate) under j <-> n-j.
    out.closure_verified = true;
    const std::pair<long long, long long> links[] = {{1, 0}, {0, 1}, {1, 1}};
    for (auto [a, b] : links) {
        CycMatrix M = evaluate_qt(rho, qt::fg_image(ring, a, b));
        auto image_ok = [&](const std::vector<long long>& vec, bool symmetric) {
            std::vector<CycInt> cv;
            cv.reserve(vec.size());
            for (long long x : vec) cv.push_back(CycInt::integer(ring.N, x));
            std::vector<CycInt> w = M.apply(cv);
            if (!symmetric && !w[0].is_zero()) return false;
            for (long long j = 1; j <= (n - 1) / 2; ++j) {
                const CycInt& lhs = w[static_cast<size_t>(j)];
                CycInt rhs = symmetric ? w[static_cast<size_t>(n - j)]
                                       : -w[static_cast<size_t>(n - j)];
                if (!(lhs == rhs)) return false;
            }
            return true;
        };
        for (const auto& vec : out.v1)
            if (!image_ok(vec, true)) out.closure_verified = false;
        for (const auto& vec : out.v2)
            if (!image_ok(vec, false)) out.closure_verified = false;
    }

    std::vector<std::vector<cyc::BigInt>> rows;
    for (const auto& vec : out.v1) rows.emplace_back(vec.begin(), vec.end());
    for (const auto& vec : out.v2) rows.emplace_back(vec.begin(), vec.end());
    out.intersection_trivial = mat::integer_rank(std::move(rows)) == n;
    return out;
}

}  // namespace qti::rep
