#include "qti/float_backend.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace qti::flt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx ipow(cplx z, long long e) {
    if (e == 0) return cplx(1.0);
    if (e < 0) return cplx(1.0) / ipow(z, -e);
    cplx acc(1.0);
    while (e > 0) {
        if (e & 1) acc *= z;
        z *= z;
        e >>= 1;
    }
    return acc;
}

struct Units {
    long long n;
    cplx q(long long j) const { return std::polar(1.0, kTwoPi * static_cast<double>(mod_floor(j, n)) / static_cast<double>(n)); }
    cplx qh(long long j) const {
        return std::polar(1.0, kTwoPi * static_cast<double>(mod_floor(j, 2 * n)) / static_cast<double>(2 * n));
    }
};

// Bezout pair for b r + s n = gcd(|b|, n), with the sign of r following b.
struct Bezout {
    long long m, r, s;
};

Bezout bezout_pair(long long b, long long n) {
    long long old_r = std::llabs(b), rr = n;
    long long old_x = 1, x = 0, old_y = 0, y = 1;
    while (rr != 0) {
        long long qq = old_r / rr;
        std::tie(old_r, rr) = std::make_pair(rr, old_r - qq * rr);
        std::tie(old_x, x) = std::make_pair(x, old_x - qq * x);
        std::tie(old_y, y) = std::make_pair(y, old_y - qq * y);
    }
    if (b < 0) old_x = -old_x;
    return Bezout{old_r, old_x, old_y};
}

FloatIntertwiner build_candidate(const MappingClass& A, FSign sign, const FloatRep& rho,
                                 bool flip_minus_shift) {
    const long long n = rho.n;
    const Units un{n};
    const auto [m, br, bs] = bezout_pair(A.b, n);
    const long long np = n / m;
    const cplx u = rho.u, v = rho.v;

    // Base-index scan.
    cplx base;
    if (sign == FSign::Plus) {
        base = ipow(v, np * A.b) * ipow(u, np * (A.a - 1)) * un.qh(A.a * A.b * np * np);
    } else {
        base = ipow(ipow(v, -A.b) * ipow(u, -A.a - 1), np) * un.qh(A.a * A.b * np * np);
    }
    require(std::abs(std::abs(base) - 1.0) < 1e-6, Err::NotInvariant,
            "base-index condition has non-unit modulus; character is not fixed");
    long long k0 = -1;
    int hits = 0;
    for (long long k = 0; k < m; ++k) {
        long long e = sign == FSign::Plus ? A.a * np * k : -A.a * np * k;
        if (std::abs(base * un.q(e) - cplx(1.0)) < 1e-6) {
            k0 = k;
            ++hits;
        }
    }
    require(hits == 1, Err::InvalidWeightSystem,
            "base-index condition admits " + std::to_string(hits) + " solutions");

    std::vector<cplx> r(static_cast<size_t>(n), cplx(0.0));
    if (sign == FSign::Plus) {
        for (long long t = 0; t < np; ++t) {
            long long idx = mod_floor(k0 + t * A.b, n);
            r[static_cast<size_t>(idx)] =
                ipow(v, t * A.b) * ipow(u, t * (A.a - 1)) * un.qh(A.a * (2 * t * k0 + A.b * t * t));
        }
    } else {
        const cplx w = ipow(v, -A.b) * ipow(u, -A.a - 1);
        for (long long t = 0; t < np; ++t) {
            long long idx = mod_floor(k0 - t * m, n);
            r[static_cast<size_t>(idx)] =
                ipow(w, t * br) * un.qh(-2 * t * br * A.a * k0 + A.a * A.b * t * t * br * br);
        }
    }

    FloatIntertwiner out;
    out.A = A;
    out.sign = sign;
    out.n = n;
    out.m = m;
    out.nprime = np;
    out.k0 = k0;
    out.minus_index_flipped = flip_minus_shift;
    out.lambda = Eigen::MatrixXcd::Zero(n, n);
    const long long shift = sign == FSign::Plus ? -1 : (flip_minus_shift ? -1 : 1);
    for (long long t = 0; t < n; ++t) {
        const cplx colfac = sign == FSign::Plus ? ipow(ipow(v, A.d - 1) * ipow(u, A.c), t)
                                                : ipow(ipow(v, -A.d - 1) * ipow(u, -A.c), t);
        for (long long k = 0; k < n; ++k) {
            cplx rv = r[static_cast<size_t>(mod_floor(k + shift * t * A.d, n))];
            if (rv == cplx(0.0)) continue;
            long long he = sign == FSign::Plus ? A.c * (2 * t * k - A.d * t * t)
                                               : -(2 * t * A.c * k + A.c * A.d * t * t);
            out.lambda(k, t) = rv * colfac * un.qh(he);
        }
    }
    out.trace_unnormalized = out.lambda.trace();
    return out;
}

}  // namespace

FloatCharacter FloatCharacter::from(const rep::TorusCharacter& chi) {
    FloatCharacter fc;
    fc.lambda1 = std::polar(1.0, kTwoPi * static_cast<double>(chi.x1.num) / static_cast<double>(chi.x1.den));
    fc.lambda2 = std::polar(1.0, kTwoPi * static_cast<double>(chi.x2.num) / static_cast<double>(chi.x2.den));
    fc.sign = chi.sign;
    fc.r1 = chi.r1;
    fc.r2 = chi.r2;
    return fc;
}

FloatRep build_rho_f(long long n, const FloatCharacter& chi) {
    require(n >= 1 && n % 2 == 1, Err::EvenLevel, "level must be odd and positive");
    require(chi.lambda1 != cplx(0.0) && chi.lambda2 != cplx(0.0), Err::InvalidArgument,
            "character eigenvalues must be nonzero");
    const Units un{n};
    const double s = chi.sign == FSign::Plus ? 1.0 : -1.0;
    // Principal n-th root of lambda^{±1}; odd n makes -root an n-th root of -lambda^{±1}.
    const cplx u = -std::exp(s * std::log(chi.lambda1) / static_cast<double>(n)) * un.q(chi.r1);
    const cplx v = -std::exp(s * std::log(chi.lambda2) / static_cast<double>(n)) * un.q(chi.r2);
    FloatRep rho;
    rho.n = n;
    rho.u = u;
    rho.v = v;
    rho.X = Eigen::MatrixXcd::Zero(n, n);
    rho.Y = Eigen::MatrixXcd::Zero(n, n);
    for (long long i = 0; i < n; ++i) {
        rho.X(i, i) = u * un.q(i);
        rho.Y(mod_floor(i + 1, n), i) = v;
    }
    return rho;
}

Eigen::MatrixXcd evaluate_theta_f(const FloatRep& rho, long long a, long long b) {
    const long long n = rho.n;
    const Units un{n};
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    // X^a Y^b e_i = v^b u^a q^{a(i+b)} e_{i+b}
    const cplx pref = un.qh(-a * b) * ipow(rho.v, b) * ipow(rho.u, a);
    for (long long i = 0; i < n; ++i) {
        M(mod_floor(i + b, n), i) = pref * un.q(a * (i + b));
    }
    return M;
}

FloatIntertwiner build_intertwiner_f(const MappingClass& A, FSign sign, const FloatRep& rho,
                                     double tol) {
    FloatIntertwiner it = build_candidate(A, sign, rho, false);
    if (sign == FSign::Minus && intertwining_residual_f(it, rho) > tol) {
        FloatIntertwiner flipped = build_candidate(A, sign, rho, true);
        if (intertwining_residual_f(flipped, rho) <= tol) return flipped;
    }
    return it;
}

double intertwining_residual_f(const FloatIntertwiner& it, const FloatRep& rho) {
    const double scale = std::max(1.0, it.lambda.cwiseAbs().maxCoeff());
    const long long fs = it.sign == FSign::Plus ? 1 : -1;
    const std::pair<long long, long long> gens[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    double worst = 0.0;
    for (const auto& [w1, w2] : gens) {
        Eigen::MatrixXcd W = evaluate_theta_f(rho, w1, w2);
        const auto [i1, i2] = it.A.row_image(fs * w1, fs * w2);
        Eigen::MatrixXcd FW = evaluate_theta_f(rho, i1, i2);
        worst = std::max(worst, (it.lambda * W - FW * it.lambda).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

}  // namespace qti::flt
