#include "qti/punctured_torus.hpp"

namespace qti::pt {

namespace {

// Structure constants: Xi X_{i+1} = q X_{i+1} Xi cyclically.
long long structure_c(int i, int j) {
    if (i == j) return 0;
    const bool forward = (j - i + 3) % 3 == 1;  // (1,2), (2,3), (3,1)
    return forward ? 1 : -1;
}

const ScaledPermMatrix& generator(const CFRep& rho, int g) {
    switch (g) {
        case 1: return rho.X1;
        case 2: return rho.X2;
        default: return rho.X3;
    }
}

// Scalar of a matrix proportional to the identity.
CycInt scalar_of(const CycMatrix& M, const char* what) {
    auto s = M.scalar_of_identity();
    require(s.has_value(), Err::ShadowFailure, std::string(what) + " is not a scalar matrix");
    return *s;
}

// T_n evaluated on a scalar via the defining recurrence.
CycInt chebyshev_scalar(long long n, const CycInt& p) {
    CycInt prev = CycInt::integer(p.order(), 2);
    if (n == 0) return prev;
    CycInt cur = p;
    for (long long k = 2; k <= n; ++k) {
        CycInt nxt = p * cur - prev;
        prev = std::move(cur);
        cur = std::move(nxt);
    }
    return cur;
}

// n-th power of a generalized permutation matrix, required to be scalar.
CycInt genperm_power_scalar(const QRing& ring, const ScaledPermMatrix& M, const char* what) {
    ScaledPermMatrix P = M.pow(ring.n);
    return scalar_of(CycMatrix::from_sparse(P), what);
}

}  // namespace

CFRep build_cf_rep(const QRing& ring, const CycScalar& r1, const CycScalar& r2,
                   const CycScalar& r3) {
    require(!r1.zero && !r2.zero && !r3.zero, Err::InvalidArgument,
            "triangle character must be nonzero");
    const long long n = ring.n;
    ScaledPermMatrix X1(n, ring.N), X2(n, ring.N), X3(n, ring.N);
    for (long long i = 0; i < n; ++i) {
        X1.set(i, i, r1 * ring.q(i));
        X2.set(mod_floor(i + 1, n), i, r2 * ring.q(-i));
        X3.set(mod_floor(i - 1, n), i, r3);
    }
    CFRep rho{ring, r1, r2, r3, std::move(X1), std::move(X2), std::move(X3)};
    const CycScalar q = ring.q(1);
    require(rho.X1 * rho.X2 == (rho.X2 * rho.X1).scaled(q), Err::InvalidArgument,
            "X1 X2 = q X2 X1 fails");
    require(rho.X2 * rho.X3 == (rho.X3 * rho.X2).scaled(q), Err::InvalidArgument,
            "X2 X3 = q X3 X2 fails");
    require(rho.X3 * rho.X1 == (rho.X1 * rho.X3).scaled(q), Err::InvalidArgument,
            "X3 X1 = q X1 X3 fails");
    return rho;
}

ScaledPermMatrix weyl_bracket(const CFRep& rho, const std::vector<CFWord>& word) {
    require(!word.empty(), Err::InvalidArgument, "empty bracket");
    const QRing& ring = rho.ring;
    long long total = 0;
    for (size_t j = 0; j < word.size(); ++j) {
        for (size_t l = j + 1; l < word.size(); ++l) {
            total += word[j].e * word[l].e * structure_c(word[j].gen, word[l].gen);
        }
    }
    // Re-verify each pairwise constant against the matrices.
    for (size_t j = 0; j < word.size(); ++j) {
        for (size_t l = j + 1; l < word.size(); ++l) {
            const ScaledPermMatrix& U = generator(rho, word[j].gen);
            const ScaledPermMatrix& V = generator(rho, word[l].gen);
            require(U * V == (V * U).scaled(ring.q(structure_c(word[j].gen, word[l].gen))),
                    Err::InvalidArgument, "structure constant disagrees with the matrices");
        }
    }
    ScaledPermMatrix M = generator(rho, word[0].gen).pow(word[0].e);
    for (size_t j = 1; j < word.size(); ++j) {
        M = M * generator(rho, word[j].gen).pow(word[j].e);
    }
    return M.scaled(ring.q_half(-total));
}

SkeinGenerators embed_skein_generators(const CFRep& rho) {
    const QRing& ring = rho.ring;
    const long long n = rho.n();
    SkeinGenerators out(n, ring.N);

    auto loop = [&](int g1, int g2) {
        CycMatrix K(n, ring.N);
        K.accumulate(CycInt::one(ring.N),
                     weyl_bracket(rho, {{g1, 1}, {g2, 1}}));
        K.accumulate(CycInt::one(ring.N),
                     weyl_bracket(rho, {{g1, -1}, {g2, -1}}));
        K.accumulate(CycInt::one(ring.N),
                     weyl_bracket(rho, {{g1, 1}, {g2, -1}}));
        return K;
    };
    out.K1 = loop(2, 3);
    out.K2 = loop(3, 1);
    out.K3 = loop(1, 2);

    CycMatrix P(n, ring.N);
    P.accumulate(CycInt::one(ring.N),
                 weyl_bracket(rho, {{1, 2}, {2, 2}, {3, 2}}));
    P.accumulate(CycInt::one(ring.N),
                 weyl_bracket(rho, {{1, -2}, {2, -2}, {3, -2}}));
    out.P = P;
    out.puncture_scalar = scalar_of(P, "puncture element");

    const CycScalar c = (rho.r1 * rho.r2 * rho.r3).pow(2) * ring.q(1);
    CycInt expected = CycInt::from_scalar(c) + CycInt::from_scalar(c.inverse());
    require(out.puncture_scalar == expected, Err::ShadowFailure,
            "puncture scalar disagrees with (r1 r2 r3)^2 q + inverse");

    // Cyclic skein relations.
    const CycScalar qh = ring.q_half(1), qhm = ring.q_half(-1);
    CycInt coeff = CycInt::from_scalar(ring.q(-1)) - CycInt::from_scalar(ring.q(1));
    auto skein = [&](const CycMatrix& A, const CycMatrix& B, const CycMatrix& C) {
        CycMatrix lhs = (A * B) * CycInt::from_scalar(qhm) - (B * A) * CycInt::from_scalar(qh);
        return lhs == C * coeff;
    };
    require(skein(out.K1, out.K2, out.K3), Err::ShadowFailure, "skein relation (1,2;3) fails");
    require(skein(out.K2, out.K3, out.K1), Err::ShadowFailure, "skein relation (2,3;1) fails");
    require(skein(out.K3, out.K1, out.K2), Err::ShadowFailure, "skein relation (3,1;2) fails");
    return out;
}

ShadowCheck shadow_equations_check(const CFRep& rho, bool with_matrix_chebyshev) {
    const QRing& ring = rho.ring;
    const long long n = rho.n();
    ShadowCheck out(ring.N);

    // Power route: T_n(x + x^{-1} + y) collapses to x^n + x^{-n} + y^n for the
    // commuting bracket summands of Ki.
    auto power_t = [&](int g1, int g2) {
        ScaledPermMatrix x = weyl_bracket(rho, {{g1, 1}, {g2, 1}});
        ScaledPermMatrix y = weyl_bracket(rho, {{g1, 1}, {g2, -1}});
        CycInt xs = genperm_power_scalar(ring, x, "bracket power");
        CycInt xsi = genperm_power_scalar(ring, x.inverse(), "bracket power");
        CycInt ys = genperm_power_scalar(ring, y, "bracket power");
        return xs + xsi + ys;
    };
    out.t1 = power_t(2, 3);
    out.t2 = power_t(3, 1);
    out.t3 = power_t(1, 2);

    // Boundary closed form: -ti = a^n b^n + a^{-n} b^{-n} + a^n b^{-n} for the
    // complementary character pair (a, b).
    auto boundary_t = [&](const CycScalar& a, const CycScalar& b) {
        CycScalar an = a.pow(n), bn = b.pow(n);
        CycInt s = CycInt::from_scalar(an * bn) + CycInt::from_scalar((an * bn).inverse()) +
                   CycInt::from_scalar(an * bn.inverse());
        return -s;
    };
    out.boundary_match = out.t1 == boundary_t(rho.r2, rho.r3) &&
                         out.t2 == boundary_t(rho.r3, rho.r1) &&
                         out.t3 == boundary_t(rho.r1, rho.r2);

    SkeinGenerators sk = embed_skein_generators(rho);
    out.puncture_scalar = sk.puncture_scalar;
    out.puncture_trace = chebyshev_scalar(n, sk.puncture_scalar);
    CycInt rhs = -(out.t1 * out.t2 * out.t3) - out.t1 * out.t1 - out.t2 * out.t2 -
                 out.t3 * out.t3 + CycInt::integer(ring.N, 2);
    out.puncture_match = out.puncture_trace == rhs;

    if (with_matrix_chebyshev) {
        out.matrix_checked = true;
        out.chebyshev_match = true;
        const CycMatrix* ks[3] = {&sk.K1, &sk.K2, &sk.K3};
        const CycInt* ts[3] = {&out.t1, &out.t2, &out.t3};
        for (int i = 0; i < 3 && out.chebyshev_match; ++i) {
            CycMatrix prev = CycMatrix::identity(n, ring.N) * CycInt::integer(ring.N, 2);
            CycMatrix cur = *ks[i];
            for (long long k = 2; k <= n; ++k) {
                CycMatrix nxt = *ks[i] * cur - prev;
                prev = std::move(cur);
                cur = std::move(nxt);
            }
            auto s = cur.scalar_of_identity();
            out.chebyshev_match = s.has_value() && *s == *ts[i];
        }
    }
    return out;
}

SqCFRep build_sq_rep(const QRing& ring, const CycScalar& y1, const CycScalar& y2,
                     const CycScalar& y3) {
    require(!y1.zero && !y2.zero && !y3.zero, Err::InvalidArgument,
            "square character must be nonzero");
    const long long n = ring.n;
    ScaledPermMatrix Y1(n, ring.N), Y2(n, ring.N), Y3(n, ring.N);
    for (long long i = 0; i < n; ++i) {
        Y1.set(i, i, y1 * ring.q(4 * i));
        Y2.set(mod_floor(i + 1, n), i, y2 * ring.q(-2 * i));
        Y3.set(mod_floor(i - 1, n), i, y3 * ring.q(-2 * i));
    }
    SqCFRep rho{ring, y1, y2, y3, std::move(Y1), std::move(Y2), std::move(Y3)};
    const CycScalar q4 = ring.q(4);
    require(rho.Y1 * rho.Y2 == (rho.Y2 * rho.Y1).scaled(q4), Err::InvalidArgument,
            "Y1 Y2 = q^4 Y2 Y1 fails");
    require(rho.Y2 * rho.Y3 == (rho.Y3 * rho.Y2).scaled(q4), Err::InvalidArgument,
            "Y2 Y3 = q^4 Y3 Y2 fails");
    require(rho.Y3 * rho.Y1 == (rho.Y1 * rho.Y3).scaled(q4), Err::InvalidArgument,
            "Y3 Y1 = q^4 Y1 Y3 fails");
    return rho;
}

PeriodicIntertwiner build_periodic_intertwiner(const SqCFRep& rho) {
    const QRing& ring = rho.ring;
    const long long n = rho.n();
    require(rho.y1 == rho.y2 && rho.y2 == rho.y3, Err::NotInvariant,
            "order-three symmetry needs y1 = y2 = y3");
    PeriodicIntertwiner out(n, ring.N);
    for (long long i = 0; i < n; ++i) {
        for (long long k = 0; k < n; ++k) {
            const long long e = k * k + i * i + 4 * i * k + i - k;
            out.lambda.set(i, k, ring.q(e));
        }
    }
    out.trace_unnormalized = out.lambda.trace();
    out.conjugation_ok = rho.Y3 * out.lambda == out.lambda * rho.Y1 &&
                         rho.Y1 * out.lambda == out.lambda * rho.Y2 &&
                         rho.Y2 * out.lambda == out.lambda * rho.Y3;
    return out;
}

std::vector<itw::SweepRow> periodic_trace_sweep(long long n_min, long long n_max) {
    require(n_min >= 1 && n_min <= n_max, Err::InvalidArgument, "empty or invalid level range");
    std::vector<itw::SweepRow> rows;
    for (long long n = n_min % 2 == 1 ? n_min : n_min + 1; n <= n_max; n += 2) {
        itw::SweepRow row;
        row.n = n;
        row.path = "closed_form";
        itw::fill_sweep_row(row, itw::gauss_sum(12, n), n);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qti::pt
