#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qti/torus_rep.hpp"

using namespace qti;
using namespace qti::cyc;
using namespace qti::mat;
using namespace qti::qt;
using namespace qti::rep;

TEST_CASE("ScaledPermMatrix: generalized permutation basics") {
    QRing R = QRing::for_level(3);
    TorusRep rho = build_rho(R, R.one(), R.one());
    CHECK(rho.X.is_gen_perm());
    CHECK(rho.Y.is_gen_perm());
    CHECK(rho.Y.pow(-1) == rho.Y.inverse());
    CHECK(rho.Y.pow(3) == ScaledPermMatrix::identity(3, R.N));
    CHECK((rho.Y * rho.Y.inverse()) == ScaledPermMatrix::identity(3, R.N));
    CHECK(rho.X.pow(0) == ScaledPermMatrix::identity(3, R.N));
    // Trace of Y is zero (no diagonal entries).
    CHECK(rho.Y.trace().is_zero());
    // Products that would put two contributions in one cell must throw.
    ScaledPermMatrix A(2, R.N), B(2, R.N);
    A.set(0, 0, R.one());
    A.set(0, 1, R.one());
    B.set(0, 0, R.one());
    B.set(1, 0, R.one());
    CHECK_THROWS_AS(A * B, Error);
}

TEST_CASE("build_rho: defining relations at several levels and characters") {
    std::mt19937 rng(3);
    for (long long n : {1LL, 3LL, 5LL, 9LL}) {
        QRing R = QRing::for_level(n, {8});
        for (int t = 0; t < 4; ++t) {
            CycScalar u = R.unit(static_cast<long long>(rng() % static_cast<unsigned long>(R.N)));
            CycScalar v = R.unit(static_cast<long long>(rng() % static_cast<unsigned long>(R.N)));
            TorusRep rho = build_rho(R, u, v);
            // XY = q YX
            CHECK((rho.X * rho.Y) == (rho.Y * rho.X).scaled(R.q(1)));
            // X^n = u^n Id, Y^n = v^n Id
            std::vector<CycScalar> un(static_cast<size_t>(n), u.pow(n));
            std::vector<CycScalar> vn(static_cast<size_t>(n), v.pow(n));
            CHECK(rho.X.pow(n) == ScaledPermMatrix::diagonal(R.N, un));
            CHECK(rho.Y.pow(n) == ScaledPermMatrix::diagonal(R.N, vn));
        }
    }
}

TEST_CASE("build_rho: n = 1 representation") {
    QRing R = QRing::for_level(1);
    TorusRep rho = build_rho(R, R.minus_one(), R.one());
    CHECK(rho.X.at(0, 0) == R.minus_one());
    CHECK(rho.Y.at(0, 0) == R.one());
}

TEST_CASE("TorusCharacter: lifted scalars satisfy u^n = -lambda^{±1}") {
    for (auto sign : {FSign::Plus, FSign::Minus}) {
        TorusCharacter chi{{1, 3}, {2, 3}, sign, 1, 2};
        for (long long n : {3LL, 5LL, 9LL}) {
            QRing R = chi.ring_for(n);
            CycScalar expect1 = sign == FSign::Plus ? chi.lambda1(R) : chi.lambda1(R).inverse();
            CycScalar expect2 = sign == FSign::Plus ? chi.lambda2(R) : chi.lambda2(R).inverse();
            CHECK(chi.u(R).pow(n) == expect1.negated());
            CHECK(chi.v(R).pow(n) == expect2.negated());
        }
    }
}

TEST_CASE("evaluate_qt: image of the (1,1) link at n = 3, u = v = 1") {
    QRing R = QRing::for_level(3);
    TorusRep rho = build_rho(R, R.one(), R.one());
    CycMatrix got = evaluate_qt(rho, fg_image(R, 1, 1));
    // Hand-built oracle: q^{-1/2} X Y + q^{-1/2} X^{-1} Y^{-1} with
    // (XY) e_i = q^{i+1} e_{i+1} and (X^{-1}Y^{-1}) e_i = q^{-(i-1)} e_{i-1}.
    CycMatrix want(3, R.N);
    for (long long i = 0; i < 3; ++i) {
        want.at(mod_floor(i + 1, 3), i) += CycInt::from_scalar(R.q_half(2 * (i + 1) - 1));
        want.at(mod_floor(i - 1, 3), i) += CycInt::from_scalar(R.q_half(-(2 * (i - 1) + 1)));
    }
    CHECK(got == want);
}

TEST_CASE("evaluate_qt: multiplicativity on random elements") {
    TorusCharacter chi{{1, 4}, {1, 3}, FSign::Plus, 0, 0};
    TorusRep rho = build_rho(5, chi);
    const QRing& R = rho.ring;
    std::mt19937 rng(17);
    for (int t = 0; t < 10; ++t) {
        QTElement x(R), y(R);
        for (int k = 0; k < 2; ++k) {
            x.add_term(static_cast<long long>(rng() % 7) - 3, static_cast<long long>(rng() % 7) - 3,
                       CycInt::one(R.N));
            y.add_term(static_cast<long long>(rng() % 7) - 3, static_cast<long long>(rng() % 7) - 3,
                       CycInt::one(R.N));
        }
        CHECK(evaluate_qt(rho, x * y) == (evaluate_qt(rho, x) * evaluate_qt(rho, y)));
    }
}

TEST_CASE("classical_shadow_check: frozen example and random sweep") {
    // n = 3, lambda_1 = zeta_3, lambda_2 = zeta_3^2, (a,b) = (2,1):
    // scalar = (-1)^{2+2+1} (zeta_3 + zeta_3^2) = 1.
    TorusCharacter chi{{1, 3}, {2, 3}, FSign::Plus, 0, 0};
    TorusRep rho = build_rho(3, chi);
    CycInt s = classical_shadow_check(rho, chi, 2, 1);
    auto v = s.as_integer();
    REQUIRE(v.has_value());
    CHECK(*v == 1);

    std::mt19937 rng(23);
    for (auto sign : {FSign::Plus, FSign::Minus}) {
        TorusCharacter c2{{1, 5}, {3, 7}, sign, 1, 0};
        for (long long n : {3LL, 5LL}) {
            TorusRep r2 = build_rho(n, c2);
            for (int t = 0; t < 6; ++t) {
                long long a = static_cast<long long>(rng() % 7) - 3;
                long long b = static_cast<long long>(rng() % 7) - 3;
                CHECK_NOTHROW(classical_shadow_check(r2, c2, a, b));
            }
        }
    }
}

TEST_CASE("solve_invariant_characters: finite solutions") {
    MappingClass A(2, 1, -7, -3);
    CharacterSolution plus = solve_invariant_characters(A, FSign::Plus, 1, 1);
    CHECK(plus.det == 3);  // 2 - (a+d) = 2 - (-1)
    REQUIRE(plus.finite);
    CHECK(plus.x1 == Fraction(-5, 3));
    CHECK(plus.x2 == Fraction(8, 3));
    CHECK(plus.x1.folded() == Fraction(1, 3));
    CHECK(plus.x2.folded() == Fraction(2, 3));

    CharacterSolution minus = solve_invariant_characters(A, FSign::Minus, 1, 1);
    CHECK(minus.det == 1);
    REQUIRE(minus.finite);
    // Determinant 1 forces lambda_1 = lambda_2 = 1.
    CHECK(minus.x1.folded() == Fraction(0, 1));
    CHECK(minus.x2.folded() == Fraction(0, 1));
}

TEST_CASE("solve_invariant_characters: solutions satisfy the angle system") {
    std::mt19937 rng(31);
    for (int t = 0; t < 40; ++t) {
        long long b = static_cast<long long>(rng() % 7) - 3;
        long long c = static_cast<long long>(rng() % 7) - 3;
        // Build [[a,b],[c,d]] with ad = 1 + bc by scanning small a.
        long long prod = 1 + b * c;
        long long a = 0, d = 0;
        bool found = false;
        for (a = -6; a <= 6 && !found; ++a)
            if (a != 0 && prod % a == 0) {
                d = prod / a;
                found = true;
                break;
            }
        if (!found) continue;
        MappingClass A(a, b, c, d);
        for (auto sign : {FSign::Plus, FSign::Minus}) {
            long long k1 = static_cast<long long>(rng() % 5) - 2;
            long long k2 = static_cast<long long>(rng() % 5) - 2;
            CharacterSolution sol = solve_invariant_characters(A, sign, k1, k2);
            long long s = sign == FSign::Plus ? 1 : -1;
            if (!sol.finite) continue;
            Fraction r1 = Fraction(A.a - s, 1) * sol.x1 + Fraction(A.b, 1) * sol.x2;
            Fraction r2 = Fraction(A.c, 1) * sol.x1 + Fraction(A.d - s, 1) * sol.x2;
            CHECK(r1 == Fraction(k1, 1));
            CHECK(r2 == Fraction(k2, 1));
        }
    }
}

TEST_CASE("solve_invariant_characters: degenerate determinant reports constraints") {
    CharacterSolution sol = solve_invariant_characters(MappingClass(1, 1, 0, 1), FSign::Plus, 0, 0);
    CHECK(sol.det == 0);
    CHECK(!sol.finite);
    REQUIRE(sol.constraints.size() == 1);
    CHECK(sol.constraints[0] == std::pair<long long, long long>(0, 1));  // lambda_2 = 1

    CharacterSolution all = solve_invariant_characters(MappingClass::identity(), FSign::Plus, 0, 0);
    CHECK(all.constraints.empty());  // every character is fixed
}

TEST_CASE("decompose_subreps: dimensions, closure, trivial intersection") {
    for (long long n : {3LL, 5LL, 7LL, 11LL}) {
        for (auto [su, sv] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
            QRing R = QRing::for_level(n);
            CycScalar u = su ? R.minus_one() : R.one();
            CycScalar v = sv ? R.minus_one() : R.one();
            TorusRep rho = build_rho(R, u, v);
            SubrepBases sb = decompose_subreps(rho);
            CHECK(static_cast<long long>(sb.v1.size()) == (n + 1) / 2);
            CHECK(static_cast<long long>(sb.v2.size()) == (n - 1) / 2);
            CHECK(sb.closure_verified);
            CHECK(sb.intersection_trivial);
        }
    }
}

TEST_CASE("decompose_subreps: explicit image of e_1 - e_4 under the (0,1) link, n = 5") {
    QRing R = QRing::for_level(5);
    TorusRep rho = build_rho(R, R.one(), R.one());
    CycMatrix M = evaluate_qt(rho, fg_image(R, 0, 1));  // Y + Y^{-1}
    std::vector<CycInt> vec(5, CycInt(R.N));
    vec[1] = CycInt::one(R.N);
    vec[4] = -CycInt::one(R.N);
    std::vector<CycInt> w = M.apply(vec);
    // (Y + Y^{-1})(e_1 - e_4) = e_2 - e_3.
    CHECK(w[0].is_zero());
    CHECK(w[1].is_zero());
    CHECK(w[4].is_zero());
    CHECK(*w[2].as_integer() == 1);
    CHECK(*w[3].as_integer() == -1);
}

TEST_CASE("decompose_subreps: error taxonomy") {
    QRing R3 = QRing::for_level(3);
    TorusRep bad = build_rho(R3, R3.q(1), R3.one());  // u = q is not ±1
    CHECK_THROWS_AS(decompose_subreps(bad), Error);
    QRing R1 = QRing::for_level(1);
    TorusRep small = build_rho(R1, R1.one(), R1.one());
    CHECK_THROWS_AS(decompose_subreps(small), Error);
}

TEST_CASE("integer_rank: small sanity cases") {
    using qti::cyc::BigInt;
    std::vector<std::vector<BigInt>> rows = {{1, 0, 1}, {0, 1, 1}, {1, 1, 2}};
    CHECK(integer_rank(rows) == 2);
    rows = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(integer_rank(rows) == 3);
    CHECK(integer_rank({}) == 0);
}
