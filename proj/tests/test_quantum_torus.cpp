#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qti/quantum_torus.hpp"

using namespace qti;
using namespace qti::cyc;
using namespace qti::qt;

namespace {

MappingClass random_word(std::mt19937& rng, int len) {
    MappingClass m = MappingClass::identity();
    const MappingClass T{1, 1, 0, 1}, Ti{1, -1, 0, 1}, S{0, -1, 1, 0}, Si{0, 1, -1, 0};
    for (int i = 0; i < len; ++i) {
        switch (rng() % 4) {
            case 0: m = m * T; break;
            case 1: m = m * Ti; break;
            case 2: m = m * S; break;
            default: m = m * Si; break;
        }
    }
    return m;
}

}  // namespace

TEST_CASE("MappingClass: determinant check and periodicity") {
    CHECK_THROWS_AS(MappingClass(1, 1, 1, 1), Error);
    CHECK(MappingClass::identity().order() == 1);
    CHECK(MappingClass(-1, 0, 0, -1).order() == 2);
    CHECK(MappingClass(0, 1, -1, 0).order() == 4);
    CHECK(MappingClass(0, 1, -1, -1).order() == 3);
    CHECK(MappingClass(0, -1, 1, 1).order() == 6);
    CHECK(MappingClass(2, 1, -7, -3).order() == 3);  // trace -1
    MappingClass dehn(1, 1, 0, 1);
    CHECK(!dehn.is_periodic());
    CHECK_THROWS_AS(dehn.order(), Error);
    CHECK(MappingClass(2, 1, 1, 1).is_periodic() == false);
}

TEST_CASE("theta_mul: product rule and inverses") {
    QRing R = QRing::for_level(5);
    ThetaMonomial x{R.one(), 1, 0}, y{R.one(), 0, 1};
    ThetaMonomial xy = theta_mul(R, x, y);
    CHECK(xy.a == 1);
    CHECK(xy.b == 1);
    CHECK(xy.scalar == R.q_half(1));
    ThetaMonomial yx = theta_mul(R, y, x);
    CHECK(yx.scalar == R.q_half(-1));

    // theta_{(a,b)} * theta_{(-a,-b)} = theta_{(0,0)} = 1.
    ThetaMonomial m{R.one(), 3, -2};
    ThetaMonomial inv{R.one(), -3, 2};
    ThetaMonomial p = theta_mul(R, m, inv);
    CHECK(p.a == 0);
    CHECK(p.b == 0);
    CHECK(p.scalar == R.one());
}

TEST_CASE("QTElement: inverse_monomial") {
    QRing R = QRing::for_level(3);
    QTElement t = QTElement::theta(R, 2, 1);
    QTElement ti = t.inverse_monomial();
    QTElement prod = t * ti;
    CHECK(prod == QTElement::theta(R, 0, 0));
}

TEST_CASE("fg_image: primitive links are two-term theta sums") {
    QRing R = QRing::for_level(5);
    CHECK(fg_image(R, 1, 0) == QTElement::theta(R, 1, 0) + QTElement::theta(R, -1, 0));
    CHECK(fg_image(R, 1, 1) == QTElement::theta(R, 1, 1) + QTElement::theta(R, -1, -1));
    CHECK(fg_image(R, 2, 3) == QTElement::theta(R, 2, 3) + QTElement::theta(R, -2, -3));
}

TEST_CASE("fg_image: non-primitive links collapse through Chebyshev") {
    QRing R = QRing::for_level(5);
    // (2,0) = 2*(1,0):  T_2(theta + theta^{-1}) = theta^2 + theta^{-2}.
    CHECK(fg_image(R, 2, 0) == QTElement::theta(R, 2, 0) + QTElement::theta(R, -2, 0));
    CHECK(fg_image(R, 3, 0) == QTElement::theta(R, 3, 0) + QTElement::theta(R, -3, 0));
    CHECK(fg_image(R, 4, 6) == QTElement::theta(R, 4, 6) + QTElement::theta(R, -4, -6));
    CHECK_THROWS_AS(fg_image(R, 0, 0), Error);
}

TEST_CASE("fg_image: random lattice points") {
    QRing R = QRing::for_level(7);
    std::mt19937 rng(101);
    for (int t = 0; t < 40; ++t) {
        long long a = static_cast<long long>(rng() % 21) - 10;
        long long b = static_cast<long long>(rng() % 21) - 10;
        if (a == 0 && b == 0) continue;
        CHECK(fg_image(R, a, b) == QTElement::theta(R, a, b) + QTElement::theta(R, -a, -b));
    }
}

TEST_CASE("apply_FA: image of generators, both signs") {
    QRing R = QRing::for_level(5);
    MappingClass A(2, 1, -7, -3);
    QTElement x = QTElement::theta(R, 1, 0);
    CHECK(apply_FA(A, FSign::Plus, x) == QTElement::theta(R, 2, 1));
    CHECK(apply_FA(A, FSign::Minus, x) == QTElement::theta(R, -2, -1));
    QTElement y = QTElement::theta(R, 0, 1);
    CHECK(apply_FA(A, FSign::Plus, y) == QTElement::theta(R, -7, -3));
}

TEST_CASE("apply_FA: is an algebra homomorphism for both signs") {
    QRing R = QRing::for_level(5);
    std::mt19937 rng(55);
    for (int t = 0; t < 25; ++t) {
        MappingClass A = random_word(rng, 5);
        auto rand_elt = [&] {
            QTElement x(R);
            for (int k = 0; k < 3; ++k) {
                long long a = static_cast<long long>(rng() % 9) - 4;
                long long b = static_cast<long long>(rng() % 9) - 4;
                CycInt c(R.N);
                c.add_term(static_cast<long long>(rng() % static_cast<unsigned long>(R.N)),
                           1 + static_cast<long long>(rng() % 3));
                x.add_term(a, b, c);
            }
            return x;
        };
        QTElement x = rand_elt(), y = rand_elt();
        for (FSign s : {FSign::Plus, FSign::Minus}) {
            CHECK(apply_FA(A, s, x * y) == apply_FA(A, s, x) * apply_FA(A, s, y));
            CHECK(apply_FA(A, s, x + y) == apply_FA(A, s, x) + apply_FA(A, s, y));
        }
    }
}

TEST_CASE("apply_FA: plus-branch composition is contravariant") {
    QRing R = QRing::for_level(3);
    std::mt19937 rng(77);
    for (int t = 0; t < 20; ++t) {
        MappingClass A = random_word(rng, 4), B = random_word(rng, 4);
        QTElement x = QTElement::theta(R, static_cast<long long>(rng() % 7) - 3,
                                       static_cast<long long>(rng() % 7) - 3);
        QTElement lhs = apply_FA(A, FSign::Plus, apply_FA(B, FSign::Plus, x));
        QTElement rhs = apply_FA(B * A, FSign::Plus, x);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("apply_FA: equivariance of fg_image") {
    QRing R = QRing::for_level(5);
    std::mt19937 rng(99);
    for (int t = 0; t < 30; ++t) {
        MappingClass A = random_word(rng, 5);
        long long a = static_cast<long long>(rng() % 11) - 5;
        long long b = static_cast<long long>(rng() % 11) - 5;
        if (a == 0 && b == 0) continue;
        auto [ia, ib] = A.row_image(a, b);
        CHECK(apply_FA(A, FSign::Plus, fg_image(R, a, b)) == fg_image(R, ia, ib));
    }
}

TEST_CASE("gcd_parity_check: ab + a + b has the parity of gcd(a,b)") {
    for (long long a = -8; a <= 8; ++a)
        for (long long b = -8; b <= 8; ++b) {
            if (a == 0 && b == 0) continue;
            CHECK(gcd_parity_check(a, b));
        }
}
