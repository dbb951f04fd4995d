#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>

#include "qti/float_backend.hpp"
#include "qti/intertwiner.hpp"

using namespace qti;
using cyc::BigInt;
using cyc::CycInt;
using cyc::CycScalar;
using itw::build_intertwiner;
using itw::build_r_coeffs;
using itw::closed_form_trace;
using itw::gauss_sum;
using itw::IntertwinerResult;
using itw::verify_intertwining;
using qt::FSign;
using qt::MappingClass;
using rep::TorusCharacter;
using rep::TorusRep;

namespace {

const MappingClass kExA{2, 1, -7, -3};  // periodic of order 3, trace -1
const MappingClass kTwist{1, 1, 0, 1};
const MappingClass kPara{0, 1, -1, 2};
const MappingClass kS{0, 1, -1, 0};

TorusCharacter chi_exa_plus() { return TorusCharacter{{-5, 3}, {8, 3}, FSign::Plus, 0, 0}; }
TorusCharacter chi_exa_minus() { return TorusCharacter{{0, 1}, {0, 1}, FSign::Minus, 0, 0}; }
TorusCharacter trivial_plus() { return TorusCharacter::trivial(FSign::Plus); }

IntertwinerResult make(const MappingClass& A, const TorusCharacter& chi, long long n,
                       const TorusRep** rho_out = nullptr) {
    static thread_local std::optional<TorusRep> keep;
    keep.emplace(rep::build_rho(n, chi));
    if (rho_out) *rho_out = &*keep;
    return build_intertwiner(A, chi.sign, *keep);
}

BigInt sq_exact(const IntertwinerResult& it) {
    auto v = it.abs_trace_sq_exact();
    REQUIRE(v.has_value());
    return *v;
}

}  // namespace

TEST_CASE("identity mapping class yields the identity intertwiner") {
    for (long long n : {1, 3, 5, 9}) {
        TorusRep rho = rep::build_rho(n, chi_exa_plus());
        IntertwinerResult it = build_intertwiner(MappingClass::identity(), FSign::Plus, rho);
        CHECK(it.rc.m == n);
        CHECK(it.rc.nprime == 1);
        CHECK(it.lambda == mat::ScaledPermMatrix::identity(n, rho.ring.N));
        CHECK(verify_intertwining(it, rho));
        CHECK(sq_exact(it) == BigInt(n) * n);  // unnormalized trace n, n' = 1
    }
}

TEST_CASE("weight coefficients satisfy the shift recursion") {
    for (long long n : {5, 7, 9}) {
        for (FSign sign : {FSign::Plus, FSign::Minus}) {
            TorusCharacter chi = sign == FSign::Plus ? chi_exa_plus() : chi_exa_minus();
            TorusRep rho = rep::build_rho(n, chi);
            auto rc = build_r_coeffs(kExA, sign, rho);
            if (sign == FSign::Minus) continue;  // recursion below is the plus-branch law
            const long long a = kExA.a, b = kExA.b;
            for (long long j = 0; j < rc.nprime; ++j) {
                const long long k = rc.k0 + j * b;
                for (long long t = 0; t < rc.nprime; ++t) {
                    CycScalar lhs = rc.values[static_cast<size_t>(mod_floor(k + t * b, n))];
                    CycScalar rhs = rc.values[static_cast<size_t>(mod_floor(k, n))] *
                                    rho.v.pow(t * b) * rho.u.pow(t * (a - 1)) *
                                    rho.ring.q_half(a * (2 * t * k + b * t * t));
                    CHECK(lhs == rhs);
                }
            }
        }
    }
}

TEST_CASE("order-three example, plus branch: unit traces off multiples of three") {
    // Oracle: SVD nullspace of the intertwining equations, det-normalized.
    for (long long n : {5, 7, 11, 13}) {
        const TorusRep* rho = nullptr;
        IntertwinerResult it = make(kExA, chi_exa_plus(), n, &rho);
        CHECK(verify_intertwining(it, *rho));
        CHECK(it.rc.nprime == n);
        CHECK(sq_exact(it) == 1);
        CHECK(itw::trace_bound_ok(it));
    }
    for (long long n : {3, 9, 15}) {
        const TorusRep* rho = nullptr;
        IntertwinerResult it = make(kExA, chi_exa_plus(), n, &rho);
        CHECK(verify_intertwining(it, *rho));
        CHECK(it.trace_unnormalized.is_zero());
        CHECK(it.abs_trace() == 0.0);
        CHECK(itw::trace_bound_ok(it));
    }
}

TEST_CASE("order-three example, minus branch: unit traces at every level") {
    for (long long n : {5, 7, 9}) {
        const TorusRep* rho = nullptr;
        IntertwinerResult it = make(kExA, chi_exa_minus(), n, &rho);
        CHECK(verify_intertwining(it, *rho));
        CHECK(sq_exact(it) == 1);  // oracle at n = 5, 7
        CHECK(itw::trace_bound_ok(it));
    }
}

TEST_CASE("square-root law for parabolic classes") {
    for (long long n : {3, 5, 7, 9, 11, 13}) {
        IntertwinerResult it = make(kTwist, trivial_plus(), n);
        CHECK(sq_exact(it) == n);
    }
    for (long long n : {5, 9}) {
        IntertwinerResult it = make(kPara, trivial_plus(), n);
        CHECK(sq_exact(it) == n);
    }
    // Non-degenerate invariant character of the twist: same law (oracle).
    TorusCharacter chi{{1, 5}, {0, 1}, FSign::Plus, 0, 0};
    for (long long n : {5, 7, 9}) {
        const TorusRep* rho = nullptr;
        IntertwinerResult it = make(kTwist, chi, n, &rho);
        CHECK(verify_intertwining(it, *rho));
        CHECK(sq_exact(it) == n);
    }
}

TEST_CASE("closed-form trace matches the matrix trace exactly") {
    for (long long n : {5, 7, 9, 11, 13, 15}) {
        TorusRep rho = rep::build_rho(n, chi_exa_plus());
        IntertwinerResult it = build_intertwiner(kExA, FSign::Plus, rho);
        auto cf = closed_form_trace(kExA, FSign::Plus, rho, it.trace_unnormalized);
        CHECK(cf.s1 == 1);  // worked example values
        CHECK(cf.s2 == 1);
        CHECK((cf.variant_proof - it.trace_unnormalized).is_zero());
        CHECK(cf.matched != "none");
        CHECK(cf.matched != "display");
    }
    // Coefficient-variant degeneracy: both linear terms vanish for the twist.
    for (long long n : {5, 9}) {
        TorusRep rho = rep::build_rho(n, trivial_plus());
        IntertwinerResult it = build_intertwiner(kTwist, FSign::Plus, rho);
        auto cf = closed_form_trace(kTwist, FSign::Plus, rho, it.trace_unnormalized);
        CHECK(cf.matched == "both");
        CHECK(cf.variant_proof == cf.variant_display);
        auto sq = cf.variant_proof.abs_sq().as_integer();
        REQUIRE(sq.has_value());
        CHECK(*sq == BigInt(n) * n);  // unnormalized trace is exactly n
    }
    // Minus branch closed form.
    for (long long n : {5, 7}) {
        TorusRep rho = rep::build_rho(n, chi_exa_minus());
        IntertwinerResult it = build_intertwiner(kExA, FSign::Minus, rho);
        auto cf = closed_form_trace(kExA, FSign::Minus, rho, it.trace_unnormalized);
        CHECK(cf.matched != "none");
    }
}

TEST_CASE("closed form requires the twisting entry coprime to the level") {
    TorusRep rho = rep::build_rho(9, trivial_plus());
    MappingClass T3{1, 3, 0, 1};
    CHECK_THROWS_AS((void)closed_form_trace(T3, FSign::Plus, rho), Error);
    try {
        (void)closed_form_trace(T3, FSign::Plus, rho);
    } catch (const Error& e) {
        CHECK(e.code == Err::NotCoprime);
    }
}

TEST_CASE("determinant law with block structure") {
    // gcd(b, n) = 3: nontrivial block decomposition, |det| = 3^{9/2}.
    {
        const TorusRep* rho = nullptr;
        IntertwinerResult it = make(MappingClass{1, 3, 0, 1}, trivial_plus(), 9, &rho);
        CHECK(verify_intertwining(it, *rho));
        CHECK(it.rc.m == 3);
        CHECK(it.rc.nprime == 3);
        CHECK(it.lambda.nnz() == 27);
        auto dc = itw::abs_det_check(it);
        CHECK(dc.total_ok);
        CHECK(dc.blocks_ok);
        CHECK(dc.block_det_logs.size() == 3);
        CHECK(dc.expected_log == doctest::Approx(4.5 * std::log(3.0)));
        CHECK(sq_exact(it) == 27);  // oracle value
    }
    // Coprime case: dense matrix, |det| = n^{n/2}.
    {
        IntertwinerResult it = make(kExA, chi_exa_plus(), 7);
        auto dc = itw::abs_det_check(it);
        CHECK(dc.total_ok);
        CHECK(dc.blocks_ok);
        CHECK(dc.block_det_logs.size() == 1);
    }
    // b = 0: generalized permutation intertwiner, |det| = 1, minus branch.
    {
        TorusCharacter chi{{1, 3}, {1, 7}, FSign::Minus, 0, 0};
        const TorusRep* rho = nullptr;
        IntertwinerResult it = make(MappingClass{-1, 0, 3, -1}, chi, 9, &rho);
        CHECK(verify_intertwining(it, *rho));
        CHECK(it.rc.nprime == 1);
        CHECK(it.lambda.is_gen_perm());
        auto dc = itw::abs_det_check(it);
        CHECK(dc.total_ok);
        CHECK(dc.blocks_ok);
        CHECK(dc.expected_log == 0.0);
    }
}

TEST_CASE("quadratic exponential sums: frozen case and the magnitude law") {
    CycInt g13 = gauss_sum(1, 3);
    auto terms = g13.canonical_terms();
    REQUIRE(terms.size() == 2);  // 1 - 2 zeta_6 after reduction
    CHECK(terms[0] == std::pair<long long, std::string>{0, "1"});
    CHECK(terms[1] == std::pair<long long, std::string>{1, "-2"});
    for (long long n : {3, 5, 9, 15, 21}) {
        for (long long k = 0; k <= 12; ++k) {
            auto sq = gauss_sum(k, n).abs_sq().as_integer();
            REQUIRE(sq.has_value());
            CHECK(*sq == std::gcd(k, n) * n);
        }
    }
}

TEST_CASE("periodic classes power to scalars of unit modulus") {
    struct Case {
        MappingClass A;
        long long order;
    };
    const Case cases[] = {
        {kS, 4},
        {MappingClass{0, 1, -1, -1}, 3},
        {MappingClass{1, 1, -1, 0}, 6},
        {kExA, 3},
    };
    for (const auto& [A, order] : cases) {
        CHECK(A.order() == order);
        for (long long n : {3, 5, 7}) {
            TorusCharacter chi = A == kExA ? chi_exa_plus() : trivial_plus();
            IntertwinerResult it = make(A, chi, n);
            auto pc = itw::periodic_power_check(it);
            CHECK(pc.order == order);
            CHECK(pc.is_scalar);
            CHECK(pc.unit_modulus);
            CHECK(std::abs(std::abs(pc.scalar_normalized) - 1.0) < 1e-9);
        }
    }
    CHECK_THROWS_AS((void)kTwist.order(), Error);
}

TEST_CASE("order-3 class: realized order and trace modulus depend on the branch") {
    // The two branches of the trivial character realize different symmetries
    // for a trace -1 class B: the plus branch realizes B itself (third power
    // scalar, |trace|^2 = gcd(3, n)), while the minus branch carries the
    // inversion automorphism along and realizes -B of order 6 (sixth power
    // scalar, |trace| = 1 at every level).
    const MappingClass B{0, 1, -1, -1};
    for (long long n : {3, 5, 7, 9, 15}) {
        IntertwinerResult itp = make(B, trivial_plus(), n);
        auto pcp = itw::periodic_power_check(itp);
        CHECK(pcp.order == 3);
        CHECK(pcp.is_scalar);
        CHECK(pcp.unit_modulus);
        CHECK(sq_exact(itp) == std::gcd<long long>(3, n));

        IntertwinerResult itm = make(B, TorusCharacter::trivial(FSign::Minus), n);
        auto pcm = itw::periodic_power_check(itm);
        CHECK(pcm.order == 6);
        CHECK(pcm.is_scalar);
        CHECK(pcm.unit_modulus);
        CHECK(sq_exact(itm) == 1);
    }
}

TEST_CASE("periodic power agrees with a dense exact product") {
    IntertwinerResult it = make(kS, trivial_plus(), 5);
    auto pc = itw::periodic_power_check(it);
    REQUIRE(pc.is_scalar);
    mat::CycMatrix P = mat::CycMatrix::from_sparse(it.lambda);
    for (int step = 1; step < 4; ++step) P = P.mul_sparse_right(it.lambda);
    auto scal = P.scalar_of_identity();
    REQUIRE(scal.has_value());
    CHECK(*scal == pc.scalar_unnormalized);
}

TEST_CASE("trace magnitude is independent of the eigenvalue lifts") {
    CHECK(itw::trace_independence_check(kExA, FSign::Plus, chi_exa_plus(), 5,
                                        {{0, 0}, {1, 2}, {3, 4}}));
    CHECK(itw::trace_independence_check(kTwist, FSign::Plus, trivial_plus(), 7,
                                        {{0, 0}, {2, 5}}));
    CHECK(itw::trace_independence_check(kExA, FSign::Minus, chi_exa_minus(), 7,
                                        {{0, 0}, {6, 1}}));
}

TEST_CASE("asymptotic sweep: paths, zeros, and cross-validation") {
    itw::SweepOptions opt;
    opt.n_min = 3;
    opt.n_max = 21;
    auto rows = itw::asymptotic_sweep(kExA, FSign::Plus, chi_exa_plus(), opt);
    REQUIRE(rows.size() == 10);
    for (const auto& row : rows) {
        CHECK(row.path == "closed_form");
        if (row.n % 3 == 0) {
            CHECK(row.is_exact_zero);
            CHECK(row.log_trace_over_n == -HUGE_VAL);
            CHECK(row.abs_trace == 0.0);
        } else {
            CHECK_FALSE(row.is_exact_zero);
            REQUIRE(row.abs_trace_sq_exact.has_value());
            CHECK(*row.abs_trace_sq_exact == 1);
            CHECK(row.log_trace_over_n == doctest::Approx(0.0).epsilon(1e-12));
        }
        // Cross-validate each row against the exact matrix path.
        IntertwinerResult it = make(kExA, chi_exa_plus(), row.n);
        CHECK(it.trace_unnormalized.is_zero() == row.is_exact_zero);
        if (!row.is_exact_zero) CHECK(sq_exact(it) == *row.abs_trace_sq_exact);
    }

    opt.mode = itw::SweepMode::Float;
    auto frows = itw::asymptotic_sweep(kExA, FSign::Plus, chi_exa_plus(), opt);
    for (size_t i = 0; i < frows.size(); ++i) {
        CHECK(frows[i].path == "float_matrix");
        CHECK(frows[i].abs_trace == doctest::Approx(rows[i].abs_trace).epsilon(1e-7));
    }

    opt.mode = itw::SweepMode::Exact;
    opt.n_max = 13;
    auto erows = itw::asymptotic_sweep(kExA, FSign::Plus, chi_exa_plus(), opt);
    for (const auto& row : erows) {
        CHECK(row.path == "exact_matrix");
        CHECK((row.n % 3 == 0) == row.is_exact_zero);
    }
}

TEST_CASE("sweep falls back to floats when the exact ring would be too large") {
    TorusCharacter chi{{1, 6007}, {0, 1}, FSign::Plus, 0, 0};
    itw::SweepOptions opt;
    opt.n_min = 3;
    opt.n_max = 9;
    auto rows = itw::asymptotic_sweep(kTwist, FSign::Plus, chi, opt);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.path == "float_matrix");
        CHECK_FALSE(row.abs_trace_sq_exact.has_value());
        CHECK(row.abs_trace ==
              doctest::Approx(std::sqrt(static_cast<double>(row.n))).epsilon(1e-9));
    }
}

TEST_CASE("float backend mirrors the exact construction entrywise") {
    // Character angles inside (-1/2, 1/2] so both lifts pick the same root.
    TorusCharacter chi{{1, 3}, {-1, 3}, FSign::Plus, 0, 0};
    const long long n = 7;
    TorusRep rho = rep::build_rho(n, chi);
    IntertwinerResult it = build_intertwiner(kExA, FSign::Plus, rho);

    flt::FloatRep frho = flt::build_rho_f(n, flt::FloatCharacter::from(chi));
    flt::FloatIntertwiner fit = flt::build_intertwiner_f(kExA, FSign::Plus, frho);
    CHECK(flt::intertwining_residual_f(fit, frho) < 1e-10);
    CHECK((it.lambda.to_complex() - fit.lambda).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(it.trace_unnormalized.eval_complex() - fit.trace_unnormalized) < 1e-9);

    // Minus branch with the same fallback decision logic.
    TorusRep mrho = rep::build_rho(n, chi_exa_minus());
    IntertwinerResult mit = build_intertwiner(kExA, FSign::Minus, mrho);
    flt::FloatRep fmrho = flt::build_rho_f(n, flt::FloatCharacter::from(chi_exa_minus()));
    flt::FloatIntertwiner fmit = flt::build_intertwiner_f(kExA, FSign::Minus, fmrho);
    CHECK(flt::intertwining_residual_f(fmit, fmrho) < 1e-10);
    CHECK(fmit.minus_index_flipped == mit.minus_index_flipped);
    CHECK((mit.lambda.to_complex() - fmit.lambda).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("float backend supports continuous character families") {
    flt::FloatCharacter chi;
    chi.lambda1 = {1.7, 0.0};  // off the unit circle: parabolic invariant family
    chi.lambda2 = {1.0, 0.0};
    for (long long n : {5, 9}) {
        flt::FloatRep rho = flt::build_rho_f(n, chi);
        // Representation relations still hold numerically.
        Eigen::MatrixXcd lhs = rho.X * rho.Y;
        Eigen::MatrixXcd rhs = std::polar(1.0, 2.0 * std::numbers::pi / n) * (rho.Y * rho.X);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        flt::FloatIntertwiner fit = flt::build_intertwiner_f(kTwist, FSign::Plus, rho);
        CHECK(flt::intertwining_residual_f(fit, rho) < 1e-9);
    }
}

TEST_CASE("non-invariant characters are rejected") {
    TorusCharacter bad{{1, 2}, {0, 1}, FSign::Plus, 0, 0};
    TorusRep rho = rep::build_rho(5, bad);
    CHECK_THROWS_AS((void)build_r_coeffs(kExA, FSign::Plus, rho), Error);
    try {
        (void)build_r_coeffs(kExA, FSign::Plus, rho);
    } catch (const Error& e) {
        CHECK(e.code == Err::NotInvariant);
    }
    CHECK_THROWS_AS((void)closed_form_trace(kExA, FSign::Plus, rho), Error);
}

TEST_CASE("intertwiner support sits on strided residue classes") {
    IntertwinerResult it = make(MappingClass{1, 3, 0, 1}, trivial_plus(), 15);
    CHECK(it.rc.m == 3);
    CHECK(it.rc.nprime == 5);
    CHECK(it.lambda.nnz() == 15 * 5);
    CHECK_FALSE(it.lambda.is_gen_perm());
    for (long long t = 0; t < 15; ++t) {
        long long seen = 0;
        std::optional<long long> cls;
        for (long long k = 0; k < 15; ++k) {
            if (!it.lambda.at(k, t).zero) {
                ++seen;
                if (!cls) cls = mod_floor(k, 3);
                CHECK(mod_floor(k, 3) == *cls);
            }
        }
        CHECK(seen == 5);
    }
}
