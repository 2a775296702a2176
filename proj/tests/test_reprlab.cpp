#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "mifpo/core.hpp"
#include "mifpo/random.hpp"
#include "mifpo/reprlab.hpp"

using namespace mifpo;

namespace {

// S0 = {posterior 0}, S1 = {posterior 1}, both unit weight.
FiniteRepresentation two_point_rep(int atoms) {
    FiniteRepresentation rep;
    rep.alpha0 = 0.5;
    rep.s0_weights = {1.0};
    rep.s1_weights = {1.0};
    rep.rho_s0 = {0.0};
    rep.rho_s1 = {1.0};
    rep.t0 = Eigen::MatrixXd::Zero(1, atoms);
    rep.t1 = Eigen::MatrixXd::Zero(1, atoms);
    return rep;
}

}  // namespace

TEST_CASE("eval_rep endpoints of the two-point family") {
    SUBCASE("separate atoms: baseline error, full unfairness") {
        FiniteRepresentation rep = two_point_rep(2);
        rep.t0(0, 0) = 1.0;
        rep.t1(0, 1) = 1.0;
        const RepEval e = eval_rep(rep, ObjectiveKind::MinError);
        CHECK(e.error == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(e.fairness == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("everything onto one atom: pooled cost, perfect fairness") {
        FiniteRepresentation rep = two_point_rep(1);
        rep.t0(0, 0) = 1.0;
        rep.t1(0, 0) = 1.0;
        const RepEval e = eval_rep(rep, ObjectiveKind::MinError);
        CHECK(e.error == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(e.fairness == doctest::Approx(0.0).epsilon(1e-12));
        const RepEval h = eval_rep(rep, ObjectiveKind::Entropy);
        CHECK(h.error == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("validate_rep rejects broken channels") {
    FiniteRepresentation rep = two_point_rep(2);
    rep.t0(0, 0) = 0.6;  // row sums to 0.6
    rep.t1(0, 1) = 1.0;
    CHECK_THROWS_AS(validate_rep(rep), DomainError);
    rep.t0(0, 1) = 0.4;
    validate_rep(rep);
    rep.rho_s0[0] = 1.3;
    CHECK_THROWS_AS(validate_rep(rep), DomainError);
}

TEST_CASE("make_invertible splits a shared atom in half") {
    // two uniform group-0 parents and one group-1 parent share a single atom
    FiniteRepresentation rep;
    rep.alpha0 = 0.5;
    rep.s0_weights = {0.5, 0.5};
    rep.s1_weights = {1.0};
    rep.rho_s0 = {0.0, 1.0};
    rep.rho_s1 = {0.5};
    rep.t0 = Eigen::MatrixXd::Ones(2, 1);
    rep.t1 = Eigen::MatrixXd::Ones(1, 1);
    CHECK_FALSE(is_invertible(rep));

    const FiniteRepresentation inv = make_invertible(rep);
    CHECK(is_invertible(inv));
    CHECK(inv.atoms() == 2);
    // the lone group-1 row splits by the peeled parent's column share, 0.5
    CHECK(inv.t1(0, 0) == doctest::Approx(0.5));
    CHECK(inv.t1(0, 1) == doctest::Approx(0.5));

    const RepEval before = eval_rep(rep, ObjectiveKind::MinError);
    const RepEval after = eval_rep(inv, ObjectiveKind::MinError);
    CHECK(after.fairness == doctest::Approx(before.fairness).epsilon(1e-12));
    CHECK(after.error <= before.error + 1e-12);
}

TEST_CASE("make_invertible preserves evaluation on random inputs") {
    Rng rng(51);
    for (int rep_i = 0; rep_i < 20; ++rep_i) {
        const FiniteRepresentation rep = random_representation(rng, 3, 2, 2);
        const FiniteRepresentation inv = make_invertible(rep);
        CHECK(is_invertible(inv));
        const RepEval before = eval_rep(rep, ObjectiveKind::MinError);
        const RepEval after = eval_rep(inv, ObjectiveKind::MinError);
        CHECK(after.fairness == doctest::Approx(before.fairness).epsilon(1e-10));
        CHECK(after.error <= before.error + 1e-10);
    }
}

TEST_CASE("factorise merges equal posteriors and nothing else") {
    SUBCASE("distinct posteriors pass through") {
        Rng rng(53);
        const FiniteRepresentation rep = random_representation(rng, 2, 2, 3);
        const FiniteRepresentation out = factorise(rep);
        CHECK(out.s0() == rep.s0());
        CHECK(out.s1() == rep.s1());
    }
    SUBCASE("equal posteriors pool their weight") {
        FiniteRepresentation rep;
        rep.alpha0 = 0.5;
        rep.s0_weights = {0.25, 0.75};
        rep.s1_weights = {1.0};
        rep.rho_s0 = {0.7, 0.7};  // same point twice
        rep.rho_s1 = {0.2};
        rep.t0.resize(2, 2);
        rep.t0 << 1.0, 0.0, 0.0, 1.0;
        rep.t1.resize(1, 2);
        rep.t1 << 0.5, 0.5;
        const FiniteRepresentation out = factorise(rep);
        REQUIRE(out.s0() == 1);
        CHECK(out.s0_weights[0] == doctest::Approx(1.0));
        // weight-proportional row blend
        CHECK(out.t0(0, 0) == doctest::Approx(0.25));
        CHECK(out.t0(0, 1) == doctest::Approx(0.75));
        const RepEval before = eval_rep(rep, ObjectiveKind::Entropy);
        const RepEval after = eval_rep(out, ObjectiveKind::Entropy);
        CHECK(after.error == doctest::Approx(before.error).epsilon(1e-12));
        CHECK(after.fairness == doctest::Approx(before.fairness).epsilon(1e-12));
    }
}

TEST_CASE("compress_two_point pools atoms with the same split") {
    TwoPointRep rep;
    rep.w0 = {0.1, 0.2, 0.3};
    rep.w1 = {0.1, 0.2, 0.3};  // every atom splits 50/50
    rep.rho_u = 0.0;
    rep.rho_v = 1.0;
    const TwoPointRep out = compress_two_point(rep, 5);
    REQUIRE(out.w0.size() == 1);
    CHECK(out.w0[0] == doctest::Approx(0.6));
    CHECK(out.w1[0] == doctest::Approx(0.6));
}

TEST_CASE("compress_two_point honours the fairness and error bounds") {
    Rng rng(57);
    for (int bins : {1, 5, 50}) {
        for (int rep_i = 0; rep_i < 20; ++rep_i) {
            const TwoPointRep rep = random_two_point(rng, 6);
            const TwoPointRep out = compress_two_point(rep, bins);
            CHECK(out.w0.size() <= static_cast<std::size_t>(bins));
            CHECK(two_point_fairness(out, 0.5) <= two_point_fairness(rep, 0.5) + 1e-12);
            const double shift = std::abs(two_point_error(out, ObjectiveKind::MinError) -
                                          two_point_error(rep, ObjectiveKind::MinError));
            CHECK(shift <= compression_error_bound(rep, bins) + 1e-12);
        }
    }
    CHECK_THROWS_AS(compress_two_point(TwoPointRep{{0.5}, {0.5}, 0.0, 1.0}, 0), DomainError);
}

TEST_CASE("two_point_error and fairness closed forms") {
    TwoPointRep rep;
    rep.w0 = {0.5, 0.0};
    rep.w1 = {0.0, 0.5};
    CHECK(two_point_error(rep, ObjectiveKind::MinError) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(two_point_fairness(rep, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    rep.w0 = {0.5};
    rep.w1 = {0.5};
    CHECK(two_point_error(rep, ObjectiveKind::MinError) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two_point_fairness(rep, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("entropy_decomposition_check vanishes on exact splits") {
    CHECK(entropy_decomposition_check(0.5, 0.5, 0.5, 0.5) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(entropy_decomposition_check(0.3, 0.7, 0.2, 0.9)) <= 1e-12);
    // boundary posteriors: x log x -> 0
    CHECK(std::abs(entropy_decomposition_check(0.4, 0.6, 0.0, 1.0)) <= 1e-12);
    CHECK_THROWS_AS(entropy_decomposition_check(-0.1, 0.5, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(entropy_decomposition_check(0.1, 0.5, 1.5, 0.5), DomainError);
}
