#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <vector>

#include "mifpo/core.hpp"
#include "mifpo/oracle.hpp"
#include "mifpo/random.hpp"
#include "mifpo/solver.hpp"

using namespace mifpo;

namespace {

MifpoInstance two_point(int k = 1) {
    MifpoInstance inst;
    inst.rho0 = {0.0};
    inst.beta0 = {1.0};
    inst.rho1 = {1.0};
    inst.beta1 = {1.0};
    inst.k = k;
    return finalize_instance(inst);
}

}  // namespace

TEST_CASE("enumerate_vertices lists every simplex corner") {
    Eigen::MatrixXd A(1, 2);
    A << 1, 1;
    Eigen::VectorXd b(1);
    b << 1;
    const auto verts = enumerate_vertices(A, b, OracleBudget{});
    REQUIRE(verts.size() == 2);
    for (const auto& v : verts) {
        CHECK((A * v - b).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(v.minCoeff() >= -1e-9);
        CHECK(v.maxCoeff() == doctest::Approx(1.0));
    }
}

TEST_CASE("enumerate_vertices finds both 2x2 transportation extremes") {
    // uniform marginals: vertices are the two permutation plans / 2
    Eigen::MatrixXd A(4, 4);
    A << 1, 1, 0, 0,
         0, 0, 1, 1,
         1, 0, 1, 0,
         0, 1, 0, 1;
    Eigen::VectorXd b = Eigen::VectorXd::Constant(4, 0.5);
    const auto verts = enumerate_vertices(A, b, OracleBudget{});
    CHECK(verts.size() == 2);
}

TEST_CASE("enumerate_vertices enforces its budget") {
    OracleBudget tight;
    tight.max_variables = 3;
    Eigen::MatrixXd A(1, 4);
    A << 1, 1, 1, 1;
    Eigen::VectorXd b(1);
    b << 1;
    CHECK_THROWS_AS(enumerate_vertices(A, b, tight), BudgetError);
    tight.max_variables = 20;
    tight.max_bases = 2;
    CHECK_THROWS_AS(enumerate_vertices(A, b, tight), BudgetError);
}

TEST_CASE("oracle_min two-point endpoints and midpoint") {
    const MifpoInstance inst = two_point(2);
    CHECK(oracle_min(inst, 0.0, OracleBudget{}).error == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(oracle_min(inst, 0.5, OracleBudget{}).error == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(oracle_min(inst, 1.0, OracleBudget{}).error == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("oracle_min on a flat instance returns the baseline at any budget") {
    MifpoInstance flat;
    flat.rho0 = {0.4};
    flat.beta0 = {1.0};
    flat.rho1 = {0.4};
    flat.beta1 = {1.0};
    flat = finalize_instance(flat);
    for (double g : {0.0, 0.5, 1.0})
        CHECK(oracle_min(flat, g, OracleBudget{}).error ==
              doctest::Approx(baseline_error(flat)).epsilon(1e-9));
}

TEST_CASE("oracle_min at gamma 0 agrees with the transportation solve") {
    Rng rng(41);
    for (int rep = 0; rep < 5; ++rep) {
        const MifpoInstance inst = random_instance(rng, 2, 2, 1, ObjectiveKind::MinError);
        CHECK(oracle_min(inst, 0.0, OracleBudget{}).error ==
              doctest::Approx(solve_perfect_fair(inst).error).epsilon(1e-9));
    }
}

TEST_CASE("oracle_min vars reproduce the reported error") {
    Rng rng(43);
    const MifpoInstance inst = random_oracle_instance(rng);
    const OracleResult res = oracle_min(inst, 0.3, OracleBudget{});
    validate_vars(inst, res.vars);
    CHECK(eval_objective(inst, res.vars) == doctest::Approx(res.error).epsilon(1e-9));
    CHECK(eval_fairness(inst, res.vars) <= 0.3 + 1e-7);
    CHECK(res.vertices > 0);
}

TEST_CASE("oracle_min rejects oversized instances") {
    Rng rng(47);
    const MifpoInstance inst = random_instance(rng, 3, 3, 2, ObjectiveKind::MinError);
    CHECK_THROWS_AS(oracle_min(inst, 0.5, OracleBudget{}), BudgetError);
}
