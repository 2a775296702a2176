#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mifpo/core.hpp"
#include "mifpo/solver.hpp"

namespace mifpo {

struct OracleBudget {
    int max_variables = 20;
    std::uint64_t max_bases = 2000000;
};

// Every vertex of {x >= 0 : A x = b}, found by solving each rank-sized
// column subset of the row-reduced system and keeping the nonnegative
// solutions (entries >= -1e-9), deduplicated within 1e-8 max-norm.
// Throws BudgetError when the subset count or variable count exceeds the
// budget; exhaustive enumeration is the point, so the caller must shrink
// the instance instead of loosening tolerances.
std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b,
                                                const OracleBudget& budget);

// Exact minimum of eval_objective at fairness budget gamma: the objective
// is concave and the feasible set is a polytope, so the minimum sits at a
// vertex and scanning all of them settles it.
struct OracleResult {
    double error = 0.0;
    RepresentationVars vars;
    std::size_t vertices = 0;
};
OracleResult oracle_min(const MifpoInstance& inst, double gamma, const OracleBudget& budget);

}  // namespace mifpo
