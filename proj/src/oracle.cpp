#include "mifpo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mifpo/lp.hpp"

namespace mifpo {

namespace {

// C(n, r) with saturation so budget checks cannot overflow.
std::uint64_t choose_capped(int n, int r, std::uint64_t cap) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t result = 1;
    for (int i = 1; i <= r; ++i) {
        const double peek = static_cast<double>(result) * (n - r + i) / i;
        if (peek > 2.0 * static_cast<double>(cap)) return cap + 1;
        result = result * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
        if (result > cap) return cap + 1;
    }
    return result;
}

}  // namespace

std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b,
                                                const OracleBudget& budget) {
    const int n = static_cast<int>(A.cols());
    if (n > budget.max_variables)
        throw BudgetError("vertex enumeration over " + std::to_string(n) +
                          " variables exceeds the budget of " +
                          std::to_string(budget.max_variables));

    ReducedSystem red = reduce_equalities(A, b, 1e-10);
    if (!red.consistent) return {};
    const int r = red.rank;
    if (r == 0) {
        // Only x = 0 can be a vertex of a cone apexed at the origin.
        if (b.size() == 0 || b.lpNorm<Eigen::Infinity>() <= 1e-8)
            return {Eigen::VectorXd::Zero(n)};
        return {};
    }
    if (choose_capped(n, r, budget.max_bases) > budget.max_bases)
        throw BudgetError("C(" + std::to_string(n) + "," + std::to_string(r) +
                          ") basis subsets exceed the budget of " +
                          std::to_string(budget.max_bases));

    std::vector<Eigen::VectorXd> verts;
    std::vector<int> pick(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) pick[static_cast<std::size_t>(i)] = i;

    Eigen::MatrixXd sub(r, r);
    const double dedup_tol = 1e-8;
    while (true) {
        for (int i = 0; i < r; ++i) sub.col(i) = red.A.col(pick[static_cast<std::size_t>(i)]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(sub);
        // rcond-style guard: reject near-singular bases.
        const double diag_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (diag_min > 1e-10) {
            Eigen::VectorXd xb = lu.solve(red.b);
            if ((sub * xb - red.b).lpNorm<Eigen::Infinity>() <= 1e-8 && xb.minCoeff() >= -1e-9) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
                for (int i = 0; i < r; ++i) x(pick[static_cast<std::size_t>(i)]) = xb(i);
                bool fresh = true;
                for (const auto& seen : verts) {
                    bool same = true;
                    for (int t = 0; t < n; ++t)
                        if (std::abs(seen(t) - x(t)) > dedup_tol) {
                            same = false;
                            break;
                        }
                    if (same) {
                        fresh = false;
                        break;
                    }
                }
                if (fresh) verts.push_back(std::move(x));
            }
        }
        // next r-combination of {0..n-1}
        int i = r - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - r + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return verts;
}

OracleResult oracle_min(const MifpoInstance& inst, double gamma, const OracleBudget& budget) {
    ConstraintSystem sys = assemble_constraints(inst, gamma);
    std::vector<Eigen::VectorXd> verts = enumerate_vertices(sys.A, sys.b, budget);
    if (verts.empty()) throw SolveError("no feasible vertex found for a valid instance");

    OracleResult out;
    out.vertices = verts.size();
    out.error = std::numeric_limits<double>::infinity();
    for (const auto& x : verts) {
        RepresentationVars vars = unpack_vars(sys, x);
        const double err = eval_objective(inst, vars);
        if (err < out.error) {
            out.error = err;
            out.vars = std::move(vars);
        }
    }
    return out;
}

}  // namespace mifpo
