#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "mifpo/common.hpp"

namespace mifpo {

// Equality-form linear program: minimize c.x subject to A x = b, x >= 0.
struct LpProblem {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    std::vector<int> basis;  // basic column per retained row
    int pivots = 0;
};

// Gaussian elimination of the equality system [A | b] with partial pivoting.
// Rows whose eliminated pivot magnitude falls below pivot_tol are declared
// redundant and dropped; a dropped row with a surviving right-hand side
// (|b| > 1e-8) marks the system inconsistent. The reduced rows describe the
// same solution set, so downstream vertex reasoning is unaffected.
struct ReducedSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    int rank = 0;
    bool consistent = true;
};
ReducedSystem reduce_equalities(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                double pivot_tol = 1e-10);

// Two-phase dense simplex. Entering column is chosen by steepest reduced
// cost until a degenerate stall, after which Bland's rule takes over so
// cycling is impossible; the leaving row always breaks ties by smallest
// basic index. Deterministic: identical inputs give identical solutions.
// status == Optimal guarantees ||A x - b||_inf <= 1e-8 and x >= -1e-9.
LpSolution solve_lp(const LpProblem& p);

// Repeated minimization over one fixed polytope {x >= 0 : A x = b} under
// changing costs. The first minimize() pays the usual two-phase price; the
// simplex tableau then persists, so every later cost starts phase 2 at the
// previous optimal vertex — typically a handful of pivots instead of a cold
// start. Results match solve_lp up to the (deterministic) tie-breaking that
// a different starting vertex induces on degenerate optima.
class ReusableLp {
  public:
    ReusableLp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
    ~ReusableLp();
    ReusableLp(ReusableLp&&) noexcept;
    ReusableLp& operator=(ReusableLp&&) noexcept;

    LpSolution minimize(const Eigen::VectorXd& c);

    // Forget the warm state: the next minimize() walks from the same vertex
    // the first one did, independent of any calls in between. No-op before
    // the first minimize().
    void rewind();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct VertexNeighbor {
    Eigen::VectorXd x;
    std::vector<int> basis;
};

// Vertices one simplex pivot away from the basic feasible point the given
// basis describes on {x >= 0 : A x = b}: for each nonbasic column, the
// min-ratio pivot along that edge. A degenerate (zero-step) pivot yields
// the same point under a different basis, which callers need in order to
// walk the full neighborhood of a degenerate vertex. Neighbors outside the
// feasibility tolerances are skipped; an unusable basis yields an empty
// list. The basis must match the reduced system's rank, e.g. one returned
// by solve_lp on the same (A, b).
std::vector<VertexNeighbor> neighbor_vertices(const Eigen::MatrixXd& A,
                                              const Eigen::VectorXd& b,
                                              const std::vector<int>& basis);

}  // namespace mifpo
