#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mifpo/core.hpp"
#include "mifpo/lp.hpp"

namespace mifpo {

struct SolveConfig {
    int restarts = 8;
    int max_iters = 50;
    double tol = 1e-9;
    std::uint64_t seed = 0;

    void validate() const {
        if (restarts < 1 || max_iters < 1 || !(tol > 0.0))
            throw DomainError("solve config entries must be positive");
    }
};

// Equality system over the stacked variable vector
//   [ r0 | r1 ]                  when gamma == 0
//   [ r0 | r1 | phi0 | phi1 ]    when gamma  > 0
// with blocks of atom_count() entries each, atom-major as in
// RepresentationVars. Rows: one unit-sum row per source bin, unit-sum rows
// for each witness block, then one balance row per atom
//   beta0(u) r0 + gamma phi0 = beta1(v) r1 + gamma phi1.
struct ConstraintSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::size_t l0 = 0, l1 = 0;
    int k = 1;
    double gamma = 0.0;
    bool with_phi = false;

    std::size_t nz() const { return l0 * l1 * static_cast<std::size_t>(k); }
    std::size_t num_vars() const { return nz() * (with_phi ? 4 : 2); }
};

ConstraintSystem assemble_constraints(const MifpoInstance& inst, double gamma);

// Stacked vector <-> RepresentationVars. unpack clamps stray negatives up
// to 1e-6 in magnitude to zero and rejects anything worse.
RepresentationVars unpack_vars(const ConstraintSystem& sys, const Eigen::VectorXd& x);
Eigen::VectorXd pack_vars(const ConstraintSystem& sys, const RepresentationVars& vars);

// Supergradient of eval_objective over [r0 | r1] (witness blocks never enter
// the objective). For MinError the active linear piece is differentiated,
// first piece on ties; for Entropy masses below 1e-12 use a clamped log.
// The returned linearization touches the objective at vars and dominates it
// everywhere, which is what the descent loop needs.
std::vector<double> objective_subgradient(const MifpoInstance& inst,
                                          const RepresentationVars& vars);

struct SolveResult {
    double error = 0.0;
    RepresentationVars vars;
    int restarts_used = 0;
    int iterations = 0;
};

// Minimizes the concave objective over the gamma-feasible polytope by
// successive linearization: each restart starts from the vertex minimizing
// a random linear objective and repeatedly re-linearizes until the error
// stops improving by more than cfg.tol. Returns the best restart.
// When warm is non-null its r-blocks seed one extra restart.
SolveResult solve_mifpo(const MifpoInstance& inst, double gamma, const SolveConfig& cfg,
                        const RepresentationVars* warm = nullptr);

// gamma = 0 exactly: the shared atom distribution makes the posterior of
// every atom independent of the representation, so the problem collapses to
// a transportation LP between the two bin weight vectors with cost
// h(alpha0 rho_u + alpha1 rho_v). Exact, no restarts.
struct PerfectFairResult {
    double error = 0.0;
    RepresentationVars vars;
    Eigen::MatrixXd plan;  // l0 x l1 transported mass
};
PerfectFairResult solve_perfect_fair(const MifpoInstance& inst);

struct GammaGrid {
    std::vector<double> values;

    static GammaGrid uniform(int count);
    static GammaGrid from_values(std::vector<double> vals);
};

struct FrontPoint {
    double gamma = 0.0;
    double error = 0.0;
    RepresentationVars vars;
    int restarts_used = 0;
};

struct ParetoFront {
    ObjectiveKind objective = ObjectiveKind::MinError;
    double baseline = 0.0;
    std::vector<FrontPoint> points;
};

// Builds phi blocks certifying that vars fits inside a fairness budget of
// gamma (requires TV of the atom marginals <= gamma up to rounding); at
// gamma = 0 the blocks are dropped.
RepresentationVars rewitness(const MifpoInstance& inst, RepresentationVars vars, double gamma);

// Solves the instance across the grid, warm-starting each gamma from its
// predecessor and enforcing a running minimum so the front is monotone.
ParetoFront sweep_front(const MifpoInstance& inst, const GammaGrid& grid,
                        const SolveConfig& cfg);

}  // namespace mifpo
