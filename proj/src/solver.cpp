#include "mifpo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "mifpo/random.hpp"

namespace mifpo {

namespace {

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw DomainError("gamma must lie in [0,1], got " + std::to_string(gamma));
}

double clamped_dlog(double x) {
    return std::log(std::max(x, 1e-12)) + 1.0;  // d/dx of x log x
}

}  // namespace

ConstraintSystem assemble_constraints(const MifpoInstance& inst, double gamma) {
    validate_instance(inst);
    check_gamma(gamma);

    ConstraintSystem sys;
    sys.l0 = inst.l0();
    sys.l1 = inst.l1();
    sys.k = inst.k;
    sys.gamma = gamma;
    sys.with_phi = gamma > 0.0;

    const std::size_t nz = sys.nz();
    const std::size_t n = sys.num_vars();
    const std::size_t rows = sys.l0 + sys.l1 + (sys.with_phi ? 2 : 0) + nz;
    sys.A.setZero(static_cast<long>(rows), static_cast<long>(n));
    sys.b.setZero(static_cast<long>(rows));

    const auto idx = [&](std::size_t u, std::size_t v, int j) {
        return (u * sys.l1 + v) * static_cast<std::size_t>(sys.k) + static_cast<std::size_t>(j);
    };

    std::size_t row = 0;
    for (std::size_t u = 0; u < sys.l0; ++u, ++row) {
        for (std::size_t v = 0; v < sys.l1; ++v)
            for (int j = 0; j < sys.k; ++j) sys.A(row, idx(u, v, j)) = 1.0;
        sys.b(row) = 1.0;
    }
    for (std::size_t v = 0; v < sys.l1; ++v, ++row) {
        for (std::size_t u = 0; u < sys.l0; ++u)
            for (int j = 0; j < sys.k; ++j) sys.A(row, nz + idx(u, v, j)) = 1.0;
        sys.b(row) = 1.0;
    }
    if (sys.with_phi) {
        for (std::size_t z = 0; z < nz; ++z) sys.A(row, 2 * nz + z) = 1.0;
        sys.b(row++) = 1.0;
        for (std::size_t z = 0; z < nz; ++z) sys.A(row, 3 * nz + z) = 1.0;
        sys.b(row++) = 1.0;
    }
    for (std::size_t u = 0; u < sys.l0; ++u)
        for (std::size_t v = 0; v < sys.l1; ++v)
            for (int j = 0; j < sys.k; ++j, ++row) {
                const std::size_t z = idx(u, v, j);
                sys.A(row, z) = inst.beta0[u];
                sys.A(row, nz + z) = -inst.beta1[v];
                if (sys.with_phi) {
                    sys.A(row, 2 * nz + z) = gamma;
                    sys.A(row, 3 * nz + z) = -gamma;
                }
                sys.b(row) = 0.0;
            }
    return sys;
}

RepresentationVars unpack_vars(const ConstraintSystem& sys, const Eigen::VectorXd& x) {
    if (x.size() != static_cast<long>(sys.num_vars()))
        throw ShapeError("unpack_vars: wrong vector length");
    RepresentationVars vars;
    vars.l0 = sys.l0;
    vars.l1 = sys.l1;
    vars.k = sys.k;
    const std::size_t nz = sys.nz();

    const auto take = [&](std::size_t offset) {
        std::vector<double> out(nz);
        for (std::size_t z = 0; z < nz; ++z) {
            double v = x(static_cast<long>(offset + z));
            if (v < 0.0) {
                if (v < -1e-6) throw SolveError("variable escaped its bound: " + std::to_string(v));
                v = 0.0;
            }
            out[z] = v;
        }
        return out;
    };
    vars.r0 = take(0);
    vars.r1 = take(nz);
    if (sys.with_phi) {
        vars.phi0 = take(2 * nz);
        vars.phi1 = take(3 * nz);
    }
    return vars;
}

Eigen::VectorXd pack_vars(const ConstraintSystem& sys, const RepresentationVars& vars) {
    const std::size_t nz = sys.nz();
    if (vars.r0.size() != nz || vars.r1.size() != nz || (sys.with_phi && vars.phi0.size() != nz))
        throw ShapeError("pack_vars: wrong block lengths");
    Eigen::VectorXd x(static_cast<long>(sys.num_vars()));
    for (std::size_t z = 0; z < nz; ++z) {
        x(static_cast<long>(z)) = vars.r0[z];
        x(static_cast<long>(nz + z)) = vars.r1[z];
        if (sys.with_phi) {
            x(static_cast<long>(2 * nz + z)) = vars.phi0[z];
            x(static_cast<long>(3 * nz + z)) = vars.phi1[z];
        }
    }
    return x;
}

std::vector<double> objective_subgradient(const MifpoInstance& inst,
                                          const RepresentationVars& vars) {
    const std::size_t nz = vars.atom_count();
    if (vars.l0 != inst.l0() || vars.l1 != inst.l1() || vars.k != inst.k ||
        vars.r0.size() != nz || vars.r1.size() != nz)
        throw ShapeError("objective_subgradient: shape mismatch");

    std::vector<double> g(2 * nz, 0.0);
    const double a0 = inst.alpha0, a1 = inst.alpha1();
    for (std::size_t u = 0; u < inst.l0(); ++u)
        for (std::size_t v = 0; v < inst.l1(); ++v)
            for (int j = 0; j < inst.k; ++j) {
                const std::size_t z = vars.idx(u, v, j);
                const double w0 = a0 * inst.beta0[u];
                const double w1 = a1 * inst.beta1[v];
                const double c0 = w0 * vars.r0[z];
                const double c1 = w1 * vars.r1[z];
                const double pu = inst.rho0[u], pv = inst.rho1[v];
                if (inst.objective == ObjectiveKind::MinError) {
                    // Per-atom cost is min of two linear pieces; differentiate
                    // the active one, first piece on ties.
                    const double hit = pu * c0 + pv * c1;
                    const double miss = (1.0 - pu) * c0 + (1.0 - pv) * c1;
                    if (hit <= miss) {
                        g[z] = w0 * pu;
                        g[nz + z] = w1 * pv;
                    } else {
                        g[z] = w0 * (1.0 - pu);
                        g[nz + z] = w1 * (1.0 - pv);
                    }
                } else {
                    // Per-atom cost e(m) - e(s) - e(t) with e(x) = x log x,
                    // m = c0+c1, s = label-1 mass, t = label-0 mass.
                    const double dm = clamped_dlog(c0 + c1);
                    const double ds = clamped_dlog(pu * c0 + pv * c1);
                    const double dt = clamped_dlog((1.0 - pu) * c0 + (1.0 - pv) * c1);
                    g[z] = w0 * (dm - pu * ds - (1.0 - pu) * dt);
                    g[nz + z] = w1 * (dm - pv * ds - (1.0 - pv) * dt);
                }
            }
    return g;
}

namespace {

Eigen::VectorXd grad_to_cost(const ConstraintSystem& sys, const std::vector<double>& g) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<long>(sys.num_vars()));
    for (std::size_t i = 0; i < g.size(); ++i) c(static_cast<long>(i)) = g[i];
    return c;
}

struct CcpOutcome {
    double error = std::numeric_limits<double>::infinity();
    RepresentationVars vars;
    int iterations = 0;
};

// Blend-and-retry attempts after each stall before the restart gives up.
constexpr int kEscapeTries = 48;       // systems small enough to polish
constexpr int kEscapeTriesLarge = 6;   // everything else: LP solves are dear
// Neighbor polish costs a dense solve over the whole system, so it is only
// worth it while the system stays small.
constexpr long kPolishCap = 400;

RepresentationVars uniform_rows(const MifpoInstance& inst) {
    RepresentationVars v;
    v.l0 = inst.l0();
    v.l1 = inst.l1();
    v.k = inst.k;
    const std::size_t nz = inst.atom_count();
    v.r0.assign(nz, 1.0 / static_cast<double>(v.l1 * static_cast<std::size_t>(v.k)));
    v.r1.assign(nz, 1.0 / static_cast<double>(v.l0 * static_cast<std::size_t>(v.k)));
    return v;
}

// Deterministic rows that keep the groups apart: group 0 owns the j=0 atoms
// of its bins, group 1 the j=1 atoms (or j=0 when k == 1). Usually far
// outside the budget, but its tangent points at the separation-friendly
// face, which is where the optimum lives when gamma is generous.
RepresentationVars separated_rows(const MifpoInstance& inst) {
    RepresentationVars v;
    v.l0 = inst.l0();
    v.l1 = inst.l1();
    v.k = inst.k;
    v.r0.assign(inst.atom_count(), 0.0);
    v.r1.assign(inst.atom_count(), 0.0);
    const int j1 = inst.k > 1 ? 1 : 0;
    for (std::size_t u = 0; u < v.l0; ++u) v.r0[v.idx(u, 0, 0)] = 1.0;
    for (std::size_t w = 0; w < v.l1; ++w) v.r1[v.idx(0, w, j1)] = 1.0;
    return v;
}

// Deterministic one-to-one bin coupling: each group-0 bin u joins group-1
// bin u (mod l1), either straight or reversed. The optimum of a small
// instance often lives in one of these two coupling basins, so their
// tangents make good restart anchors.
RepresentationVars coupled_rows(const MifpoInstance& inst, bool crossed) {
    RepresentationVars v;
    v.l0 = inst.l0();
    v.l1 = inst.l1();
    v.k = inst.k;
    v.r0.assign(inst.atom_count(), 0.0);
    v.r1.assign(inst.atom_count(), 0.0);
    const auto mate1 = [&](std::size_t u) {
        return crossed ? (v.l1 - 1 - u % v.l1) : u % v.l1;
    };
    const auto mate0 = [&](std::size_t w) {
        return crossed ? (v.l0 - 1 - w % v.l0) : w % v.l0;
    };
    for (std::size_t u = 0; u < v.l0; ++u) v.r0[v.idx(u, mate1(u), 0)] = 1.0;
    for (std::size_t w = 0; w < v.l1; ++w) v.r1[v.idx(mate0(w), w, 0)] = 1.0;
    return v;
}

// One restart: LP vertex for the given cost, then re-linearize until the
// true objective stalls. A stall triggers, on small systems, a move to the
// best improving adjacent vertex, and otherwise a few re-linearizations at
// random blends of the incumbent with fresh feasible points; any
// improvement resumes the main loop. Every accepted step strictly
// decreases the objective, so the run terminates.
CcpOutcome run_descent(const MifpoInstance& inst, const ConstraintSystem& sys,
                       ReusableLp& lp, const Eigen::VectorXd& cost0, const SolveConfig& cfg,
                       Rng& rng) {
    CcpOutcome out;
    const bool polish = static_cast<long>(sys.num_vars()) <= kPolishCap;
    int budget = 4 * cfg.max_iters;  // LP solves available to this restart
    std::vector<int> basis;

    // Solve for the vertex minimizing `cost`; adopt it if it improves the
    // incumbent (the first call always adopts).
    const auto try_cost = [&](const Eigen::VectorXd& cost) {
        const LpSolution s = lp.minimize(cost);
        if (s.status != LpStatus::Optimal)
            throw SolveError("feasible polytope expected, LP disagreed");
        --budget;
        ++out.iterations;
        RepresentationVars cand = unpack_vars(sys, s.x);
        const double err = eval_objective(inst, cand);
        if (err < out.error - cfg.tol) {
            out.error = err;
            out.vars = std::move(cand);
            basis = s.basis;
            return true;
        }
        return false;
    };

    try_cost(cost0);
    // Small systems have cheap LPs and the lumpiest landscapes, so they get
    // far more escape attempts; big ones keep escapes to a token few.
    const int escape_tries = polish ? kEscapeTries : kEscapeTriesLarge;
    int escapes = escape_tries;
    while (budget > 0) {
        // successive linearization at the incumbent
        int steps = 0;
        while (budget > 0 && steps < cfg.max_iters &&
               try_cost(grad_to_cost(sys, objective_subgradient(inst, out.vars))))
            ++steps;

        // Adjacent-vertex descent with plateau walking: breadth-first over
        // bases whose points sit at the stall level (including degenerate
        // rebases of the same point), adopting the first strict improvement.
        if (polish && budget > 0) {
            const double level = out.error;
            constexpr std::size_t kBasisCap = 64;
            std::set<std::vector<int>> seen;
            std::vector<std::vector<int>> frontier{basis};
            auto sorted = [](std::vector<int> v) {
                std::sort(v.begin(), v.end());
                return v;
            };
            seen.insert(sorted(basis));
            bool moved = false;
            for (std::size_t f = 0; f < frontier.size() && !moved; ++f) {
                for (const VertexNeighbor& nb : neighbor_vertices(sys.A, sys.b, frontier[f])) {
                    const RepresentationVars cand = unpack_vars(sys, nb.x);
                    const double err = eval_objective(inst, cand);
                    if (err < out.error - cfg.tol) {
                        out.error = err;
                        out.vars = cand;
                        basis = nb.basis;
                        moved = true;
                        break;
                    }
                    if (err <= level + cfg.tol && frontier.size() < kBasisCap &&
                        seen.insert(sorted(nb.basis)).second)
                        frontier.push_back(nb.basis);
                }
            }
            if (moved) continue;  // re-linearize from the new vertex
        }

        // blended escape: tangent at a point between the incumbent and a
        // random feasible draw can expose a better basin
        bool escaped = false;
        while (escapes > 0 && budget > 0) {
            --escapes;
            RepresentationVars mid = out.vars;
            const RepresentationVars p = random_feasible_vars(inst, rng);
            const double t = rng.uniform(0.0, 0.9);
            for (std::size_t i = 0; i < mid.r0.size(); ++i) {
                mid.r0[i] = t * out.vars.r0[i] + (1.0 - t) * p.r0[i];
                mid.r1[i] = t * out.vars.r1[i] + (1.0 - t) * p.r1[i];
            }
            if (try_cost(grad_to_cost(sys, objective_subgradient(inst, mid)))) {
                escaped = true;
                escapes = escape_tries;
                break;
            }
        }
        if (!escaped) break;
    }
    return out;
}

}  // namespace

SolveResult solve_mifpo(const MifpoInstance& inst, double gamma, const SolveConfig& cfg,
                        const RepresentationVars* warm) {
    cfg.validate();
    check_gamma(gamma);
    ConstraintSystem sys = assemble_constraints(inst, gamma);
    ReusableLp lp(sys.A, sys.b);

    Rng rng(cfg.seed);
    SolveResult best;
    best.error = std::numeric_limits<double>::infinity();

    auto consider = [&](const CcpOutcome& o) {
        best.iterations += o.iterations;
        if (o.error < best.error) {
            best.error = o.error;
            best.vars = o.vars;
        }
    };

    // Deterministic tangents first (uniform mixing, full separation, the
    // perfect-fair plan, straight and crossed bin couplings) to cover the
    // regimes the optimum tends to inhabit; then tangents at random feasible
    // points, with every fourth restart using a raw random cost for vertex
    // diversity.
    for (int rep = 0; rep < cfg.restarts; ++rep) {
        Eigen::VectorXd c;
        if (rep == 0) {
            c = grad_to_cost(sys, objective_subgradient(inst, uniform_rows(inst)));
        } else if (rep == 1) {
            c = grad_to_cost(sys, objective_subgradient(inst, separated_rows(inst)));
        } else if (rep == 2) {
            c = grad_to_cost(sys, objective_subgradient(inst, solve_perfect_fair(inst).vars));
        } else if (rep == 3 || rep == 4) {
            c = grad_to_cost(sys,
                             objective_subgradient(inst, coupled_rows(inst, rep == 4)));
        } else if (rep % 4 == 3) {
            c.resize(static_cast<long>(sys.num_vars()));
            for (long i = 0; i < c.size(); ++i) c(i) = rng.normal();
        } else {
            c = grad_to_cost(sys,
                             objective_subgradient(inst, random_feasible_vars(inst, rng)));
        }
        // Rewinding pins each anchor's first vertex to the cold tableau, so
        // tie-broken tangent optima cannot drift with the seed; the random
        // restarts keep their warm paths.
        if (rep <= 4) lp.rewind();
        consider(run_descent(inst, sys, lp, c, cfg, rng));
        ++best.restarts_used;
    }
    if (warm != nullptr) {
        consider(run_descent(inst, sys, lp,
                             grad_to_cost(sys, objective_subgradient(inst, *warm)), cfg, rng));
        ++best.restarts_used;
    }
    return best;
}

PerfectFairResult solve_perfect_fair(const MifpoInstance& inst) {
    validate_instance(inst);
    const std::size_t l0 = inst.l0(), l1 = inst.l1();
    const long n = static_cast<long>(l0 * l1);

    LpProblem lp;
    lp.c.resize(n);
    lp.A.setZero(static_cast<long>(l0 + l1), n);
    lp.b.resize(static_cast<long>(l0 + l1));
    for (std::size_t u = 0; u < l0; ++u) {
        for (std::size_t v = 0; v < l1; ++v) {
            const long col = static_cast<long>(u * l1 + v);
            lp.c(col) = h_eval(inst.objective,
                               inst.alpha0 * inst.rho0[u] + inst.alpha1() * inst.rho1[v]);
            lp.A(static_cast<long>(u), col) = 1.0;
            lp.A(static_cast<long>(l0 + v), col) = 1.0;
        }
        lp.b(static_cast<long>(u)) = inst.beta0[u];
    }
    for (std::size_t v = 0; v < l1; ++v) lp.b(static_cast<long>(l0 + v)) = inst.beta1[v];

    LpSolution s = solve_lp(lp);
    if (s.status != LpStatus::Optimal)
        throw SolveError("transportation subproblem unexpectedly " +
                         std::string(s.status == LpStatus::Infeasible ? "infeasible" : "unbounded"));

    PerfectFairResult out;
    out.plan.setZero(static_cast<long>(l0), static_cast<long>(l1));
    RepresentationVars vars;
    vars.l0 = l0;
    vars.l1 = l1;
    vars.k = inst.k;
    vars.r0.assign(inst.atom_count(), 0.0);
    vars.r1.assign(inst.atom_count(), 0.0);
    for (std::size_t u = 0; u < l0; ++u)
        for (std::size_t v = 0; v < l1; ++v) {
            const double w = std::max(0.0, s.x(static_cast<long>(u * l1 + v)));
            out.plan(static_cast<long>(u), static_cast<long>(v)) = w;
            const std::size_t z = vars.idx(u, v, 0);
            vars.r0[z] = w / inst.beta0[u];
            vars.r1[z] = w / inst.beta1[v];
        }
    out.vars = std::move(vars);
    out.error = eval_objective(inst, out.vars);
    return out;
}

GammaGrid GammaGrid::uniform(int count) {
    if (count < 2) throw DomainError("gamma grid needs at least 2 points");
    GammaGrid g;
    g.values.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        g.values[static_cast<std::size_t>(i)] = static_cast<double>(i) / (count - 1);
    g.values.front() = 0.0;
    g.values.back() = 1.0;
    return g;
}

GammaGrid GammaGrid::from_values(std::vector<double> vals) {
    if (vals.empty()) throw DomainError("gamma grid is empty");
    for (double v : vals) check_gamma(v);
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (!(vals[i] > vals[i - 1])) throw DomainError("gamma grid must strictly increase");
    GammaGrid g;
    g.values = std::move(vals);
    return g;
}

RepresentationVars rewitness(const MifpoInstance& inst, RepresentationVars vars, double gamma) {
    check_gamma(gamma);
    if (gamma == 0.0) {
        vars.phi0.clear();
        vars.phi1.clear();
        return vars;
    }
    AtomMarginals m = atom_marginals(inst, vars);
    const double s0 = std::accumulate(m.mu0.begin(), m.mu0.end(), 0.0);
    const double s1 = std::accumulate(m.mu1.begin(), m.mu1.end(), 0.0);
    for (double& x : m.mu0) x /= s0;
    for (double& x : m.mu1) x /= s1;
    TvWitness w = tv_equality_witness(m.mu0, m.mu1);
    if (w.gamma > gamma + 1e-9)
        throw DomainError("representation exceeds the fairness budget");
    // Blend the exact witness with a uniform filler so the pair certifies
    // the looser budget gamma >= TV.
    const double lam = std::min(1.0, w.gamma / gamma);
    const std::size_t nz = m.mu0.size();
    const double fill = (1.0 - lam) / static_cast<double>(nz);
    vars.phi0.assign(nz, fill);
    vars.phi1.assign(nz, fill);
    for (std::size_t z = 0; z < nz; ++z) {
        vars.phi0[z] += lam * w.phi0[z];
        vars.phi1[z] += lam * w.phi1[z];
    }
    return vars;
}

ParetoFront sweep_front(const MifpoInstance& inst, const GammaGrid& grid,
                        const SolveConfig& cfg) {
    cfg.validate();
    if (grid.values.empty()) throw DomainError("gamma grid is empty");

    ParetoFront front;
    front.objective = inst.objective;
    front.baseline = baseline_error(inst);

    const RepresentationVars* warm = nullptr;
    for (double gamma : grid.values) {
        FrontPoint pt;
        pt.gamma = gamma;
        if (gamma == 0.0) {
            PerfectFairResult pf = solve_perfect_fair(inst);
            pt.error = pf.error;
            pt.vars = std::move(pf.vars);
            pt.restarts_used = 0;
        } else {
            SolveResult r = solve_mifpo(inst, gamma, cfg, warm);
            pt.error = r.error;
            pt.vars = std::move(r.vars);
            pt.restarts_used = r.restarts_used;
        }
        if (!front.points.empty() && front.points.back().error < pt.error) {
            // Larger budgets can only help; keep the better predecessor.
            pt.error = front.points.back().error;
            pt.vars = rewitness(inst, front.points.back().vars, gamma);
        }
        front.points.push_back(std::move(pt));
        warm = &front.points.back().vars;
    }

    for (const FrontPoint& pt : front.points)
        if (pt.error < front.baseline - 1e-9)
            throw SolveError("front dipped below the identity cost floor");
    return front;
}

}  // namespace mifpo
