#include "mifpo/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "mifpo/fairclass.hpp"
#include "mifpo/oracle.hpp"
#include "mifpo/random.hpp"
#include "mifpo/reprlab.hpp"
#include "mifpo/solver.hpp"

namespace mifpo {

namespace {

// Track the largest violation; anything above tol counts as a failure.
struct Gauge {
    SuiteResult& r;
    double tol;

    void operator()(double violation) {
        ++r.checks;
        r.worst = std::max(r.worst, violation);
        if (violation > tol) ++r.failures;
    }
    void require(bool ok) {
        ++r.checks;
        if (!ok) ++r.failures;
    }
};

double front_interp(const ParetoFront& front, double gamma) {
    const auto& pts = front.points;
    if (gamma <= pts.front().gamma) return pts.front().error;
    if (gamma >= pts.back().gamma) return pts.back().error;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (gamma <= pts[i].gamma) {
            const double span = pts[i].gamma - pts[i - 1].gamma;
            const double t = span > 0.0 ? (gamma - pts[i - 1].gamma) / span : 1.0;
            return pts[i - 1].error + t * (pts[i].error - pts[i - 1].error);
        }
    return pts.back().error;
}

}  // namespace

SuiteResult check_concavity(std::uint64_t seed, int probes) {
    SuiteResult res;
    res.name = "concavity";
    Gauge gauge{res, 1e-9};
    Rng rng(seed);
    for (int i = 0; i < probes; ++i) {
        const auto obj = i % 2 == 0 ? ObjectiveKind::MinError : ObjectiveKind::Entropy;
        const MifpoInstance inst =
            random_instance(rng, static_cast<std::size_t>(rng.uniform_int(1, 3)),
                            static_cast<std::size_t>(rng.uniform_int(1, 3)),
                            static_cast<int>(rng.uniform_int(1, 3)), obj);
        const RepresentationVars va = random_feasible_vars(inst, rng);
        const RepresentationVars vb = random_feasible_vars(inst, rng);
        const double lam = rng.uniform();
        RepresentationVars mix = va;
        for (std::size_t z = 0; z < mix.r0.size(); ++z) {
            mix.r0[z] = lam * va.r0[z] + (1.0 - lam) * vb.r0[z];
            mix.r1[z] = lam * va.r1[z] + (1.0 - lam) * vb.r1[z];
        }
        const double chord =
            lam * eval_objective(inst, va) + (1.0 - lam) * eval_objective(inst, vb);
        gauge(chord - eval_objective(inst, mix));
    }
    return res;
}

SuiteResult check_witness(std::uint64_t seed, int pairs) {
    SuiteResult res;
    res.name = "witness";
    Gauge gauge{res, 1e-12};
    Rng rng(seed);
    for (int i = 0; i < pairs; ++i) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 12));
        const std::vector<double> mu0 = rng.simplex(n);
        const std::vector<double> mu1 = i % 10 == 9 ? mu0 : rng.simplex(n);
        const TvWitness w = tv_equality_witness(mu0, mu1);

        gauge.require(w.gamma == tv_distance(mu0, mu1));
        double resid = 0.0, s0 = 0.0, s1 = 0.0;
        bool nonneg = true;
        for (std::size_t z = 0; z < n; ++z) {
            resid = std::max(resid, std::abs(mu0[z] + w.gamma * w.phi0[z] - mu1[z] -
                                             w.gamma * w.phi1[z]));
            s0 += w.phi0[z];
            s1 += w.phi1[z];
            nonneg = nonneg && w.phi0[z] >= 0.0 && w.phi1[z] >= 0.0;
        }
        gauge(resid);
        gauge(std::abs(s0 - 1.0));
        gauge(std::abs(s1 - 1.0));
        gauge.require(nonneg);
        if (mu0 == mu1) gauge.require(w.degenerate && w.gamma == 0.0);
    }
    return res;
}

SuiteResult check_entropy(std::uint64_t seed, int probes) {
    SuiteResult res;
    res.name = "entropy";
    Gauge gauge{res, 1e-12};
    for (double a : {0.0, 0.3, 1.0})
        for (double b : {0.0, 0.7, 1.0})
            for (double pa : {0.0, 0.5, 1.0})
                for (double pb : {0.0, 0.5, 1.0})
                    gauge(entropy_decomposition_check(a, b, pa, pb));
    Rng rng(seed);
    for (int i = 0; i < probes; ++i)
        gauge(entropy_decomposition_check(rng.uniform(), rng.uniform(), rng.uniform(),
                                          rng.uniform()));
    return res;
}

SuiteResult check_data_processing(std::uint64_t seed, int samples) {
    SuiteResult res;
    res.name = "dataproc";
    Gauge gauge{res, 1e-9};
    Rng rng(seed);
    const int per_instance = 20;
    for (int i = 0; i < samples; i += per_instance) {
        const auto obj = i % 2 == 0 ? ObjectiveKind::MinError : ObjectiveKind::Entropy;
        const MifpoInstance inst =
            random_instance(rng, static_cast<std::size_t>(rng.uniform_int(1, 3)),
                            static_cast<std::size_t>(rng.uniform_int(1, 3)),
                            static_cast<int>(rng.uniform_int(1, 3)), obj);
        const double floor = baseline_error(inst);
        for (int s = 0; s < per_instance && i + s < samples; ++s)
            gauge(floor - eval_objective(inst, random_feasible_vars(inst, rng)));
    }
    return res;
}

SuiteResult check_split(std::uint64_t seed, int reps) {
    SuiteResult res;
    res.name = "split";
    Gauge gauge{res, 1e-10};
    Rng rng(seed);
    for (int i = 0; i < reps; ++i) {
        const FiniteRepresentation rep =
            random_representation(rng, static_cast<std::size_t>(rng.uniform_int(1, 4)),
                                  static_cast<std::size_t>(rng.uniform_int(1, 4)),
                                  static_cast<std::size_t>(rng.uniform_int(1, 6)));
        const FiniteRepresentation inv = make_invertible(rep);
        gauge.require(is_invertible(inv));
        for (auto obj : {ObjectiveKind::MinError, ObjectiveKind::Entropy}) {
            const RepEval before = eval_rep(rep, obj);
            const RepEval after = eval_rep(inv, obj);
            gauge(std::abs(after.fairness - before.fairness));
            gauge(after.error - before.error);
        }
    }
    return res;
}

SuiteResult check_factorise(std::uint64_t seed, int reps) {
    SuiteResult res;
    res.name = "factorise";
    Gauge gauge{res, 1e-12};
    Rng rng(seed);

    // Per-atom group marginals and label-1 mass.
    const auto atom_profile = [](const FiniteRepresentation& rep) {
        std::vector<double> mu0(rep.atoms(), 0.0), mu1(rep.atoms(), 0.0),
            num(rep.atoms(), 0.0);
        for (std::size_t z = 0; z < rep.atoms(); ++z) {
            const long c = static_cast<long>(z);
            for (std::size_t u = 0; u < rep.s0(); ++u) {
                const double m = rep.s0_weights[u] * rep.t0(static_cast<long>(u), c);
                mu0[z] += m;
                num[z] += rep.alpha0 * m * rep.rho_s0[u];
            }
            for (std::size_t v = 0; v < rep.s1(); ++v) {
                const double m = rep.s1_weights[v] * rep.t1(static_cast<long>(v), c);
                mu1[z] += m;
                num[z] += (1.0 - rep.alpha0) * m * rep.rho_s1[v];
            }
        }
        return std::array<std::vector<double>, 3>{mu0, mu1, num};
    };

    for (int i = 0; i < reps; ++i) {
        const FiniteRepresentation rep = random_representation_with_collisions(
            rng, static_cast<std::size_t>(rng.uniform_int(2, 4)),
            static_cast<std::size_t>(rng.uniform_int(2, 4)),
            static_cast<std::size_t>(rng.uniform_int(1, 6)));
        const FiniteRepresentation merged = factorise(rep);
        gauge.require(merged.s0() <= rep.s0() && merged.s1() <= rep.s1());
        gauge.require(merged.s0() < rep.s0() || rep.s0() < 2);  // collisions were planted

        const auto before = atom_profile(rep);
        const auto after = atom_profile(merged);
        double worst = 0.0;
        for (std::size_t z = 0; z < rep.atoms(); ++z) {
            worst = std::max(worst, std::abs(before[0][z] - after[0][z]));
            worst = std::max(worst, std::abs(before[1][z] - after[1][z]));
            worst = std::max(worst, std::abs(before[2][z] - after[2][z]));
        }
        gauge(worst);
    }
    return res;
}

SuiteResult check_compress(std::uint64_t seed, int reps) {
    SuiteResult res;
    res.name = "compress";
    Gauge gauge{res, 1e-12};
    Rng rng(seed);
    for (int i = 0; i < reps; ++i) {
        const TwoPointRep rep =
            random_two_point(rng, static_cast<std::size_t>(rng.uniform_int(1, 60)));
        const double alpha0 = rng.uniform(0.2, 0.8);
        const double mass0 = std::accumulate(rep.w0.begin(), rep.w0.end(), 0.0);
        const double mass1 = std::accumulate(rep.w1.begin(), rep.w1.end(), 0.0);
        for (int bins : {1, 5, 50}) {
            const TwoPointRep out = compress_two_point(rep, bins);
            gauge.require(out.w0.size() <= static_cast<std::size_t>(bins));
            gauge(std::abs(std::accumulate(out.w0.begin(), out.w0.end(), 0.0) - mass0));
            gauge(std::abs(std::accumulate(out.w1.begin(), out.w1.end(), 0.0) - mass1));
            gauge(two_point_fairness(out, alpha0) - two_point_fairness(rep, alpha0));
            const double shift = std::abs(two_point_error(out, ObjectiveKind::MinError) -
                                          two_point_error(rep, ObjectiveKind::MinError));
            gauge.require(shift <= compression_error_bound(rep, bins));
        }
    }
    return res;
}

SuiteResult check_oracle(std::uint64_t seed, int instances) {
    SuiteResult res;
    res.name = "oracle";
    Rng rng(seed);
    const OracleBudget budget;
    for (int i = 0; i < instances; ++i) {
        const MifpoInstance inst = random_oracle_instance(rng);
        for (double gamma : {0.0, 0.3, 0.7, 1.0}) {
            SolveConfig cfg;
            cfg.seed = rng.next_u64();
            const OracleResult exact = oracle_min(inst, gamma, budget);
            const SolveResult heur = solve_mifpo(inst, gamma, cfg);
            ++res.checks;
            const double gap = heur.error - exact.error;
            res.worst = std::max(res.worst, std::abs(gap));
            if (std::abs(gap) > 1e-3 || gap < -1e-9) ++res.failures;
        }
    }
    return res;
}

SuiteResult check_dominance(std::uint64_t seed, int instances) {
    SuiteResult res;
    res.name = "dominance";
    Rng rng(seed);
    for (int i = 0; i < instances; ++i) {
        // Classifier points carry 0-1 error, so only a min-error front is a
        // valid lower bound for them.
        const MifpoInstance inst =
            random_instance(rng, static_cast<std::size_t>(rng.uniform_int(2, 3)),
                            static_cast<std::size_t>(rng.uniform_int(2, 3)), 2,
                            ObjectiveKind::MinError);
        SolveConfig cfg;
        cfg.seed = rng.next_u64();
        const ThresholdSweep sweep = sweep_group_thresholds(inst, 100);
        // Solve the front at every classifier's parity distance so each
        // comparison lands on a solved knot, not a chord (the true front is
        // below its chords, which would flag honest points).
        std::vector<double> knots = GammaGrid::uniform(21).values;
        for (const ClassifierPoint& pt : sweep.points) knots.push_back(pt.sp_distance);
        std::sort(knots.begin(), knots.end());
        std::vector<double> grid;
        for (double g : knots)
            if (grid.empty() || g > grid.back() + 1e-12) grid.push_back(g);
        const ParetoFront front = sweep_front(inst, GammaGrid::from_values(grid), cfg);
        for (const ClassifierPoint& pt : sweep.points) {
            ++res.checks;
            const double slack = pt.error - front_interp(front, pt.sp_distance);
            res.worst = std::max(res.worst, -slack);
            if (slack < -1e-3) ++res.failures;
        }
    }
    return res;
}

std::vector<SuiteResult> run_all_checks(std::uint64_t seed) {
    return {check_concavity(seed, 1000),  check_witness(seed + 1, 500),
            check_entropy(seed + 2, 1000), check_data_processing(seed + 3, 1000),
            check_split(seed + 4, 200),    check_factorise(seed + 5, 200),
            check_compress(seed + 6, 200), check_oracle(seed + 7, 10),
            check_dominance(seed + 8, 10)};
}

}  // namespace mifpo
