// Command-line front end: generate synthetic data, compute fronts, run the
// property suites, sweep threshold baselines, and enumerate exact oracle
// fronts. Every command is deterministic given its flags and seed.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mifpo/checks.hpp"
#include "mifpo/common.hpp"
#include "mifpo/core.hpp"
#include "mifpo/fairclass.hpp"
#include "mifpo/io.hpp"
#include "mifpo/oracle.hpp"
#include "mifpo/pipeline.hpp"
#include "mifpo/solver.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

std::vector<double> parse_gamma_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string tok = text.substr(pos, comma - pos);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw mifpo::ParseError("bad gamma value '" + tok + "'");
        }
        if (used != tok.size()) throw mifpo::ParseError("bad gamma value '" + tok + "'");
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

mifpo::GammaGrid make_grid(const std::string& gammas, int gamma_count) {
    if (!gammas.empty()) return mifpo::GammaGrid::from_values(parse_gamma_list(gammas));
    return mifpo::GammaGrid::uniform(gamma_count);
}

std::string out_path(const std::string& dir, const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

double front_interp(const mifpo::ParetoFront& front, double gamma) {
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

struct FrontArtifacts {
    mifpo::MifpoInstance instance;
    mifpo::ParetoFront front;
};

// Shared dataset -> instance path: split, calibrate on the train part,
// quantize the held-out part.
mifpo::MifpoInstance instance_from_dataset(const std::string& input,
                                           const std::string& sensitive_col,
                                           const std::string& label_col, double train_fraction,
                                           std::uint64_t seed, int bins, int atoms,
                                           mifpo::ObjectiveKind objective,
                                           double* ece_out = nullptr,
                                           nlohmann::json* calib_out = nullptr) {
    const mifpo::Dataset data = mifpo::load_csv(input, sensitive_col, label_col);
    const mifpo::DataSplit split = mifpo::split_dataset(data, train_fraction, seed);
    const mifpo::CalibratedModel model = mifpo::fit_calibrated(split.train);
    const std::vector<double> scores = mifpo::predict_calibrated(model, split.eval);
    const double ece = mifpo::expected_calibration_error(scores, split.eval.y, 10);
    if (ece_out) *ece_out = ece;
    if (calib_out) {
        (*calib_out)["ece"] = ece;
        (*calib_out)["n_train"] = split.train.n();
        (*calib_out)["n_eval"] = split.eval.n();
        (*calib_out)["model"] = mifpo::model_to_json(model);
    }
    return mifpo::build_instance(split.eval, model, bins, atoms, objective);
}

int cmd_generate(std::size_t n, std::uint64_t seed, double alpha0, std::size_t dim,
                 std::vector<double> weights0, std::vector<double> weights1, double intercept0,
                 double intercept1, const std::string& output_dir,
                 const std::string& sensitive_col, const std::string& label_col) {
    mifpo::SyntheticSpec spec;
    spec.alpha0 = alpha0;
    spec.group0.weights = weights0.empty() ? std::vector<double>(dim, 1.0) : weights0;
    spec.group1.weights = weights1.empty() ? std::vector<double>(dim, 1.0) : weights1;
    spec.group0.intercept = intercept0;
    spec.group1.intercept = intercept1;
    if (spec.group0.weights.size() != spec.group1.weights.size())
        throw mifpo::ShapeError("group weight vectors must have equal length");

    const mifpo::Dataset data = mifpo::synthetic_generate(n, seed, spec);
    const std::string path = out_path(output_dir, "data.csv");
    mifpo::save_csv(data, path, sensitive_col, label_col);
    std::cout << "wrote " << path << " (" << data.n() << " rows, " << data.dim()
              << " features)\n";
    return 0;
}

int cmd_front(const std::string& input, const std::string& output_dir,
              const std::string& sensitive_col, const std::string& label_col, int bins,
              int atoms, mifpo::ObjectiveKind objective, const std::string& gammas,
              int gamma_count, int restarts, std::uint64_t seed, double train_fraction) {
    nlohmann::json calib;
    const mifpo::MifpoInstance inst =
        instance_from_dataset(input, sensitive_col, label_col, train_fraction, seed, bins,
                              atoms, objective, nullptr, &calib);

    mifpo::SolveConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    const mifpo::ParetoFront front = mifpo::sweep_front(inst, make_grid(gammas, gamma_count), cfg);

    mifpo::save_json(mifpo::instance_to_json(inst), out_path(output_dir, "instance.json"));
    mifpo::save_json(calib, out_path(output_dir, "calibration.json"));
    mifpo::save_json(mifpo::front_to_json(front), out_path(output_dir, "front.json"));
    mifpo::save_text(mifpo::front_to_csv(front), out_path(output_dir, "front.csv"));
    std::cout << "front over " << front.points.size() << " gammas, baseline "
              << front.baseline << ", ece " << calib["ece"].get<double>() << "\n";
    return 0;
}

int cmd_check(const std::string& suite, std::uint64_t seed, int instances) {
    using Runner = mifpo::SuiteResult (*)(std::uint64_t, int);
    struct Entry {
        const char* name;
        Runner fn;
        int default_count;
    };
    static const Entry entries[] = {
        {"concavity", mifpo::check_concavity, 1000},
        {"witness", mifpo::check_witness, 500},
        {"entropy", mifpo::check_entropy, 1000},
        {"dataproc", mifpo::check_data_processing, 1000},
        {"split", mifpo::check_split, 200},
        {"factorise", mifpo::check_factorise, 200},
        {"compress", mifpo::check_compress, 200},
        {"oracle", mifpo::check_oracle, 10},
        {"dominance", mifpo::check_dominance, 10},
    };

    std::vector<mifpo::SuiteResult> results;
    if (suite == "all") {
        results = mifpo::run_all_checks(seed);
    } else {
        const Entry* hit = nullptr;
        for (const Entry& e : entries)
            if (suite == e.name) hit = &e;
        if (!hit) {
            std::cerr << "unknown suite '" << suite << "'\n";
            return kExitUsage;
        }
        results.push_back(hit->fn(seed, instances > 0 ? instances : hit->default_count));
    }

    bool ok = true;
    for (const mifpo::SuiteResult& r : results) {
        std::printf("%-10s %s  checks=%d failures=%d worst=%.3g\n", r.name.c_str(),
                    r.pass() ? "pass" : "FAIL", r.checks, r.failures, r.worst);
        ok = ok && r.pass();
    }
    return ok ? 0 : kExitCheck;
}

int cmd_baseline(const std::string& input, const std::string& output_dir,
                 const std::string& sensitive_col, const std::string& label_col, int bins,
                 int atoms, mifpo::ObjectiveKind objective, const std::string& gammas,
                 int gamma_count, int restarts, std::uint64_t seed, double train_fraction,
                 int grid_resolution) {
    mifpo::MifpoInstance inst =
        input.size() >= 5 && input.substr(input.size() - 5) == ".json"
            ? mifpo::load_instance(input)
            : instance_from_dataset(input, sensitive_col, label_col, train_fraction, seed,
                                    bins, atoms, objective);
    // Classifier points carry 0-1 error, so the reference front must be the
    // min-error one no matter how the instance was configured.
    inst.objective = mifpo::ObjectiveKind::MinError;

    const mifpo::ThresholdSweep sweep = mifpo::sweep_group_thresholds(inst, grid_resolution);

    // Add every classifier's parity distance to the gamma grid: comparisons
    // then hit solved knots instead of chords, which sit above the front.
    std::vector<double> knots = make_grid(gammas, gamma_count).values;
    for (const auto& p : sweep.points) knots.push_back(p.sp_distance);
    std::sort(knots.begin(), knots.end());
    std::vector<double> grid_vals;
    for (double g : knots)
        if (grid_vals.empty() || g > grid_vals.back() + 1e-12) grid_vals.push_back(g);

    mifpo::SolveConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    const mifpo::ParetoFront front =
        mifpo::sweep_front(inst, mifpo::GammaGrid::from_values(grid_vals), cfg);

    nlohmann::json report;
    report["baseline_error"] = front.baseline;
    auto point_json = [](const mifpo::ClassifierPoint& p) {
        return nlohmann::json{
            {"t0", p.t0}, {"t1", p.t1}, {"sp", p.sp_distance}, {"error", p.error}};
    };
    nlohmann::json pts = nlohmann::json::array(), env = nlohmann::json::array(),
                   bad = nlohmann::json::array();
    for (const auto& p : sweep.points) pts.push_back(point_json(p));
    for (const auto& p : sweep.envelope) env.push_back(point_json(p));
    for (const auto& p : sweep.points) {
        const double bound = front_interp(front, p.sp_distance);
        if (p.error < bound - 1e-3) {
            nlohmann::json v = point_json(p);
            v["front"] = bound;
            bad.push_back(v);
        }
    }
    report["points"] = pts;
    report["envelope"] = env;
    report["violations"] = bad;
    report["front"] = mifpo::front_to_json(front);
    mifpo::save_json(report, out_path(output_dir, "baseline.json"));

    std::cout << sweep.points.size() << " classifier points, " << bad.size()
              << " dominance violations\n";
    return bad.empty() ? 0 : kExitCheck;
}

int cmd_oracle(const std::string& input, const std::string& output_dir,
               const std::string& gammas, int gamma_count) {
    const mifpo::MifpoInstance inst = mifpo::load_instance(input);
    const mifpo::GammaGrid grid = make_grid(gammas, gamma_count);
    const mifpo::OracleBudget budget;

    nlohmann::json out;
    out["objective"] = mifpo::objective_name(inst.objective);
    out["baseline_error"] = mifpo::baseline_error(inst);
    nlohmann::json pts = nlohmann::json::array();
    std::string csv = "gamma,error\n";
    for (double gamma : grid.values) {
        const mifpo::OracleResult res = mifpo::oracle_min(inst, gamma, budget);
        pts.push_back({{"gamma", gamma}, {"error", res.error}, {"vertices", res.vertices}});
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", gamma, res.error);
        csv += buf;
    }
    out["points"] = pts;
    mifpo::save_json(out, out_path(output_dir, "oracle.json"));
    mifpo::save_text(csv, out_path(output_dir, "oracle.csv"));
    std::cout << "oracle front over " << grid.values.size() << " gammas\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-independent fairness-performance front toolkit"};
    app.require_subcommand(1);

    // shared flag storage
    std::string input, output_dir = ".", sensitive_col = "a", label_col = "y";
    std::string gammas, objective_name = "min-error", suite = "all";
    int bins = 10, atoms = 10, gamma_count = 11, restarts = 8, instances = 0;
    int grid_resolution = 100;
    double train_fraction = 0.75, alpha0 = 0.5, intercept0 = 0.0, intercept1 = 0.0;
    std::uint64_t seed = 0, n_rows = 0, dim = 2;
    std::vector<double> weights0, weights1;

    auto add_data_flags = [&](CLI::App* c) {
        c->add_option("--sensitive-col", sensitive_col, "sensitive attribute column name");
        c->add_option("--label-col", label_col, "label column name");
    };
    auto add_solve_flags = [&](CLI::App* c) {
        c->add_option("--bins", bins, "calibrated-score histogram levels")
            ->check(CLI::Range(2, 100000));
        c->add_option("--atoms", atoms, "representation atoms per bin pair")
            ->check(CLI::Range(1, 100000));
        c->add_option("--objective", objective_name, "min-error or entropy");
        c->add_option("--gammas", gammas, "comma-separated fairness budgets");
        c->add_option("--gamma-count", gamma_count, "uniform grid size when --gammas absent")
            ->check(CLI::Range(2, 100000));
        c->add_option("--restarts", restarts, "solver restarts per gamma")
            ->check(CLI::Range(1, 100000));
        c->add_option("--train-fraction", train_fraction, "calibration split fraction")
            ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    };

    CLI::App* gen = app.add_subcommand("generate", "write a synthetic labeled dataset");
    gen->add_option("--n", n_rows, "row count")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_option("--alpha0", alpha0, "P(group 0)")->check(CLI::Range(1e-9, 1.0 - 1e-9));
    gen->add_option("--dim", dim, "feature count")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000}));
    gen->add_option("--weights0", weights0, "group-0 ground-truth weights")->delimiter(',');
    gen->add_option("--weights1", weights1, "group-1 ground-truth weights")->delimiter(',');
    gen->add_option("--intercept0", intercept0, "group-0 ground-truth intercept");
    gen->add_option("--intercept1", intercept1, "group-1 ground-truth intercept");
    gen->add_option("--output-dir", output_dir, "where data.csv goes");
    add_data_flags(gen);

    CLI::App* front = app.add_subcommand("front", "dataset -> calibrated instance -> front");
    front->add_option("--input", input, "dataset CSV")->required();
    front->add_option("--output-dir", output_dir, "where outputs go");
    front->add_option("--seed", seed, "RNG seed")->required();
    add_data_flags(front);
    add_solve_flags(front);

    CLI::App* check = app.add_subcommand("check", "run randomized property suites");
    check->add_option("--suite", suite, "suite name or 'all'");
    check->add_option("--seed", seed, "RNG seed")->required();
    check->add_option("--instances", instances, "case count override for one suite")
        ->check(CLI::Range(1, 1000000));

    CLI::App* base = app.add_subcommand("baseline",
                                        "group-threshold classifiers vs a fresh front");
    base->add_option("--input", input, "instance JSON or dataset CSV")->required();
    base->add_option("--output-dir", output_dir, "where baseline.json goes");
    base->add_option("--seed", seed, "RNG seed")->required();
    base->add_option("--grid-resolution", grid_resolution, "sp buckets for the envelope")
        ->check(CLI::Range(2, 1000000));
    add_data_flags(base);
    add_solve_flags(base);

    CLI::App* orc = app.add_subcommand("oracle", "exact front by vertex enumeration");
    orc->add_option("--input", input, "instance JSON")->required();
    orc->add_option("--output-dir", output_dir, "where oracle outputs go");
    orc->add_option("--gammas", gammas, "comma-separated fairness budgets");
    orc->add_option("--gamma-count", gamma_count, "uniform grid size when --gammas absent")
        ->check(CLI::Range(2, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        const mifpo::ObjectiveKind objective = mifpo::objective_from_name(objective_name);
        if (gen->parsed())
            return cmd_generate(n_rows, seed, alpha0, dim, weights0, weights1, intercept0,
                                intercept1, output_dir, sensitive_col, label_col);
        if (front->parsed())
            return cmd_front(input, output_dir, sensitive_col, label_col, bins, atoms,
                             objective, gammas, gamma_count, restarts, seed, train_fraction);
        if (check->parsed()) return cmd_check(suite, seed, instances);
        if (base->parsed())
            return cmd_baseline(input, output_dir, sensitive_col, label_col, bins, atoms,
                                objective, gammas, gamma_count, restarts, seed,
                                train_fraction, grid_resolution);
        if (orc->parsed()) return cmd_oracle(input, output_dir, gammas, gamma_count);
    } catch (const mifpo::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const mifpo::ShapeError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const mifpo::DomainError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const mifpo::SolveError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const mifpo::BudgetError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
