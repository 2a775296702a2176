#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mifpo/core.hpp"

namespace mifpo {

// Rows of numeric features with one binary sensitive attribute and one
// binary label.
struct Dataset {
    std::vector<std::vector<double>> x;
    std::vector<int> a;
    std::vector<int> y;
    std::vector<std::string> feature_names;

    std::size_t n() const { return a.size(); }
    std::size_t dim() const { return x.empty() ? 0 : x.front().size(); }
};

// Comma-separated file with a header row. The named columns hold the
// sensitive attribute and label (both must be exactly 0 or 1); every other
// column is a numeric feature, kept in file order.
Dataset load_csv(const std::string& path, const std::string& sensitive_col,
                 const std::string& label_col);

void save_csv(const Dataset& data, const std::string& path, const std::string& sensitive_col,
              const std::string& label_col);

// Ground truth of one group: y ~ Bernoulli(sigmoid(weights.x + intercept))
// over standard normal features.
struct GroupTruth {
    std::vector<double> weights;
    double intercept = 0.0;
};

struct SyntheticSpec {
    double alpha0 = 0.5;  // P(a = 0)
    GroupTruth group0, group1;
};

Dataset synthetic_generate(std::size_t n, std::uint64_t seed, const SyntheticSpec& spec);

// Non-decreasing step function: at a breakpoint its value, between
// breakpoints the value of the largest breakpoint below, flat beyond the
// ends.
struct IsotonicFn {
    std::vector<double> breakpoints;
    std::vector<double> values;

    double operator()(double s) const;
};

// Weighted pool-adjacent-violators over (score, target) pairs. Equal
// scores are merged (targets averaged) before pooling; the result is the
// least-squares non-decreasing fit.
IsotonicFn pava_isotonic(std::vector<std::pair<double, double>> pairs);

struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;
    bool converged = true;
    int iterations = 0;

    double raw_score(const std::vector<double>& features) const;  // sigmoid output
};

// L2-regularized logistic regression (lambda 1e-4) fitted by iteratively
// reweighted least squares on internally standardized features; the
// returned coefficients act on the raw feature scale. A single-label input
// yields the constant model at the clamped label mean.
LogisticModel fit_logistic(const std::vector<std::vector<double>>& x, const std::vector<int>& y);

struct CalibratedModel {
    LogisticModel logistic[2];
    IsotonicFn isotonic[2];
};

// Fits one logistic + isotonic stage per group on the given rows.
CalibratedModel fit_calibrated(const Dataset& train);

// Calibrated score per row, each through its own group's model.
std::vector<double> predict_calibrated(const CalibratedModel& model, const Dataset& rows);

// Equal-width reliability gap: sum over bins of (share) * |mean prediction
// - mean label|.
double expected_calibration_error(const std::vector<double>& predictions,
                                  const std::vector<int>& labels, int bins);

// Uniform-grid histogram of calibrated scores: centers l/(levels-1),
// nearest-center assignment with ties to the lower index, zero bins
// dropped, weights normalized to unit sum.
struct GroupHistogram {
    std::vector<double> centers;
    std::vector<double> weights;
};
GroupHistogram build_histograms(const std::vector<double>& scores, int levels);

// Quantizes both groups of `rows` through the calibrated model into a
// solvable instance with `atoms` atoms per bin pair.
MifpoInstance build_instance(const Dataset& rows, const CalibratedModel& model, int levels,
                             int atoms, ObjectiveKind objective);

struct DataSplit {
    Dataset train, eval;
};
// Seeded shuffle, then the first round(fraction * n) rows train.
DataSplit split_dataset(const Dataset& data, double train_fraction, std::uint64_t seed);

}  // namespace mifpo
