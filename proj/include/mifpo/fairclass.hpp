#pragma once

#include <vector>

#include "mifpo/core.hpp"
#include "mifpo/reprlab.hpp"

namespace mifpo {

// Per-group threshold classifier on the calibrated bins: group-a bin with
// posterior rho predicts 1 iff rho >= t_a.
struct ClassifierPoint {
    double t0 = 0.0, t1 = 0.0;
    double sp_distance = 0.0;  // |P(pred=1 | group 1) - P(pred=1 | group 0)|
    double error = 0.0;
};

// Thresholds are clamped into [0, 1.01]; anything above every posterior
// (e.g. 1.01) gives the always-negative classifier.
ClassifierPoint classifier_to_point(const MifpoInstance& inst, double t0, double t1);

// The two-atom representation induced by the classifier (atom = predicted
// label). Its fairness equals sp_distance and its error never exceeds the
// classifier's.
FiniteRepresentation classifier_representation(const MifpoInstance& inst, double t0, double t1);

struct ThresholdSweep {
    std::vector<ClassifierPoint> points;    // deduplicated grid evaluations
    std::vector<ClassifierPoint> envelope;  // best error per sp bucket, monotone
};

// Evaluates every threshold pair on the grid of bin-center midpoints plus
// {0, 1} per group. grid_resolution (>= 2) sets the sp bucket count used
// for the reported lower envelope.
ThresholdSweep sweep_group_thresholds(const MifpoInstance& inst, int grid_resolution);

}  // namespace mifpo
