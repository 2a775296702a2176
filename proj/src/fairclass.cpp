#include "mifpo/fairclass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace mifpo {

namespace {

constexpr double kThresholdCap = 1.01;

double clamp_threshold(double t) { return std::min(kThresholdCap, std::max(0.0, t)); }

}  // namespace

ClassifierPoint classifier_to_point(const MifpoInstance& inst, double t0, double t1) {
    validate_instance(inst);
    ClassifierPoint pt;
    pt.t0 = clamp_threshold(t0);
    pt.t1 = clamp_threshold(t1);

    double rate0 = 0.0, rate1 = 0.0, err = 0.0;
    for (std::size_t u = 0; u < inst.l0(); ++u) {
        const bool pos = inst.rho0[u] >= pt.t0;
        if (pos) rate0 += inst.beta0[u];
        err += inst.alpha0 * inst.beta0[u] * (pos ? 1.0 - inst.rho0[u] : inst.rho0[u]);
    }
    for (std::size_t v = 0; v < inst.l1(); ++v) {
        const bool pos = inst.rho1[v] >= pt.t1;
        if (pos) rate1 += inst.beta1[v];
        err += inst.alpha1() * inst.beta1[v] * (pos ? 1.0 - inst.rho1[v] : inst.rho1[v]);
    }
    pt.sp_distance = std::abs(rate1 - rate0);
    pt.error = err;
    return pt;
}

FiniteRepresentation classifier_representation(const MifpoInstance& inst, double t0, double t1) {
    validate_instance(inst);
    const double c0 = clamp_threshold(t0), c1 = clamp_threshold(t1);
    FiniteRepresentation rep;
    rep.alpha0 = inst.alpha0;
    rep.s0_weights = inst.beta0;
    rep.s1_weights = inst.beta1;
    rep.rho_s0 = inst.rho0;
    rep.rho_s1 = inst.rho1;
    rep.t0.setZero(static_cast<long>(inst.l0()), 2);
    rep.t1.setZero(static_cast<long>(inst.l1()), 2);
    for (std::size_t u = 0; u < inst.l0(); ++u)
        rep.t0(static_cast<long>(u), inst.rho0[u] >= c0 ? 1 : 0) = 1.0;
    for (std::size_t v = 0; v < inst.l1(); ++v)
        rep.t1(static_cast<long>(v), inst.rho1[v] >= c1 ? 1 : 0) = 1.0;
    return rep;
}

ThresholdSweep sweep_group_thresholds(const MifpoInstance& inst, int grid_resolution) {
    validate_instance(inst);
    if (grid_resolution < 2) throw DomainError("grid resolution must be >= 2");

    const auto group_grid = [](std::vector<double> rho) {
        std::sort(rho.begin(), rho.end());
        std::vector<double> grid{0.0};
        for (std::size_t i = 1; i < rho.size(); ++i) {
            const double mid = 0.5 * (rho[i - 1] + rho[i]);
            if (mid > grid.back()) grid.push_back(mid);
        }
        if (grid.back() < 1.0) grid.push_back(1.0);
        return grid;
    };
    const std::vector<double> grid0 = group_grid(inst.rho0);
    const std::vector<double> grid1 = group_grid(inst.rho1);

    ThresholdSweep sweep;
    std::set<std::pair<long long, long long>> seen;
    for (double t0 : grid0)
        for (double t1 : grid1) {
            ClassifierPoint pt = classifier_to_point(inst, t0, t1);
            const auto key = std::make_pair(std::llround(pt.sp_distance * 1e12),
                                            std::llround(pt.error * 1e12));
            if (seen.insert(key).second) sweep.points.push_back(pt);
        }

    // Best point per sp bucket, then keep only strict improvements so the
    // envelope is non-increasing in error as sp grows.
    std::vector<const ClassifierPoint*> best(static_cast<std::size_t>(grid_resolution), nullptr);
    for (const ClassifierPoint& pt : sweep.points) {
        auto b = static_cast<std::size_t>(
            std::min<double>(grid_resolution - 1, std::floor(pt.sp_distance * grid_resolution)));
        if (best[b] == nullptr || pt.error < best[b]->error) best[b] = &pt;
    }
    double incumbent = std::numeric_limits<double>::infinity();
    for (const ClassifierPoint* pt : best) {
        if (pt == nullptr) continue;
        if (pt->error < incumbent) {
            sweep.envelope.push_back(*pt);
            incumbent = pt->error;
        }
    }
    return sweep;
}

}  // namespace mifpo
