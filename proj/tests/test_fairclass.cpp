#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <utility>

#include "mifpo/core.hpp"
#include "mifpo/fairclass.hpp"
#include "mifpo/random.hpp"
#include "mifpo/reprlab.hpp"

using namespace mifpo;

namespace {

MifpoInstance two_point() {
    MifpoInstance inst;
    inst.rho0 = {0.0};
    inst.beta0 = {1.0};
    inst.rho1 = {1.0};
    inst.beta1 = {1.0};
    return finalize_instance(inst);
}

}  // namespace

TEST_CASE("classifier_to_point on the two-point instance") {
    const MifpoInstance inst = two_point();
    const ClassifierPoint mid = classifier_to_point(inst, 0.5, 0.5);
    CHECK(mid.error == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mid.sp_distance == doctest::Approx(1.0).epsilon(1e-12));

    // a threshold above every posterior predicts negative everywhere
    const ClassifierPoint none = classifier_to_point(inst, 1.01, 1.01);
    CHECK(none.error == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(none.sp_distance == doctest::Approx(0.0).epsilon(1e-12));

    const ClassifierPoint all = classifier_to_point(inst, 0.0, 0.0);
    CHECK(all.error == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(all.sp_distance == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("uninformative bins cost half whatever the thresholds") {
    MifpoInstance coin;
    coin.rho0 = {0.5};
    coin.beta0 = {1.0};
    coin.rho1 = {0.5};
    coin.beta1 = {1.0};
    coin = finalize_instance(coin);
    for (double t0 : {0.0, 0.5, 1.01})
        for (double t1 : {0.25, 0.75})
            CHECK(classifier_to_point(coin, t0, t1).error ==
                  doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sweep envelope brackets the two-point extremes") {
    const ThresholdSweep sweep = sweep_group_thresholds(two_point(), 50);
    REQUIRE(!sweep.points.empty());
    bool has_fair = false, has_exact = false;
    for (const ClassifierPoint& pt : sweep.envelope) {
        if (pt.sp_distance <= 1e-12 && pt.error <= 0.5 + 1e-12 && pt.error >= 0.5 - 1e-12)
            has_fair = true;
        if (pt.sp_distance >= 1.0 - 1e-12 && pt.error <= 1e-12) has_exact = true;
    }
    CHECK(has_fair);
    CHECK(has_exact);
    // envelope error is non-increasing in sp
    for (std::size_t i = 1; i < sweep.envelope.size(); ++i) {
        CHECK(sweep.envelope[i].sp_distance >= sweep.envelope[i - 1].sp_distance - 1e-12);
        CHECK(sweep.envelope[i].error <= sweep.envelope[i - 1].error + 1e-12);
    }
    CHECK_THROWS_AS(sweep_group_thresholds(two_point(), 1), DomainError);
}

TEST_CASE("one bin per group yields at most four distinct points") {
    Rng rng(61);
    const MifpoInstance inst = random_instance(rng, 1, 1, 1, ObjectiveKind::MinError);
    const ThresholdSweep sweep = sweep_group_thresholds(inst, 10);
    std::set<std::pair<double, double>> distinct;
    for (const ClassifierPoint& pt : sweep.points)
        distinct.emplace(pt.sp_distance, pt.error);
    CHECK(distinct.size() <= 4);
}

TEST_CASE("classifier_representation mirrors the point") {
    Rng rng(67);
    for (int rep = 0; rep < 10; ++rep) {
        const MifpoInstance inst = random_instance(rng, 2, 3, 1, ObjectiveKind::MinError);
        const double t0 = rng.uniform(), t1 = rng.uniform();
        const ClassifierPoint pt = classifier_to_point(inst, t0, t1);
        const FiniteRepresentation rep2 = classifier_representation(inst, t0, t1);
        validate_rep(rep2);
        const RepEval ev = eval_rep(rep2, ObjectiveKind::MinError);
        CHECK(ev.fairness == doctest::Approx(pt.sp_distance).epsilon(1e-9));
        CHECK(ev.error <= pt.error + 1e-12);  // posterior mixing can only help
    }
}
