#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>

#include "mifpo/io.hpp"

using namespace mifpo;

namespace {

MifpoInstance sample_instance() {
    MifpoInstance inst;
    inst.alpha0 = 0.3;
    inst.rho0 = {0.1, 0.9};
    inst.beta0 = {0.25, 0.75};
    inst.rho1 = {0.6};
    inst.beta1 = {1.0};
    inst.k = 3;
    inst.objective = ObjectiveKind::Entropy;
    return inst;
}

}  // namespace

TEST_CASE("instance json round-trips exactly") {
    const MifpoInstance inst = sample_instance();
    const MifpoInstance back = instance_from_json(instance_to_json(inst));
    CHECK(back.alpha0 == inst.alpha0);
    CHECK(back.rho0 == inst.rho0);
    CHECK(back.beta0 == inst.beta0);
    CHECK(back.rho1 == inst.rho1);
    CHECK(back.beta1 == inst.beta1);
    CHECK(back.k == inst.k);
    CHECK(back.objective == inst.objective);

    // awkward decimals survive the text round trip untouched
    MifpoInstance odd = inst;
    odd.rho0 = {1.0 / 3.0, 0.1 + 0.2};
    const std::string text = instance_to_json(odd).dump();
    const MifpoInstance re = instance_from_json(nlohmann::json::parse(text));
    CHECK(re.rho0[0] == odd.rho0[0]);
    CHECK(re.rho0[1] == odd.rho0[1]);
}

TEST_CASE("instance json rejects missing or invalid fields") {
    nlohmann::json j = instance_to_json(sample_instance());
    j.erase("rho0");
    CHECK_THROWS_AS(instance_from_json(j), ParseError);

    j = instance_to_json(sample_instance());
    j["k"] = "three";
    CHECK_THROWS_AS(instance_from_json(j), ParseError);

    j = instance_to_json(sample_instance());
    j["alpha0"] = 2.0;  // parses but fails validation
    CHECK_THROWS_AS(instance_from_json(j), DomainError);
}

TEST_CASE("front json carries every point") {
    ParetoFront front;
    front.objective = ObjectiveKind::MinError;
    front.baseline = 0.125;
    FrontPoint p;
    p.gamma = 0.25;
    p.error = 1.0 / 3.0;
    p.restarts_used = 5;
    front.points.push_back(p);
    p.gamma = 1.0;
    p.error = 0.125;
    front.points.push_back(p);

    const nlohmann::json j = front_to_json(front);
    CHECK(j.at("objective") == "min-error");
    CHECK(j.at("baseline_error").get<double>() == 0.125);
    REQUIRE(j.at("points").size() == 2);
    CHECK(j.at("points")[0].at("gamma").get<double>() == 0.25);
    CHECK(j.at("points")[0].at("error").get<double>() == 1.0 / 3.0);
    CHECK(j.at("points")[0].at("restarts_used").get<int>() == 5);
}

TEST_CASE("front csv format") {
    ParetoFront front;
    FrontPoint p;
    p.gamma = 0.0;
    p.error = 0.5;
    front.points.push_back(p);
    p.gamma = 0.123456789012345;  // truncated to 12 significant digits
    p.error = 1e-3;
    front.points.push_back(p);
    const std::string csv = front_to_csv(front);
    CHECK(csv == "gamma,error\n0,0.5\n0.123456789012,0.001\n");
}

TEST_CASE("model json round-trips") {
    CalibratedModel m;
    m.logistic[0].weights = {0.5, -1.25};
    m.logistic[0].intercept = 0.75;
    m.logistic[1].weights = {2.0, 0.0};
    m.logistic[1].intercept = -0.5;
    m.logistic[1].converged = false;
    m.isotonic[0].breakpoints = {0.1, 0.9};
    m.isotonic[0].values = {0.2, 0.8};
    m.isotonic[1].breakpoints = {0.5};
    m.isotonic[1].values = {0.5};

    const CalibratedModel back = model_from_json(model_to_json(m));
    for (int g = 0; g < 2; ++g) {
        CHECK(back.logistic[g].weights == m.logistic[g].weights);
        CHECK(back.logistic[g].intercept == m.logistic[g].intercept);
        CHECK(back.logistic[g].converged == m.logistic[g].converged);
        CHECK(back.isotonic[g].breakpoints == m.isotonic[g].breakpoints);
        CHECK(back.isotonic[g].values == m.isotonic[g].values);
    }

    nlohmann::json j = model_to_json(m);
    j["groups"][0].erase("values");
    CHECK_THROWS_AS(model_from_json(j), ParseError);
}

TEST_CASE("file helpers round-trip and surface errors") {
    const std::string path = "io_instance.json";
    save_json(instance_to_json(sample_instance()), path);
    const MifpoInstance back = load_instance(path);
    CHECK(back.rho0 == sample_instance().rho0);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_instance("does_not_exist.json"), ParseError);

    FILE* f = std::fopen("io_garbage.json", "w");
    std::fputs("{not json", f);
    std::fclose(f);
    CHECK_THROWS_AS(load_json("io_garbage.json"), ParseError);
    std::remove("io_garbage.json");
}
