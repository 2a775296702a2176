#include "mifpo/io.hpp"

#include <cstdio>
#include <fstream>

namespace mifpo {

namespace {

// Pull a typed field with a readable error instead of nlohmann's.
template <typename T>
T field(const nlohmann::json& j, const char* name) {
    if (!j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("field '") + name + "' has the wrong type");
    }
}

}  // namespace

nlohmann::json instance_to_json(const MifpoInstance& inst) {
    return nlohmann::json{{"alpha0", inst.alpha0}, {"rho0", inst.rho0},
                          {"beta0", inst.beta0},   {"rho1", inst.rho1},
                          {"beta1", inst.beta1},   {"k", inst.k},
                          {"objective", objective_name(inst.objective)}};
}

MifpoInstance instance_from_json(const nlohmann::json& j) {
    MifpoInstance inst;
    inst.alpha0 = field<double>(j, "alpha0");
    inst.rho0 = field<std::vector<double>>(j, "rho0");
    inst.beta0 = field<std::vector<double>>(j, "beta0");
    inst.rho1 = field<std::vector<double>>(j, "rho1");
    inst.beta1 = field<std::vector<double>>(j, "beta1");
    inst.k = field<int>(j, "k");
    inst.objective = objective_from_name(field<std::string>(j, "objective"));
    validate_instance(inst);
    return inst;
}

nlohmann::json front_to_json(const ParetoFront& front) {
    nlohmann::json points = nlohmann::json::array();
    for (const FrontPoint& pt : front.points)
        points.push_back({{"gamma", pt.gamma},
                          {"error", pt.error},
                          {"restarts_used", pt.restarts_used}});
    return nlohmann::json{{"objective", objective_name(front.objective)},
                          {"baseline_error", front.baseline},
                          {"points", std::move(points)}};
}

std::string front_to_csv(const ParetoFront& front) {
    std::string out = "gamma,error\n";
    char buf[80];
    for (const FrontPoint& pt : front.points) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", pt.gamma, pt.error);
        out += buf;
    }
    return out;
}

nlohmann::json model_to_json(const CalibratedModel& model) {
    nlohmann::json groups = nlohmann::json::array();
    for (int g = 0; g < 2; ++g)
        groups.push_back({{"weights", model.logistic[g].weights},
                          {"intercept", model.logistic[g].intercept},
                          {"converged", model.logistic[g].converged},
                          {"breakpoints", model.isotonic[g].breakpoints},
                          {"values", model.isotonic[g].values}});
    return nlohmann::json{{"groups", std::move(groups)}};
}

CalibratedModel model_from_json(const nlohmann::json& j) {
    const auto groups = field<nlohmann::json>(j, "groups");
    if (!groups.is_array() || groups.size() != 2)
        throw ParseError("'groups' must hold exactly 2 entries");
    CalibratedModel model;
    for (int g = 0; g < 2; ++g) {
        const nlohmann::json& e = groups[static_cast<std::size_t>(g)];
        model.logistic[g].weights = field<std::vector<double>>(e, "weights");
        model.logistic[g].intercept = field<double>(e, "intercept");
        model.logistic[g].converged = field<bool>(e, "converged");
        model.isotonic[g].breakpoints = field<std::vector<double>>(e, "breakpoints");
        model.isotonic[g].values = field<std::vector<double>>(e, "values");
        if (model.isotonic[g].breakpoints.size() != model.isotonic[g].values.size())
            throw ParseError("isotonic breakpoints/values lengths disagree");
    }
    return model;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

MifpoInstance load_instance(const std::string& path) {
    return instance_from_json(load_json(path));
}

void save_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

void save_text(const std::string& text, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

}  // namespace mifpo
