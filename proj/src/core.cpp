#include "mifpo/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mifpo {

namespace {

constexpr double kAtomMassFloor = 1e-15;

double checked_prob(double p, const char* what) {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12))
        throw DomainError(std::string(what) + " outside [0,1]: " + std::to_string(p));
    return std::min(1.0, std::max(0.0, p));
}

void check_prob_vector(const std::vector<double>& v, const char* what) {
    for (double p : v) checked_prob(p, what);
}

}  // namespace

std::string objective_name(ObjectiveKind k) {
    return k == ObjectiveKind::MinError ? "min-error" : "entropy";
}

ObjectiveKind objective_from_name(const std::string& s) {
    if (s == "min-error") return ObjectiveKind::MinError;
    if (s == "entropy") return ObjectiveKind::Entropy;
    throw ParseError("unknown objective '" + s + "' (expected min-error or entropy)");
}

double h_eval(ObjectiveKind kind, double p) {
    p = checked_prob(p, "h_eval argument");
    if (kind == ObjectiveKind::MinError) return std::min(p, 1.0 - p);
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

void validate_instance(const MifpoInstance& inst) {
    if (!(inst.alpha0 > 0.0 && inst.alpha0 < 1.0))
        throw DomainError("alpha0 must lie strictly inside (0,1)");
    if (inst.k < 1) throw DomainError("atom multiplicity k must be >= 1");
    if (inst.rho0.size() != inst.beta0.size() || inst.rho1.size() != inst.beta1.size())
        throw ShapeError("bin posterior/weight lengths disagree");
    if (inst.rho0.empty() || inst.rho1.empty())
        throw ShapeError("each group needs at least one bin");
    check_prob_vector(inst.rho0, "rho0 entry");
    check_prob_vector(inst.rho1, "rho1 entry");
    for (const auto* beta : {&inst.beta0, &inst.beta1}) {
        double total = 0.0;
        for (double w : *beta) {
            if (!(w > 0.0)) throw DomainError("bin weights must be strictly positive");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw DomainError("bin weights must sum to 1 (off by " +
                              std::to_string(total - 1.0) + ")");
    }
}

MifpoInstance finalize_instance(MifpoInstance inst) {
    auto drop_zeros = [](std::vector<double>& rho, std::vector<double>& beta) {
        if (rho.size() != beta.size())
            throw ShapeError("bin posterior/weight lengths disagree");
        std::vector<double> r2, b2;
        for (std::size_t i = 0; i < beta.size(); ++i) {
            if (beta[i] < 0.0 && beta[i] > -1e-15) beta[i] = 0.0;
            if (beta[i] > 0.0) {
                r2.push_back(rho[i]);
                b2.push_back(beta[i]);
            } else if (beta[i] < 0.0) {
                throw DomainError("negative bin weight");
            }
        }
        double total = std::accumulate(b2.begin(), b2.end(), 0.0);
        if (std::abs(total - 1.0) > 1e-9)
            throw DomainError("bin weights must sum to 1 before normalization");
        for (double& w : b2) w /= total;
        rho = std::move(r2);
        beta = std::move(b2);
    };
    drop_zeros(inst.rho0, inst.beta0);
    drop_zeros(inst.rho1, inst.beta1);
    validate_instance(inst);
    return inst;
}

void validate_vars(const MifpoInstance& inst, const RepresentationVars& vars) {
    if (vars.l0 != inst.l0() || vars.l1 != inst.l1() || vars.k != inst.k)
        throw ShapeError("representation shape disagrees with instance");
    const std::size_t nz = vars.atom_count();
    if (vars.r0.size() != nz || vars.r1.size() != nz)
        throw ShapeError("representation blocks have wrong length");
    if (vars.phi0.size() != vars.phi1.size())
        throw ShapeError("witness blocks have unequal length");
    if (vars.has_phi() && vars.phi0.size() != nz)
        throw ShapeError("witness blocks have wrong length");

    auto check_nonneg = [](const std::vector<double>& v, const char* what) {
        for (double x : v)
            if (x < -1e-12) throw DomainError(std::string(what) + " has negative entry");
    };
    check_nonneg(vars.r0, "r0");
    check_nonneg(vars.r1, "r1");
    check_nonneg(vars.phi0, "phi0");
    check_nonneg(vars.phi1, "phi1");

    const std::size_t row0 = inst.l1() * static_cast<std::size_t>(inst.k);
    for (std::size_t u = 0; u < inst.l0(); ++u) {
        double s = 0.0;
        for (std::size_t t = 0; t < row0; ++t) s += vars.r0[u * row0 + t];
        if (std::abs(s - 1.0) > 1e-9)
            throw DomainError("r0 row " + std::to_string(u) + " sums to " + std::to_string(s));
    }
    for (std::size_t v = 0; v < inst.l1(); ++v) {
        double s = 0.0;
        for (std::size_t u = 0; u < inst.l0(); ++u)
            for (int j = 0; j < inst.k; ++j) s += vars.r1[vars.idx(u, v, j)];
        if (std::abs(s - 1.0) > 1e-9)
            throw DomainError("r1 row " + std::to_string(v) + " sums to " + std::to_string(s));
    }
    if (vars.has_phi()) {
        for (const auto* phi : {&vars.phi0, &vars.phi1}) {
            double s = std::accumulate(phi->begin(), phi->end(), 0.0);
            if (std::abs(s - 1.0) > 1e-9)
                throw DomainError("witness block sums to " + std::to_string(s));
        }
    }
}

AtomMarginals atom_marginals(const MifpoInstance& inst, const RepresentationVars& vars) {
    const std::size_t nz = vars.atom_count();
    AtomMarginals m;
    m.mu0.assign(nz, 0.0);
    m.mu1.assign(nz, 0.0);
    for (std::size_t u = 0; u < inst.l0(); ++u)
        for (std::size_t v = 0; v < inst.l1(); ++v)
            for (int j = 0; j < inst.k; ++j) {
                const std::size_t z = vars.idx(u, v, j);
                m.mu0[z] += inst.beta0[u] * vars.r0[z];
                m.mu1[z] += inst.beta1[v] * vars.r1[z];
            }
    return m;
}

double eval_objective(const MifpoInstance& inst, const RepresentationVars& vars) {
    if (vars.l0 != inst.l0() || vars.l1 != inst.l1() || vars.k != inst.k ||
        vars.r0.size() != vars.atom_count() || vars.r1.size() != vars.atom_count())
        throw ShapeError("representation shape disagrees with instance");
    const double a0 = inst.alpha0, a1 = inst.alpha1();
    double total = 0.0;
    for (std::size_t u = 0; u < inst.l0(); ++u)
        for (std::size_t v = 0; v < inst.l1(); ++v)
            for (int j = 0; j < inst.k; ++j) {
                const std::size_t z = vars.idx(u, v, j);
                const double c0 = a0 * inst.beta0[u] * vars.r0[z];
                const double c1 = a1 * inst.beta1[v] * vars.r1[z];
                const double mass = c0 + c1;
                if (mass <= kAtomMassFloor) continue;
                double mix = (inst.rho0[u] * c0 + inst.rho1[v] * c1) / mass;
                mix = std::min(1.0, std::max(0.0, mix));
                total += mass * h_eval(inst.objective, mix);
            }
    return total;
}

double eval_fairness(const MifpoInstance& inst, const RepresentationVars& vars) {
    if (vars.l0 != inst.l0() || vars.l1 != inst.l1() || vars.k != inst.k ||
        vars.r0.size() != vars.atom_count() || vars.r1.size() != vars.atom_count())
        throw ShapeError("representation shape disagrees with instance");
    double total = 0.0;
    for (std::size_t u = 0; u < inst.l0(); ++u)
        for (std::size_t v = 0; v < inst.l1(); ++v)
            for (int j = 0; j < inst.k; ++j) {
                const std::size_t z = vars.idx(u, v, j);
                total += std::abs(inst.beta0[u] * vars.r0[z] - inst.beta1[v] * vars.r1[z]);
            }
    return 0.5 * total;
}

double baseline_error(const MifpoInstance& inst) {
    double e = 0.0;
    for (std::size_t u = 0; u < inst.l0(); ++u)
        e += inst.alpha0 * inst.beta0[u] * h_eval(inst.objective, inst.rho0[u]);
    for (std::size_t v = 0; v < inst.l1(); ++v)
        e += inst.alpha1() * inst.beta1[v] * h_eval(inst.objective, inst.rho1[v]);
    return e;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ShapeError("tv_distance: mismatched index spaces");
    double sa = std::accumulate(a.begin(), a.end(), 0.0);
    double sb = std::accumulate(b.begin(), b.end(), 0.0);
    if (std::abs(sa - 1.0) > 1e-9 || std::abs(sb - 1.0) > 1e-9)
        throw DomainError("tv_distance: inputs must be probability vectors");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
    return 0.5 * total;
}

TvWitness tv_equality_witness(const std::vector<double>& mu0, const std::vector<double>& mu1) {
    const double gamma = tv_distance(mu0, mu1);
    TvWitness w;
    w.gamma = gamma;
    const std::size_t n = mu0.size();
    if (gamma <= 0.0) {
        w.phi0.assign(n, 1.0 / static_cast<double>(n));
        w.phi1 = w.phi0;
        w.degenerate = true;
        return w;
    }
    w.phi0.assign(n, 0.0);
    w.phi1.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = mu1[i] - mu0[i];
        if (d > 0.0)
            w.phi0[i] = d / gamma;  // group 0 needs topping up here
        else if (d < 0.0)
            w.phi1[i] = -d / gamma;
    }
    return w;
}

}  // namespace mifpo
