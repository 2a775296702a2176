#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mifpo/common.hpp"

namespace mifpo {

// Pointwise uncertainty cost applied to a posterior probability.
enum class ObjectiveKind { MinError, Entropy };

std::string objective_name(ObjectiveKind k);
ObjectiveKind objective_from_name(const std::string& s);

// h(p): MinError -> min(p, 1-p); Entropy -> binary entropy, natural log.
// p must lie in [0, 1] up to a 1e-12 slack.
double h_eval(ObjectiveKind kind, double p);

// A quantized binary-label population with one binary sensitive attribute.
// Group 0 is described by (rho0, beta0): bin posteriors and bin weights;
// group 1 by (rho1, beta1). alpha0 is the mass of group 0. Each candidate
// representation maps every (group-0 bin u, group-1 bin v) pair onto k
// shared atoms.
struct MifpoInstance {
    double alpha0 = 0.5;
    std::vector<double> rho0, beta0;
    std::vector<double> rho1, beta1;
    int k = 1;
    ObjectiveKind objective = ObjectiveKind::MinError;

    std::size_t l0() const { return rho0.size(); }
    std::size_t l1() const { return rho1.size(); }
    std::size_t atom_count() const { return l0() * l1() * static_cast<std::size_t>(k); }
    double alpha1() const { return 1.0 - alpha0; }
};

// Drops zero-weight bins, renormalizes bin weights to exact unit sum, and
// validates every instance invariant; throws DomainError / ShapeError.
MifpoInstance finalize_instance(MifpoInstance inst);

// Validates without modifying; throws on violation.
void validate_instance(const MifpoInstance& inst);

// Candidate representation: conditional atom distributions per source bin.
// Both blocks are stored atom-major: index z = (u*l1 + v)*k + j holds
// r0[z] = P(Z=z | bin u, group 0) and r1[z] = P(Z=z | bin v, group 1).
// Row u of r0 spans all (v, j); row v of r1 spans all (u, j).
// phi0/phi1 are the slack distributions that witness an allowed fairness
// gap; they are empty when the representation targets gamma = 0.
struct RepresentationVars {
    std::size_t l0 = 0, l1 = 0;
    int k = 1;
    std::vector<double> r0, r1;
    std::vector<double> phi0, phi1;

    std::size_t atom_count() const { return l0 * l1 * static_cast<std::size_t>(k); }
    std::size_t idx(std::size_t u, std::size_t v, int j) const {
        return (u * l1 + v) * static_cast<std::size_t>(k) + static_cast<std::size_t>(j);
    }
    bool has_phi() const { return !phi0.empty(); }

    double r0_at(std::size_t u, std::size_t v, int j) const { return r0[idx(u, v, j)]; }
    double r1_at(std::size_t v, std::size_t u, int j) const { return r1[idx(u, v, j)]; }
};

// Shape/value checks against an instance: row sums within 1e-9, entries
// nonnegative up to numerical slack. Throws on violation.
void validate_vars(const MifpoInstance& inst, const RepresentationVars& vars);

// Atom marginals mu_a(z) = sum over source bins of beta_a * r_a.
// Each sums to 1 when the row-sum constraints hold.
struct AtomMarginals {
    std::vector<double> mu0, mu1;
};
AtomMarginals atom_marginals(const MifpoInstance& inst, const RepresentationVars& vars);

// Expected uncertainty cost of the representation (lower is better).
// Atoms with total mass <= 1e-15 contribute zero.
double eval_objective(const MifpoInstance& inst, const RepresentationVars& vars);

// Total-variation distance between the group-conditional atom marginals.
double eval_fairness(const MifpoInstance& inst, const RepresentationVars& vars);

// Cost of the identity representation that keeps every bin separate; no
// representation can do better regardless of the fairness budget.
double baseline_error(const MifpoInstance& inst);

// TV distance of two distributions on the same index space.
// Each must sum to 1 within 1e-9.
double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

// Certificate that two distributions sit exactly gamma apart: distributions
// phi0, phi1 with mu0 + gamma*phi0 == mu1 + gamma*phi1 and gamma = TV.
// When the inputs coincide (gamma = 0) the witness is uniform and flagged
// degenerate: any common phi works.
struct TvWitness {
    double gamma = 0.0;
    std::vector<double> phi0, phi1;
    bool degenerate = false;
};
TvWitness tv_equality_witness(const std::vector<double>& mu0, const std::vector<double>& mu1);

}  // namespace mifpo
