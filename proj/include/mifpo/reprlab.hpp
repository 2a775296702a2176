#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mifpo/core.hpp"

namespace mifpo {

// A finite representation in explicit form: two sides of weighted source
// points, each with a scalar posterior P(Y=1 | source), pushed through
// row-stochastic channels t0 (|S0| x |Z|) and t1 (|S1| x |Z|) onto a shared
// atom space.
struct FiniteRepresentation {
    double alpha0 = 0.5;
    std::vector<double> s0_weights, s1_weights;
    std::vector<double> rho_s0, rho_s1;
    Eigen::MatrixXd t0, t1;

    std::size_t s0() const { return s0_weights.size(); }
    std::size_t s1() const { return s1_weights.size(); }
    std::size_t atoms() const { return static_cast<std::size_t>(t0.cols()); }
};

void validate_rep(const FiniteRepresentation& rep);

struct RepEval {
    double error = 0.0;
    double fairness = 0.0;
};
// error: sum over atoms of P(z) h(P(Y=1|z)); fairness: TV of the two
// group-conditional atom marginals. Atoms of mass <= 1e-15 contribute zero.
RepEval eval_rep(const FiniteRepresentation& rep, ObjectiveKind objective);

// An atom is owned by at most one source point per side (entries above
// 1e-15 count). Invertible representations admit exact per-atom decoding.
bool is_invertible(const FiniteRepresentation& rep);

// Splits shared atoms until the representation is invertible. Each split
// peels the lowest-index offending atom's lowest-index parent into a fresh
// atom, scaling the opposite side by that parent's share of the column so
// the group marginals split proportionally: fairness is preserved exactly
// and the error can only go down (concavity of h).
FiniteRepresentation make_invertible(FiniteRepresentation rep);

// Merges source points on either side whose posterior agrees to 12
// decimals; the merged channel row is the weight-proportional blend, which
// leaves every atom's marginals and posterior untouched.
FiniteRepresentation factorise(const FiniteRepresentation& rep);

// One (u, v) pair of an invertible representation, reduced to its atom mass
// lists: w0[j], w1[j] are the group masses landing on atom j, and rho_u,
// rho_v the two source posteriors.
struct TwoPointRep {
    std::vector<double> w0, w1;
    double rho_u = 0.0, rho_v = 1.0;
};

void validate_two_point(const TwoPointRep& rep);

// Bins atoms by their mass split p_j = w0_j / (w0_j + w1_j) onto `bins`
// uniform grid points (nearest, ties to the lower index; zero-mass atoms
// dropped) and sums the masses per occupied bin. Never increases the
// fairness contribution; the error moves by at most the h-modulus over one
// bin radius times the total mass.
TwoPointRep compress_two_point(const TwoPointRep& rep, int bins);

double two_point_error(const TwoPointRep& rep, ObjectiveKind objective);
// Fairness contribution of the pair: 0.5 sum |w0/alpha0 - w1/alpha1|.
double two_point_fairness(const TwoPointRep& rep, double alpha0);

// |ΔE| bound for compress_two_point under MinError: total mass times twice
// the bin radius (h has Lipschitz constant 1 over posterior mixtures).
double compression_error_bound(const TwoPointRep& rep, int bins);

// Residual of the mixture-entropy split used by the Entropy objective:
//   (a+b) H(mix) = -[e(s) + e(t) - e(a+b)],  e(x) = x log x,
// where s, t are the label-1 / label-0 masses of the pooled pair.
// Exact up to rounding; negative masses or posteriors outside [0,1] throw.
double entropy_decomposition_check(double a, double b, double p_a, double p_b);

}  // namespace mifpo
