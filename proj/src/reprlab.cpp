#include "mifpo/reprlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mifpo {

namespace {

constexpr double kParentTol = 1e-15;
constexpr double kMassFloor = 1e-15;

void check_weights(const std::vector<double>& w, const char* what) {
    double total = 0.0;
    for (double x : w) {
        if (!(x > 0.0)) throw DomainError(std::string(what) + " weights must be positive");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw DomainError(std::string(what) + " weights must sum to 1");
}

void check_stochastic(const Eigen::MatrixXd& t, const char* what) {
    for (long r = 0; r < t.rows(); ++r) {
        double total = 0.0;
        for (long c = 0; c < t.cols(); ++c) {
            if (t(r, c) < -1e-12)
                throw DomainError(std::string(what) + " has a negative channel entry");
            total += t(r, c);
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw DomainError(std::string(what) + " row " + std::to_string(r) +
                              " is not stochastic");
    }
}

int parents_in_column(const Eigen::MatrixXd& t, long col) {
    int count = 0;
    for (long r = 0; r < t.rows(); ++r)
        if (t(r, col) > kParentTol) ++count;
    return count;
}

}  // namespace

void validate_rep(const FiniteRepresentation& rep) {
    if (!(rep.alpha0 > 0.0 && rep.alpha0 < 1.0))
        throw DomainError("alpha0 must lie strictly inside (0,1)");
    if (rep.s0_weights.size() != rep.rho_s0.size() ||
        rep.s1_weights.size() != rep.rho_s1.size())
        throw ShapeError("side weight/posterior lengths disagree");
    if (rep.t0.rows() != static_cast<long>(rep.s0()) ||
        rep.t1.rows() != static_cast<long>(rep.s1()))
        throw ShapeError("channel row count disagrees with side size");
    if (rep.t0.cols() != rep.t1.cols()) throw ShapeError("channels share the atom space");
    if (rep.t0.cols() < 1) throw ShapeError("need at least one atom");
    for (double p : rep.rho_s0)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("posterior outside [0,1]");
    for (double p : rep.rho_s1)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("posterior outside [0,1]");
    check_weights(rep.s0_weights, "side-0");
    check_weights(rep.s1_weights, "side-1");
    check_stochastic(rep.t0, "t0");
    check_stochastic(rep.t1, "t1");
}

RepEval eval_rep(const FiniteRepresentation& rep, ObjectiveKind objective) {
    const std::size_t nz = rep.atoms();
    RepEval out;
    for (std::size_t z = 0; z < nz; ++z) {
        const long col = static_cast<long>(z);
        double mu0 = 0.0, num0 = 0.0;
        for (std::size_t u = 0; u < rep.s0(); ++u) {
            const double m = rep.s0_weights[u] * rep.t0(static_cast<long>(u), col);
            mu0 += m;
            num0 += m * rep.rho_s0[u];
        }
        double mu1 = 0.0, num1 = 0.0;
        for (std::size_t v = 0; v < rep.s1(); ++v) {
            const double m = rep.s1_weights[v] * rep.t1(static_cast<long>(v), col);
            mu1 += m;
            num1 += m * rep.rho_s1[v];
        }
        out.fairness += std::abs(mu0 - mu1);
        const double mass = rep.alpha0 * mu0 + (1.0 - rep.alpha0) * mu1;
        if (mass <= kMassFloor) continue;
        double mix = (rep.alpha0 * num0 + (1.0 - rep.alpha0) * num1) / mass;
        mix = std::min(1.0, std::max(0.0, mix));
        out.error += mass * h_eval(objective, mix);
    }
    out.fairness *= 0.5;
    return out;
}

bool is_invertible(const FiniteRepresentation& rep) {
    for (long z = 0; z < rep.t0.cols(); ++z)
        if (parents_in_column(rep.t0, z) > 1 || parents_in_column(rep.t1, z) > 1)
            return false;
    return true;
}

namespace {

// Append a copy of column `col` to both channels, scale the splitting
// side's column down to the chosen parent, and balance the other side by
// the parent's mass share kappa.
void split_column(Eigen::MatrixXd& split_side, const std::vector<double>& split_weights,
                  Eigen::MatrixXd& other_side, long col, long parent) {
    double col_mass = 0.0;
    for (long r = 0; r < split_side.rows(); ++r)
        col_mass += split_weights[static_cast<std::size_t>(r)] * split_side(r, col);
    const double kappa =
        split_weights[static_cast<std::size_t>(parent)] * split_side(parent, col) / col_mass;

    const long old_cols = split_side.cols();
    split_side.conservativeResize(Eigen::NoChange, old_cols + 1);
    other_side.conservativeResize(Eigen::NoChange, old_cols + 1);

    // New atom takes everything except the parent; original keeps only it.
    split_side.col(old_cols) = split_side.col(col);
    split_side(parent, old_cols) = 0.0;
    for (long r = 0; r < split_side.rows(); ++r)
        if (r != parent) split_side(r, col) = 0.0;

    other_side.col(old_cols) = (1.0 - kappa) * other_side.col(col);
    other_side.col(col) *= kappa;
}

}  // namespace

FiniteRepresentation make_invertible(FiniteRepresentation rep) {
    validate_rep(rep);
    const long split_cap = 100000;
    for (long splits = 0; splits <= split_cap; ++splits) {
        long col = -1;
        bool side0 = true;
        for (long z = 0; z < rep.t0.cols() && col < 0; ++z) {
            if (parents_in_column(rep.t0, z) > 1) {
                col = z;
                side0 = true;
            } else if (parents_in_column(rep.t1, z) > 1) {
                col = z;
                side0 = false;
            }
        }
        if (col < 0) return rep;
        if (splits == split_cap) throw SolveError("atom splitting failed to terminate");

        Eigen::MatrixXd& side = side0 ? rep.t0 : rep.t1;
        long parent = -1;
        for (long r = 0; r < side.rows(); ++r)
            if (side(r, col) > kParentTol) {
                parent = r;
                break;
            }
        split_column(side, side0 ? rep.s0_weights : rep.s1_weights,
                     side0 ? rep.t1 : rep.t0, col, parent);
    }
    return rep;
}

FiniteRepresentation factorise(const FiniteRepresentation& rep) {
    validate_rep(rep);
    const auto merge_side = [&](const std::vector<double>& w, const std::vector<double>& rho,
                                const Eigen::MatrixXd& t, std::vector<double>& w_out,
                                std::vector<double>& rho_out, Eigen::MatrixXd& t_out) {
        // Group indices by the posterior rounded to 12 decimals, keeping
        // first-occurrence order.
        std::map<long long, std::size_t> slot;
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            const long long key = std::llround(rho[i] * 1e12);
            auto [it, fresh] = slot.try_emplace(key, groups.size());
            if (fresh) groups.emplace_back();
            groups[it->second].push_back(i);
        }
        w_out.clear();
        rho_out.clear();
        t_out.setZero(static_cast<long>(groups.size()), t.cols());
        for (std::size_t g = 0; g < groups.size(); ++g) {
            double total = 0.0;
            for (std::size_t i : groups[g]) total += w[i];
            for (std::size_t i : groups[g])
                t_out.row(static_cast<long>(g)) += (w[i] / total) * t.row(static_cast<long>(i));
            w_out.push_back(total);
            rho_out.push_back(rho[groups[g].front()]);
        }
    };

    FiniteRepresentation out;
    out.alpha0 = rep.alpha0;
    merge_side(rep.s0_weights, rep.rho_s0, rep.t0, out.s0_weights, out.rho_s0, out.t0);
    merge_side(rep.s1_weights, rep.rho_s1, rep.t1, out.s1_weights, out.rho_s1, out.t1);
    return out;
}

void validate_two_point(const TwoPointRep& rep) {
    if (rep.w0.size() != rep.w1.size()) throw ShapeError("two-point mass lists disagree");
    if (rep.w0.empty()) throw ShapeError("two-point representation needs atoms");
    for (const auto* w : {&rep.w0, &rep.w1})
        for (double x : *w)
            if (x < -1e-12) throw DomainError("negative atom mass");
    for (double p : {rep.rho_u, rep.rho_v})
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("posterior outside [0,1]");
}

TwoPointRep compress_two_point(const TwoPointRep& rep, int bins) {
    validate_two_point(rep);
    if (bins < 1) throw DomainError("bins must be >= 1");

    std::vector<double> c0(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> c1(static_cast<std::size_t>(bins), 0.0);
    for (std::size_t j = 0; j < rep.w0.size(); ++j) {
        const double a = std::max(0.0, rep.w0[j]);
        const double b = std::max(0.0, rep.w1[j]);
        const double mass = a + b;
        if (mass <= 0.0) continue;
        std::size_t bucket = 0;
        if (bins > 1) {
            const double t = (a / mass) * (bins - 1);
            bucket = static_cast<std::size_t>(std::max(0.0, std::ceil(t - 0.5)));
            bucket = std::min(bucket, static_cast<std::size_t>(bins - 1));
        }
        c0[bucket] += a;
        c1[bucket] += b;
    }

    TwoPointRep out;
    out.rho_u = rep.rho_u;
    out.rho_v = rep.rho_v;
    for (std::size_t i = 0; i < c0.size(); ++i)
        if (c0[i] + c1[i] > 0.0) {
            out.w0.push_back(c0[i]);
            out.w1.push_back(c1[i]);
        }
    if (out.w0.empty()) {  // all-zero input keeps one empty atom
        out.w0.push_back(0.0);
        out.w1.push_back(0.0);
    }
    return out;
}

double two_point_error(const TwoPointRep& rep, ObjectiveKind objective) {
    double total = 0.0;
    for (std::size_t j = 0; j < rep.w0.size(); ++j) {
        const double a = std::max(0.0, rep.w0[j]);
        const double b = std::max(0.0, rep.w1[j]);
        const double mass = a + b;
        if (mass <= kMassFloor) continue;
        double mix = (a * rep.rho_u + b * rep.rho_v) / mass;
        mix = std::min(1.0, std::max(0.0, mix));
        total += mass * h_eval(objective, mix);
    }
    return total;
}

double two_point_fairness(const TwoPointRep& rep, double alpha0) {
    if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw DomainError("alpha0 must lie inside (0,1)");
    double total = 0.0;
    for (std::size_t j = 0; j < rep.w0.size(); ++j)
        total += std::abs(rep.w0[j] / alpha0 - rep.w1[j] / (1.0 - alpha0));
    return 0.5 * total;
}

double compression_error_bound(const TwoPointRep& rep, int bins) {
    if (bins < 1) throw DomainError("bins must be >= 1");
    const double total =
        std::accumulate(rep.w0.begin(), rep.w0.end(), 0.0) +
        std::accumulate(rep.w1.begin(), rep.w1.end(), 0.0);
    const double modulus = bins == 1 ? 1.0 : 1.0 / (bins - 1);  // twice the bin radius
    return 2.0 * total * modulus;
}

double entropy_decomposition_check(double a, double b, double p_a, double p_b) {
    if (a < 0.0 || b < 0.0) throw DomainError("masses must be nonnegative");
    for (double p : {p_a, p_b})
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("posterior outside [0,1]");
    const double mass = a + b;
    if (mass <= 0.0) return 0.0;

    const auto e = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    const double s = a * p_a + b * p_b;
    const double t = a * (1.0 - p_a) + b * (1.0 - p_b);
    const double lhs = mass * h_eval(ObjectiveKind::Entropy, s / mass);
    const double rhs = -(e(s) + e(t) - e(mass));
    return std::abs(lhs - rhs);
}

}  // namespace mifpo
