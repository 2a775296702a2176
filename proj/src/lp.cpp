#include "mifpo/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mifpo {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;
// Consecutive non-improving pivots tolerated before Bland's rule engages.
constexpr int kStallLimit = 40;

}  // namespace

ReducedSystem reduce_equalities(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                double pivot_tol) {
    const long m = A.rows(), n = A.cols();
    if (b.size() != m) throw ShapeError("reduce_equalities: A rows != b length");
    Eigen::MatrixXd M(m, n + 1);
    M.leftCols(n) = A;
    M.col(n) = b;

    int rank = 0;
    for (long col = 0; col < n && rank < m; ++col) {
        long piv = -1;
        double best = pivot_tol;
        for (long r = rank; r < m; ++r) {
            const double a = std::abs(M(r, col));
            if (a > best) {
                best = a;
                piv = r;
            }
        }
        if (piv < 0) continue;
        M.row(rank).swap(M.row(piv));
        const Eigen::RowVectorXd pivot_row = M.row(rank) / M(rank, col);
        for (long r = 0; r < m; ++r) {
            if (r == rank) continue;
            const double f = M(r, col);
            if (f != 0.0) M.row(r) -= f * pivot_row;
        }
        ++rank;
    }

    ReducedSystem out;
    out.rank = rank;
    out.A = M.topLeftCorner(rank, n);
    out.b = M.col(n).head(rank);
    for (long r = rank; r < m; ++r)
        if (std::abs(M(r, n)) > kFeasTol) out.consistent = false;
    return out;
}

namespace {

struct Tableau {
    Eigen::MatrixXd t;       // m+1 rows; last row holds reduced costs, last col rhs
    std::vector<int> basis;  // size m
    long m, width;           // width = column count excluding rhs
    int pivots = 0;

    double rhs(long r) const { return t(r, width); }

    void pivot(long row, long col) {
        t.row(row) /= t(row, col);
        for (long r = 0; r <= m; ++r) {
            if (r == row) continue;
            const double f = t(r, col);
            if (f != 0.0) t.row(r) -= f * t.row(row);
        }
        basis[static_cast<std::size_t>(row)] = static_cast<int>(col);
        ++pivots;
    }

    // Minimizes the current cost row over columns [0, allowed). Returns false
    // only on unboundedness.
    bool run(long allowed) {
        int stall = 0;
        const long pivot_cap = 2000 + 200 * (m + width);
        while (true) {
            if (pivots > pivot_cap) throw SolveError("simplex exceeded pivot budget");
            long enter = -1;
            if (stall < kStallLimit) {
                double best = -kPivotTol;
                for (long j = 0; j < allowed; ++j)
                    if (t(m, j) < best) {
                        best = t(m, j);
                        enter = j;
                    }
            } else {  // Bland: first eligible index
                for (long j = 0; j < allowed; ++j)
                    if (t(m, j) < -kPivotTol) {
                        enter = j;
                        break;
                    }
            }
            if (enter < 0) return true;

            long leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (long r = 0; r < m; ++r) {
                const double a = t(r, enter);
                if (a <= kPivotTol) continue;
                const double ratio = std::max(rhs(r), 0.0) / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && leave >= 0 &&
                     basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave < 0) return false;  // unbounded ray

            const double before = t(m, width);
            pivot(leave, enter);
            stall = t(m, width) > before + 1e-12 ? 0 : stall + 1;
        }
    }
};

// Build a phase-1 tableau for the reduced system and drive the artificials
// out of the basis. Leaves `tab` at a feasible vertex; returns false when
// the system is infeasible.
bool cold_start(Tableau& tab, const ReducedSystem& red) {
    const long m = red.rank, n = red.A.cols();
    tab.m = m;
    tab.width = n + m;  // original columns then artificials
    tab.pivots = 0;
    tab.t.setZero(m + 1, tab.width + 1);
    tab.basis.resize(static_cast<std::size_t>(m));
    for (long r = 0; r < m; ++r) {
        const double sign = red.b(r) < 0.0 ? -1.0 : 1.0;
        tab.t.block(r, 0, 1, n) = sign * red.A.row(r);
        tab.t(r, n + r) = 1.0;
        tab.t(r, tab.width) = sign * red.b(r);
        tab.basis[static_cast<std::size_t>(r)] = static_cast<int>(n + r);
    }
    // Phase 1 cost row: minimize the artificial total.
    for (long j = 0; j < n; ++j) tab.t(m, j) = -tab.t.col(j).head(m).sum();
    tab.t(m, tab.width) = -tab.t.col(tab.width).head(m).sum();

    if (!tab.run(n)) throw SolveError("phase 1 reported an unbounded ray");
    if (-tab.t(m, tab.width) > 1e-7) return false;

    // Drive any zero-level artificials out of the basis.
    for (long r = 0; r < m; ++r) {
        if (tab.basis[static_cast<std::size_t>(r)] < n) continue;
        long best_col = -1;
        double best = 1e-10;
        for (long j = 0; j < n; ++j) {
            const double a = std::abs(tab.t(r, j));
            if (a > best) {
                best = a;
                best_col = j;
            }
        }
        if (best_col < 0) throw SolveError("could not displace artificial from basis");
        tab.pivot(r, best_col);
    }

    // The artificials are gone for good; dropping their columns shaves the
    // dead width off every later row operation.
    Eigen::MatrixXd slim(m + 1, n + 1);
    slim.leftCols(n) = tab.t.leftCols(n);
    slim.col(n) = tab.t.col(tab.width);
    tab.t = std::move(slim);
    tab.width = n;
    return true;
}

// Re-price the tableau's cost row for `c`, optimize from the vertex the
// tableau currently sits at, and extract the solution.
LpSolution price_and_run(Tableau& tab, const ReducedSystem& red, const Eigen::VectorXd& c) {
    const long m = tab.m, n = red.A.cols();
    tab.pivots = 0;
    tab.t.row(m).setZero();
    for (long j = 0; j < n; ++j) tab.t(m, j) = c(j);
    for (long r = 0; r < m; ++r) {
        const int bj = tab.basis[static_cast<std::size_t>(r)];
        if (bj >= n) continue;
        const double cb = c(bj);
        if (cb != 0.0) tab.t.row(m) -= cb * tab.t.row(r);
    }

    LpSolution sol;
    if (!tab.run(n)) {
        sol.status = LpStatus::Unbounded;
        sol.pivots = tab.pivots;
        return sol;
    }

    sol.x = Eigen::VectorXd::Zero(n);
    for (long r = 0; r < m; ++r) sol.x(tab.basis[static_cast<std::size_t>(r)]) = tab.rhs(r);
    sol.objective = c.dot(sol.x);
    sol.basis.assign(tab.basis.begin(), tab.basis.end());
    sol.pivots = tab.pivots;
    sol.status = LpStatus::Optimal;

    const double resid = (red.A * sol.x - red.b).lpNorm<Eigen::Infinity>();
    const double low = sol.x.minCoeff();
    if (resid > kFeasTol || low < -1e-9)
        throw SolveError("simplex lost feasibility (residual " + std::to_string(resid) +
                         ", min entry " + std::to_string(low) + ")");
    return sol;
}

}  // namespace

LpSolution solve_lp(const LpProblem& p) {
    const long n = p.A.cols();
    if (p.c.size() != n) throw ShapeError("solve_lp: cost length != column count");

    const ReducedSystem red = reduce_equalities(p.A, p.b, 1e-10);
    LpSolution sol;
    if (!red.consistent) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }
    Tableau tab;
    if (!cold_start(tab, red)) {
        sol.status = LpStatus::Infeasible;
        sol.pivots = tab.pivots;
        return sol;
    }
    return price_and_run(tab, red, p.c);
}

struct ReusableLp::Impl {
    ReducedSystem red;
    Tableau tab;
    Tableau tab0;        // snapshot of the first feasible vertex, for rewind()
    bool ready = false;  // tableau currently holds a feasible vertex
    bool have0 = false;
    bool infeasible = false;
};

ReusableLp::ReusableLp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
    : impl_(std::make_unique<Impl>()) {
    impl_->red = reduce_equalities(A, b, 1e-10);
    impl_->infeasible = !impl_->red.consistent;
}

ReusableLp::~ReusableLp() = default;
ReusableLp::ReusableLp(ReusableLp&&) noexcept = default;
ReusableLp& ReusableLp::operator=(ReusableLp&&) noexcept = default;

LpSolution ReusableLp::minimize(const Eigen::VectorXd& c) {
    Impl& s = *impl_;
    if (c.size() != s.red.A.cols())
        throw ShapeError("ReusableLp: cost length != column count");
    LpSolution sol;
    if (s.infeasible) return sol;
    if (!s.ready) {
        if (!cold_start(s.tab, s.red)) {
            s.infeasible = true;
            return sol;
        }
        s.ready = true;
        if (!s.have0) {
            s.tab0 = s.tab;
            s.have0 = true;
        }
    }
    try {
        return price_and_run(s.tab, s.red, c);
    } catch (const SolveError&) {
        // numerical drift after many reuses: rebuild once from scratch
        s.ready = false;
        if (!cold_start(s.tab, s.red)) {
            s.infeasible = true;
            return sol;
        }
        s.ready = true;
        return price_and_run(s.tab, s.red, c);
    }
}

void ReusableLp::rewind() {
    Impl& s = *impl_;
    if (s.have0) {
        s.tab = s.tab0;
        s.ready = true;
    }
}

std::vector<VertexNeighbor> neighbor_vertices(const Eigen::MatrixXd& A,
                                              const Eigen::VectorXd& b,
                                              const std::vector<int>& basis) {
    const ReducedSystem red = reduce_equalities(A, b, 1e-10);
    const long m = red.rank, n = red.A.cols();
    if (static_cast<long>(basis.size()) != m)
        throw ShapeError("neighbor_vertices: basis size != system rank");

    Eigen::MatrixXd B(m, m);
    for (long i = 0; i < m; ++i) {
        const int j = basis[static_cast<std::size_t>(i)];
        if (j < 0 || j >= n) throw ShapeError("neighbor_vertices: basis index out of range");
        B.col(i) = red.A.col(j);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    const Eigen::MatrixXd T = lu.solve(red.A);   // B^{-1} A: edge directions per column
    const Eigen::VectorXd xb = lu.solve(red.b);  // basic values at the current point

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (long i = 0; i < m; ++i) x(basis[static_cast<std::size_t>(i)]) = xb(i);
    if ((red.A * x - red.b).lpNorm<Eigen::Infinity>() > kFeasTol) return {};  // bad basis

    std::vector<bool> basic(static_cast<std::size_t>(n), false);
    for (int j : basis) basic[static_cast<std::size_t>(j)] = true;

    std::vector<VertexNeighbor> out;
    for (long j = 0; j < n; ++j) {
        if (basic[static_cast<std::size_t>(j)]) continue;
        long leave = -1;
        double step = std::numeric_limits<double>::infinity();
        for (long r = 0; r < m; ++r) {
            const double a = T(r, j);
            if (a <= kPivotTol) continue;
            const double ratio = std::max(xb(r), 0.0) / a;
            if (ratio < step) {
                step = ratio;
                leave = r;
            }
        }
        if (leave < 0) continue;  // unbounded edge

        VertexNeighbor nb;
        nb.x = x;
        if (step > kPivotTol) {
            nb.x(j) = step;
            for (long r = 0; r < m; ++r)
                nb.x(basis[static_cast<std::size_t>(r)]) = xb(r) - step * T(r, j);
            if (nb.x.minCoeff() < -1e-9 ||
                (red.A * nb.x - red.b).lpNorm<Eigen::Infinity>() > kFeasTol)
                continue;
        }  // else: degenerate pivot, same point under a different basis
        nb.basis = basis;
        nb.basis[static_cast<std::size_t>(leave)] = static_cast<int>(j);
        out.push_back(std::move(nb));
    }
    return out;
}

}  // namespace mifpo
