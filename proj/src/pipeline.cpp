#include "mifpo/pipeline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace mifpo {

namespace {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

constexpr double kRidge = 1e-4;
constexpr double kProbClamp = 1e-6;

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    return out;
}

double parse_number(const std::string& s, std::size_t row, const std::string& col) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ", column '" + col +
                         "': '" + s + "' is not a number");
    }
}

int parse_binary(const std::string& s, std::size_t row, const std::string& col) {
    const double v = parse_number(s, row, col);
    if (v == 0.0) return 0;
    if (v == 1.0) return 1;
    throw ParseError("row " + std::to_string(row) + ", column '" + col +
                     "': expected 0 or 1, got '" + s + "'");
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& sensitive_col,
                 const std::string& label_col) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");

    const std::vector<std::string> header = split_line(line);
    long a_col = -1, y_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == sensitive_col) a_col = static_cast<long>(i);
        if (header[i] == label_col) y_col = static_cast<long>(i);
    }
    if (a_col < 0) throw ParseError("column '" + sensitive_col + "' not found in '" + path + "'");
    if (y_col < 0) throw ParseError("column '" + label_col + "' not found in '" + path + "'");
    if (a_col == y_col) throw ParseError("sensitive and label columns coincide");

    Dataset data;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (static_cast<long>(i) != a_col && static_cast<long>(i) != y_col)
            data.feature_names.push_back(header[i]);

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw ParseError("row " + std::to_string(row) + " has " +
                             std::to_string(cells.size()) + " cells, header has " +
                             std::to_string(header.size()));
        std::vector<double> feats;
        feats.reserve(header.size() - 2);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (static_cast<long>(i) == a_col)
                data.a.push_back(parse_binary(cells[i], row, sensitive_col));
            else if (static_cast<long>(i) == y_col)
                data.y.push_back(parse_binary(cells[i], row, label_col));
            else
                feats.push_back(parse_number(cells[i], row, header[i]));
        }
        data.x.push_back(std::move(feats));
    }
    if (data.n() < 2) throw ParseError("'" + path + "' holds fewer than 2 data rows");
    return data;
}

void save_csv(const Dataset& data, const std::string& path, const std::string& sensitive_col,
              const std::string& label_col) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    for (std::size_t d = 0; d < data.dim(); ++d) {
        if (d < data.feature_names.size())
            out << data.feature_names[d] << ',';
        else
            out << 'x' << d << ',';
    }
    out << sensitive_col << ',' << label_col << '\n';
    char buf[64];
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (double v : data.x[i]) {
            std::snprintf(buf, sizeof buf, "%.12g", v);
            out << buf << ',';
        }
        out << data.a[i] << ',' << data.y[i] << '\n';
    }
}

Dataset synthetic_generate(std::size_t n, std::uint64_t seed, const SyntheticSpec& spec) {
    if (n < 2) throw DomainError("need at least 2 rows");
    if (!(spec.alpha0 > 0.0 && spec.alpha0 < 1.0))
        throw DomainError("alpha0 must lie strictly inside (0,1)");
    if (spec.group0.weights.size() != spec.group1.weights.size())
        throw ShapeError("group truths must share the feature dimension");

    const std::size_t d = spec.group0.weights.size();
    Rng rng(seed);
    Dataset data;
    data.x.reserve(n);
    data.a.reserve(n);
    data.y.reserve(n);
    for (std::size_t i = 0; i < d; ++i) data.feature_names.push_back("x" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> feats(d);
        for (auto& f : feats) f = rng.normal();
        const int a = rng.uniform() < spec.alpha0 ? 0 : 1;
        const GroupTruth& g = a == 0 ? spec.group0 : spec.group1;
        double t = g.intercept;
        for (std::size_t j = 0; j < d; ++j) t += g.weights[j] * feats[j];
        const int y = rng.uniform() < sigmoid(t) ? 1 : 0;
        data.x.push_back(std::move(feats));
        data.a.push_back(a);
        data.y.push_back(y);
    }
    return data;
}

double IsotonicFn::operator()(double s) const {
    if (breakpoints.empty()) throw DomainError("empty isotonic function");
    // last breakpoint <= s, flat extrapolation on both ends
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
    if (it == breakpoints.begin()) return values.front();
    return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

IsotonicFn pava_isotonic(std::vector<std::pair<double, double>> pairs) {
    if (pairs.empty()) throw ShapeError("pava_isotonic needs at least one pair");
    std::sort(pairs.begin(), pairs.end());

    // Merge exactly-equal scores.
    std::vector<double> score, target, weight;
    for (const auto& [s, t] : pairs) {
        if (!score.empty() && score.back() == s) {
            const double w = weight.back();
            target.back() = (target.back() * w + t) / (w + 1.0);
            weight.back() = w + 1.0;
        } else {
            score.push_back(s);
            target.push_back(t);
            weight.push_back(1.0);
        }
    }

    // Pool adjacent violators: stack of blocks with weighted means.
    struct Block {
        double mean, weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < score.size(); ++i) {
        Block b{target[i], weight[i], 1};
        while (!blocks.empty() && blocks.back().mean >= b.mean) {
            const Block& prev = blocks.back();
            b.mean = (prev.mean * prev.weight + b.mean * b.weight) / (prev.weight + b.weight);
            b.weight += prev.weight;
            b.count += prev.count;
            blocks.pop_back();
        }
        blocks.push_back(b);
    }

    IsotonicFn fn;
    fn.breakpoints = std::move(score);
    fn.values.reserve(fn.breakpoints.size());
    for (const Block& b : blocks)
        fn.values.insert(fn.values.end(), b.count, b.mean);
    return fn;
}

double LogisticModel::raw_score(const std::vector<double>& features) const {
    if (features.size() != weights.size())
        throw ShapeError("feature dimension disagrees with the model");
    double t = intercept;
    for (std::size_t j = 0; j < weights.size(); ++j) t += weights[j] * features[j];
    return sigmoid(t);
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
    if (x.size() != y.size()) throw ShapeError("row/label counts disagree");
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("need at least 2 rows to fit");
    const std::size_t d = x.front().size();
    for (const auto& row : x)
        if (row.size() != d) throw ShapeError("ragged feature rows");

    const double label_mean =
        std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    LogisticModel model;
    model.weights.assign(d, 0.0);
    if (label_mean <= 0.0 || label_mean >= 1.0) {
        const double p = std::min(1.0 - kProbClamp, std::max(kProbClamp, label_mean));
        model.intercept = std::log(p / (1.0 - p));
        return model;
    }

    // Standardize internally; coefficients are mapped back at the end.
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<long>(d));
    Eigen::VectorXd sd = Eigen::VectorXd::Zero(static_cast<long>(d));
    for (const auto& row : x)
        for (std::size_t j = 0; j < d; ++j) mean(static_cast<long>(j)) += row[j];
    mean /= static_cast<double>(n);
    for (const auto& row : x)
        for (std::size_t j = 0; j < d; ++j) {
            const double c = row[j] - mean(static_cast<long>(j));
            sd(static_cast<long>(j)) += c * c;
        }
    for (long j = 0; j < sd.size(); ++j)
        sd(j) = sd(j) > 0.0 ? std::sqrt(sd(j) / static_cast<double>(n)) : 1.0;

    Eigen::MatrixXd X(static_cast<long>(n), static_cast<long>(d) + 1);
    Eigen::VectorXd yy(static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i) {
        X(static_cast<long>(i), 0) = 1.0;
        for (std::size_t j = 0; j < d; ++j)
            X(static_cast<long>(i), static_cast<long>(j) + 1) =
                (x[i][j] - mean(static_cast<long>(j))) / sd(static_cast<long>(j));
        yy(static_cast<long>(i)) = y[i];
    }

    const auto penalized_loss = [&](const Eigen::VectorXd& theta) {
        const Eigen::VectorXd t = X * theta;
        double loss = 0.0;
        for (long i = 0; i < t.size(); ++i) {
            // -log likelihood, written to stay finite for large |t|
            const double ti = t(i);
            loss += ti > 0.0 ? std::log1p(std::exp(-ti)) + (1.0 - yy(i)) * ti
                             : std::log1p(std::exp(ti)) - yy(i) * ti;
        }
        return loss + 0.5 * kRidge * theta.squaredNorm();
    };

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<long>(d) + 1);
    double loss = penalized_loss(theta);
    model.converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        model.iterations = iter + 1;
        const Eigen::VectorXd t = X * theta;
        Eigen::VectorXd p(t.size()), w(t.size());
        for (long i = 0; i < t.size(); ++i) {
            p(i) = sigmoid(t(i));
            w(i) = std::max(p(i) * (1.0 - p(i)), 1e-10);
        }
        const Eigen::VectorXd grad = X.transpose() * (yy - p) - kRidge * theta;
        const Eigen::MatrixXd hess =
            X.transpose() * w.asDiagonal() * X +
            kRidge * Eigen::MatrixXd::Identity(theta.size(), theta.size());
        Eigen::VectorXd step = hess.ldlt().solve(grad);
        if (!step.allFinite()) step = grad;  // gradient fallback

        // Halve until the penalized loss improves.
        double scale = 1.0;
        Eigen::VectorXd next = theta + step;
        double next_loss = penalized_loss(next);
        for (int h = 0; h < 30 && !(next_loss <= loss + 1e-12); ++h) {
            scale *= 0.5;
            next = theta + scale * step;
            next_loss = penalized_loss(next);
        }
        const double move = (next - theta).lpNorm<Eigen::Infinity>();
        theta = next;
        loss = next_loss;
        if (move <= 1e-8) {
            model.converged = true;
            break;
        }
    }

    model.intercept = theta(0);
    for (std::size_t j = 0; j < d; ++j) {
        model.weights[j] = theta(static_cast<long>(j) + 1) / sd(static_cast<long>(j));
        model.intercept -= model.weights[j] * mean(static_cast<long>(j));
    }
    return model;
}

CalibratedModel fit_calibrated(const Dataset& train) {
    CalibratedModel model;
    for (int g = 0; g < 2; ++g) {
        std::vector<std::vector<double>> gx;
        std::vector<int> gy;
        for (std::size_t i = 0; i < train.n(); ++i)
            if (train.a[i] == g) {
                gx.push_back(train.x[i]);
                gy.push_back(train.y[i]);
            }
        if (gx.size() < 2)
            throw DomainError("group " + std::to_string(g) + " has fewer than 2 training rows");
        model.logistic[g] = fit_logistic(gx, gy);
        std::vector<std::pair<double, double>> pairs;
        pairs.reserve(gx.size());
        for (std::size_t i = 0; i < gx.size(); ++i)
            pairs.emplace_back(model.logistic[g].raw_score(gx[i]), static_cast<double>(gy[i]));
        model.isotonic[g] = pava_isotonic(std::move(pairs));
    }
    return model;
}

std::vector<double> predict_calibrated(const CalibratedModel& model, const Dataset& rows) {
    std::vector<double> out;
    out.reserve(rows.n());
    for (std::size_t i = 0; i < rows.n(); ++i) {
        const int g = rows.a[i];
        double s = model.isotonic[g](model.logistic[g].raw_score(rows.x[i]));
        out.push_back(std::min(1.0, std::max(0.0, s)));
    }
    return out;
}

double expected_calibration_error(const std::vector<double>& predictions,
                                  const std::vector<int>& labels, int bins) {
    if (predictions.size() != labels.size()) throw ShapeError("prediction/label counts disagree");
    if (predictions.empty()) throw ShapeError("nothing to calibrate against");
    if (bins < 1) throw DomainError("bins must be >= 1");
    std::vector<double> pred_sum(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> label_sum(static_cast<std::size_t>(bins), 0.0);
    std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double p = predictions[i];
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("prediction outside [0,1]");
        auto b = static_cast<std::size_t>(std::min<double>(bins - 1, std::floor(p * bins)));
        pred_sum[b] += p;
        label_sum[b] += labels[i];
        ++count[b];
    }
    double ece = 0.0;
    const double n = static_cast<double>(predictions.size());
    for (std::size_t b = 0; b < count.size(); ++b)
        if (count[b] > 0)
            ece += (static_cast<double>(count[b]) / n) *
                   std::abs((pred_sum[b] - label_sum[b]) / static_cast<double>(count[b]));
    return ece;
}

GroupHistogram build_histograms(const std::vector<double>& scores, int levels) {
    if (levels < 2) throw DomainError("need at least 2 histogram levels");
    if (scores.empty()) throw DomainError("empty group");
    std::vector<std::size_t> count(static_cast<std::size_t>(levels), 0);
    for (double s : scores) {
        if (!(s >= 0.0 && s <= 1.0)) throw DomainError("score outside [0,1]");
        const double t = s * (levels - 1);
        auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil(t - 0.5)));
        idx = std::min(idx, static_cast<std::size_t>(levels - 1));
        ++count[idx];
    }
    GroupHistogram hist;
    for (int l = 0; l < levels; ++l) {
        const auto c = count[static_cast<std::size_t>(l)];
        if (c == 0) continue;
        hist.centers.push_back(static_cast<double>(l) / (levels - 1));
        hist.weights.push_back(static_cast<double>(c) / static_cast<double>(scores.size()));
    }
    const double total = std::accumulate(hist.weights.begin(), hist.weights.end(), 0.0);
    for (double& w : hist.weights) w /= total;
    return hist;
}

MifpoInstance build_instance(const Dataset& rows, const CalibratedModel& model, int levels,
                             int atoms, ObjectiveKind objective) {
    if (atoms < 1) throw DomainError("atoms must be >= 1");
    const std::vector<double> scores = predict_calibrated(model, rows);
    std::vector<double> s0, s1;
    for (std::size_t i = 0; i < rows.n(); ++i)
        (rows.a[i] == 0 ? s0 : s1).push_back(scores[i]);
    if (s0.empty() || s1.empty()) throw DomainError("a group is empty");

    MifpoInstance inst;
    inst.alpha0 = static_cast<double>(s0.size()) / static_cast<double>(rows.n());
    GroupHistogram h0 = build_histograms(s0, levels);
    GroupHistogram h1 = build_histograms(s1, levels);
    inst.rho0 = std::move(h0.centers);
    inst.beta0 = std::move(h0.weights);
    inst.rho1 = std::move(h1.centers);
    inst.beta1 = std::move(h1.weights);
    inst.k = atoms;
    inst.objective = objective;
    return finalize_instance(std::move(inst));
}

DataSplit split_dataset(const Dataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DomainError("train fraction must lie strictly inside (0,1)");
    const std::size_t n = data.n();
    if (n < 4) throw DomainError("too few rows to split");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
        std::swap(order[i], order[j]);
    }
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    n_train = std::min(n - 1, std::max<std::size_t>(1, n_train));

    DataSplit split;
    split.train.feature_names = data.feature_names;
    split.eval.feature_names = data.feature_names;
    for (std::size_t i = 0; i < n; ++i) {
        Dataset& part = i < n_train ? split.train : split.eval;
        part.x.push_back(data.x[order[i]]);
        part.a.push_back(data.a[order[i]]);
        part.y.push_back(data.y[order[i]]);
    }
    return split;
}

}  // namespace mifpo
