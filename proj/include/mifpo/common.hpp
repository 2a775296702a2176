#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mifpo {

// Error taxonomy. The CLI maps these onto exit codes, so library code
// should throw the most specific type that applies.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Seeded RNG with explicitly-coded transforms so that a given seed yields
// the same stream on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller.
    double normal();

    // Uniform integer on [lo, hi], inclusive, rejection-sampled.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Flat Dirichlet draw: a uniform point on the probability simplex.
    // All entries strictly positive.
    std::vector<double> simplex(std::size_t n);

private:
    std::mt19937_64 gen_;
};

inline double Rng::normal() {
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
}

inline std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw DomainError("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    if (span == 0) return static_cast<std::int64_t>(gen_());  // full 64-bit range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return lo + static_cast<std::int64_t>(x % span);
}

inline std::vector<double> Rng::simplex(std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& v : w) {
        double u = uniform();
        if (u > 1.0 - 1e-16) u = 1.0 - 1e-16;
        v = -std::log1p(-u);
        if (v < 1e-300) v = 1e-300;
        total += v;
    }
    for (auto& v : w) v /= total;
    return w;
}

}  // namespace mifpo
