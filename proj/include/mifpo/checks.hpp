#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mifpo {

// Randomized property suites, shared by the CLI `check` command and the
// acceptance tests. Each returns counts instead of throwing so callers can
// report every suite before failing.
struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    double worst = 0.0;  // largest residual / violation observed
    std::string note;

    bool pass() const { return failures == 0; }
};

// Objective concavity along random feasible segments.
SuiteResult check_concavity(std::uint64_t seed, int probes);

// Equality witness round-trip: budget = TV exactly, residual <= 1e-12.
SuiteResult check_witness(std::uint64_t seed, int pairs);

// Mixture-entropy split identity, random + boundary probes.
SuiteResult check_entropy(std::uint64_t seed, int probes);

// Every representation costs at least the identity baseline.
SuiteResult check_data_processing(std::uint64_t seed, int samples);

// Atom splitting: output invertible, fairness exact, error non-increasing.
SuiteResult check_split(std::uint64_t seed, int reps);

// Posterior-collision merging preserves atom marginals and posteriors.
SuiteResult check_factorise(std::uint64_t seed, int reps);

// Two-point bin compression: fairness never grows, error within the
// modulus bound, masses preserved.
SuiteResult check_compress(std::uint64_t seed, int reps);

// Heuristic solver against exhaustive vertex enumeration on tiny
// instances, gamma in {0, 0.3, 0.7, 1}.
SuiteResult check_oracle(std::uint64_t seed, int instances);

// Every group-threshold classifier sits on or above the computed front.
SuiteResult check_dominance(std::uint64_t seed, int instances);

std::vector<SuiteResult> run_all_checks(std::uint64_t seed);

}  // namespace mifpo
