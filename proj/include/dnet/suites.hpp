#pragma once

// Randomized property sweeps that cross-check the exact gain, rank and
// counting code paths against each other.

#include <cstdint>
#include <string>
#include <vector>

#include "dnet/netgen.hpp"

namespace dnet {

struct SuiteOptions {
    int max_m = 6;
    int max_s = 4;
    int trials = 1000;
    std::uint64_t seed = 1;
    int threads = 1;
    // Scramble seeds per net for net-preservation.
    int scramble_seeds = 4;
};

struct NetCheck {
    std::uint64_t checks = 0;
    std::vector<std::string> problems;
};

struct SuiteFailure {
    std::size_t trial = 0;
    std::string generators;  // RAW text of the failing net
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    int nets = 0;
    std::uint64_t checks = 0;
    std::uint64_t failure_count = 0;
    std::vector<SuiteFailure> failures;  // first kMaxReportedFailures only

    bool passed() const noexcept { return failure_count == 0; }
};

inline constexpr std::size_t kMaxReportedFailures = 50;

// power-of-two, bound-chain, zero-region, t-crosscheck, max-gain, net-preservation.
const std::vector<std::string>& suite_names();

// Net number `trial` of a sweep: s in [1, max_s], m in [min(2, max_m), max_m], and a
// style cycling through uniform, unit upper triangular and degenerate matrices.
GeneratorSet random_generators(std::uint64_t seed, std::size_t trial, int max_s, int max_m);

// Runs one suite on one net. `seed` drives scrambling in net-preservation.
NetCheck check_net(const std::string& suite, const GeneratorSet& g, std::uint64_t seed, int scramble_seeds = 4);

// "all" expands to every suite. Throws ValidationError for unknown names.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& suites, const SuiteOptions& opts);

}  // namespace dnet
