#pragma once

// Randomization of digital nets and replicated RQMC estimation.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnet/gains.hpp"
#include "dnet/netgen.hpp"

namespace dnet {

enum class ScrambleKind { RandomLinear, NestedUniform, DigitalShift };

const char* to_string(ScrambleKind kind);
ScrambleKind parse_scramble_kind(const std::string& name);

struct ScrambleSpec {
    ScrambleKind kind = ScrambleKind::RandomLinear;
    int output_bits = 32;  // in [input bits, 64]
    std::uint64_t seed = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
// Seed of replicate r: base ^ r.
inline std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t r) noexcept { return base ^ r; }

// Output numerators carry spec.output_bits bits. Every kind maps the first k
// input digits of a coordinate bijectively onto the first k output digits, so
// elementary-interval counts are preserved.
NetPoints scramble(const NetPoints& p, const ScrambleSpec& spec);

// Points in [0,1)^s: numerator / 2^bits plus, when offset_seed is set, a uniform
// offset inside the 2^-bits cell.
std::vector<double> to_unit(const NetPoints& p, std::optional<std::uint64_t> offset_seed);

// amplitude * prod_{j in u} psi(2^{k_j} x_j mod 1), psi = +1 on [0,1/2), -1 on [1/2,1).
struct HaarIntegrand {
    std::vector<int> u;
    std::vector<int> k;
    double amplitude = 1.0;

    double operator()(std::span<const double> x) const;
    // Sign of the product read from the numerator bits; needs k_j < bits.
    int sign(const NetPoints& p, std::size_t i) const;
};

using Integrand = std::function<double(std::span<const double>)>;

struct RqmcEstimate {
    double mean = 0.0;
    double variance_of_mean = 0.0;  // unbiased variance of the replicate means / R
    int replicates = 0;
    std::vector<double> per_replicate_means;
};

// R independent scrambles with seeds replicate_seed(spec.seed, r).
// Throws ValidationError if f returns a non-finite value.
RqmcEstimate estimate(const NetPoints& p, const ScrambleSpec& spec, const Integrand& f, int replicates, int threads = 1);

struct GainIdentityReport {
    SubsetIndex idx;
    GainValue expected;
    double empirical_n_var = 0.0;
    double mc_se = 0.0;
    bool pass = false;
    int replicates = 0;
    ScrambleKind kind = ScrambleKind::RandomLinear;
    // Set when a random-linear run failed and was repeated under nested uniform scrambling.
    std::optional<double> nested_n_var;
    std::optional<double> nested_mc_se;
    std::optional<bool> nested_pass;
};

// n * var of replicate means of HaarIntegrand(u, k, 1) against gain_fast(G, idx).
// Passes when the two agree within 3 Monte Carlo standard errors of the variance estimate.
GainIdentityReport verify_gain_identity(const GeneratorSet& g, const SubsetIndex& idx, int replicates,
                                        const ScrambleSpec& spec, int threads = 1);

}  // namespace dnet
