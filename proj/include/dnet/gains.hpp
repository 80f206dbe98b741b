#pragma once

// Gain coefficients of scrambled base-2 digital nets.
//
// Every gain coefficient is 0 or 2^{m - rank(C_{u,k})}, and it is nonzero
// exactly when the sum of the next rows of C_j (j in u) lies in the row space
// of C_{u,k}. gain_fast uses that criterion; gain_bruteforce and
// gain_representation are slower exact evaluations used as cross-checks.

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dnet/netgen.hpp"

namespace dnet {

// Gain as log2 with a sentinel for zero.
class GainValue {
public:
    static constexpr int kZeroLog2 = std::numeric_limits<int>::min();

    constexpr GainValue() = default;
    static constexpr GainValue zero() { return GainValue(); }
    static constexpr GainValue pow2(int log2) { return GainValue(log2); }

    constexpr bool is_zero() const noexcept { return log2_ == kZeroLog2; }
    constexpr int log2() const noexcept { return log2_; }
    std::uint64_t value() const noexcept { return is_zero() ? 0 : std::uint64_t{1} << log2_; }

    friend constexpr auto operator<=>(const GainValue&, const GainValue&) = default;

private:
    constexpr explicit GainValue(int log2) : log2_(log2) {}
    int log2_ = kZeroLog2;
};

// Exact rational num/den with den > 0, reduced.
struct Rational {
    __int128 num = 0;
    __int128 den = 1;

    static Rational make(__int128 num, __int128 den);
    bool operator==(const Rational&) const = default;
    bool is_integer() const noexcept { return den == 1; }
    bool equals(GainValue g) const;
    std::string to_string() const;
};

GainValue gain_fast(const GeneratorSet& g, const SubsetIndex& idx);
// Double sum over point pairs of prod_j N_{i,i',j}, divided by n.
Rational gain_bruteforce(const NetPoints& p, const SubsetIndex& idx);
// Signed count over the nullspace of C_{u,k}, bucketed by the next-row image.
// Throws ResourceError if the nullspace has more than 2^24 elements.
Rational gain_representation(const GeneratorSet& g, const SubsetIndex& idx);

struct MaxGain {
    GainValue gamma;
    SubsetIndex witness;
    // First rows of some C_{u,1} are dependent, so the maximum is 2^m.
    bool degenerate = false;
    int t_star_full = 0;
};
MaxGain max_gain(const GeneratorSet& g);

// Upper bounds on Gamma_{u,k}, as log2 values clamped to m.
struct GainBounds {
    int rank_log2 = 0;                // m - rank(C_{u,k})
    int t_log2 = 0;                   // t + |u| - 1
    int t_u_log2 = 0;                 // t_u + |u| - 1
    std::optional<int> t_star_log2;   // t*_u + |u| - 1, only when C_{u,1} has full row rank
};
GainBounds gain_bounds(const GeneratorSet& g, const SubsetIndex& idx);

struct GainEntry {
    SubsetIndex idx;
    GainValue gain;
    int rank = 0;
};

struct EnumerateOptions {
    int max_depth = 0;
    // Subsets to visit; empty means all nonempty subsets.
    std::vector<std::vector<int>> u_filter;
    // Maximum number of (u, k) visits before the report is truncated.
    std::uint64_t budget = 50'000'000;
    int threads = 1;
};

struct GainReport {
    int m = 0;
    int dims = 0;
    int max_depth = 0;
    std::vector<GainEntry> entries;  // nonzero gains, sorted by (|u|, u, |k|, k)
    std::uint64_t visited = 0;
    bool truncated = false;
    GainValue gamma_max;
    std::optional<SubsetIndex> attaining;
    int t = 0;
    int t_star_full = 0;
    GainValue theoretical_max;   // max_gain(G)
    bool theoretical_attained = false;
    int bound_violations = 0;
};

GainReport enumerate_gains(const GeneratorSet& g, const EnumerateOptions& opts);

}  // namespace dnet
