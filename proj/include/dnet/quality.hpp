#pragma once

// Quality parameters of base-2 digital nets.
//
// All of t, t_d, t_u and t*_u have the form m + 1 - K where K is the smallest
// depth |k| at which some C_{u,k} in the relevant family loses full row rank.
// Rank deficiency is monotone in k (adding rows never restores independence),
// so K is found by binary search over a depth predicate.

#include <cstdint>
#include <map>
#include <vector>

#include "dnet/netgen.hpp"

namespace dnet {

int t_value(const GeneratorSet& g);
// Restricted to subsets of size at most d.
int t_d(const GeneratorSet& g, int d);
// k >= 1 componentwise; equals m + 1 - |u| when C_{u,1} is rank-deficient (may be negative).
int t_star_u(const GeneratorSet& g, const std::vector<int>& u);
// max over nonempty v of u of t*_v.
int t_u(const GeneratorSet& g, const std::vector<int>& u);
// From the definition: min |k| over k in N_0^{|u|}.
int t_u_direct(const GeneratorSet& g, const std::vector<int>& u);

// Smallest |k| with k >= 1 on u whose C_{u,k} is rank-deficient, together with
// the first such k in lexicographic order.
struct DeficientDepth {
    int depth = 0;
    std::vector<int> k;
};
DeficientDepth min_deficient_positive(const GeneratorSet& g, const std::vector<int>& u);

// ceil(log2 max_c #{i : x_i in E(k, c)}), k has one entry per coordinate.
int microstructure_A(const NetPoints& p, const std::vector<int>& k);
// max over compositions of K into dims parts, each part capped at the point precision.
int microstructure_AK(const NetPoints& p, int K);

// True iff every elementary interval with |k| <= m - t holds exactly 2^{m-|k|} points,
// where n = 2^m. Works on points of any precision (bits >= m).
bool verify_net_by_counting(const NetPoints& p, int t);
// Smallest t in [0, m] accepted by verify_net_by_counting.
int min_t_by_counting(const NetPoints& p);

struct QualityOptions {
    // A_K is reported for 0 <= K <= max_K; negative means m.
    int max_K = -1;
    // Per-subset tables need 2^s - 1 subsets; above 16 dimensions they are skipped unless set.
    bool all_subsets = false;
};

struct SubsetValue {
    std::vector<int> u;
    int value = 0;
};

struct QualityReport {
    int m = 0;
    int dims = 0;
    int t = 0;
    std::vector<int> t_d;  // t_d[d-1]
    bool subsets_computed = false;
    std::vector<SubsetValue> t_u;
    std::vector<SubsetValue> t_star_u;
    int t_star_full = 0;
    std::vector<int> a_k;  // a_k[K]
};

QualityReport compute_quality(const GeneratorSet& g, const QualityOptions& opts = {});

// Nonempty subsets of {0..dims-1}, ordered by size then lexicographically.
std::vector<std::vector<int>> all_subsets(int dims);
std::vector<int> full_set(int dims);

}  // namespace dnet
