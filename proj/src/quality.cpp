#include "dnet/quality.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "dnet/error.hpp"
#include "detail.hpp"

namespace dnet {

namespace {

// The family of C_{u,k} searched: k ranges over coords, each part >= min_part,
// at most max_nonzero parts positive.
struct Family {
    std::vector<int> coords;
    int min_part = 0;
    int max_nonzero = 0;
};

class DeficiencySearch {
public:
    DeficiencySearch(const GeneratorSet& g, Family f) : g_(g), f_(std::move(f)), k_(f_.coords.size(), 0) {}

    // Is some member of the family with |k| == depth rank-deficient? On success witness() holds it.
    bool exists(int depth) {
        const int p = static_cast<int>(f_.coords.size());
        if (depth < f_.min_part * p) return false;
        std::fill(k_.begin(), k_.end(), 0);
        return dfs(0, depth, gf2::EchelonBasis{}, 0);
    }

    const std::vector<int>& witness() const noexcept { return k_; }

    // Smallest depth with a deficient member; always <= max(lowest feasible depth, m + 1).
    int min_depth() {
        const int p = static_cast<int>(f_.coords.size());
        int lo = std::max(1, f_.min_part * p);
        int hi = std::max(lo, g_.m() + 1);
        while (lo < hi) {
            const int mid = lo + (hi - lo) / 2;
            if (exists(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        exists(lo);
        return lo;
    }

private:
    bool dfs(int pos, int remaining, const gf2::EchelonBasis& basis, int nonzero) {
        const int p = static_cast<int>(f_.coords.size());
        if (pos == p) return false;  // every row went in independently
        const int rest = p - pos - 1;
        const int j = f_.coords[static_cast<std::size_t>(pos)];
        const int max_here = remaining - f_.min_part * rest;
        const bool last = rest == 0;

        if (f_.min_part == 0 && (!last || remaining == 0)) {
            k_[static_cast<std::size_t>(pos)] = 0;
            if (dfs(pos + 1, remaining, basis, nonzero)) return true;
        }
        if (max_here < 1 || nonzero >= f_.max_nonzero) return false;

        gf2::EchelonBasis b = basis;
        for (int kj = 1; kj <= max_here; ++kj) {
            if (!b.insert(g_.row(j, kj - 1))) {
                // Already dependent; put the surplus rows on this coordinate.
                k_[static_cast<std::size_t>(pos)] = max_here;
                for (int q = pos + 1; q < p; ++q) k_[static_cast<std::size_t>(q)] = f_.min_part;
                return true;
            }
            if (last) continue;
            k_[static_cast<std::size_t>(pos)] = kj;
            if (dfs(pos + 1, remaining - kj, b, nonzero + 1)) return true;
        }
        return false;
    }

    const GeneratorSet& g_;
    Family f_;
    std::vector<int> k_;
};

void check_subset(const GeneratorSet& g, const std::vector<int>& u) {
    if (u.empty()) throw ValidationError("subset u must be nonempty");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0 || u[i] >= g.dims()) throw ValidationError("subset index out of range: " + std::to_string(u[i] + 1));
        if (i > 0 && u[i] <= u[i - 1]) throw ValidationError("subset u must be strictly increasing");
    }
}

int ceil_log2(std::uint64_t count) { return count <= 1 ? 0 : static_cast<int>(std::bit_width(count - 1)); }

int log2_exact(std::size_t n) {
    if (n == 0 || !std::has_single_bit(n)) throw ValidationError("point count must be a power of two");
    return std::countr_zero(n);
}

}  // namespace

std::vector<int> full_set(int dims) {
    std::vector<int> u(static_cast<std::size_t>(dims));
    std::iota(u.begin(), u.end(), 0);
    return u;
}

std::vector<std::vector<int>> all_subsets(int dims) {
    std::vector<std::vector<int>> out;
    for (int size = 1; size <= dims; ++size) {
        std::vector<int> c(static_cast<std::size_t>(size));
        std::iota(c.begin(), c.end(), 0);
        while (true) {
            out.push_back(c);
            int i = size - 1;
            while (i >= 0 && c[static_cast<std::size_t>(i)] == dims - size + i) --i;
            if (i < 0) break;
            ++c[static_cast<std::size_t>(i)];
            for (int q = i + 1; q < size; ++q) c[static_cast<std::size_t>(q)] = c[static_cast<std::size_t>(q - 1)] + 1;
        }
    }
    return out;
}

int t_value(const GeneratorSet& g) { return t_d(g, g.dims()); }

int t_d(const GeneratorSet& g, int d) {
    if (d < 1 || d > g.dims()) throw ValidationError("d must be in [1, s]");
    DeficiencySearch search(g, {full_set(g.dims()), 0, d});
    return g.m() + 1 - search.min_depth();
}

DeficientDepth min_deficient_positive(const GeneratorSet& g, const std::vector<int>& u) {
    check_subset(g, u);
    DeficiencySearch search(g, {u, 1, static_cast<int>(u.size())});
    DeficientDepth out;
    out.depth = search.min_depth();
    out.k = search.witness();
    return out;
}

int t_star_u(const GeneratorSet& g, const std::vector<int>& u) {
    return g.m() + 1 - min_deficient_positive(g, u).depth;
}

int t_u(const GeneratorSet& g, const std::vector<int>& u) {
    check_subset(g, u);
    if (u.size() > 30) throw ResourceError("t_u by subset maximization needs |u| <= 30");
    int best = t_star_u(g, u);
    const std::uint32_t full = (std::uint32_t{1} << u.size()) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        std::vector<int> v;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (mask & (1u << i)) v.push_back(u[i]);
        best = std::max(best, t_star_u(g, v));
    }
    return best;
}

int t_u_direct(const GeneratorSet& g, const std::vector<int>& u) {
    check_subset(g, u);
    DeficiencySearch search(g, {u, 0, static_cast<int>(u.size())});
    return g.m() + 1 - search.min_depth();
}

int microstructure_A(const NetPoints& p, const std::vector<int>& k) {
    if (p.n == 0) throw ValidationError("microstructure of an empty point set");
    if (static_cast<int>(k.size()) != p.dims) throw ValidationError("k must have one entry per coordinate");
    int total = 0;
    for (int kj : k) {
        if (kj < 0) throw ValidationError("depths must be nonnegative");
        total += std::min(kj, p.bits);
    }

    auto cell_word = [&](std::size_t i, int first, int last) {
        std::uint64_t key = 0;
        for (int j = first; j < last; ++j) {
            const int kj = std::min(k[static_cast<std::size_t>(j)], p.bits);
            if (kj == 0) continue;
            key = (kj == 64 ? 0 : key << kj) | (p.at(i, j) >> (p.bits - kj));
        }
        return key;
    };

    std::uint64_t best = 0;
    if (total <= 64) {
        std::vector<std::uint64_t> keys(p.n);
        for (std::size_t i = 0; i < p.n; ++i) keys[i] = cell_word(i, 0, p.dims);
        std::sort(keys.begin(), keys.end());
        for (std::size_t i = 0; i < keys.size();) {
            std::size_t e = i;
            while (e < keys.size() && keys[e] == keys[i]) ++e;
            best = std::max<std::uint64_t>(best, e - i);
            i = e;
        }
    } else {
        // One key word per coordinate.
        std::vector<std::vector<std::uint64_t>> keys(p.n);
        for (std::size_t i = 0; i < p.n; ++i)
            for (int j = 0; j < p.dims; ++j) keys[i].push_back(cell_word(i, j, j + 1));
        std::sort(keys.begin(), keys.end());
        for (std::size_t i = 0; i < keys.size();) {
            std::size_t e = i;
            while (e < keys.size() && keys[e] == keys[i]) ++e;
            best = std::max<std::uint64_t>(best, e - i);
            i = e;
        }
    }
    return ceil_log2(best);
}

int microstructure_AK(const NetPoints& p, int K) {
    if (K < 0) throw ValidationError("K must be nonnegative");
    const int cap = p.bits;
    if (K >= cap * p.dims) return microstructure_A(p, std::vector<int>(static_cast<std::size_t>(p.dims), cap));
    int best = 0;
    detail::for_each_composition(p.dims, K, cap, [&](const std::vector<int>& k) {
        best = std::max(best, microstructure_A(p, k));
        return true;
    });
    return best;
}

bool verify_net_by_counting(const NetPoints& p, int t) {
    const int m = log2_exact(p.n);
    if (t < 0 || t > m) throw ValidationError("t must be in [0, m]");
    if (p.bits < m) throw ValidationError("points carry fewer bits than log2(n)");
    bool ok = true;
    for (int depth = 0; depth <= m - t && ok; ++depth) {
        std::vector<std::uint32_t> counts(std::size_t{1} << depth);
        const std::uint64_t expected = p.n >> depth;
        detail::for_each_composition(p.dims, depth, depth, [&](const std::vector<int>& k) {
            std::fill(counts.begin(), counts.end(), 0);
            for (std::size_t i = 0; i < p.n; ++i) {
                std::uint64_t cell = 0;
                for (int j = 0; j < p.dims; ++j) {
                    const int kj = k[static_cast<std::size_t>(j)];
                    if (kj > 0) cell = (cell << kj) | (p.at(i, j) >> (p.bits - kj));
                }
                ++counts[cell];
            }
            for (auto c : counts) {
                if (c != expected) {
                    ok = false;
                    return false;
                }
            }
            return true;
        });
    }
    return ok;
}

int min_t_by_counting(const NetPoints& p) {
    const int m = log2_exact(p.n);
    for (int t = 0; t < m; ++t)
        if (verify_net_by_counting(p, t)) return t;
    return m;
}

QualityReport compute_quality(const GeneratorSet& g, const QualityOptions& opts) {
    QualityReport r;
    r.m = g.m();
    r.dims = g.dims();
    for (int d = 1; d <= g.dims(); ++d) r.t_d.push_back(t_d(g, d));
    r.t = r.t_d.back();
    r.t_star_full = t_star_u(g, full_set(g.dims()));

    if (g.dims() <= 16 || opts.all_subsets) {
        if (g.dims() > 30) throw ResourceError("per-subset tables need s <= 30");
        r.subsets_computed = true;
        const auto subsets = all_subsets(g.dims());
        // t_u[mask] = max(t*_mask, max over masks with one element removed).
        std::vector<int> tu(std::size_t{1} << g.dims(), 0);
        std::vector<int> ts(tu.size(), 0);
        std::vector<std::uint32_t> masks;
        for (const auto& u : subsets) {
            std::uint32_t mask = 0;
            for (int j : u) mask |= 1u << j;
            masks.push_back(mask);
            ts[mask] = t_star_u(g, u);
        }
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            const auto mask = masks[i];
            int best = ts[mask];
            for (int j : subsets[i]) {
                const auto sub = mask & ~(1u << j);
                if (sub != 0) best = std::max(best, tu[sub]);
            }
            tu[mask] = best;
            r.t_star_u.push_back({subsets[i], ts[mask]});
            r.t_u.push_back({subsets[i], best});
        }
    }

    const auto points = generate_points(g);
    const int max_K = opts.max_K < 0 ? g.m() : opts.max_K;
    for (int K = 0; K <= max_K; ++K) r.a_k.push_back(microstructure_AK(points, K));
    return r;
}

}  // namespace dnet
