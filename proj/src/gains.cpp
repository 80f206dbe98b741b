#include "dnet/gains.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <numeric>
#include <tuple>

#include "dnet/error.hpp"
#include "dnet/quality.hpp"
#include "detail.hpp"

namespace dnet {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const auto r = a % b;
        a = b;
        b = r;
    }
    return a;
}

std::string int128_to_string(__int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 x = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (x != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
        x /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

// Number of leading bits where x and y agree; INT_MAX when equal.
int match_depth(std::uint64_t x, std::uint64_t y, int bits) {
    const auto d = x ^ y;
    return d == 0 ? INT_MAX : bits - static_cast<int>(std::bit_width(d));
}

int clamp_log2(int v, int m) { return std::min(v, m); }

// Lazily walks the size-r combinations of {0..n-1} in lexicographic order.
template <typename Fn>
bool for_each_combination(int n, int r, Fn&& fn) {
    if (r > n || r <= 0) return true;
    std::vector<int> c(static_cast<std::size_t>(r));
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        if (!fn(c)) return false;
        int i = r - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == n - r + i) --i;
        if (i < 0) return true;
        ++c[static_cast<std::size_t>(i)];
        for (int q = i + 1; q < r; ++q) c[static_cast<std::size_t>(q)] = c[static_cast<std::size_t>(q - 1)] + 1;
    }
}

}  // namespace

Rational Rational::make(__int128 num, __int128 den) {
    if (den == 0) throw ValidationError("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const auto g = gcd128(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

bool Rational::equals(GainValue g) const {
    if (g.is_zero()) return num == 0;
    return den == 1 && num == static_cast<__int128>(g.value());
}

std::string Rational::to_string() const {
    return den == 1 ? int128_to_string(num) : int128_to_string(num) + "/" + int128_to_string(den);
}

GainValue gain_fast(const GeneratorSet& g, const SubsetIndex& idx) {
    idx.validate(g.dims());
    gf2::EchelonBasis basis;
    for (std::size_t a = 0; a < idx.u.size(); ++a)
        for (int l = 0; l < idx.k[a]; ++l) basis.insert(g.row(idx.u[a], l));
    if (!basis.contains(nabla_sum(g, idx))) return GainValue::zero();
    return GainValue::pow2(g.m() - basis.rank());
}

Rational gain_bruteforce(const NetPoints& p, const SubsetIndex& idx) {
    idx.validate(p.dims);
    if (p.n == 0) throw ValidationError("gain of an empty point set");
    __int128 sum = 0;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t i2 = 0; i2 < p.n; ++i2) {
            int prod = 1;
            for (std::size_t a = 0; a < idx.u.size() && prod != 0; ++a) {
                const int j = idx.u[a];
                const int depth = match_depth(p.at(i, j), p.at(i2, j), p.bits);
                if (depth < idx.k[a])
                    prod = 0;
                else if (depth == idx.k[a])
                    prod = -prod;
            }
            sum += prod;
        }
    }
    return Rational::make(sum, static_cast<__int128>(p.n));
}

Rational gain_representation(const GeneratorSet& g, const SubsetIndex& idx) {
    idx.validate(g.dims());
    if (idx.u.size() > 20) throw ValidationError("gain_representation needs |u| <= 20");
    const auto cuk = assemble_cuk(g, idx);
    const auto nabla = assemble_nabla(g, idx);
    const auto basis = gf2::nullspace_basis(cuk);
    if (basis.size() > 24) throw ResourceError("nullspace of C_{u,k} has more than 2^24 elements; use gain_fast");

    // counts[v] = #{x in null(C_{u,k}) : nabla x = v}
    std::vector<std::uint64_t> counts(std::size_t{1} << idx.u.size(), 0);
    std::uint64_t x = 0;
    ++counts[nabla.multiply(x)];
    const std::uint64_t size = std::uint64_t{1} << basis.size();
    for (std::uint64_t i = 1; i < size; ++i) {
        x ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
        ++counts[nabla.multiply(x)];
    }
    __int128 sum = 0;
    for (std::size_t v = 0; v < counts.size(); ++v)
        sum += (std::popcount(v) & 1) ? -static_cast<__int128>(counts[v]) : static_cast<__int128>(counts[v]);
    return Rational::make(sum, 1);
}

MaxGain max_gain(const GeneratorSet& g) {
    const int s = g.dims();
    const int m = g.m();
    MaxGain out;
    out.t_star_full = t_star_u(g, full_set(s));

    gf2::BitMatrix first_rows(m);
    for (int j = 0; j < s; ++j) first_rows.append_row(g.row(j, 0));
    const int r = gf2::rank(first_rows);
    if (r < s) {
        // The smallest dependent set of first rows sums to zero, so Gamma_{u,0} = 2^m.
        out.degenerate = true;
        out.gamma = GainValue::pow2(m);
        for (int size = 1; size <= r + 1; ++size) {
            const bool more = for_each_combination(s, size, [&](const std::vector<int>& u) {
                gf2::EchelonBasis b;
                for (int j : u)
                    if (!b.insert(g.row(j, 0))) {
                        out.witness = {u, std::vector<int>(u.size(), 0)};
                        return false;
                    }
                return true;
            });
            if (!more) break;
        }
        return out;
    }

    // Take a minimal deficient C_{1:s,k*} and a dependency sum_{j,l} a_{j,l} C_j(l,:) = 0.
    // The witness is v = {j : a_{j,k*_j} = 1} with depths k*_j - 1.
    const auto deficient = min_deficient_positive(g, full_set(s));
    SubsetIndex all{full_set(s), deficient.k};
    const auto cuk = assemble_cuk(g, all);
    const auto dep = gf2::row_dependency(cuk);
    if (!dep) throw Error("internal: minimal deficient matrix has independent rows");

    SubsetIndex witness;
    std::size_t row = 0;
    for (int j = 0; j < s; ++j) {
        const int kj = deficient.k[static_cast<std::size_t>(j)];
        row += static_cast<std::size_t>(kj);
        if (dep->test(row - 1)) {
            witness.u.push_back(j);
            witness.k.push_back(kj - 1);
        }
    }
    out.gamma = GainValue::pow2(clamp_log2(out.t_star_full + s - 1, m));
    out.witness = std::move(witness);
    return out;
}

GainBounds gain_bounds(const GeneratorSet& g, const SubsetIndex& idx) {
    idx.validate(g.dims());
    const int m = g.m();
    const int usize = static_cast<int>(idx.u.size());
    GainBounds b;
    b.rank_log2 = m - gf2::rank(assemble_cuk(g, idx));
    b.t_log2 = clamp_log2(t_value(g) + usize - 1, m);
    b.t_u_log2 = clamp_log2(t_u(g, idx.u) + usize - 1, m);
    const auto first = assemble_cuk(g, {idx.u, std::vector<int>(idx.u.size(), 1)});
    if (gf2::rank(first) == usize) b.t_star_log2 = clamp_log2(t_star_u(g, idx.u) + usize - 1, m);
    return b;
}

GainReport enumerate_gains(const GeneratorSet& g, const EnumerateOptions& opts) {
    if (opts.max_depth < 0) throw ValidationError("max_depth must be nonnegative");
    const int m = g.m();
    const int cap = m + 1;

    std::vector<std::vector<int>> subsets;
    if (opts.u_filter.empty()) {
        if (g.dims() > 20) throw ResourceError("enumerating all subsets needs s <= 20; pass a subset filter");
        subsets = all_subsets(g.dims());
    } else {
        for (const auto& u : opts.u_filter) {
            SubsetIndex{u, std::vector<int>(u.size(), 0)}.validate(g.dims());
            subsets.push_back(u);
        }
        std::sort(subsets.begin(), subsets.end(),
                  [](const auto& a, const auto& b) { return std::forward_as_tuple(a.size(), a) < std::forward_as_tuple(b.size(), b); });
        subsets.erase(std::unique(subsets.begin(), subsets.end()), subsets.end());
    }

    GainReport rep;
    rep.m = m;
    rep.dims = g.dims();
    rep.max_depth = opts.max_depth;
    rep.t = t_value(g);
    const auto mg = max_gain(g);
    rep.t_star_full = mg.t_star_full;
    rep.theoretical_max = mg.gamma;

    // Deterministic budget split: each subset gets a fixed visit allowance in order.
    std::vector<std::uint64_t> allowance(subsets.size(), 0);
    std::uint64_t left = opts.budget;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const auto want = detail::count_bounded_vectors(static_cast<int>(subsets[i].size()), opts.max_depth, cap);
        allowance[i] = std::min(want, left);
        if (want > left) rep.truncated = true;
        left -= allowance[i];
    }

    struct Slot {
        std::vector<GainEntry> entries;
        std::uint64_t visited = 0;
        int violations = 0;
    };
    std::vector<Slot> slots(subsets.size());

    detail::parallel_for(subsets.size(), opts.threads, [&](std::size_t si) {
        const auto& u = subsets[si];
        const int usize = static_cast<int>(u.size());
        auto& slot = slots[si];
        if (allowance[si] == 0) return;

        const int t_bound = clamp_log2(rep.t + usize - 1, m);
        const auto b = gain_bounds(g, {u, std::vector<int>(u.size(), 0)});
        for (int total = 0; total <= opts.max_depth; ++total) {
            const bool more = detail::for_each_composition(usize, total, cap, [&](const std::vector<int>& k) {
                if (slot.visited == allowance[si]) return false;
                ++slot.visited;
                gf2::EchelonBasis basis;
                for (int a = 0; a < usize; ++a)
                    for (int l = 0; l < k[static_cast<std::size_t>(a)]; ++l) basis.insert(g.row(u[static_cast<std::size_t>(a)], l));
                const int rank_log2 = m - basis.rank();
                SubsetIndex idx{u, k};
                if (!basis.contains(nabla_sum(g, idx))) return true;
                const int gain = rank_log2;
                bool ok = gain <= t_bound && gain <= b.t_u_log2;
                if (b.t_star_log2) ok = ok && gain <= *b.t_star_log2;
                if (!ok) ++slot.violations;
                slot.entries.push_back({std::move(idx), GainValue::pow2(gain), basis.rank()});
                return true;
            });
            if (!more) break;
        }
    });

    for (auto& slot : slots) {
        rep.visited += slot.visited;
        rep.bound_violations += slot.violations;
        for (auto& e : slot.entries) {
            if (!rep.attaining || e.gain > rep.gamma_max) {
                rep.gamma_max = e.gain;
                rep.attaining = e.idx;
            }
            rep.entries.push_back(std::move(e));
        }
    }
    rep.theoretical_attained = rep.gamma_max == rep.theoretical_max;
    return rep;
}

}  // namespace dnet
