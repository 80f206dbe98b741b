#include "dnet/scramble.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dnet/error.hpp"
#include "detail.hpp"

namespace dnet {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        comp_ += std::fabs(sum_) >= std::fabs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::uint64_t bit_at(int out_bits, int row) { return std::uint64_t{1} << (out_bits - 1 - row); }

void scramble_linear(const NetPoints& in, NetPoints& out, std::mt19937_64& rng, int j) {
    const int m = in.bits;
    const int b = out.bits;
    // Column c of the b x m unit lower-triangular matrix, as an output numerator.
    std::vector<std::uint64_t> cols(static_cast<std::size_t>(m), 0);
    for (int c = 0; c < m; ++c) {
        std::uint64_t col = bit_at(b, c);
        for (int row = c + 1; row < b; ++row)
            if (rng() >> 63) col |= bit_at(b, row);
        cols[static_cast<std::size_t>(c)] = col;
    }
    const std::uint64_t shift = b == 64 ? rng() : rng() & gf2::low_mask(b);
    for (std::size_t i = 0; i < in.n; ++i) {
        const auto x = in.at(i, j);
        std::uint64_t y = shift;
        for (int c = 0; c < m; ++c)
            if ((x >> (m - 1 - c)) & 1u) y ^= cols[static_cast<std::size_t>(c)];
        out.at(i, j) = y;
    }
}

void scramble_nested(const NetPoints& in, NetPoints& out, std::uint64_t seed, int j) {
    const int m = in.bits;
    const int b = out.bits;
    const std::uint64_t coord_key = splitmix64(seed ^ splitmix64(0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(j + 1)));
    for (std::size_t i = 0; i < in.n; ++i) {
        const auto x = in.at(i, j);
        std::uint64_t y = 0;
        for (int l = 0; l < b; ++l) {
            // Node of the binary tree: depth l and the first l input digits.
            const std::uint64_t prefix = l == 0 ? 0 : (l < m ? (x >> (m - l)) : x);
            const std::uint64_t h = splitmix64(coord_key ^ splitmix64(prefix + 0xD1B54A32D192ED03ull * static_cast<std::uint64_t>(l + 1)));
            const std::uint64_t digit = l < m ? (x >> (m - 1 - l)) & 1u : 0;
            if (digit ^ (h >> 63)) y |= bit_at(b, l);
        }
        out.at(i, j) = y;
    }
}

// Sample variance (unbiased) of xs and the standard error of that estimate.
std::pair<double, double> variance_with_se(std::span<const double> xs) {
    const auto r = static_cast<double>(xs.size());
    CompensatedSum s;
    for (double x : xs) s.add(x);
    const double mean = s.value() / r;
    CompensatedSum s2, s4;
    for (double x : xs) {
        const double d = (x - mean) * (x - mean);
        s2.add(d);
        s4.add(d * d);
    }
    const double var = s2.value() / (r - 1.0);
    const double m4 = s4.value() / r;
    const double var_of_var = (m4 - (r - 3.0) / (r - 1.0) * var * var) / r;
    return {var, std::sqrt(std::max(0.0, var_of_var))};
}

}  // namespace

const char* to_string(ScrambleKind kind) {
    switch (kind) {
        case ScrambleKind::RandomLinear: return "random-linear";
        case ScrambleKind::NestedUniform: return "nested-uniform";
        case ScrambleKind::DigitalShift: return "digital-shift";
    }
    return "?";
}

ScrambleKind parse_scramble_kind(const std::string& name) {
    if (name == "rls" || name == "random-linear" || name == "linear") return ScrambleKind::RandomLinear;
    if (name == "nus" || name == "nested-uniform") return ScrambleKind::NestedUniform;
    if (name == "shift" || name == "digital-shift") return ScrambleKind::DigitalShift;
    throw ValidationError("unknown scramble kind '" + name + "' (expected rls, nus or shift)");
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

NetPoints scramble(const NetPoints& p, const ScrambleSpec& spec) {
    if (spec.output_bits < p.bits || spec.output_bits > 64)
        throw ValidationError("output_bits must be in [" + std::to_string(p.bits) + ", 64], got " + std::to_string(spec.output_bits));
    NetPoints out;
    out.n = p.n;
    out.dims = p.dims;
    out.bits = spec.output_bits;
    out.coords.assign(p.coords.size(), 0);

    std::mt19937_64 rng(splitmix64(spec.seed));
    for (int j = 0; j < p.dims; ++j) {
        switch (spec.kind) {
            case ScrambleKind::RandomLinear: scramble_linear(p, out, rng, j); break;
            case ScrambleKind::NestedUniform: scramble_nested(p, out, spec.seed, j); break;
            case ScrambleKind::DigitalShift: {
                const int up = out.bits - p.bits;
                const std::uint64_t shift = out.bits == 64 ? rng() : rng() & gf2::low_mask(out.bits);
                for (std::size_t i = 0; i < p.n; ++i) out.at(i, j) = ((up == 64 ? 0 : p.at(i, j) << up)) ^ shift;
                break;
            }
        }
    }
    return out;
}

std::vector<double> to_unit(const NetPoints& p, std::optional<std::uint64_t> offset_seed) {
    std::vector<double> out(p.coords.size());
    std::mt19937_64 rng(splitmix64(offset_seed.value_or(0) ^ 0x5851F42D4C957F2Dull));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        const double lo = std::ldexp(static_cast<double>(p.coords[i]), -p.bits);
        if (!offset_seed) {
            out[i] = lo;
            continue;
        }
        const double hi = std::ldexp(static_cast<double>(p.coords[i]) + 1.0, -p.bits);
        const double x = lo + std::ldexp(unif(rng), -p.bits);
        // Rounding must not carry the point out of its cell.
        out[i] = x < hi ? x : std::nextafter(hi, 0.0);
        if (out[i] >= 1.0) out[i] = std::nextafter(1.0, 0.0);
    }
    return out;
}

double HaarIntegrand::operator()(std::span<const double> x) const {
    double v = amplitude;
    for (std::size_t a = 0; a < u.size(); ++a) {
        const double y = std::ldexp(x[static_cast<std::size_t>(u[a])], k[a]);
        if (y - std::floor(y) >= 0.5) v = -v;
    }
    return v;
}

int HaarIntegrand::sign(const NetPoints& p, std::size_t i) const {
    int s = 1;
    for (std::size_t a = 0; a < u.size(); ++a) {
        if (k[a] >= p.bits) throw ValidationError("Haar depth needs more bits than the points carry");
        if ((p.at(i, u[a]) >> (p.bits - 1 - k[a])) & 1u) s = -s;
    }
    return s;
}

RqmcEstimate estimate(const NetPoints& p, const ScrambleSpec& spec, const Integrand& f, int replicates, int threads) {
    if (replicates < 2) throw ValidationError("at least 2 replicates are needed");
    std::vector<double> means(static_cast<std::size_t>(replicates));
    detail::parallel_for(means.size(), threads, [&](std::size_t r) {
        ScrambleSpec rs = spec;
        rs.seed = replicate_seed(spec.seed, r);
        const auto sp = scramble(p, rs);
        const auto x = to_unit(sp, rs.seed);
        CompensatedSum sum;
        for (std::size_t i = 0; i < sp.n; ++i) {
            const double v = f(std::span<const double>(x).subspan(i * static_cast<std::size_t>(sp.dims), static_cast<std::size_t>(sp.dims)));
            if (!std::isfinite(v))
                throw ValidationError("integrand is not finite at point " + std::to_string(i) + " of replicate " + std::to_string(r));
            sum.add(v);
        }
        means[r] = sum.value() / static_cast<double>(sp.n);
    });

    RqmcEstimate est;
    est.replicates = replicates;
    CompensatedSum total;
    for (double mu : means) total.add(mu);
    est.mean = total.value() / replicates;
    est.variance_of_mean = variance_with_se(means).first / replicates;
    est.per_replicate_means = std::move(means);
    return est;
}

namespace {

void run_identity(const GeneratorSet& g, const NetPoints& points, const SubsetIndex& idx, int replicates, ScrambleSpec spec,
                  int threads, double expected, double& n_var, double& se, bool& pass) {
    HaarIntegrand haar{idx.u, idx.k, 1.0};
    std::vector<double> means(static_cast<std::size_t>(replicates));
    detail::parallel_for(means.size(), threads, [&](std::size_t r) {
        ScrambleSpec rs = spec;
        rs.seed = replicate_seed(spec.seed, r);
        const auto sp = scramble(points, rs);
        long long sum = 0;
        for (std::size_t i = 0; i < sp.n; ++i) sum += haar.sign(sp, i);
        means[r] = static_cast<double>(sum) / static_cast<double>(sp.n);
    });
    const auto [var, var_se] = variance_with_se(means);
    const auto n = static_cast<double>(g.size());
    n_var = n * var;
    se = n * var_se;
    pass = std::fabs(n_var - expected) <= 3.0 * se;
}

}  // namespace

GainIdentityReport verify_gain_identity(const GeneratorSet& g, const SubsetIndex& idx, int replicates, const ScrambleSpec& spec,
                                        int threads) {
    idx.validate(g.dims());
    if (replicates < 4) throw ValidationError("at least 4 replicates are needed for a variance standard error");
    const auto points = generate_points(g);

    // Bits past the deepest Haar digit must be randomized by the scramble itself.
    ScrambleSpec run = spec;
    const int deepest = *std::max_element(idx.k.begin(), idx.k.end());
    run.output_bits = std::max({spec.output_bits, g.m(), deepest + 1});
    if (run.output_bits > 64) throw ValidationError("Haar depth exceeds 63");

    GainIdentityReport rep;
    rep.idx = idx;
    rep.expected = gain_fast(g, idx);
    rep.replicates = replicates;
    rep.kind = spec.kind;
    const auto expected = static_cast<double>(rep.expected.value());
    run_identity(g, points, idx, replicates, run, threads, expected, rep.empirical_n_var, rep.mc_se, rep.pass);

    if (!rep.pass && spec.kind == ScrambleKind::RandomLinear) {
        ScrambleSpec nested = run;
        nested.kind = ScrambleKind::NestedUniform;
        double nv = 0, ns = 0;
        bool np = false;
        run_identity(g, points, idx, replicates, nested, threads, expected, nv, ns, np);
        rep.nested_n_var = nv;
        rep.nested_mc_se = ns;
        rep.nested_pass = np;
    }
    return rep;
}

}  // namespace dnet
