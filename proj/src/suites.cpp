#include "dnet/suites.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "dnet/error.hpp"
#include "dnet/gains.hpp"
#include "dnet/quality.hpp"
#include "dnet/scramble.hpp"
#include "detail.hpp"

namespace dnet {

namespace {

std::string describe(const SubsetIndex& idx) {
    std::ostringstream os;
    os << "u=[";
    for (std::size_t a = 0; a < idx.u.size(); ++a) os << (a ? "," : "") << idx.u[a] + 1;
    os << "] k=[";
    for (std::size_t a = 0; a < idx.k.size(); ++a) os << (a ? "," : "") << idx.k[a];
    os << "]";
    return os.str();
}

// Every k in [0, cap]^parts, odometer order.
void for_each_box(int parts, int cap, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> k(static_cast<std::size_t>(parts), 0);
    while (true) {
        fn(k);
        int a = parts - 1;
        while (a >= 0 && k[static_cast<std::size_t>(a)] == cap) k[static_cast<std::size_t>(a--)] = 0;
        if (a < 0) return;
        ++k[static_cast<std::size_t>(a)];
    }
}

bool is_dyadic_gain(const Rational& r, int m) {
    if (!r.is_integer()) return false;
    if (r.num == 0) return true;
    if (r.num < 0 || r.num > (static_cast<__int128>(1) << m)) return false;
    return (r.num & (r.num - 1)) == 0;
}

std::string show(GainValue g) { return g.is_zero() ? "0" : "2^" + std::to_string(g.log2()); }

void power_of_two(const GeneratorSet& g, NetCheck& out) {
    const auto points = generate_points(g);
    const int m = g.m();
    for (const auto& u : all_subsets(g.dims())) {
        for_each_box(static_cast<int>(u.size()), m + 1, [&](const std::vector<int>& k) {
            const SubsetIndex idx{u, k};
            const auto bf = gain_bruteforce(points, idx);
            const auto fast = gain_fast(g, idx);
            const auto rep = gain_representation(g, idx);
            ++out.checks;
            if (!is_dyadic_gain(bf, m)) out.problems.push_back(describe(idx) + ": brute force " + bf.to_string() + " is not 0 or 2^j, j <= m");
            if (!bf.equals(fast)) out.problems.push_back(describe(idx) + ": brute force " + bf.to_string() + " but fast " + show(fast));
            if (!(rep == bf)) out.problems.push_back(describe(idx) + ": representation " + rep.to_string() + " but brute force " + bf.to_string());
        });
    }
}

void bound_chain(const GeneratorSet& g, NetCheck& out) {
    const int m = g.m();
    const int t = t_value(g);
    for (const auto& u : all_subsets(g.dims())) {
        const int usize = static_cast<int>(u.size());
        const auto b = gain_bounds(g, {u, std::vector<int>(u.size(), 0)});
        const int t_bound = std::min(t + usize - 1, m);
        for_each_box(usize, m + 1, [&](const std::vector<int>& k) {
            const SubsetIndex idx{u, k};
            const auto fast = gain_fast(g, idx);
            const int rank_log2 = m - gf2::rank(assemble_cuk(g, idx));
            ++out.checks;
            if (fast.is_zero()) return;
            // Nonzero gains equal the rank bound, which in turn sits under the t bound.
            if (fast.log2() > rank_log2) out.problems.push_back(describe(idx) + ": gain " + show(fast) + " above rank bound 2^" + std::to_string(rank_log2));
            if (rank_log2 > t_bound)
                out.problems.push_back(describe(idx) + ": rank bound 2^" + std::to_string(rank_log2) + " above t bound 2^" + std::to_string(t_bound));
            if (fast.log2() > b.t_u_log2) out.problems.push_back(describe(idx) + ": gain " + show(fast) + " above t_u bound");
            if (b.t_star_log2 && fast.log2() > *b.t_star_log2) out.problems.push_back(describe(idx) + ": gain " + show(fast) + " above t* bound");
        });
    }
}

void zero_region(const GeneratorSet& g, NetCheck& out) {
    const auto points = generate_points(g);
    const int m = g.m();
    const int t = t_value(g);
    for (const auto& u : all_subsets(g.dims())) {
        const int usize = static_cast<int>(u.size());
        for (int total = 0; total <= m - t - usize; ++total) {
            detail::for_each_composition(usize, total, m + 1, [&](const std::vector<int>& k) {
                const SubsetIndex idx{u, k};
                ++out.checks;
                const auto fast = gain_fast(g, idx);
                const auto bf = gain_bruteforce(points, idx);
                if (!fast.is_zero() || bf.num != 0)
                    out.problems.push_back(describe(idx) + ": inside the zero region but gain " + show(fast) + ", brute force " + bf.to_string());
                return true;
            });
        }
    }
}

void t_crosscheck(const GeneratorSet& g, NetCheck& out) {
    const auto points = generate_points(g);
    const int t = t_value(g);
    const int counted = min_t_by_counting(points);
    ++out.checks;
    if (t != counted) out.problems.push_back("t from ranks " + std::to_string(t) + ", from counting " + std::to_string(counted));
    ++out.checks;
    if (t_d(g, g.dims()) != t) out.problems.push_back("t_d with d = s differs from t");
    for (const auto& u : all_subsets(g.dims())) {
        ++out.checks;
        const int a = t_u(g, u);
        const int b = t_u_direct(g, u);
        if (a != b)
            out.problems.push_back(describe({u, {}}) + ": t_u via t* is " + std::to_string(a) + ", from the definition " + std::to_string(b));
    }
}

void max_gain_suite(const GeneratorSet& g, NetCheck& out) {
    const int s = g.dims();
    const int m = g.m();
    const auto mg = max_gain(g);
    EnumerateOptions opts;
    opts.max_depth = s * (m + 1);
    const auto rep = enumerate_gains(g, opts);
    out.checks += 3;
    if (rep.truncated) out.problems.push_back("enumeration truncated");
    if (rep.gamma_max != mg.gamma)
        out.problems.push_back("enumerated maximum " + show(rep.gamma_max) + " but closed form " + show(mg.gamma));
    const auto closed = mg.degenerate ? GainValue::pow2(m) : GainValue::pow2(std::min(mg.t_star_full + s - 1, m));
    if (mg.gamma != closed) out.problems.push_back("max_gain " + show(mg.gamma) + " differs from its closed form " + show(closed));
    const auto at_witness = gain_fast(g, mg.witness);
    if (at_witness != mg.gamma)
        out.problems.push_back("witness " + describe(mg.witness) + " has gain " + show(at_witness) + ", expected " + show(mg.gamma));
    if (rep.bound_violations != 0) out.problems.push_back(std::to_string(rep.bound_violations) + " bound violations");
}

void net_preservation(const GeneratorSet& g, std::uint64_t seed, int seeds, NetCheck& out) {
    const auto points = generate_points(g);
    const int t = t_value(g);
    for (auto kind : {ScrambleKind::RandomLinear, ScrambleKind::NestedUniform, ScrambleKind::DigitalShift}) {
        for (int r = 0; r < seeds; ++r) {
            ScrambleSpec spec{kind, std::max(32, g.m()), replicate_seed(seed, static_cast<std::uint64_t>(r))};
            ++out.checks;
            if (!verify_net_by_counting(scramble(points, spec), t))
                out.problems.push_back(std::string(to_string(kind)) + " seed " + std::to_string(spec.seed) + " breaks the t=" + std::to_string(t) + " net property");
        }
    }
}

std::string raw_text(const GeneratorSet& g) {
    std::ostringstream os;
    write_generators_raw(g, os);
    return os.str();
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"power-of-two", "bound-chain", "zero-region", "t-crosscheck", "max-gain", "net-preservation"};
    return names;
}

GeneratorSet random_generators(std::uint64_t seed, std::size_t trial, int max_s, int max_m) {
    if (max_s < 1 || max_m < 1 || max_m > kMaxPointBits) throw ValidationError("need max_s >= 1 and 1 <= max_m <= 32");
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(trial)));
    const int s = std::uniform_int_distribution<int>(1, max_s)(rng);
    const int m = std::uniform_int_distribution<int>(std::min(2, max_m), max_m)(rng);
    const auto mask = gf2::low_mask(m);
    std::vector<gf2::BitMatrix> mats;
    for (int j = 0; j < s; ++j) {
        std::vector<std::uint64_t> rows(static_cast<std::size_t>(m));
        for (int l = 0; l < m; ++l) {
            const auto bits = rng() & mask;
            if (trial % 3 == 1) {
                // Unit upper triangular: column l set, columns below l clear.
                rows[static_cast<std::size_t>(l)] = (bits & ~gf2::low_mask(l + 1)) | (std::uint64_t{1} << l);
            } else {
                rows[static_cast<std::size_t>(l)] = bits;
            }
        }
        mats.emplace_back(m, std::move(rows));
    }
    if (trial % 3 == 2) {
        // Degenerate: a repeated first row, or a zero first row when s = 1.
        if (s >= 2) {
            const int a = std::uniform_int_distribution<int>(0, s - 1)(rng);
            int b = std::uniform_int_distribution<int>(0, s - 2)(rng);
            if (b >= a) ++b;
            std::vector<std::uint64_t> rows(mats[static_cast<std::size_t>(b)].row_words().begin(), mats[static_cast<std::size_t>(b)].row_words().end());
            rows[0] = mats[static_cast<std::size_t>(a)].row_word(0);
            mats[static_cast<std::size_t>(b)] = gf2::BitMatrix(m, std::move(rows));
        } else {
            std::vector<std::uint64_t> rows(mats[0].row_words().begin(), mats[0].row_words().end());
            rows[0] = 0;
            mats[0] = gf2::BitMatrix(m, std::move(rows));
        }
    }
    return GeneratorSet(std::move(mats));
}

NetCheck check_net(const std::string& suite, const GeneratorSet& g, std::uint64_t seed, int scramble_seeds) {
    NetCheck out;
    if (suite == "power-of-two") power_of_two(g, out);
    else if (suite == "bound-chain") bound_chain(g, out);
    else if (suite == "zero-region") zero_region(g, out);
    else if (suite == "t-crosscheck") t_crosscheck(g, out);
    else if (suite == "max-gain") max_gain_suite(g, out);
    else if (suite == "net-preservation") net_preservation(g, seed, scramble_seeds, out);
    else throw ValidationError("unknown suite '" + suite + "'");
    return out;
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& suites, const SuiteOptions& opts) {
    if (opts.trials < 0) throw ValidationError("trials must be nonnegative");
    std::vector<std::string> names;
    for (const auto& s : suites) {
        if (s == "all") {
            names.insert(names.end(), suite_names().begin(), suite_names().end());
        } else if (std::find(suite_names().begin(), suite_names().end(), s) != suite_names().end()) {
            names.push_back(s);
        } else {
            throw ValidationError("unknown suite '" + s + "' (expected one of power-of-two, bound-chain, zero-region, t-crosscheck, max-gain, net-preservation, all)");
        }
    }
    const auto trials = static_cast<std::size_t>(opts.trials);
    std::vector<GeneratorSet> nets;
    nets.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) nets.push_back(random_generators(opts.seed, i, opts.max_s, opts.max_m));

    std::vector<SuiteResult> results;
    for (const auto& name : names) {
        std::vector<NetCheck> checks(trials);
        detail::parallel_for(trials, opts.threads, [&](std::size_t i) {
            checks[i] = check_net(name, nets[i], splitmix64(opts.seed ^ (i + 1)), opts.scramble_seeds);
        });
        SuiteResult r;
        r.suite = name;
        r.nets = opts.trials;
        for (std::size_t i = 0; i < trials; ++i) {
            r.checks += checks[i].checks;
            r.failure_count += checks[i].problems.size();
            for (const auto& p : checks[i].problems)
                if (r.failures.size() < kMaxReportedFailures) r.failures.push_back({i, raw_text(nets[i]), p});
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace dnet
