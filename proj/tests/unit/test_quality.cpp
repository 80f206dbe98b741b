#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "common.hpp"
#include "dnet/quality.hpp"

using namespace dnet;

namespace {

GeneratorSet identity1(int m) { return GeneratorSet({gf2::BitMatrix::identity(m)}); }

// Exhaustive t*_u: k >= 1 on u, k_j <= m + 1.
int t_star_exhaustive(const GeneratorSet& g, const std::vector<int>& u) {
    const int m = g.m();
    int best = 1 << 20;
    std::vector<int> k(u.size(), 1);
    while (true) {
        const SubsetIndex idx{u, k};
        if (gf2::rank(assemble_cuk(g, idx)) < idx.depth()) best = std::min(best, idx.depth());
        std::size_t a = 0;
        while (a < k.size() && k[a] == m + 1) k[a++] = 1;
        if (a == k.size()) break;
        ++k[a];
    }
    return m + 1 - best;
}

}  // namespace

TEST_CASE("shift net quality parameters") {
    const auto g = testutil::load_raw("shiftnet.txt");
    CHECK(t_value(g) == 1);
    CHECK(t_star_u(g, {0, 1, 2, 3}) == 0);
    CHECK(t_u(g, {0, 1, 2, 3}) == 1);
    CHECK(t_d(g, 4) == 1);
    const auto p = generate_points(g);
    CHECK(verify_net_by_counting(p, 1));
    CHECK_FALSE(verify_net_by_counting(p, 0));
    CHECK(microstructure_A(p, {4, 4, 4, 4}) == 0);
}

TEST_CASE("identity net") {
    for (int m = 1; m <= 8; ++m) {
        const auto g = identity1(m);
        CHECK(t_value(g) == 0);
        CHECK(t_star_u(g, {0}) == 0);
        const auto p = generate_points(g);
        CHECK(verify_net_by_counting(p, 0));
        CHECK(microstructure_AK(p, 0) == m);
        CHECK(microstructure_A(p, {m}) == 0);
        CHECK(microstructure_A(p, {m + 3}) == 0);
    }
}

TEST_CASE("Sobol' one-dimensional projections have t = 0") {
    const auto g = testutil::load_sobol(8, 10);
    for (int j = 0; j < g.dims(); ++j) CHECK(t_u(g, {j}) == 0);
    const auto s2 = testutil::load_raw("sobol2d_m4.txt");
    CHECK(t_value(s2) == min_t_by_counting(generate_points(s2)));
    CHECK(t_u(s2, {0, 1}) == std::max({t_star_u(s2, {0}), t_star_u(s2, {1}), t_star_u(s2, {0, 1})}));
}

TEST_CASE("dependent first rows give t* = m + 1 - |u|") {
    const GeneratorSet g({gf2::BitMatrix::identity(3), gf2::BitMatrix::identity(3)});
    CHECK(t_star_u(g, {0, 1}) == 2);
    CHECK(t_value(g) == 2);
    CHECK(t_star_exhaustive(g, {0, 1}) == 2);
}

TEST_CASE("rank and counting definitions of t agree") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 150; ++trial) {
        const int s = 1 + static_cast<int>(rng() % 3);
        const int m = 1 + static_cast<int>(rng() % 5);
        const auto g = testutil::random_set(rng, s, m);
        const int t = t_value(g);
        const auto x = oracle::points(testutil::as_strings(g));
        CHECK(t == oracle::min_t(x, m));
        CHECK(t == min_t_by_counting(generate_points(g)));
        if (t > 0) CHECK_FALSE(verify_net_by_counting(generate_points(g), t - 1));
        CHECK(t_d(g, s) == t);
    }
}

TEST_CASE("t_u identity and t* against exhaustive search") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 80; ++trial) {
        const int s = 1 + static_cast<int>(rng() % 3);
        const int m = 2 + static_cast<int>(rng() % 4);
        const auto g = testutil::random_set(rng, s, m);
        int t_max = -1000;
        for (const auto& u : all_subsets(s)) {
            const int ts = t_star_u(g, u);
            CHECK(ts == t_star_exhaustive(g, u));
            CHECK(t_u(g, u) == t_u_direct(g, u));
            CHECK(ts <= t_u(g, u));
            t_max = std::max(t_max, ts);
        }
        CHECK(t_value(g) == t_max);
    }
}

TEST_CASE("t is invariant under permuting coordinates") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = testutil::random_set(rng, 3, 5);
        const GeneratorSet h({g.matrix(2), g.matrix(0), g.matrix(1)});
        CHECK(t_value(g) == t_value(h));
    }
}

TEST_CASE("A_K is m - K below m - t") {
    for (const char* name : {"shiftnet.txt", "sobol2d_m4.txt", "identity1d_m5.txt"}) {
        const auto g = testutil::load_raw(name);
        const auto p = generate_points(g);
        const int t = t_value(g);
        for (int K = 0; K <= g.m() - t; ++K) CHECK(microstructure_AK(p, K) == g.m() - K);
    }
}

TEST_CASE("quality report") {
    const auto g = testutil::load_raw("shiftnet.txt");
    const auto r = compute_quality(g);
    CHECK(r.t == 1);
    CHECK(r.t_star_full == 0);
    CHECK(r.subsets_computed);
    CHECK(r.t_u.size() == 15);
    CHECK(r.t_d.size() == 4);
    CHECK(*std::max_element(r.t_d.begin(), r.t_d.end()) == r.t);
    CHECK(r.a_k.size() == 5);
    CHECK(r.a_k[0] == 4);
}

TEST_CASE("subset order") {
    const auto subs = all_subsets(3);
    const std::vector<std::vector<int>> want{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    CHECK(subs == want);
}
