#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "common.hpp"
#include "dnet/error.hpp"
#include "dnet/netgen.hpp"

using namespace dnet;

TEST_CASE("shift net fixture loads") {
    const auto g = testutil::load_raw("shiftnet.txt");
    CHECK(g.dims() == 4);
    CHECK(g.m() == 4);
    CHECK(g.matrix(0).to_strings() == std::vector<std::string>{"0001", "0110", "0010", "0000"});
    CHECK(g.row(3, 1) == 0b1100);
    CHECK(g.row(0, 7) == 0);
}

TEST_CASE("first rows of the shift net form the anti-diagonal") {
    const auto g = testutil::load_raw("shiftnet.txt");
    const SubsetIndex all{{0, 1, 2, 3}, {1, 1, 1, 1}};
    CHECK(assemble_cuk(g, all).to_strings() == std::vector<std::string>{"0001", "0010", "0100", "1000"});
    const SubsetIndex zero{{0, 1, 2, 3}, {0, 0, 0, 0}};
    CHECK(assemble_nabla(g, zero).to_strings() == std::vector<std::string>{"0001", "0010", "0100", "1000"});
    CHECK(assemble_cuk(g, zero).nrows() == 0);
}

TEST_CASE("zero padding past m") {
    std::vector<gf2::BitMatrix> mats{gf2::BitMatrix::identity(3)};
    const GeneratorSet g(mats);
    const auto c = assemble_cuk(g, {{0}, {5}});
    CHECK(c.nrows() == 5);
    CHECK(gf2::rank(c) == 3);
    CHECK(c.row_word(3) == 0);
    CHECK(c.row_word(4) == 0);
    const std::vector<int> w{0};
    CHECK(assemble_nabla(g, {{0}, {3}}, w).row_word(0) == 0);
}

TEST_CASE("stacking C_{u,k} with the next rows gives C_{u,k+1}") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = testutil::random_set(rng, 3, 5);
        const SubsetIndex idx{{0, 2}, {static_cast<int>(rng() % 6), static_cast<int>(rng() % 6)}};
        const SubsetIndex next{idx.u, {idx.k[0] + 1, idx.k[1] + 1}};
        const auto cuk = assemble_cuk(g, idx);
        const auto nab = assemble_nabla(g, idx);
        // Row order of C_{u,k+1}: rows of coordinate 0, then coordinate 2.
        std::vector<std::uint64_t> expect;
        for (int l = 0; l < idx.k[0]; ++l) expect.push_back(cuk.row_word(l));
        expect.push_back(nab.row_word(0));
        for (int l = 0; l < idx.k[1]; ++l) expect.push_back(cuk.row_word(idx.k[0] + l));
        expect.push_back(nab.row_word(1));
        const auto got = assemble_cuk(g, next);
        REQUIRE(got.nrows() == static_cast<int>(expect.size()));
        for (int r = 0; r < got.nrows(); ++r) CHECK(got.row_word(r) == expect[static_cast<std::size_t>(r)]);
    }
}

TEST_CASE("van der Corput from one direction-number dimension") {
    const auto g = testutil::load_sobol(1, 3);
    CHECK(g.matrix(0) == gf2::BitMatrix::identity(3));
    const auto p = generate_points(g);
    std::vector<std::uint64_t> got(p.coords.begin(), p.coords.end());
    CHECK(got == std::vector<std::uint64_t>{0, 4, 2, 6, 1, 5, 3, 7});
}

TEST_CASE("second Sobol' dimension is the Pascal matrix") {
    const auto g = testutil::load_sobol(2, 4);
    CHECK(g.matrix(1).to_strings() == oracle::pascal(4));
    CHECK(g.matrix(1).to_strings() == std::vector<std::string>{"1111", "0101", "0011", "0001"});
    CHECK(g == testutil::load_raw("sobol2d_m4.txt"));
}

TEST_CASE("Sobol' matrices match the textbook recurrence") {
    const std::vector<std::tuple<int, unsigned, std::vector<unsigned long long>>> entries{
        {1, 0, {1}}, {2, 1, {1, 3}}, {3, 1, {1, 3, 1}}, {3, 2, {1, 1, 1}}, {4, 1, {1, 1, 3, 3}},
        {4, 4, {1, 3, 5, 13}}, {5, 2, {1, 1, 5, 5, 17}}, {5, 4, {1, 1, 5, 5, 5}}};
    for (int m : {1, 5, 10, 16}) {
        const auto g = testutil::load_sobol(9, m);
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const auto& [deg, a, init] = entries[e];
            CHECK(g.matrix(static_cast<int>(e) + 1).to_strings() == oracle::sobol(deg, a, init, m));
        }
    }
}

TEST_CASE("points match the definition") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 7);
        const auto g = testutil::random_set(rng, 3, m);
        const auto p = generate_points(g);
        CHECK(p == generate_points_direct(g));
        const auto x = oracle::points(testutil::as_strings(g));
        for (std::size_t i = 0; i < p.n; ++i)
            for (int j = 0; j < 3; ++j) CHECK(p.unit(i, j) == x[i][static_cast<std::size_t>(j)]);
    }
}

TEST_CASE("digital map is linear and recovers the columns") {
    std::mt19937_64 rng(21);
    const auto g = testutil::random_set(rng, 2, 6);
    const auto p = generate_points(g);
    for (std::size_t i = 0; i < p.n; i += 5)
        for (std::size_t i2 = 0; i2 < p.n; i2 += 3)
            for (int j = 0; j < 2; ++j) CHECK(p.at(i ^ i2, j) == (p.at(i, j) ^ p.at(i2, j)));
    for (int j = 0; j < 2; ++j)
        for (int c = 0; c < 6; ++c)
            for (int l = 0; l < 6; ++l) CHECK(((p.at(std::size_t{1} << c, j) >> (5 - l)) & 1u) == g.matrix(j).get(l, c));
}

TEST_CASE("RAW round trip") {
    const auto g = testutil::load_raw("shiftnet.txt");
    std::stringstream ss;
    write_generators_raw(g, ss);
    CHECK(load_generators(ss, GeneratorFormat::Raw) == g);
}

TEST_CASE("RAW parse errors carry line numbers") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return load_generators(in, GeneratorFormat::Raw);
    };
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("1 2\n10\n0x\n"), ParseError);
    CHECK_THROWS_AS(parse("1 2\n10\n"), ParseError);
    CHECK_THROWS_AS(parse("1 2\n100\n01\n"), ParseError);
    CHECK_THROWS_AS(parse("1 33\n"), ParseError);
    try {
        parse("1 2\n10\n2 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("direction-number validation") {
    auto parse = [](const std::string& text, int dims, int m) {
        std::istringstream in(text);
        return load_generators(in, GeneratorFormat::DirectionNumbers, {dims, m});
    };
    CHECK_NOTHROW(parse("d s a m_i\n2 1 0 1\n", 2, 4));
    CHECK_THROWS_AS(parse("2 1 0 2\n", 2, 4), ParseError);      // even m_1
    CHECK_THROWS_AS(parse("2 2 1 1 5\n", 2, 4), ParseError);    // m_2 >= 4
    CHECK_THROWS_AS(parse("2 2 2 1 3\n", 2, 4), ParseError);    // a >= 2^(s-1)
    CHECK_THROWS_AS(parse("2 2 1 1\n", 2, 4), ParseError);      // missing m_2
    CHECK_THROWS_AS(parse("2 1 0 1\n", 3, 4), ParseError);      // too few dimensions
    CHECK_THROWS_AS(parse("2 1 0 1\n", 2, 0), ValidationError);
    std::istringstream in("2 1 0 1\n");
    CHECK_THROWS_AS(load_generators(in, GeneratorFormat::DirectionNumbers), ValidationError);
}

TEST_CASE("subset index validation and order") {
    auto bad = [](std::vector<int> u, std::vector<int> k) {
        return [=] { SubsetIndex{u, k}.validate(3); };
    };
    CHECK_THROWS_AS(bad({}, {})(), ValidationError);
    CHECK_THROWS_AS(bad({1, 0}, {0, 0})(), ValidationError);
    CHECK_THROWS_AS(bad({0, 3}, {0, 0})(), ValidationError);
    CHECK_THROWS_AS(bad({0}, {-1})(), ValidationError);
    CHECK_THROWS_AS(bad({0}, {1, 1})(), ValidationError);
    CHECK(SubsetIndex{{2}, {5}} < SubsetIndex{{0, 1}, {0, 0}});
    CHECK(SubsetIndex{{0, 1}, {0, 2}} < SubsetIndex{{0, 2}, {0, 0}});
    CHECK(SubsetIndex{{0}, {1}} < SubsetIndex{{0}, {2}});
}

TEST_CASE("point export formats") {
    std::vector<gf2::BitMatrix> mats{gf2::BitMatrix::identity(2)};
    const auto p = generate_points(GeneratorSet(mats));
    std::ostringstream csv, ints, bin;
    write_points(p, PointFormat::CsvFraction, csv);
    write_points(p, PointFormat::CsvNumerator, ints);
    write_points(p, PointFormat::Binary, bin);
    CHECK(csv.str() == "0\n0.5\n0.25\n0.75\n");
    CHECK(ints.str() == "0\n2\n1\n3\n");
    CHECK(bin.str() == std::string("\0\0\0\0\2\0\0\0\1\0\0\0\3\0\0\0", 16));
}
