#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "dnet/dnet.h"

namespace {

std::string path(const char* name) { return std::string(DNET_TEST_DATA) + "/" + name; }

std::string take(char* p) {
    std::string s(p);
    dnet_free(p);
    return s;
}

double prod(const double* x, int dims, void*) {
    double v = 1;
    for (int j = 0; j < dims; ++j) v *= x[j];
    return v;
}

}  // namespace

TEST_CASE("load and analyze through the C API") {
    dnet_generators* g = nullptr;
    REQUIRE(dnet_generators_load_file(path("shiftnet.txt").c_str(), DNET_FORMAT_RAW, 0, 0, &g) == DNET_OK);
    CHECK(dnet_generators_dims(g) == 4);
    CHECK(dnet_generators_m(g) == 4);
    int t = -1;
    CHECK(dnet_t_value(g, &t) == DNET_OK);
    CHECK(t == 1);
    const int all[] = {0, 1, 2, 3};
    int ts = -1;
    CHECK(dnet_t_star(g, all, 4, &ts) == DNET_OK);
    CHECK(ts == 0);
    int log2 = -1, degenerate = -1;
    CHECK(dnet_max_gain(g, &log2, &degenerate) == DNET_OK);
    CHECK(log2 == 3);
    CHECK(degenerate == 0);
    const int k0[] = {0, 0, 0, 0};
    int zero = -1;
    CHECK(dnet_gain_fast(g, all, k0, 4, &log2, &zero) == DNET_OK);
    char* js = nullptr;
    CHECK(dnet_analyze_json(g, 0, &js) == DNET_OK);
    const auto text = take(js);
    CHECK(text.find("\"gamma_log2\": 3") != std::string::npos);
    char* raw = nullptr;
    CHECK(dnet_generators_to_raw(g, &raw) == DNET_OK);
    dnet_generators* h = nullptr;
    CHECK(dnet_generators_load_string(raw, DNET_FORMAT_RAW, 0, 0, &h) == DNET_OK);
    dnet_free(raw);
    CHECK(dnet_generators_dims(h) == 4);
    dnet_generators_destroy(h);
    dnet_generators_destroy(g);
}

TEST_CASE("error codes and messages") {
    dnet_generators* g = nullptr;
    CHECK(dnet_generators_load_file("/nonexistent/file", DNET_FORMAT_RAW, 0, 0, &g) == DNET_ERR_IO);
    CHECK(std::strlen(dnet_last_error()) > 0);
    CHECK(dnet_generators_load_string("1 2\n10\n0x\n", DNET_FORMAT_RAW, 0, 0, &g) == DNET_ERR_VALIDATION);
    CHECK(std::string(dnet_last_error()).find("line 3") != std::string::npos);
    CHECK(dnet_t_value(nullptr, nullptr) == DNET_ERR_VALIDATION);
    dnet_scramble_kind k;
    CHECK(dnet_parse_scramble_kind("bogus", &k) == DNET_ERR_VALIDATION);
    CHECK(dnet_parse_scramble_kind("nus", &k) == DNET_OK);
    CHECK(k == DNET_SCRAMBLE_NESTED_UNIFORM);
}

TEST_CASE("points and scrambling") {
    dnet_generators* g = nullptr;
    REQUIRE(dnet_generators_load_file(path("joe_kuo_excerpt.txt").c_str(), DNET_FORMAT_DIRECTION_NUMBERS, 1, 3, &g) == DNET_OK);
    dnet_points* p = nullptr;
    REQUIRE(dnet_points_generate(g, &p) == DNET_OK);
    CHECK(dnet_points_count(p) == 8);
    const std::uint64_t want[] = {0, 4, 2, 6, 1, 5, 3, 7};
    for (std::size_t i = 0; i < 8; ++i) CHECK(dnet_points_numerator(p, i, 0) == want[i]);
    char* data = nullptr;
    std::size_t size = 0;
    CHECK(dnet_points_export(p, DNET_POINTS_BINARY, &data, &size) == DNET_OK);
    CHECK(size == 32);
    dnet_free(data);
    dnet_points* q = nullptr;
    CHECK(dnet_points_scramble(p, DNET_SCRAMBLE_DIGITAL_SHIFT, 40, 7, &q) == DNET_OK);
    CHECK(dnet_points_bits(q) == 40);
    dnet_points_destroy(q);
    CHECK(dnet_points_scramble(p, DNET_SCRAMBLE_DIGITAL_SHIFT, 2, 7, &q) == DNET_ERR_VALIDATION);
    double mean = 0, var = 0;
    CHECK(dnet_estimate(p, DNET_SCRAMBLE_NESTED_UNIFORM, 32, 1, prod, nullptr, 16, 1, &mean, &var) == DNET_OK);
    CHECK(mean > 0.4);
    CHECK(mean < 0.6);
    dnet_points_destroy(p);
    dnet_generators_destroy(g);
}

TEST_CASE("reports through the C API") {
    dnet_generators* g = nullptr;
    REQUIRE(dnet_generators_load_file(path("shiftnet.txt").c_str(), DNET_FORMAT_RAW, 0, 0, &g) == DNET_OK);
    char* out = nullptr;
    CHECK(dnet_gains_report(g, 8, nullptr, nullptr, 0, 0, 2, 0, &out) == DNET_OK);
    CHECK(take(out).find("\"gamma_max_log2\": 3") != std::string::npos);
    const int flat[] = {0, 1, 2};
    const std::size_t sizes[] = {2, 1};
    CHECK(dnet_gains_report(g, 4, flat, sizes, 2, 0, 1, 1, &out) == DNET_OK);
    CHECK(take(out).rfind("u,k,log2_gain,rank", 0) == 0);
    CHECK(dnet_integrate_json(g, "prod", DNET_SCRAMBLE_RANDOM_LINEAR, 32, 3, 8, 1, &out) == DNET_OK);
    CHECK(take(out).find("\"mean\"") != std::string::npos);
    CHECK(dnet_integrate_json(g, "nope", DNET_SCRAMBLE_RANDOM_LINEAR, 32, 3, 8, 1, &out) == DNET_ERR_VALIDATION);
    const int u[] = {0};
    const int k[] = {3};
    CHECK(dnet_verify_gain_identity_json(g, u, k, 1, 500, DNET_SCRAMBLE_NESTED_UNIFORM, 32, 5, 1, &out) == DNET_OK);
    CHECK(take(out).find("\"empirical_n_var\"") != std::string::npos);
    CHECK(dnet_verify_suite_json("power-of-two", 3, 2, 10, 1, 1, &out) == DNET_OK);
    CHECK(take(out).find("\"passed\": true") != std::string::npos);
    CHECK(dnet_verify_suite_json("bogus", 3, 2, 10, 1, 1, &out) == DNET_ERR_VALIDATION);
    dnet_generators_destroy(g);
}
