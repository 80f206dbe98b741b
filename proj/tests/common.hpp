#pragma once

#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnet/netgen.hpp"
#include "oracle.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) { return std::string(DNET_TEST_DATA) + "/" + name; }

inline dnet::GeneratorSet load_raw(const std::string& name) {
    std::ifstream in(data_path(name));
    if (!in) throw std::runtime_error("missing fixture " + name);
    return dnet::load_generators(in, dnet::GeneratorFormat::Raw);
}

inline dnet::GeneratorSet load_sobol(int dims, int m) {
    std::ifstream in(data_path("joe_kuo_excerpt.txt"));
    return dnet::load_generators(in, dnet::GeneratorFormat::DirectionNumbers, {dims, m});
}

inline std::vector<oracle::Matrix> as_strings(const dnet::GeneratorSet& g) {
    std::vector<oracle::Matrix> out;
    for (int j = 0; j < g.dims(); ++j) out.push_back(g.matrix(j).to_strings());
    return out;
}

inline dnet::GeneratorSet from_strings(const std::vector<oracle::Matrix>& mats) {
    std::vector<dnet::gf2::BitMatrix> out;
    for (const auto& m : mats) {
        std::vector<std::string_view> rows(m.begin(), m.end());
        out.push_back(dnet::gf2::BitMatrix::from_strings(rows));
    }
    return dnet::GeneratorSet(std::move(out));
}

inline dnet::GeneratorSet random_set(std::mt19937_64& rng, int s, int m) {
    std::vector<dnet::gf2::BitMatrix> mats;
    for (int j = 0; j < s; ++j) {
        std::vector<std::uint64_t> rows;
        for (int l = 0; l < m; ++l) rows.push_back(rng() & dnet::gf2::low_mask(m));
        mats.emplace_back(m, std::move(rows));
    }
    return dnet::GeneratorSet(std::move(mats));
}

}  // namespace testutil
