#pragma once

// Base-2 digital net construction.
//
// Indices are 0-based throughout the C++ API: coordinate j in [0, s), matrix
// row l in [0, m). Row l of C_j carries the weight 2^{-(l+1)} in the output
// point, and column c multiplies bit c of the point index (value 2^c).
// Rows at or beyond m are zero rows, so C_{u,k} is defined for any depth.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dnet/gf2.hpp"

namespace dnet {

inline constexpr int kMaxPointBits = 32;

class GeneratorSet {
public:
    // Every matrix must be m x m with 1 <= m <= 32.
    explicit GeneratorSet(std::vector<gf2::BitMatrix> matrices);

    int dims() const noexcept { return static_cast<int>(matrices_.size()); }
    int m() const noexcept { return m_; }
    std::size_t size() const noexcept { return std::size_t{1} << m_; }

    const gf2::BitMatrix& matrix(int j) const { return matrices_.at(static_cast<std::size_t>(j)); }
    std::span<const gf2::BitMatrix> matrices() const noexcept { return matrices_; }

    // Row l of C_j, or the zero row when l >= m.
    std::uint64_t row(int j, int l) const {
        return l < m_ ? matrices_[static_cast<std::size_t>(j)].row_word(l) : 0;
    }

    GeneratorSet first_dims(int d) const;

    friend bool operator==(const GeneratorSet&, const GeneratorSet&) = default;

private:
    std::vector<gf2::BitMatrix> matrices_;
    int m_ = 0;
};

// (u, k): u strictly increasing coordinate indices, k one depth per element of u.
struct SubsetIndex {
    std::vector<int> u;
    std::vector<int> k;

    int depth() const noexcept;
    void validate(int dims) const;

    friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;
    // Orders by (|u|, u, |k|, k).
    friend bool operator<(const SubsetIndex& a, const SubsetIndex& b);
};

// n points, each coordinate an integer numerator over 2^bits.
struct NetPoints {
    std::size_t n = 0;
    int dims = 0;
    int bits = 0;
    std::vector<std::uint64_t> coords;  // row-major n x dims

    std::uint64_t at(std::size_t i, int j) const { return coords[i * static_cast<std::size_t>(dims) + static_cast<std::size_t>(j)]; }
    std::uint64_t& at(std::size_t i, int j) { return coords[i * static_cast<std::size_t>(dims) + static_cast<std::size_t>(j)]; }
    double unit(std::size_t i, int j) const;

    friend bool operator==(const NetPoints&, const NetPoints&) = default;
};

enum class GeneratorFormat { Raw, DirectionNumbers };

struct LoadOptions {
    // RAW: keep only the first `dims` matrices. DIRECTION_NUMBERS: required.
    std::optional<int> dims;
    // RAW: must match the header when given. DIRECTION_NUMBERS: required.
    std::optional<int> m;
};

// Throws ParseError (with line number) on malformed text.
GeneratorSet load_generators(std::istream& in, GeneratorFormat format, const LoadOptions& opts = {});
void write_generators_raw(const GeneratorSet& g, std::ostream& out);

// Sobol' matrix from one direction-number entry (degree, polynomial a, m_1..m_degree).
gf2::BitMatrix sobol_matrix(int degree, std::uint32_t poly, std::span<const std::uint32_t> initial, int m);

// Gray-code order generation; bit-identical to generate_points_direct.
NetPoints generate_points(const GeneratorSet& g);
NetPoints generate_points_direct(const GeneratorSet& g);

// |k| x m: rows 0..k_j-1 of C_j for j in u, in u's order.
gf2::BitMatrix assemble_cuk(const GeneratorSet& g, const SubsetIndex& idx);
// |w| x m: row k_j of C_j for each j in w (w a subset of u, in order).
gf2::BitMatrix assemble_nabla(const GeneratorSet& g, const SubsetIndex& idx, std::span<const int> w);
gf2::BitMatrix assemble_nabla(const GeneratorSet& g, const SubsetIndex& idx);
// Sum over j in u of row k_j of C_j.
std::uint64_t nabla_sum(const GeneratorSet& g, const SubsetIndex& idx);

enum class PointFormat { CsvFraction, CsvNumerator, Binary };

// CSV: one point per line, comma separated. Binary: little-endian numerators,
// u32 when bits <= 32 and u64 otherwise, row-major with no header.
void write_points(const NetPoints& p, PointFormat format, std::ostream& out);

}  // namespace dnet
