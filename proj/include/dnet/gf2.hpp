#pragma once

// Bit-packed linear algebra over GF(2).
//
// A row of up to 64 columns lives in one machine word. Column c (0-based)
// is stored in bit c, so the product of a row with a bit vector x is
// parity(row & x). Matrices may have any number of rows.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dnet::gf2 {

inline constexpr int kMaxCols = 64;

inline constexpr std::uint64_t low_mask(int bits) {
    return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

inline int parity(std::uint64_t x) { return std::popcount(x) & 1; }

class BitVector {
public:
    BitVector() = default;
    BitVector(std::uint64_t bits, int length);

    // Parses a string of '0'/'1'; the first character is column 0.
    static BitVector from_string(std::string_view text);

    std::uint64_t word() const noexcept { return bits_; }
    int length() const noexcept { return length_; }
    bool get(int col) const noexcept { return (bits_ >> col) & 1u; }
    bool is_zero() const noexcept { return bits_ == 0; }
    std::string to_string() const;

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::uint64_t bits_ = 0;
    int length_ = 0;
};

// Dense set of row indices, used to record which original rows were combined.
class RowSet {
public:
    RowSet() = default;
    explicit RowSet(std::size_t size) : words_((size + 63) / 64, 0), size_(size) {}

    static RowSet single(std::size_t size, std::size_t index) {
        RowSet r(size);
        r.set(index);
        return r;
    }

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept;
    std::vector<std::size_t> indices() const;

    RowSet& operator^=(const RowSet& other);
    friend bool operator==(const RowSet&, const RowSet&) = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(int ncols);
    BitMatrix(int ncols, std::vector<std::uint64_t> rows);

    static BitMatrix zero(int nrows, int ncols);
    static BitMatrix identity(int n);
    // One string per row, all of equal length.
    static BitMatrix from_strings(std::span<const std::string_view> rows);

    int nrows() const noexcept { return static_cast<int>(rows_.size()); }
    int ncols() const noexcept { return ncols_; }
    bool empty() const noexcept { return rows_.empty(); }

    std::uint64_t row_word(int r) const { return rows_[static_cast<std::size_t>(r)]; }
    BitVector row(int r) const { return {rows_[static_cast<std::size_t>(r)], ncols_}; }
    std::span<const std::uint64_t> row_words() const noexcept { return rows_; }
    bool get(int r, int c) const { return (rows_[static_cast<std::size_t>(r)] >> c) & 1u; }

    void set(int r, int c, bool value);
    void append_row(std::uint64_t word);
    void append_row(const BitVector& v);

    BitMatrix transpose() const;
    // y = M x, one output bit per row.
    std::uint64_t multiply(std::uint64_t x) const;
    std::vector<std::string> to_strings() const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::vector<std::uint64_t> rows_;
    int ncols_ = 1;
};

struct RowReduction {
    // Row echelon form with the same row count as the input; zero rows last.
    BitMatrix reduced;
    int rank = 0;
    // Pivot column of each of the first `rank` rows, strictly increasing.
    std::vector<int> pivot_cols;
    // history[r] is the set of input rows whose sum is reduced row r.
    // For r >= rank these are nontrivial dependencies among the input rows.
    std::vector<RowSet> history;
};

RowReduction row_reduce(const BitMatrix& m);
int rank(const BitMatrix& m);
bool in_row_space(const BitMatrix& m, const BitVector& v);
// log2 of the number of solutions of A x = y, or nullopt if inconsistent.
std::optional<int> solution_count_log2(const BitMatrix& a, const BitVector& y);
// Basis of {x : A x = 0}, one word per basis vector.
std::vector<std::uint64_t> nullspace_basis(const BitMatrix& a);
// A nonempty set of rows summing to zero, or nullopt if the rows are independent.
std::optional<RowSet> row_dependency(const BitMatrix& m);

// Incremental echelon basis keyed by lowest set bit. Insertion reports
// whether the vector was independent of what is already stored.
class EchelonBasis {
public:
    bool insert(std::uint64_t v) noexcept {
        while (v != 0) {
            const int b = std::countr_zero(v);
            if (slots_[static_cast<std::size_t>(b)] == 0) {
                slots_[static_cast<std::size_t>(b)] = v;
                ++rank_;
                return true;
            }
            v ^= slots_[static_cast<std::size_t>(b)];
        }
        return false;
    }

    std::uint64_t reduce(std::uint64_t v) const noexcept {
        while (v != 0) {
            const int b = std::countr_zero(v);
            if (slots_[static_cast<std::size_t>(b)] == 0) return v;
            v ^= slots_[static_cast<std::size_t>(b)];
        }
        return 0;
    }

    bool contains(std::uint64_t v) const noexcept { return reduce(v) == 0; }
    int rank() const noexcept { return rank_; }

private:
    std::uint64_t slots_[kMaxCols] = {};
    int rank_ = 0;
};

}  // namespace dnet::gf2
