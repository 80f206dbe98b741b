#include "dnet/gf2.hpp"

#include <utility>

#include "dnet/error.hpp"

namespace dnet::gf2 {

namespace {

void check_cols(int ncols) {
    if (ncols < 1 || ncols > kMaxCols)
        throw ValidationError("bit matrix column count must be in [1, 64], got " + std::to_string(ncols));
}

}  // namespace

BitVector::BitVector(std::uint64_t bits, int length) : bits_(bits), length_(length) {
    if (length < 1 || length > kMaxCols)
        throw ValidationError("bit vector length must be in [1, 64], got " + std::to_string(length));
    if ((bits & ~low_mask(length)) != 0) throw ValidationError("bit vector has bits beyond its length");
}

BitVector BitVector::from_string(std::string_view text) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1')
            bits |= std::uint64_t{1} << i;
        else if (text[i] != '0')
            throw ValidationError("bit string may contain only '0' and '1'");
    }
    return {bits, static_cast<int>(text.size())};
}

std::string BitVector::to_string() const {
    std::string s(static_cast<std::size_t>(length_), '0');
    for (int c = 0; c < length_; ++c)
        if (get(c)) s[static_cast<std::size_t>(c)] = '1';
    return s;
}

bool RowSet::empty() const noexcept {
    for (auto w : words_)
        if (w != 0) return false;
    return true;
}

std::vector<std::size_t> RowSet::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

RowSet& RowSet::operator^=(const RowSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

BitMatrix::BitMatrix(int ncols) : ncols_(ncols) { check_cols(ncols); }

BitMatrix::BitMatrix(int ncols, std::vector<std::uint64_t> rows) : rows_(std::move(rows)), ncols_(ncols) {
    check_cols(ncols);
    for (auto r : rows_)
        if ((r & ~low_mask(ncols)) != 0) throw ValidationError("matrix row has bits beyond the column count");
}

BitMatrix BitMatrix::zero(int nrows, int ncols) {
    return BitMatrix(ncols, std::vector<std::uint64_t>(static_cast<std::size_t>(nrows), 0));
}

BitMatrix BitMatrix::identity(int n) {
    BitMatrix m(n);
    for (int i = 0; i < n; ++i) m.append_row(std::uint64_t{1} << i);
    return m;
}

BitMatrix BitMatrix::from_strings(std::span<const std::string_view> rows) {
    if (rows.empty()) throw ValidationError("cannot infer column count from zero rows");
    BitMatrix m(static_cast<int>(rows.front().size()));
    for (auto r : rows) {
        if (static_cast<int>(r.size()) != m.ncols_) throw ValidationError("rows have different lengths");
        m.append_row(BitVector::from_string(r));
    }
    return m;
}

void BitMatrix::set(int r, int c, bool value) {
    auto& w = rows_[static_cast<std::size_t>(r)];
    const auto bit = std::uint64_t{1} << c;
    w = value ? (w | bit) : (w & ~bit);
}

void BitMatrix::append_row(std::uint64_t word) {
    if ((word & ~low_mask(ncols_)) != 0) throw ValidationError("row has bits beyond the column count");
    rows_.push_back(word);
}

void BitMatrix::append_row(const BitVector& v) {
    if (v.length() != ncols_) throw ValidationError("row length does not match column count");
    rows_.push_back(v.word());
}

BitMatrix BitMatrix::transpose() const {
    if (rows_.empty() || nrows() > kMaxCols) throw ValidationError("transpose needs 1 to 64 rows");
    BitMatrix t = zero(ncols_, nrows());
    for (int r = 0; r < nrows(); ++r)
        for (int c = 0; c < ncols_; ++c)
            if (get(r, c)) t.set(c, r, true);
    return t;
}

std::uint64_t BitMatrix::multiply(std::uint64_t x) const {
    std::uint64_t y = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r)
        y |= static_cast<std::uint64_t>(parity(rows_[r] & x)) << r;
    return y;
}

std::vector<std::string> BitMatrix::to_strings() const {
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (int r = 0; r < nrows(); ++r) out.push_back(row(r).to_string());
    return out;
}

RowReduction row_reduce(const BitMatrix& m) {
    const auto n = static_cast<std::size_t>(m.nrows());
    std::vector<std::uint64_t> rows(m.row_words().begin(), m.row_words().end());
    std::vector<RowSet> hist;
    hist.reserve(n);
    for (std::size_t i = 0; i < n; ++i) hist.push_back(RowSet::single(n, i));

    RowReduction out;
    std::size_t lead = 0;
    for (int c = 0; c < m.ncols() && lead < n; ++c) {
        const auto bit = std::uint64_t{1} << c;
        std::size_t p = lead;
        while (p < n && !(rows[p] & bit)) ++p;
        if (p == n) continue;
        std::swap(rows[p], rows[lead]);
        std::swap(hist[p], hist[lead]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != lead && (rows[r] & bit)) {
                rows[r] ^= rows[lead];
                hist[r] ^= hist[lead];
            }
        }
        out.pivot_cols.push_back(c);
        ++lead;
    }
    out.rank = static_cast<int>(lead);
    out.reduced = BitMatrix(m.ncols(), std::move(rows));
    out.history = std::move(hist);
    return out;
}

int rank(const BitMatrix& m) {
    EchelonBasis basis;
    for (auto r : m.row_words()) basis.insert(r);
    return basis.rank();
}

bool in_row_space(const BitMatrix& m, const BitVector& v) {
    if (v.length() != m.ncols()) throw ValidationError("vector length does not match matrix column count");
    EchelonBasis basis;
    for (auto r : m.row_words()) basis.insert(r);
    return basis.contains(v.word());
}

std::optional<int> solution_count_log2(const BitMatrix& a, const BitVector& y) {
    if (y.length() != a.nrows() && !(a.nrows() == 0 && y.length() == 0))
        throw ValidationError("right-hand side length does not match matrix row count");
    // Row-reduce [A | y]: the system is inconsistent iff some zero row of A carries y = 1.
    const auto red = row_reduce(a);
    for (std::size_t r = static_cast<std::size_t>(red.rank); r < red.history.size(); ++r) {
        int rhs = 0;
        for (auto i : red.history[r].indices()) rhs ^= static_cast<int>(y.get(static_cast<int>(i)));
        if (rhs) return std::nullopt;
    }
    return a.ncols() - red.rank;
}

std::vector<std::uint64_t> nullspace_basis(const BitMatrix& a) {
    const auto red = row_reduce(a);
    std::uint64_t pivot_mask = 0;
    for (int c : red.pivot_cols) pivot_mask |= std::uint64_t{1} << c;
    std::vector<std::uint64_t> basis;
    for (int f = 0; f < a.ncols(); ++f) {
        if (pivot_mask & (std::uint64_t{1} << f)) continue;
        // Free column f set to 1; each pivot variable equals its row's entry in column f.
        std::uint64_t x = std::uint64_t{1} << f;
        for (int r = 0; r < red.rank; ++r)
            if (red.reduced.get(r, f)) x |= std::uint64_t{1} << red.pivot_cols[static_cast<std::size_t>(r)];
        basis.push_back(x);
    }
    return basis;
}

std::optional<RowSet> row_dependency(const BitMatrix& m) {
    const auto red = row_reduce(m);
    if (red.rank == m.nrows()) return std::nullopt;
    return red.history[static_cast<std::size_t>(red.rank)];
}

}  // namespace dnet::gf2
