#include "dnet/netgen.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "dnet/error.hpp"

namespace dnet {

GeneratorSet::GeneratorSet(std::vector<gf2::BitMatrix> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw ValidationError("a generator set needs at least one matrix");
    m_ = matrices_.front().ncols();
    if (m_ < 1 || m_ > kMaxPointBits) throw ValidationError("m must be in [1, 32], got " + std::to_string(m_));
    for (std::size_t j = 0; j < matrices_.size(); ++j) {
        if (matrices_[j].nrows() != m_ || matrices_[j].ncols() != m_)
            throw ValidationError("generator matrix " + std::to_string(j + 1) + " is not " + std::to_string(m_) + "x" +
                                  std::to_string(m_));
    }
}

GeneratorSet GeneratorSet::first_dims(int d) const {
    if (d < 1 || d > dims()) throw ValidationError("requested " + std::to_string(d) + " dimensions of " + std::to_string(dims()));
    return GeneratorSet({matrices_.begin(), matrices_.begin() + d});
}

int SubsetIndex::depth() const noexcept {
    int d = 0;
    for (int kj : k) d += kj;
    return d;
}

void SubsetIndex::validate(int dims) const {
    if (u.empty()) throw ValidationError("subset u must be nonempty");
    if (u.size() != k.size()) throw ValidationError("k must have one entry per element of u");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0 || u[i] >= dims) throw ValidationError("subset index out of range: " + std::to_string(u[i] + 1));
        if (i > 0 && u[i] <= u[i - 1]) throw ValidationError("subset u must be strictly increasing");
        if (k[i] < 0) throw ValidationError("depths must be nonnegative");
    }
}

bool operator<(const SubsetIndex& a, const SubsetIndex& b) {
    return std::forward_as_tuple(a.u.size(), a.u, a.depth(), a.k) < std::forward_as_tuple(b.u.size(), b.u, b.depth(), b.k);
}

double NetPoints::unit(std::size_t i, int j) const {
    return static_cast<double>(at(i, j)) / std::ldexp(1.0, bits);
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<long long> parse_ints(const std::string& line, int lineno) {
    std::vector<long long> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        long long v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size()) throw ParseError(lineno, "expected an integer, got '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

void check_m(int m, int lineno) {
    if (m < 1 || m > kMaxPointBits) throw ParseError(lineno, "m must be in [1, 32], got " + std::to_string(m));
}

GeneratorSet load_raw(std::istream& in, const LoadOptions& opts) {
    std::string line;
    int lineno = 0;
    auto next_content = [&](std::string& out) {
        while (std::getline(in, line)) {
            ++lineno;
            out = trim(line);
            if (!out.empty() && out[0] != '#') return true;
        }
        return false;
    };

    std::string text;
    if (!next_content(text)) throw ParseError(lineno + 1, "missing header 's m'");
    const auto header = parse_ints(text, lineno);
    if (header.size() != 2) throw ParseError(lineno, "header must be 's m'");
    if (header[0] < 1) throw ParseError(lineno, "s must be positive");
    const int s = static_cast<int>(header[0]);
    const int m = static_cast<int>(header[1]);
    check_m(m, lineno);
    if (opts.m && *opts.m != m)
        throw ValidationError("requested m=" + std::to_string(*opts.m) + " but the file has m=" + std::to_string(m));

    std::vector<gf2::BitMatrix> mats;
    for (int j = 0; j < s; ++j) {
        gf2::BitMatrix mat(m);
        for (int l = 0; l < m; ++l) {
            if (!next_content(text))
                throw ParseError(lineno + 1, "expected row " + std::to_string(l + 1) + " of matrix " + std::to_string(j + 1));
            if (static_cast<int>(text.size()) != m)
                throw ParseError(lineno, "row has " + std::to_string(text.size()) + " columns, expected " + std::to_string(m));
            for (char ch : text)
                if (ch != '0' && ch != '1') throw ParseError(lineno, std::string("non-binary digit '") + ch + "'");
            mat.append_row(gf2::BitVector::from_string(text));
        }
        mats.push_back(std::move(mat));
    }
    if (next_content(text)) throw ParseError(lineno, "unexpected content after matrix " + std::to_string(s));

    GeneratorSet g(std::move(mats));
    return opts.dims ? g.first_dims(*opts.dims) : g;
}

GeneratorSet load_direction_numbers(std::istream& in, const LoadOptions& opts) {
    if (!opts.dims || !opts.m) throw ValidationError("direction-number input needs both dims and m");
    const int dims = *opts.dims;
    const int m = *opts.m;
    if (dims < 1) throw ValidationError("dims must be positive");
    check_m(m, 0);

    std::vector<gf2::BitMatrix> mats{gf2::BitMatrix::identity(m)};
    std::string line;
    int lineno = 0;
    while (static_cast<int>(mats.size()) < dims && std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        if (!std::isdigit(static_cast<unsigned char>(text[0]))) {
            if (lineno == 1) continue;  // column header "d s a m_i"
            throw ParseError(lineno, "expected 'd s a m_1 ... m_s'");
        }
        const auto v = parse_ints(text, lineno);
        if (v.size() < 3) throw ParseError(lineno, "expected 'd s a m_1 ... m_s'");
        const long long degree = v[1];
        const long long poly = v[2];
        if (degree < 1 || degree > 31) throw ParseError(lineno, "degree must be in [1, 31]");
        if (static_cast<long long>(v.size()) != 3 + degree)
            throw ParseError(lineno, "expected " + std::to_string(degree) + " initial direction numbers, got " +
                                         std::to_string(v.size() - 3));
        if (poly < 0 || poly >= (1LL << (degree - 1)))
            throw ParseError(lineno, "polynomial coefficient a must be in [0, 2^(s-1))");
        std::vector<std::uint32_t> init;
        for (long long i = 0; i < degree; ++i) {
            const long long mi = v[static_cast<std::size_t>(3 + i)];
            if (mi < 1 || mi >= (1LL << (i + 1)) || (mi % 2) == 0)
                throw ParseError(lineno, "m_" + std::to_string(i + 1) + " must be odd and below 2^" + std::to_string(i + 1));
            init.push_back(static_cast<std::uint32_t>(mi));
        }
        mats.push_back(sobol_matrix(static_cast<int>(degree), static_cast<std::uint32_t>(poly), init, m));
    }
    if (static_cast<int>(mats.size()) < dims)
        throw ParseError(lineno + 1, "file provides " + std::to_string(mats.size()) + " dimensions, " + std::to_string(dims) +
                                         " requested");
    return GeneratorSet(std::move(mats));
}

}  // namespace

GeneratorSet load_generators(std::istream& in, GeneratorFormat format, const LoadOptions& opts) {
    switch (format) {
        case GeneratorFormat::Raw: return load_raw(in, opts);
        case GeneratorFormat::DirectionNumbers: return load_direction_numbers(in, opts);
    }
    throw ValidationError("unknown generator format");
}

void write_generators_raw(const GeneratorSet& g, std::ostream& out) {
    out << g.dims() << ' ' << g.m() << '\n';
    for (int j = 0; j < g.dims(); ++j) {
        if (j > 0) out << '\n';
        for (const auto& row : g.matrix(j).to_strings()) out << row << '\n';
    }
}

gf2::BitMatrix sobol_matrix(int degree, std::uint32_t poly, std::span<const std::uint32_t> initial, int m) {
    if (static_cast<int>(initial.size()) != degree) throw ValidationError("need one initial direction number per degree");
    // Direction numbers as 32-bit fractions: v[k] = m_k / 2^k for k <= degree, then
    // v[k] = v[k-s] ^ (v[k-s] >> s) ^ sum_{i=1}^{s-1} a_i v[k-i].
    std::vector<std::uint32_t> v(static_cast<std::size_t>(std::max(m, degree)) + 1, 0);
    for (int k = 1; k <= degree; ++k) v[static_cast<std::size_t>(k)] = initial[static_cast<std::size_t>(k - 1)] << (32 - k);
    for (int k = degree + 1; k <= m; ++k) {
        auto x = v[static_cast<std::size_t>(k - degree)];
        x ^= x >> degree;
        for (int i = 1; i < degree; ++i)
            if ((poly >> (degree - 1 - i)) & 1u) x ^= v[static_cast<std::size_t>(k - i)];
        v[static_cast<std::size_t>(k)] = x;
    }
    auto c = gf2::BitMatrix::zero(m, m);
    for (int col = 0; col < m; ++col)
        for (int l = 0; l < m; ++l)
            if ((v[static_cast<std::size_t>(col + 1)] >> (31 - l)) & 1u) c.set(l, col, true);
    return c;
}

namespace {

// Numerator contributed by index bit c in coordinate j: sum_l C_j(l, c) 2^{m-1-l}.
std::vector<std::uint64_t> column_numerators(const GeneratorSet& g, int j) {
    const int m = g.m();
    std::vector<std::uint64_t> cols(static_cast<std::size_t>(m), 0);
    for (int c = 0; c < m; ++c)
        for (int l = 0; l < m; ++l)
            if (g.matrix(j).get(l, c)) cols[static_cast<std::size_t>(c)] |= std::uint64_t{1} << (m - 1 - l);
    return cols;
}

NetPoints empty_points(const GeneratorSet& g) {
    NetPoints p;
    p.n = g.size();
    p.dims = g.dims();
    p.bits = g.m();
    p.coords.assign(p.n * static_cast<std::size_t>(p.dims), 0);
    return p;
}

}  // namespace

NetPoints generate_points(const GeneratorSet& g) {
    auto p = empty_points(g);
    for (int j = 0; j < g.dims(); ++j) {
        const auto cols = column_numerators(g, j);
        std::uint64_t x = 0;
        // Point gray(i) follows gray(i-1) by toggling the column of the lowest set bit of i.
        for (std::size_t i = 1; i < p.n; ++i) {
            x ^= cols[static_cast<std::size_t>(std::countr_zero(i))];
            p.at(i ^ (i >> 1), j) = x;
        }
    }
    return p;
}

NetPoints generate_points_direct(const GeneratorSet& g) {
    auto p = empty_points(g);
    const int m = g.m();
    for (int j = 0; j < g.dims(); ++j) {
        const auto& c = g.matrix(j);
        for (std::size_t i = 0; i < p.n; ++i) {
            std::uint64_t x = 0;
            for (int l = 0; l < m; ++l)
                if (gf2::parity(c.row_word(l) & i)) x |= std::uint64_t{1} << (m - 1 - l);
            p.at(i, j) = x;
        }
    }
    return p;
}

gf2::BitMatrix assemble_cuk(const GeneratorSet& g, const SubsetIndex& idx) {
    idx.validate(g.dims());
    gf2::BitMatrix out(g.m());
    for (std::size_t a = 0; a < idx.u.size(); ++a)
        for (int l = 0; l < idx.k[a]; ++l) out.append_row(g.row(idx.u[a], l));
    return out;
}

gf2::BitMatrix assemble_nabla(const GeneratorSet& g, const SubsetIndex& idx, std::span<const int> w) {
    idx.validate(g.dims());
    if (w.empty()) throw ValidationError("w must be nonempty");
    gf2::BitMatrix out(g.m());
    std::size_t a = 0;
    for (std::size_t b = 0; b < w.size(); ++b) {
        while (a < idx.u.size() && idx.u[a] < w[b]) ++a;
        if (a == idx.u.size() || idx.u[a] != w[b] || (b > 0 && w[b] <= w[b - 1]))
            throw ValidationError("w must be an increasing subset of u");
        out.append_row(g.row(idx.u[a], idx.k[a]));
    }
    return out;
}

gf2::BitMatrix assemble_nabla(const GeneratorSet& g, const SubsetIndex& idx) { return assemble_nabla(g, idx, idx.u); }

std::uint64_t nabla_sum(const GeneratorSet& g, const SubsetIndex& idx) {
    std::uint64_t sum = 0;
    for (std::size_t a = 0; a < idx.u.size(); ++a) sum ^= g.row(idx.u[a], idx.k[a]);
    return sum;
}

void write_points(const NetPoints& p, PointFormat format, std::ostream& out) {
    if (format == PointFormat::Binary) {
        const int width = p.bits <= 32 ? 4 : 8;
        std::vector<char> buf;
        buf.reserve(p.coords.size() * static_cast<std::size_t>(width));
        for (auto x : p.coords)
            for (int b = 0; b < width; ++b) buf.push_back(static_cast<char>((x >> (8 * b)) & 0xFF));
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        return;
    }
    char tmp[32];
    for (std::size_t i = 0; i < p.n; ++i) {
        for (int j = 0; j < p.dims; ++j) {
            if (j > 0) out << ',';
            if (format == PointFormat::CsvNumerator) {
                out << p.at(i, j);
            } else {
                std::snprintf(tmp, sizeof tmp, "%.17g", p.unit(i, j));
                out << tmp;
            }
        }
        out << '\n';
    }
}

}  // namespace dnet
