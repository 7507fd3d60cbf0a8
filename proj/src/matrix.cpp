#include "kq/matrix.hpp"

#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace kq {

namespace {

std::int64_t canonical(std::int64_t value, std::int64_t q) {
    value %= q;
    return value < 0 ? value + q : value;
}

void require_same(Modulus a, Modulus b, const char* what) {
    if (a != b)
        throw std::invalid_argument(std::string(what) +
                                    ": operands have different moduli");
}

}  // namespace

ModVector::ModVector(std::vector<std::int64_t> values, Modulus modulus)
    : values_(std::move(values)), modulus_(modulus) {
    if (values_.empty())
        throw std::invalid_argument("vector must have at least one entry");
    for (auto& v : values_) v = canonical(v, modulus_.value());
}

Residue ModVector::at(std::size_t i) const {
    return Residue(values_.at(i), modulus_);
}

ModVector ModVector::prefix(std::size_t n) const {
    if (n == 0 || n > values_.size())
        throw std::invalid_argument("prefix length out of range");
    return ModVector(
        std::vector<std::int64_t>(values_.begin(), values_.begin() + n),
        modulus_);
}

ModMatrix::ModMatrix(std::size_t rows, std::size_t cols, Modulus modulus)
    : rows_(rows), cols_(cols), modulus_(modulus), entries_(rows * cols, 0) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("empty matrices are not supported");
}

ModMatrix::ModMatrix(std::size_t rows, std::size_t cols, Modulus modulus,
                     std::vector<std::int64_t> entries)
    : rows_(rows), cols_(cols), modulus_(modulus),
      entries_(std::move(entries)) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("empty matrices are not supported");
    if (entries_.size() != rows * cols)
        throw std::invalid_argument("entry count does not match shape");
    for (auto& v : entries_) v = canonical(v, modulus_.value());
}

ModMatrix ModMatrix::identity(std::size_t n, Modulus modulus) {
    ModMatrix m(n, n, modulus);
    for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
    return m;
}

Residue ModMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_)
        throw std::invalid_argument("matrix index out of range");
    return Residue(entries_[r * cols_ + c], modulus_);
}

void ModMatrix::set(std::size_t r, std::size_t c, std::int64_t value) {
    if (r >= rows_ || c >= cols_)
        throw std::invalid_argument("matrix index out of range");
    entries_[r * cols_ + c] = canonical(value, modulus_.value());
}

ModVector ModMatrix::row(std::size_t r) const {
    if (r >= rows_) throw std::invalid_argument("row index out of range");
    return ModVector(
        std::vector<std::int64_t>(entries_.begin() + r * cols_,
                                  entries_.begin() + (r + 1) * cols_),
        modulus_);
}

ModVector ModMatrix::column(std::size_t c) const {
    if (c >= cols_) throw std::invalid_argument("column index out of range");
    std::vector<std::int64_t> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = entries_[r * cols_ + c];
    return ModVector(v, modulus_);
}

ModVector basis_vector(std::size_t i, std::size_t n, Modulus modulus) {
    if (i < 1 || i > n)
        throw std::invalid_argument("basis index out of range (1-based)");
    std::vector<std::int64_t> v(n, 0);
    v[i - 1] = 1;
    return ModVector(v, modulus);
}

ModVector zero_vector(std::size_t n, Modulus modulus) {
    return ModVector(std::vector<std::int64_t>(n, 0), modulus);
}

ModMatrix transpose(const ModMatrix& a) {
    ModMatrix t(a.cols(), a.rows(), a.modulus());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t.set(c, r, a(r, c));
    return t;
}

ModMatrix block2x2(const ModMatrix& a, const ModMatrix& b, const ModMatrix& c,
                   const ModMatrix& d) {
    require_same(a.modulus(), b.modulus(), "block2x2");
    require_same(a.modulus(), c.modulus(), "block2x2");
    require_same(a.modulus(), d.modulus(), "block2x2");
    if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() ||
        b.cols() != d.cols())
        throw std::invalid_argument("block2x2: blocks are not conformable");
    ModMatrix m(a.rows() + c.rows(), a.cols() + b.cols(), a.modulus());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t cc = 0; cc < a.cols(); ++cc) m.set(r, cc, a(r, cc));
        for (std::size_t cc = 0; cc < b.cols(); ++cc)
            m.set(r, a.cols() + cc, b(r, cc));
    }
    for (std::size_t r = 0; r < c.rows(); ++r) {
        for (std::size_t cc = 0; cc < c.cols(); ++cc)
            m.set(a.rows() + r, cc, c(r, cc));
        for (std::size_t cc = 0; cc < d.cols(); ++cc)
            m.set(a.rows() + r, a.cols() + cc, d(r, cc));
    }
    return m;
}

ModMatrix operator*(const ModMatrix& a, const ModMatrix& b) {
    require_same(a.modulus(), b.modulus(), "matmul");
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions disagree");
    const std::int64_t q = a.modulus().value();
    ModMatrix out(a.rows(), b.cols(), a.modulus());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) {
            std::int64_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                acc = (acc + a(r, k) * b(k, c)) % q;
            out.set(r, c, acc);
        }
    return out;
}

ModVector operator*(const ModMatrix& a, const ModVector& x) {
    require_same(a.modulus(), x.modulus(), "matvec");
    if (a.cols() != x.length())
        throw std::invalid_argument("matvec: dimensions disagree");
    const std::int64_t q = a.modulus().value();
    std::vector<std::int64_t> out(a.rows(), 0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        std::int64_t acc = 0;
        for (std::size_t c = 0; c < a.cols(); ++c)
            acc = (acc + a(r, c) * x[c]) % q;
        out[r] = acc;
    }
    return ModVector(out, a.modulus());
}

Residue dot(const ModVector& a, const ModVector& b) {
    require_same(a.modulus(), b.modulus(), "dot");
    if (a.length() != b.length())
        throw std::invalid_argument("dot: lengths disagree");
    const std::int64_t q = a.modulus().value();
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < a.length(); ++i)
        acc = (acc + a[i] * b[i]) % q;
    return Residue(acc, a.modulus());
}

std::optional<ModVector> solve(const ModMatrix& a, const ModVector& b) {
    return ColumnSolver(a).solve(b);
}

std::optional<ModMatrix> right_inverse(const ModMatrix& a) {
    return ColumnSolver(a).solve_columns(
        ModMatrix::identity(a.rows(), a.modulus()));
}

std::optional<ModMatrix> left_inverse(const ModMatrix& a) {
    const auto r = right_inverse(transpose(a));
    if (!r) return std::nullopt;
    return transpose(*r);
}

Residue determinant(const ModMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    // Bareiss on the integer lift: every intermediate entry is a minor of
    // the lift, so the division below is exact. Reject only if a minor
    // actually leaves int64.
    std::vector<std::vector<std::int64_t>> b(n,
                                             std::vector<std::int64_t>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) b[r][c] = a(r, c);

    std::int64_t sign = 1;
    std::int64_t prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (b[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && b[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return Residue(0, a.modulus());
            std::swap(b[k], b[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                const __int128 num = static_cast<__int128>(b[k][k]) * b[i][j] -
                                     static_cast<__int128>(b[i][k]) * b[k][j];
                const __int128 val = num / prev;
                if (val > INT64_MAX || val < -INT64_MAX)
                    throw std::overflow_error(
                        "determinant: integer lift exceeds int64");
                b[i][j] = static_cast<std::int64_t>(val);
            }
            b[i][k] = 0;
        }
        prev = b[k][k];
    }
    return Residue(sign * b[n - 1][n - 1], a.modulus());
}

bool is_invertible(const ModMatrix& a) { return is_unit(determinant(a)); }

std::string to_text(const ModMatrix& a) {
    std::ostringstream os;
    os << "q " << a.modulus().value() << ' ' << a.rows() << ' ' << a.cols()
       << '\n';
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (c) os << ' ';
            os << a(r, c);
        }
        os << '\n';
    }
    return os.str();
}

std::string to_text(const ModVector& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.length(); ++i) {
        if (i) os << ' ';
        os << v[i];
    }
    return os.str();
}

ModMatrix parse_matrix(std::istream& in) {
    std::string tag;
    std::int64_t q = 0;
    std::int64_t rows = 0, cols = 0;
    if (!(in >> tag >> q >> rows >> cols) || tag != "q")
        throw ParseError("matrix header must be 'q <modulus> <rows> <cols>'");
    if (rows < 1 || cols < 1) throw ParseError("matrix shape must be positive");
    constexpr std::int64_t kMaxParsedEntries = 1 << 26;
    if (rows > kMaxParsedEntries || cols > kMaxParsedEntries ||
        rows * cols > kMaxParsedEntries)
        throw ParseError("matrix too large to parse");
    Modulus modulus = [&] {
        try {
            return Modulus(q);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }();
    std::vector<std::int64_t> entries;
    entries.reserve(static_cast<std::size_t>(rows * cols));
    for (std::int64_t i = 0; i < rows * cols; ++i) {
        std::int64_t v = 0;
        if (!(in >> v)) throw ParseError("matrix body ended early");
        if (v < 0 || v >= q)
            throw ParseError("entry " + std::to_string(v) +
                             " is not a canonical residue mod " +
                             std::to_string(q));
        entries.push_back(v);
    }
    return ModMatrix(static_cast<std::size_t>(rows),
                     static_cast<std::size_t>(cols), modulus, entries);
}

ModMatrix parse_matrix(const std::string& text) {
    std::istringstream is(text);
    return parse_matrix(is);
}

std::ostream& operator<<(std::ostream& os, const ModMatrix& a) {
    return os << to_text(a);
}

std::ostream& operator<<(std::ostream& os, const ModVector& v) {
    return os << to_text(v);
}

}  // namespace kq
