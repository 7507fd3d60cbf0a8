#pragma once

/**
 * @file matrix.hpp
 * @brief Dense vectors and matrices over Z/qZ with solving machinery that
 *        stays exact over composite moduli.
 *
 * Elimination uses Howell normal form with extended-gcd pivoting and
 * annihilator saturation. Field-style Gaussian elimination is wrong when q
 * has zero divisors; everything here works for every q >= 2.
 *
 * Absence of a solution or a one-sided inverse is an ordinary return value
 * (nullopt), never an exception. Dimension and modulus mismatches are usage
 * errors and throw.
 */

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kq/residue.hpp"

namespace kq {

/// Malformed input in one of the text formats.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class ModVector {
public:
    ModVector(std::vector<std::int64_t> values, Modulus modulus);

    std::size_t length() const noexcept { return values_.size(); }
    Modulus modulus() const noexcept { return modulus_; }

    std::int64_t operator[](std::size_t i) const { return values_[i]; }
    Residue at(std::size_t i) const;
    const std::vector<std::int64_t>& values() const noexcept { return values_; }

    /// First n entries as a vector over the same modulus.
    ModVector prefix(std::size_t n) const;

    friend bool operator==(const ModVector&, const ModVector&) = default;

private:
    std::vector<std::int64_t> values_;
    Modulus modulus_;
};

class ModMatrix {
public:
    // Zero matrix. Empty shapes (0 rows or 0 cols) are rejected.
    ModMatrix(std::size_t rows, std::size_t cols, Modulus modulus);
    // Row-major entries, reduced into [0, q).
    ModMatrix(std::size_t rows, std::size_t cols, Modulus modulus,
              std::vector<std::int64_t> entries);

    static ModMatrix identity(std::size_t n, Modulus modulus);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Modulus modulus() const noexcept { return modulus_; }

    std::int64_t operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }
    Residue at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, std::int64_t value);

    ModVector row(std::size_t r) const;
    ModVector column(std::size_t c) const;

    friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    Modulus modulus_;
    std::vector<std::int64_t> entries_;
};

/// e_i in C_q^n; i is 1-based as in the usual mathematical indexing.
ModVector basis_vector(std::size_t i, std::size_t n, Modulus modulus);
ModVector zero_vector(std::size_t n, Modulus modulus);

ModMatrix transpose(const ModMatrix& a);

/// [[a, b], [c, d]] with the obvious conformability requirements.
ModMatrix block2x2(const ModMatrix& a, const ModMatrix& b,
                   const ModMatrix& c, const ModMatrix& d);

ModMatrix operator*(const ModMatrix& a, const ModMatrix& b);
ModVector operator*(const ModMatrix& a, const ModVector& x);

Residue dot(const ModVector& a, const ModVector& b);

/**
 * Howell normal form H of a matrix A with an invertible transform U.
 *
 * The Howell basis of a row module can have up to cols rows, so A is
 * implicitly padded with zero rows to max(rows, cols) rows; H and U refer
 * to the padded matrix and U * pad(A) = H with U invertible over C_q.
 * When rows >= cols no padding happens and U * A = H verbatim.
 *
 * H is row echelon with each pivot a divisor of q, entries above a pivot
 * reduced modulo it, and the Howell property: any row-module element whose
 * leading zeros extend past a pivot column lies in the span of the rows
 * with later pivots. That makes membership testable by greedy reduction.
 */
struct HowellForm {
    ModMatrix h;
    ModMatrix u;
};

HowellForm howell_form(const ModMatrix& a);

/// Solves a*x = b for many right-hand sides against a fixed a, sharing one
/// Howell decomposition of transpose(a).
class ColumnSolver {
public:
    explicit ColumnSolver(const ModMatrix& a);

    /// Some x with a*x = b, or nullopt iff none exists. Deterministic.
    std::optional<ModVector> solve(const ModVector& b) const;

    /// Solves column-by-column; nullopt iff any column has no solution.
    std::optional<ModMatrix> solve_columns(const ModMatrix& rhs) const;

private:
    std::optional<std::vector<std::int64_t>> reduce(
        const ModVector& b) const;  // y with y*H = b^T

    std::size_t rows_;
    std::size_t cols_;
    Modulus modulus_;
    HowellForm hf_;
    std::vector<std::pair<std::size_t, std::size_t>> pivots_;  // (row, col)
};

std::optional<ModVector> solve(const ModMatrix& a, const ModVector& b);

/// L with L*A = I(cols), via a right inverse of the transpose.
std::optional<ModMatrix> left_inverse(const ModMatrix& a);

/// R with A*R = I(rows), one column solve per basis vector.
std::optional<ModMatrix> right_inverse(const ModMatrix& a);

/// Exact determinant mod q via fraction-free (Bareiss) elimination on the
/// integer lift. Throws std::overflow_error if an intermediate minor leaves
/// int64 (never happens for the unitriangular families this library builds).
Residue determinant(const ModMatrix& a);

/// True iff determinant(a) is a unit mod q.
bool is_invertible(const ModMatrix& a);

// Shared text format: "q <modulus> <rows> <cols>" then one line per row of
// space-separated canonical residues. Round-trips bit-exactly.
std::string to_text(const ModMatrix& a);
std::string to_text(const ModVector& v);
ModMatrix parse_matrix(std::istream& in);
ModMatrix parse_matrix(const std::string& text);

std::ostream& operator<<(std::ostream& os, const ModMatrix& a);
std::ostream& operator<<(std::ostream& os, const ModVector& v);

}  // namespace kq
