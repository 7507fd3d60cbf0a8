#pragma once

/**
 * @file analysis.hpp
 * @brief Character interpolation, density witnesses, and the per-level
 *        verifiers for the Kronecker-type and generation properties.
 *
 * A character of the product group is determined by a finite coefficient
 * vector c: it evaluates as the dot product of c with a long-enough
 * truncation. A left inverse of a level matrix turns any function table on
 * its columns into such a character; a right inverse turns any target
 * cylinder into an explicit combination of columns hitting it. The
 * exhaustive verifiers certify both properties at a fixed level by brute
 * force, independent of the inverse computations.
 */

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kq/construction.hpp"
#include "kq/matrix.hpp"

namespace kq {

/// An exhaustive check would exceed its enumeration budget.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what)
        : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kDefaultExhaustiveBudget = 100000;
inline constexpr std::uint64_t kDefaultClosureBudget = 1000000;

/// A character given by its coefficient vector; evaluation reads only the
/// first `level` coordinates (the continuity index).
struct Character {
    std::size_t level;
    ModVector coeffs;
};

/// Dot product of the first chi.level entries of x_trunc with chi.coeffs.
/// Throws if x_trunc is shorter than chi.level.
Residue character_eval(const Character& chi, const ModVector& x_trunc);

/// A function from level-n column truncations to C_q, given as an explicit
/// assignment list. `level` is the truncation length (column length).
class FunctionTable {
public:
    FunctionTable(std::size_t level, Modulus modulus);

    void assign(const ModVector& column, Residue value);
    std::optional<Residue> value(const ModVector& column) const;

    std::size_t level() const noexcept { return level_; }
    Modulus modulus() const noexcept { return modulus_; }
    std::size_t size() const noexcept { return assignments_.size(); }
    const std::vector<std::pair<ModVector, Residue>>& assignments() const {
        return assignments_;
    }

    /// Values listed in m's column order.
    static FunctionTable for_columns(const ModMatrix& m,
                                     const std::vector<std::int64_t>& values);

    /// True iff every column of m has an assigned value.
    bool total_for(const ModMatrix& m) const;

private:
    std::size_t level_;
    Modulus modulus_;
    std::vector<std::pair<ModVector, Residue>> assignments_;
};

/// Vector whose i-th entry is f applied to the i-th column of m.
/// Throws if f misses a column.
ModVector fbar(const ModMatrix& m, const FunctionTable& f);

/// Character with coeffs transpose(L) * fbar for the canonical left inverse
/// L of m, so that it agrees with f on every column of m. nullopt iff m has
/// no left inverse.
std::optional<Character> character_from_values(const ModMatrix& m,
                                               const FunctionTable& f);

/// alpha = R * [t; O] together with the combination m * alpha = [t; O],
/// certifying that the group generated by the columns meets the cylinder
/// of t.
struct DensityWitness {
    ModVector target;
    ModVector alpha;
    ModVector combination;
};

/// nullopt iff m has no right inverse. Requires t.length() <= m.rows().
std::optional<DensityWitness> density_witness(const ModMatrix& m,
                                              const ModVector& t);

enum class KqMode { fast, exhaustive };
enum class GenMode { fast, closure };

struct KqReport {
    KqMode mode;
    bool pass;
    std::uint64_t tables_checked;  // 0 in fast mode
    // Values of the first failing table in canonical column order. For a
    // matrix with distinct columns this determines the table uniquely.
    std::optional<ModVector> failing_values;
};

/// fast: does a left inverse exist. exhaustive: is transpose(m) * c = fbar
/// solvable for every one of the q^cols value assignments to the columns
/// (the function tables, when columns are distinct). Throws BudgetExceeded
/// if q^cols > budget.
KqReport verify_kq_level(const ModMatrix& m, KqMode mode,
                         std::uint64_t budget = kDefaultExhaustiveBudget);

struct GenerationReport {
    GenMode mode;
    bool pass;
    std::uint64_t subgroup_size;  // 0 in fast mode
    std::uint64_t group_order;
};

/// fast: does a right inverse exist. closure: breadth-first saturation of
/// the subgroup generated by the columns inside C_q^rows; pass iff it is all
/// of C_q^rows. Throws BudgetExceeded if q^rows > budget.
GenerationReport verify_generation_level(
    const ModMatrix& m, GenMode mode,
    std::uint64_t budget = kDefaultClosureBudget);

inline KqReport verify_kq_level(const LevelMatrix& m, KqMode mode,
                                std::uint64_t budget = kDefaultExhaustiveBudget) {
    return verify_kq_level(m.matrix, mode, budget);
}
inline GenerationReport verify_generation_level(
    const LevelMatrix& m, GenMode mode,
    std::uint64_t budget = kDefaultClosureBudget) {
    return verify_generation_level(m.matrix, mode, budget);
}
inline ModVector fbar(const LevelMatrix& m, const FunctionTable& f) {
    return fbar(m.matrix, f);
}
inline std::optional<Character> character_from_values(const LevelMatrix& m,
                                                      const FunctionTable& f) {
    return character_from_values(m.matrix, f);
}
inline std::optional<DensityWitness> density_witness(const LevelMatrix& m,
                                                     const ModVector& t) {
    return density_witness(m.matrix, t);
}

/// The n x (n+1) matrix whose columns are e_1, ..., e_n and then the zero
/// column: level-n truncations of the basis-vector family. Right invertible,
/// never left invertible.
ModMatrix example1_matrix(Modulus modulus, std::size_t n);

/// True iff transpose(m) * c = fbar(m, f) has a solution c.
bool interpolation_solvable(const ModMatrix& m, const FunctionTable& f);

// Table text format: "q <modulus> level <n>", then one line per column in
// canonical column order: the column entries, "->", the assigned value.
std::string to_text(const FunctionTable& f);
FunctionTable parse_table(std::istream& in);
FunctionTable parse_table(const std::string& text);

}  // namespace kq
