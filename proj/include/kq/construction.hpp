#pragma once

/**
 * @file construction.hpp
 * @brief The recursive matrix family M_{2^n} over C_q and the binary tree of
 *        column truncations it induces.
 *
 * M_1 = [1] and M_{2^n} = [[M_{2^(n-1)}, M_{2^(n-1)}], [O, I]]. The columns
 * of M_{2^n} are the level-n truncations of a perfect set: each column
 * extends in exactly two ways to the next level (append zeros, or append the
 * matching identity column), giving a complete binary tree whose cylinder
 * sets are disjoint at each level.
 *
 * Entries are always 0/1 regardless of q, but every matrix still carries its
 * modulus: downstream solves genuinely depend on q.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "kq/matrix.hpp"

namespace kq {

/// Default cap on the matrix side 2^level.
inline constexpr std::size_t kDefaultSizeCap = 4096;

struct LevelMatrix {
    std::size_t level;  // matrix is 2^level x 2^level
    ModMatrix matrix;
};

/// The 2^level x 2^level matrix of the recursion. Deterministic; throws if
/// 2^level exceeds size_cap.
LevelMatrix build_level_matrix(Modulus modulus, std::size_t level,
                               std::size_t size_cap = kDefaultSizeCap);

struct TruncationSet {
    std::size_t level;
    std::vector<ModVector> columns;  // in matrix column order, all distinct
};

TruncationSet truncation_set(const LevelMatrix& m);

/// One node of the cylinder tree: bit 0 extends by zeros, bit 1 by the
/// matching identity column.
using BranchPath = std::vector<std::uint8_t>;

/// col must be column `index` (1-based) of the level matrix of its size.
/// bit 0: col with 2^n zeros appended (stays column `index`);
/// bit 1: col with e_index appended (becomes column `index + 2^n`).
ModVector extend_column(const ModVector& col, int bit, std::size_t index);

struct PathColumn {
    std::size_t index;  // 1-based column index in M_{2^|path|}
    ModVector column;
};

/// Walks the branch tree from the root. The index recursion is
/// idx_0 = 1, idx_n = idx_{n-1} + b_n * 2^(n-1).
PathColumn column_for_path(Modulus modulus, const BranchPath& path);

struct MembershipResult {
    bool member;
    std::size_t column_index;  // 1-based when member, 0 otherwise
};

/// True iff t equals some column of M_{2^n} where 2^n = t.length().
/// Throws if the length is not a power of two.
MembershipResult membership(const ModVector& t);

struct BranchingReport {
    bool pass;
    std::size_t parent_count;
    std::size_t child_count;
    std::vector<std::string> violations;
};

/// Certifies the binary-tree structure between levels `level` and
/// `level + 1`: every parent has exactly two distinct children, child sets
/// of distinct parents are disjoint, and all next-level columns are
/// distinct. Violations are reported, not thrown.
BranchingReport verify_tree_branching(Modulus modulus, std::size_t level,
                                      std::size_t size_cap = kDefaultSizeCap);

}  // namespace kq
