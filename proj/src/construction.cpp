#include "kq/construction.hpp"

#include <map>
#include <sstream>
#include <string>

namespace kq {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t checked_size(std::size_t level, std::size_t size_cap) {
    if (level >= 32 || (std::size_t{1} << level) > size_cap)
        throw std::invalid_argument(
            "level " + std::to_string(level) + " exceeds the size cap (2^level <= " +
            std::to_string(size_cap) + ")");
    return std::size_t{1} << level;
}

}  // namespace

LevelMatrix build_level_matrix(Modulus modulus, std::size_t level,
                               std::size_t size_cap) {
    checked_size(level, size_cap);
    ModMatrix m(1, 1, modulus, {1});
    for (std::size_t l = 1; l <= level; ++l) {
        const std::size_t half = std::size_t{1} << (l - 1);
        m = block2x2(m, m, ModMatrix(half, half, modulus),
                     ModMatrix::identity(half, modulus));
    }
    return {level, m};
}

TruncationSet truncation_set(const LevelMatrix& m) {
    std::vector<ModVector> columns;
    columns.reserve(m.matrix.cols());
    for (std::size_t c = 0; c < m.matrix.cols(); ++c)
        columns.push_back(m.matrix.column(c));
    return {m.level, columns};
}

ModVector extend_column(const ModVector& col, int bit, std::size_t index) {
    if (bit != 0 && bit != 1)
        throw std::invalid_argument("branch bit must be 0 or 1");
    const std::size_t len = col.length();
    if (!is_power_of_two(len))
        throw std::invalid_argument("column length must be a power of two");
    if (index < 1 || index > len)
        throw std::invalid_argument("column index out of range (1-based)");
    std::vector<std::int64_t> out = col.values();
    out.resize(2 * len, 0);
    if (bit == 1) out[len + index - 1] = 1;
    return ModVector(out, col.modulus());
}

PathColumn column_for_path(Modulus modulus, const BranchPath& path) {
    std::size_t index = 1;
    ModVector col({1}, modulus);
    for (const auto bit : path) {
        const std::size_t half = col.length();
        col = extend_column(col, bit, index);
        if (bit) index += half;
    }
    return {index, col};
}

MembershipResult membership(const ModVector& t) {
    const std::size_t len = t.length();
    if (!is_power_of_two(len))
        throw std::invalid_argument("truncation length must be a power of two");
    std::size_t level = 0;
    while ((std::size_t{1} << level) < len) ++level;
    const auto lm = build_level_matrix(t.modulus(), level,
                                       std::max(kDefaultSizeCap, len));
    for (std::size_t c = 0; c < lm.matrix.cols(); ++c)
        if (lm.matrix.column(c) == t) return {true, c + 1};
    return {false, 0};
}

BranchingReport verify_tree_branching(Modulus modulus, std::size_t level,
                                      std::size_t size_cap) {
    checked_size(level + 1, size_cap);
    const auto parents = truncation_set(build_level_matrix(modulus, level, size_cap));
    const auto children =
        truncation_set(build_level_matrix(modulus, level + 1, size_cap));
    BranchingReport report{true, parents.columns.size(),
                           children.columns.size(), {}};
    auto flag = [&report](const std::string& msg) {
        report.pass = false;
        report.violations.push_back(msg);
    };

    std::map<std::vector<std::int64_t>, std::size_t> parent_index;
    for (std::size_t i = 0; i < parents.columns.size(); ++i)
        if (!parent_index.emplace(parents.columns[i].values(), i).second)
            flag("duplicate parent column " + std::to_string(i + 1));

    std::map<std::vector<std::int64_t>, std::size_t> child_index;
    std::vector<std::vector<std::size_t>> kids(parents.columns.size());
    const std::size_t half = parents.columns.empty()
                                 ? 0
                                 : parents.columns.front().length();
    for (std::size_t j = 0; j < children.columns.size(); ++j) {
        const auto& child = children.columns[j];
        if (!child_index.emplace(child.values(), j).second)
            flag("duplicate child column " + std::to_string(j + 1));
        const auto it = parent_index.find(child.prefix(half).values());
        if (it == parent_index.end()) {
            flag("child column " + std::to_string(j + 1) +
                 " truncates to no parent");
            continue;
        }
        kids[it->second].push_back(j);
    }
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (kids[i].size() != 2) {
            flag("parent column " + std::to_string(i + 1) + " has " +
                 std::to_string(kids[i].size()) + " children, expected 2");
            continue;
        }
        if (children.columns[kids[i][0]] == children.columns[kids[i][1]])
            flag("parent column " + std::to_string(i + 1) +
                 " has identical children");
    }
    return report;
}

}  // namespace kq
