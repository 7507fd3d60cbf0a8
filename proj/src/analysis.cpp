#include "kq/analysis.hpp"

#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace kq {

namespace {

// q^exp, guarded against the budget. Throws rather than overflowing.
std::uint64_t pow_within_budget(std::int64_t q, std::size_t exp,
                                std::uint64_t budget, const char* what) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (total > budget / static_cast<std::uint64_t>(q))
            throw BudgetExceeded(std::string(what) + ": q^" +
                                 std::to_string(exp) + " exceeds budget " +
                                 std::to_string(budget));
        total *= static_cast<std::uint64_t>(q);
    }
    if (total > budget)
        throw BudgetExceeded(std::string(what) + ": q^" + std::to_string(exp) +
                             " exceeds budget " + std::to_string(budget));
    return total;
}

bool next_assignment(std::vector<std::int64_t>& v, std::int64_t q) {
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
        if (++*it < q) return true;
        *it = 0;
    }
    return false;
}

}  // namespace

Residue character_eval(const Character& chi, const ModVector& x_trunc) {
    if (x_trunc.length() < chi.level)
        throw std::invalid_argument(
            "truncation shorter than the character's continuity index");
    return dot(x_trunc.prefix(chi.level), chi.coeffs);
}

FunctionTable::FunctionTable(std::size_t level, Modulus modulus)
    : level_(level), modulus_(modulus) {
    if (level == 0)
        throw std::invalid_argument("table level must be at least 1");
}

void FunctionTable::assign(const ModVector& column, Residue value) {
    if (column.length() != level_)
        throw std::invalid_argument("column length does not match table level");
    if (column.modulus() != modulus_ || value.modulus() != modulus_)
        throw std::invalid_argument("table modulus mismatch");
    if (this->value(column))
        throw std::invalid_argument("column assigned twice");
    assignments_.emplace_back(column, value);
}

std::optional<Residue> FunctionTable::value(const ModVector& column) const {
    for (const auto& [col, val] : assignments_)
        if (col == column) return val;
    return std::nullopt;
}

FunctionTable FunctionTable::for_columns(
    const ModMatrix& m, const std::vector<std::int64_t>& values) {
    if (values.size() != m.cols())
        throw std::invalid_argument("need one value per column");
    FunctionTable f(m.rows(), m.modulus());
    for (std::size_t c = 0; c < m.cols(); ++c)
        f.assign(m.column(c), Residue(values[c], m.modulus()));
    return f;
}

bool FunctionTable::total_for(const ModMatrix& m) const {
    if (m.rows() != level_ || m.modulus() != modulus_) return false;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!value(m.column(c))) return false;
    return true;
}

ModVector fbar(const ModMatrix& m, const FunctionTable& f) {
    std::vector<std::int64_t> out(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const auto v = f.value(m.column(c));
        if (!v)
            throw std::invalid_argument("table not total: column " +
                                        std::to_string(c + 1) + " unassigned");
        out[c] = v->value();
    }
    return ModVector(out, m.modulus());
}

std::optional<Character> character_from_values(const ModMatrix& m,
                                               const FunctionTable& f) {
    const auto values = fbar(m, f);
    const auto l = left_inverse(m);
    if (!l) return std::nullopt;
    return Character{m.rows(), transpose(*l) * values};
}

std::optional<DensityWitness> density_witness(const ModMatrix& m,
                                              const ModVector& t) {
    if (t.modulus() != m.modulus())
        throw std::invalid_argument("target modulus mismatch");
    if (t.length() > m.rows())
        throw std::invalid_argument("target longer than the truncation level");
    const auto r = right_inverse(m);
    if (!r) return std::nullopt;
    std::vector<std::int64_t> padded = t.values();
    padded.resize(m.rows(), 0);
    const ModVector target(padded, m.modulus());
    const ModVector alpha = *r * target;
    return DensityWitness{t, alpha, m * alpha};
}

KqReport verify_kq_level(const ModMatrix& m, KqMode mode,
                         std::uint64_t budget) {
    if (mode == KqMode::fast)
        return {mode, left_inverse(m).has_value(), 0, std::nullopt};

    const std::int64_t q = m.modulus().value();
    pow_within_budget(q, m.cols(), budget, "exhaustive table enumeration");
    const ColumnSolver solver(transpose(m));
    KqReport report{mode, true, 0, std::nullopt};
    std::vector<std::int64_t> values(m.cols(), 0);
    do {
        ++report.tables_checked;
        if (!solver.solve(ModVector(values, m.modulus())) && report.pass) {
            report.pass = false;
            report.failing_values = ModVector(values, m.modulus());
        }
    } while (next_assignment(values, q));
    return report;
}

GenerationReport verify_generation_level(const ModMatrix& m, GenMode mode,
                                         std::uint64_t budget) {
    if (mode == GenMode::fast)
        return {mode, right_inverse(m).has_value(), 0, 0};

    const std::int64_t q = m.modulus().value();
    const std::uint64_t order =
        pow_within_budget(q, m.rows(), budget, "closure enumeration");

    // Breadth-first saturation of the subgroup generated by the columns,
    // states encoded in mixed radix q.
    const std::size_t n = m.rows();
    auto add_column = [&](std::uint64_t state, std::size_t col) {
        std::uint64_t out = 0, scale = 1;
        for (std::size_t r = 0; r < n; ++r) {
            const auto digit =
                static_cast<std::int64_t>(state % static_cast<std::uint64_t>(q));
            state /= static_cast<std::uint64_t>(q);
            out += static_cast<std::uint64_t>((digit + m(r, col)) % q) * scale;
            scale *= static_cast<std::uint64_t>(q);
        }
        return out;
    };

    std::vector<char> seen(order, 0);
    std::deque<std::uint64_t> queue{0};
    seen[0] = 1;
    std::uint64_t count = 1;
    while (!queue.empty()) {
        const std::uint64_t s = queue.front();
        queue.pop_front();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const std::uint64_t t = add_column(s, c);
            if (!seen[t]) {
                seen[t] = 1;
                ++count;
                queue.push_back(t);
            }
        }
    }
    return {mode, count == order, count, order};
}

ModMatrix example1_matrix(Modulus modulus, std::size_t n) {
    if (n < 1) throw std::invalid_argument("level must be at least 1");
    ModMatrix m(n, n + 1, modulus);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

bool interpolation_solvable(const ModMatrix& m, const FunctionTable& f) {
    return solve(transpose(m), fbar(m, f)).has_value();
}

std::string to_text(const FunctionTable& f) {
    std::ostringstream os;
    os << "q " << f.modulus().value() << " level " << f.level() << '\n';
    for (const auto& [col, val] : f.assignments())
        os << to_text(col) << " -> " << val.value() << '\n';
    return os.str();
}

FunctionTable parse_table(std::istream& in) {
    std::string tag, leveltag;
    std::int64_t q = 0;
    std::size_t level = 0;
    if (!(in >> tag >> q >> leveltag >> level) || tag != "q" ||
        leveltag != "level")
        throw ParseError("table header must be 'q <modulus> level <n>'");
    const Modulus modulus = [&] {
        try {
            return Modulus(q);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }();
    if (level == 0) throw ParseError("table level must be at least 1");
    FunctionTable f(level, modulus);
    while (true) {
        std::vector<std::int64_t> col(level);
        if (!(in >> col[0])) break;  // end of input
        for (std::size_t i = 1; i < level; ++i)
            if (!(in >> col[i])) throw ParseError("table row ended early");
        std::string arrow;
        std::int64_t value = 0;
        if (!(in >> arrow >> value) || arrow != "->")
            throw ParseError("table row must be '<entries> -> <value>'");
        for (const auto e : col)
            if (e < 0 || e >= q)
                throw ParseError("entry " + std::to_string(e) +
                                 " is not a canonical residue mod " +
                                 std::to_string(q));
        if (value < 0 || value >= q)
            throw ParseError("value " + std::to_string(value) +
                             " is not a canonical residue mod " +
                             std::to_string(q));
        try {
            f.assign(ModVector(col, modulus), Residue(value, modulus));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    if (f.size() == 0) throw ParseError("table has no assignments");
    return f;
}

FunctionTable parse_table(const std::string& text) {
    std::istringstream is(text);
    return parse_table(is);
}

}  // namespace kq
