#include "kq/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "kq/analysis.hpp"
#include "kq/construction.hpp"
#include "kq/matrix.hpp"
#include "kq/residue.hpp"

namespace kq {

namespace {

using nlohmann::json;

json matrix_json(const ModMatrix& a) {
    json entries = json::array();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
        entries.push_back(row);
    }
    return json{{"modulus", a.modulus().value()},
                {"rows", a.rows()},
                {"cols", a.cols()},
                {"entries", entries}};
}

json vector_json(const ModVector& v) {
    json out = json::array();
    for (std::size_t i = 0; i < v.length(); ++i) out.push_back(v[i]);
    return out;
}

// Budget precedence: flag beats environment beats default.
std::uint64_t env_budget(const char* name, std::uint64_t fallback) {
    const char* raw = std::getenv(name);
    if (!raw) return fallback;
    try {
        std::size_t used = 0;
        const std::uint64_t value = std::stoull(raw, &used);
        if (used != std::string(raw).size() || value == 0)
            throw std::invalid_argument("");
        return value;
    } catch (...) {
        throw std::invalid_argument(std::string(name) +
                                    " must be a positive integer, got '" +
                                    raw + "'");
    }
}

struct Budgets {
    std::uint64_t exhaustive;
    std::uint64_t closure;
};

Budgets resolve_budgets(const std::optional<std::uint64_t>& flag) {
    if (flag) return {*flag, *flag};
    return {env_budget("KQGEN_EXHAUSTIVE_BUDGET", kDefaultExhaustiveBudget),
            env_budget("KQGEN_CLOSURE_BUDGET", kDefaultClosureBudget)};
}

std::vector<std::int64_t> parse_target(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("target entry '" + item +
                                        "' is not an integer");
        }
    }
    if (out.empty())
        throw std::invalid_argument("target must have at least one entry");
    return out;
}

int run_build(std::int64_t q, std::size_t level, const std::string& format,
              std::ostream& out) {
    const Modulus modulus(q);
    const auto lm = build_level_matrix(modulus, level);
    if (format == "json")
        out << matrix_json(lm.matrix).dump(2) << '\n';
    else
        out << to_text(lm.matrix);
    return kExitOk;
}

int run_verify(std::int64_t q, std::size_t level, const std::string& property,
               const std::string& mode,
               const std::optional<std::uint64_t>& budget_flag,
               const std::string& format, std::ostream& out) {
    const Modulus modulus(q);
    const bool want_kq = property == "kq" || property == "both";
    const bool want_gen = property == "gen" || property == "both";
    if (property == "kq" && mode == "closure")
        throw std::invalid_argument("mode closure applies to property gen");
    if (property == "gen" && mode == "exhaustive")
        throw std::invalid_argument("mode exhaustive applies to property kq");
    const bool deep = mode != "fast";
    const Budgets budgets = resolve_budgets(budget_flag);

    const auto lm = build_level_matrix(modulus, level);
    json reports = json::array();
    bool all_pass = true;

    if (want_kq) {
        const auto report = verify_kq_level(
            lm.matrix, deep ? KqMode::exhaustive : KqMode::fast,
            budgets.exhaustive);
        all_pass = all_pass && report.pass;
        if (format == "json") {
            json details;
            if (report.mode == KqMode::fast) {
                details["inverse_exists"] = report.pass;
            } else {
                details["tables_checked"] = report.tables_checked;
                if (report.failing_values)
                    details["failing_values"] =
                        vector_json(*report.failing_values);
            }
            reports.push_back(json{{"property", "kq"},
                                   {"mode", deep ? "exhaustive" : "fast"},
                                   {"pass", report.pass},
                                   {"details", details}});
        } else {
            out << "property kq mode " << (deep ? "exhaustive" : "fast")
                << ": " << (report.pass ? "PASS" : "FAIL");
            if (report.mode == KqMode::fast)
                out << (report.pass ? " (left inverse exists)"
                                    : " (no left inverse)");
            else
                out << " (" << report.tables_checked << " functions checked)";
            out << '\n';
            if (report.failing_values)
                out << "first failing table values (column order): "
                    << to_text(*report.failing_values) << '\n';
        }
    }
    if (want_gen) {
        const auto report = verify_generation_level(
            lm.matrix, deep ? GenMode::closure : GenMode::fast,
            budgets.closure);
        all_pass = all_pass && report.pass;
        if (format == "json") {
            json details;
            if (report.mode == GenMode::fast) {
                details["inverse_exists"] = report.pass;
            } else {
                details["subgroup_size"] = report.subgroup_size;
                details["group_order"] = report.group_order;
            }
            reports.push_back(json{{"property", "gen"},
                                   {"mode", deep ? "closure" : "fast"},
                                   {"pass", report.pass},
                                   {"details", details}});
        } else {
            out << "property gen mode " << (deep ? "closure" : "fast") << ": "
                << (report.pass ? "PASS" : "FAIL");
            if (report.mode == GenMode::fast)
                out << (report.pass ? " (right inverse exists)"
                                    : " (no right inverse)");
            else
                out << " (subgroup size " << report.subgroup_size << " of "
                    << report.group_order << ")";
            out << '\n';
        }
    }
    if (format == "json") out << json{{"reports", reports}}.dump(2) << '\n';
    return all_pass ? kExitOk : kExitPropertyFailed;
}

int run_interpolate(std::int64_t q, std::size_t level,
                    const std::string& table_path, const std::string& format,
                    std::ostream& out, std::ostream& err) {
    const Modulus modulus(q);
    std::ifstream in(table_path);
    if (!in) {
        err << "cannot open table file '" << table_path << "'\n";
        return kExitUsage;
    }
    const FunctionTable table = parse_table(in);
    const auto lm = build_level_matrix(modulus, level);
    if (table.modulus() != lm.matrix.modulus())
        throw std::invalid_argument("table modulus does not match --q");
    if (table.level() != lm.matrix.rows())
        throw std::invalid_argument(
            "table level " + std::to_string(table.level()) +
            " does not match the truncation length " +
            std::to_string(lm.matrix.rows()));
    if (!table.total_for(lm.matrix))
        throw std::invalid_argument("table not total");

    const auto chi = character_from_values(lm.matrix, table);
    if (!chi) {
        err << "no left inverse: the table cannot be interpolated by a "
               "character at this level\n";
        return kExitPropertyFailed;
    }

    bool all_match = true;
    json checks = json::array();
    std::ostringstream lines;
    for (std::size_t c = 0; c < lm.matrix.cols(); ++c) {
        const auto col = lm.matrix.column(c);
        const auto wanted = *table.value(col);
        const auto got = character_eval(*chi, col);
        const bool match = got == wanted;
        all_match = all_match && match;
        if (format == "json")
            checks.push_back(json{{"column", vector_json(col)},
                                  {"f", wanted.value()},
                                  {"chi", got.value()},
                                  {"match", match}});
        else
            lines << "column " << to_text(col) << " : f = " << wanted.value()
                  << " chi = " << got.value()
                  << (match ? " match" : " MISMATCH") << '\n';
    }
    if (format == "json") {
        out << json{{"coefficients", vector_json(chi->coeffs)},
                    {"level", chi->level},
                    {"checks", checks},
                    {"all_match", all_match}}
                   .dump(2)
            << '\n';
    } else {
        out << "c = " << to_text(chi->coeffs) << '\n' << lines.str();
        out << (all_match ? "all columns match\n" : "some columns MISMATCH\n");
    }
    return all_match ? kExitOk : kExitPropertyFailed;
}

int run_witness(std::int64_t q, std::size_t level, const std::string& target,
                const std::string& format, std::ostream& out,
                std::ostream& err) {
    const Modulus modulus(q);
    const auto lm = build_level_matrix(modulus, level);
    const auto raw = parse_target(target);
    if (raw.size() > lm.matrix.rows())
        throw std::invalid_argument(
            "target length " + std::to_string(raw.size()) +
            " exceeds the truncation length " +
            std::to_string(lm.matrix.rows()));
    const ModVector t(raw, modulus);
    const auto witness = density_witness(lm.matrix, t);
    if (!witness) {
        err << "no right inverse at this level\n";
        return kExitPropertyFailed;
    }
    bool valid = true;
    for (std::size_t i = 0; i < witness->combination.length(); ++i) {
        const std::int64_t want = i < t.length() ? t[i] : 0;
        valid = valid && witness->combination[i] == want;
    }
    if (format == "json") {
        out << json{{"target", vector_json(witness->target)},
                    {"alpha", vector_json(witness->alpha)},
                    {"combination", vector_json(witness->combination)},
                    {"valid", valid}}
                   .dump(2)
            << '\n';
    } else {
        out << "alpha = " << to_text(witness->alpha) << '\n';
        out << "combination = " << to_text(witness->combination) << '\n';
        out << (valid ? "combination equals the target followed by zeros\n"
                      : "INVALID witness\n");
    }
    return valid ? kExitOk : kExitPropertyFailed;
}

int run_example1(std::int64_t q, std::size_t n, bool census,
                 const std::optional<std::uint64_t>& budget_flag,
                 const std::string& format, std::ostream& out,
                 std::ostream& err) {
    const Modulus modulus(q);
    const ModMatrix m = example1_matrix(modulus, n);
    const bool left = left_inverse(m).has_value();
    const bool right = right_inverse(m).has_value();
    const Budgets budgets = resolve_budgets(budget_flag);

    json census_json;
    std::ostringstream census_text;
    bool census_done = false;
    if (census) {
        std::uint64_t total = 1;
        bool within = true;
        for (std::size_t i = 0; i <= n && within; ++i) {
            if (total > budgets.exhaustive / static_cast<std::uint64_t>(q))
                within = false;
            else
                total *= static_cast<std::uint64_t>(q);
        }
        if (!within || total > budgets.exhaustive) {
            err << "census skipped: q^" << n + 1 << " exceeds budget "
                << budgets.exhaustive << '\n';
        } else {
            const ColumnSolver solver(transpose(m));
            std::uint64_t solvable = 0, deviations = 0;
            std::vector<std::int64_t> values(m.cols(), 0);
            do {
                const bool ok =
                    solver.solve(ModVector(values, modulus)).has_value();
                // The zero column is last, so the expected criterion is
                // f(zero column) = 0.
                const bool expected = values.back() == 0;
                if (ok) ++solvable;
                if (ok != expected) ++deviations;
            } while ([&] {
                for (auto it = values.rbegin(); it != values.rend(); ++it) {
                    if (++*it < q) return true;
                    *it = 0;
                }
                return false;
            }());
            census_done = true;
            census_text << "census: " << solvable << " of " << total
                        << " tables solvable; solvable exactly when f(zero "
                           "column) = 0: "
                        << (deviations == 0 ? "yes" : "NO") << '\n';
            census_json = json{{"tables", total},
                               {"solvable", solvable},
                               {"matches_zero_criterion", deviations == 0}};
        }
    }

    if (format == "json") {
        json doc{{"matrix", matrix_json(m)},
                 {"left_inverse_exists", left},
                 {"right_inverse_exists", right}};
        doc["census"] = census_done ? census_json : json(nullptr);
        out << doc.dump(2) << '\n';
    } else {
        out << to_text(m);
        out << "left inverse: " << (left ? "exists" : "none") << '\n';
        out << "right inverse: " << (right ? "exists" : "none") << '\n';
        if (census_done) out << census_text.str();
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"exact linear algebra over Z/qZ and perfect Kronecker-type "
                 "generating sets"};
    app.name("kqgen");
    app.require_subcommand(1);

    std::int64_t q = 0;
    std::size_t level = 0;
    std::size_t n = 0;
    std::string format = "text";
    std::string property = "both";
    std::string mode = "fast";
    std::string table_path;
    std::string target;
    bool census = false;
    std::optional<std::uint64_t> budget;

    const auto add_format = [&format](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* build = app.add_subcommand(
        "build", "emit the level matrix in the shared text format");
    build->add_option("--q", q, "modulus, at least 2")->required();
    build->add_option("--level", level, "matrix is 2^level x 2^level")
        ->required();
    add_format(build);

    auto* verify = app.add_subcommand(
        "verify", "run the per-level property verifiers");
    verify->add_option("--q", q, "modulus, at least 2")->required();
    verify->add_option("--level", level, "construction level")->required();
    verify->add_option("--property", property, "kq, gen, or both")
        ->check(CLI::IsMember({"kq", "gen", "both"}));
    verify->add_option("--mode", mode, "fast, exhaustive, or closure")
        ->check(CLI::IsMember({"fast", "exhaustive", "closure"}));
    verify->add_option("--budget", budget,
                       "override the enumeration budgets for this run");
    add_format(verify);

    auto* interpolate = app.add_subcommand(
        "interpolate", "turn a function table into character coefficients");
    interpolate->add_option("--q", q, "modulus, at least 2")->required();
    interpolate->add_option("--level", level, "construction level")->required();
    interpolate->add_option("--table", table_path, "function table file")
        ->required();
    add_format(interpolate);

    auto* witness = app.add_subcommand(
        "witness", "combination of columns hitting a target cylinder");
    witness->add_option("--q", q, "modulus, at least 2")->required();
    witness->add_option("--level", level, "construction level")->required();
    witness
        ->add_option("--target", target,
                     "comma-separated residues, length at most 2^level")
        ->required();
    add_format(witness);

    auto* example1 = app.add_subcommand(
        "example1", "the basis-truncation family: right but never left "
                    "invertible");
    example1->add_option("--q", q, "modulus, at least 2")->required();
    example1->add_option("--n", n, "truncation level, at least 1")->required();
    example1->add_flag("--census", census,
                       "enumerate all tables and report solvability");
    example1->add_option("--budget", budget,
                         "override the enumeration budgets for this run");
    add_format(example1);

    std::vector<std::string> storage = args;
    std::vector<char*> argv;
    static char name[] = "kqgen";
    argv.push_back(name);
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) return run_build(q, level, format, out);
        if (verify->parsed())
            return run_verify(q, level, property, mode, budget, format, out);
        if (interpolate->parsed())
            return run_interpolate(q, level, table_path, format, out, err);
        if (witness->parsed())
            return run_witness(q, level, target, format, out, err);
        if (example1->parsed())
            return run_example1(q, n, census, budget, format, out, err);
    } catch (const BudgetExceeded& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const std::overflow_error& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }
    err << "no subcommand selected\n";
    return kExitUsage;
}

}  // namespace kq
