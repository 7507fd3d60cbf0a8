#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kq/analysis.hpp"
#include "oracles.hpp"

using namespace kq;
using kqtest::next_tuple;
using kqtest::random_matrix;

namespace {

FunctionTable table_m2_q2() {
    const Modulus q(2);
    FunctionTable f(2, q);
    f.assign(ModVector({1, 0}, q), Residue(1, q));
    f.assign(ModVector({1, 1}, q), Residue(0, q));
    return f;
}

}  // namespace

TEST_CASE("character_eval") {
    const Modulus q3(3);
    SUBCASE("zero character kills everything") {
        const Character chi{2, zero_vector(2, q3)};
        CHECK(character_eval(chi, ModVector({2, 1}, q3)).value() == 0);
        CHECK(character_eval(chi, ModVector({1, 2, 2}, q3)).value() == 0);
    }
    SUBCASE("frozen dot product") {
        const Character chi{2, ModVector({2, 1}, q3)};
        CHECK(character_eval(chi, ModVector({1, 1}, q3)).value() == 0);
    }
    SUBCASE("basis coefficient vectors pick out coordinates") {
        const ModVector x({2, 0, 1, 2}, q3);
        for (std::size_t i = 1; i <= 4; ++i) {
            const Character chi{4, basis_vector(i, 4, q3)};
            CHECK(character_eval(chi, x).value() == x[i - 1]);
        }
    }
    SUBCASE("short truncations are rejected") {
        const Character chi{3, zero_vector(3, q3)};
        CHECK_THROWS_AS(character_eval(chi, ModVector({1, 1}, q3)),
                        std::invalid_argument);
    }
    SUBCASE("characters vanish at zero") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 50; ++i) {
            const Modulus q(2 + i % 9);
            const auto coeffs = kqtest::random_vector(rng, 1 + i % 6, q);
            const Character chi{coeffs.length(), coeffs};
            CHECK(character_eval(chi, zero_vector(coeffs.length(), q))
                      .value() == 0);
        }
    }
}

TEST_CASE("function tables") {
    const Modulus q(2);
    auto f = table_m2_q2();
    const auto m2 = build_level_matrix(q, 1).matrix;
    SUBCASE("lookup and totality") {
        CHECK(f.value(ModVector({1, 0}, q))->value() == 1);
        CHECK(!f.value(ModVector({0, 1}, q)));
        CHECK(f.total_for(m2));
    }
    SUBCASE("duplicate assignment throws") {
        CHECK_THROWS_AS(f.assign(ModVector({1, 0}, q), Residue(0, q)),
                        std::invalid_argument);
    }
    SUBCASE("fbar requires totality") {
        FunctionTable partial(2, q);
        partial.assign(ModVector({1, 0}, q), Residue(1, q));
        CHECK_THROWS_AS(fbar(m2, partial), std::invalid_argument);
    }
    SUBCASE("text format round trips") {
        const std::string text = to_text(f);
        CHECK(text == "q 2 level 2\n1 0 -> 1\n1 1 -> 0\n");
        const auto parsed = parse_table(text);
        CHECK(parsed.total_for(m2));
        CHECK(to_text(parsed) == text);
    }
    SUBCASE("malformed tables are rejected") {
        CHECK_THROWS_AS(parse_table("level 2 q 2\n1 0 -> 1\n"), ParseError);
        CHECK_THROWS_AS(parse_table("q 2 level 2\n1 0 -> 2\n"), ParseError);
        CHECK_THROWS_AS(parse_table("q 2 level 2\n1 3 -> 1\n"), ParseError);
        CHECK_THROWS_AS(parse_table("q 2 level 2\n1 0 1\n"), ParseError);
        CHECK_THROWS_AS(parse_table("q 2 level 2\n"), ParseError);
    }
}

TEST_CASE("fbar transcribes values in column order") {
    SUBCASE("constant zero") {
        const auto lm = build_level_matrix(Modulus(5), 2);
        const auto f = FunctionTable::for_columns(lm.matrix, {0, 0, 0, 0});
        CHECK(fbar(lm, f) == zero_vector(4, Modulus(5)));
    }
    SUBCASE("frozen 2x2 example") {
        const auto lm = build_level_matrix(Modulus(2), 1);
        CHECK(fbar(lm, table_m2_q2()) == ModVector({1, 0}, Modulus(2)));
    }
    SUBCASE("values land in column order") {
        const auto lm = build_level_matrix(Modulus(5), 2);
        const auto f = FunctionTable::for_columns(lm.matrix, {3, 1, 4, 1});
        CHECK(fbar(lm, f) == ModVector({3, 1, 4, 1}, Modulus(5)));
    }
}

TEST_CASE("character interpolation") {
    SUBCASE("zero table gives the zero character") {
        const auto lm = build_level_matrix(Modulus(6), 2);
        const auto f = FunctionTable::for_columns(lm.matrix, {0, 0, 0, 0});
        const auto chi = character_from_values(lm, f);
        REQUIRE(chi.has_value());
        CHECK(chi->coeffs == zero_vector(4, Modulus(6)));
    }
    SUBCASE("frozen 2x2 example over q=2") {
        const Modulus q(2);
        const auto lm = build_level_matrix(q, 1);
        const auto chi = character_from_values(lm, table_m2_q2());
        REQUIRE(chi.has_value());
        CHECK(chi->level == 2);
        CHECK(chi->coeffs == ModVector({1, 1}, q));
        CHECK(character_eval(*chi, ModVector({1, 0}, q)).value() == 1);
        CHECK(character_eval(*chi, ModVector({1, 1}, q)).value() == 0);
    }
    SUBCASE("interpolates every table exhaustively at small levels") {
        for (std::int64_t qq : {2, 3, 6}) {
            const Modulus q(qq);
            for (std::size_t level = 0; level <= 2; ++level) {
                const auto lm = build_level_matrix(q, level);
                std::vector<std::int64_t> values(lm.matrix.cols(), 0);
                do {
                    const auto f =
                        FunctionTable::for_columns(lm.matrix, values);
                    const auto chi = character_from_values(lm, f);
                    REQUIRE(chi.has_value());
                    for (std::size_t c = 0; c < lm.matrix.cols(); ++c)
                        CHECK(character_eval(*chi, lm.matrix.column(c)) ==
                              *f.value(lm.matrix.column(c)));
                } while (next_tuple(values, qq));
            }
        }
    }
    SUBCASE("random tables at the 8x8 level") {
        std::mt19937_64 rng(20240908);
        for (std::int64_t qq : {2, 5, 12}) {
            const Modulus q(qq);
            const auto lm = build_level_matrix(q, 3);
            std::uniform_int_distribution<std::int64_t> dist(0, qq - 1);
            for (int iter = 0; iter < 25; ++iter) {
                std::vector<std::int64_t> values(8);
                for (auto& v : values) v = dist(rng);
                const auto f = FunctionTable::for_columns(lm.matrix, values);
                const auto chi = character_from_values(lm, f);
                REQUIRE(chi.has_value());
                for (std::size_t c = 0; c < 8; ++c)
                    CHECK(character_eval(*chi, lm.matrix.column(c)) ==
                          *f.value(lm.matrix.column(c)));
            }
        }
    }
    SUBCASE("no left inverse reports nullopt") {
        const auto m = example1_matrix(Modulus(3), 2);
        const auto f = FunctionTable::for_columns(m, {0, 0, 0});
        CHECK(!character_from_values(m, f).has_value());
    }
}

TEST_CASE("density witnesses") {
    SUBCASE("zero target accepts the zero combination") {
        const Modulus q(5);
        const auto lm = build_level_matrix(q, 2);
        const auto w = density_witness(lm, zero_vector(4, q));
        REQUIRE(w.has_value());
        CHECK(w->alpha == zero_vector(4, q));
        CHECK(w->combination == zero_vector(4, q));
    }
    SUBCASE("frozen 2x2 witness over q=2") {
        const Modulus q(2);
        const auto lm = build_level_matrix(q, 1);
        const auto w = density_witness(lm, ModVector({0, 1}, q));
        REQUIRE(w.has_value());
        CHECK(w->alpha == ModVector({1, 1}, q));
        CHECK(w->combination == ModVector({0, 1}, q));
    }
    SUBCASE("witness invariants always verified by multiplication") {
        std::mt19937_64 rng(20240909);
        for (std::int64_t qq : {2, 3, 6}) {
            const Modulus q(qq);
            for (std::size_t level = 1; level <= 3; ++level) {
                const auto lm = build_level_matrix(q, level);
                std::uniform_int_distribution<std::int64_t> dist(0, qq - 1);
                for (int iter = 0; iter < 10; ++iter) {
                    const std::size_t len =
                        1 + static_cast<std::size_t>(rng() %
                                                     lm.matrix.rows());
                    std::vector<std::int64_t> t(len);
                    for (auto& v : t) v = dist(rng);
                    const ModVector target(t, q);
                    const auto w = density_witness(lm, target);
                    REQUIRE(w.has_value());
                    CHECK(lm.matrix * w->alpha == w->combination);
                    for (std::size_t i = 0; i < w->combination.length(); ++i)
                        CHECK(w->combination[i] ==
                              (i < len ? target[i] : 0));
                }
            }
        }
    }
    SUBCASE("q=6 level-3 target (5,4,3) extends with zeros") {
        const Modulus q(6);
        const auto lm = build_level_matrix(q, 3);
        const auto w = density_witness(lm, ModVector({5, 4, 3}, q));
        REQUIRE(w.has_value());
        CHECK(w->combination.prefix(3) == ModVector({5, 4, 3}, q));
        for (std::size_t i = 3; i < 8; ++i) CHECK(w->combination[i] == 0);
    }
    SUBCASE("target longer than the level is rejected") {
        const Modulus q(2);
        const auto lm = build_level_matrix(q, 1);
        CHECK_THROWS_AS(density_witness(lm, zero_vector(3, q)),
                        std::invalid_argument);
    }
}

TEST_CASE("kq verifier") {
    SUBCASE("frozen: all four tables solvable at q=2 level 1") {
        const auto lm = build_level_matrix(Modulus(2), 1);
        const auto fast = verify_kq_level(lm, KqMode::fast);
        const auto full = verify_kq_level(lm, KqMode::exhaustive);
        CHECK(fast.pass);
        CHECK(full.pass);
        CHECK(full.tables_checked == 4);
        CHECK(!full.failing_values);
    }
    SUBCASE("frozen: 1296 tables at q=6 level 2") {
        const auto lm = build_level_matrix(Modulus(6), 2);
        const auto full = verify_kq_level(lm, KqMode::exhaustive);
        CHECK(full.pass);
        CHECK(full.tables_checked == 1296);
    }
    SUBCASE("the basis-truncation family fails fast mode") {
        const auto m = example1_matrix(Modulus(3), 2);
        CHECK(!verify_kq_level(m, KqMode::fast).pass);
        const auto full = verify_kq_level(m, KqMode::exhaustive);
        CHECK(!full.pass);
        REQUIRE(full.failing_values.has_value());
        // The recorded failing values must genuinely fail.
        CHECK(!solve(transpose(m), *full.failing_values).has_value());
    }
    SUBCASE("budget is enforced") {
        const auto lm = build_level_matrix(Modulus(6), 2);
        CHECK_THROWS_AS(verify_kq_level(lm, KqMode::exhaustive, 100),
                        BudgetExceeded);
    }
}

TEST_CASE("generation verifier") {
    SUBCASE("frozen: full closure at q=2 level 1") {
        const auto lm = build_level_matrix(Modulus(2), 1);
        const auto fast = verify_generation_level(lm, GenMode::fast);
        const auto closure = verify_generation_level(lm, GenMode::closure);
        CHECK(fast.pass);
        CHECK(closure.pass);
        CHECK(closure.subgroup_size == 4);
        CHECK(closure.group_order == 4);
    }
    SUBCASE("frozen: 1296 elements at q=6 level 2") {
        const auto closure = verify_generation_level(
            build_level_matrix(Modulus(6), 2), GenMode::closure);
        CHECK(closure.pass);
        CHECK(closure.subgroup_size == 1296);
    }
    SUBCASE("a zero divisor pivot blocks generation") {
        const Modulus q(4);
        const ModMatrix m(2, 2, q, {2, 0, 0, 1});
        CHECK(!verify_generation_level(m, GenMode::fast).pass);
        const auto closure = verify_generation_level(m, GenMode::closure);
        CHECK(!closure.pass);
        CHECK(closure.subgroup_size == 8);
        CHECK(closure.group_order == 16);
    }
    SUBCASE("budget is enforced") {
        const auto lm = build_level_matrix(Modulus(6), 2);
        CHECK_THROWS_AS(verify_generation_level(lm, GenMode::closure, 1000),
                        BudgetExceeded);
    }
}

TEST_CASE("fast and deep verifier modes agree") {
    std::mt19937_64 rng(20240910);
    for (int iter = 0; iter < 60; ++iter) {
        const Modulus q(2 + iter % 5);
        const std::size_t rows = 1 + iter % 3, cols = 1 + (iter / 2) % 3;
        const auto m = random_matrix(rng, rows, cols, q);
        CHECK(verify_kq_level(m, KqMode::fast).pass ==
              verify_kq_level(m, KqMode::exhaustive).pass);
        CHECK(verify_generation_level(m, GenMode::fast).pass ==
              verify_generation_level(m, GenMode::closure).pass);
    }
}

TEST_CASE("basis-truncation family") {
    SUBCASE("frozen shapes") {
        CHECK(example1_matrix(Modulus(2), 1) ==
              ModMatrix(1, 2, Modulus(2), {1, 0}));
        CHECK(example1_matrix(Modulus(5), 2) ==
              ModMatrix(2, 3, Modulus(5), {1, 0, 0, 0, 1, 0}));
        CHECK_THROWS_AS(example1_matrix(Modulus(2), 0),
                        std::invalid_argument);
    }
    SUBCASE("right invertible but never left invertible") {
        for (std::int64_t qq : {2, 3, 4}) {
            for (std::size_t n = 1; n <= 6; ++n) {
                const auto m = example1_matrix(Modulus(qq), n);
                CHECK(!left_inverse(m).has_value());
                const auto r = right_inverse(m);
                REQUIRE(r.has_value());
                CHECK(m * *r == ModMatrix::identity(n, Modulus(qq)));
            }
        }
    }
    SUBCASE("solvability census: exactly the tables with f(0) = 0") {
        for (std::int64_t qq : {2, 3}) {
            for (std::size_t n = 1; n <= 3; ++n) {
                const auto m = example1_matrix(Modulus(qq), n);
                std::vector<std::int64_t> values(n + 1, 0);
                do {
                    const auto f = FunctionTable::for_columns(m, values);
                    // The zero column is last in the canonical order.
                    CHECK(interpolation_solvable(m, f) ==
                          (values.back() == 0));
                } while (next_tuple(values, qq));
            }
        }
    }
}

TEST_CASE("interpolation_solvable frozen examples") {
    const Modulus q(2);
    const auto m = example1_matrix(q, 2);
    SUBCASE("zero table always solvable") {
        const auto f = FunctionTable::for_columns(m, {0, 0, 0});
        CHECK(interpolation_solvable(m, f));
    }
    SUBCASE("f(e1)=1 solvable with c = (1,0)") {
        const auto f = FunctionTable::for_columns(m, {1, 0, 0});
        CHECK(interpolation_solvable(m, f));
        const auto c = solve(transpose(m), fbar(m, f));
        REQUIRE(c.has_value());
        CHECK(*c == ModVector({1, 0}, q));
    }
    SUBCASE("characters kill zero, so f(0)=1 is unsolvable") {
        const auto f = FunctionTable::for_columns(m, {0, 0, 1});
        CHECK(!interpolation_solvable(m, f));
    }
}

TEST_CASE("left invertibility matches universal solvability") {
    // Surjectivity of c -> M^T c is exactly left invertibility of M; the
    // exhaustive verifier must reproduce that on arbitrary small matrices.
    std::mt19937_64 rng(20240911);
    for (int iter = 0; iter < 40; ++iter) {
        const Modulus q(2 + iter % 4);
        const std::size_t rows = 1 + iter % 3, cols = 1 + (iter / 3) % 2;
        const auto m = random_matrix(rng, rows, cols, q);
        const auto mt = transpose(m);
        bool all_solvable = true;
        std::vector<std::int64_t> values(m.cols(), 0);
        do {
            if (!solve(mt, ModVector(values, q)).has_value()) {
                all_solvable = false;
                break;
            }
        } while (next_tuple(values, q.value()));
        CHECK(all_solvable == left_inverse(m).has_value());
    }
}
