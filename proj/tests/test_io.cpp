#include <cmath>

#include "doctest.h"
#include "ultratree/errors.hpp"
#include "ultratree/generators.hpp"
#include "ultratree/io.hpp"
#include "ultratree/random.hpp"

using namespace ultratree;

TEST_CASE("dyadic literals") {
    CHECK(parse_dyadic_literal("3/2^4") == 0.1875);
    CHECK(parse_dyadic_literal(" 1/2^0 ") == 1.0);
    CHECK(parse_dyadic_literal("1/2^1074") == std::ldexp(1.0, -1074));
    CHECK_FALSE(parse_dyadic_literal("0.5"));
    CHECK_FALSE(parse_dyadic_literal("1/3"));
    CHECK_FALSE(parse_dyadic_literal("1/2^-1"));
    CHECK_FALSE(parse_dyadic_literal("3/2^1075"));
    CHECK_FALSE(parse_dyadic_literal("-1/2^2"));
}

TEST_CASE("csv with and without row labels") {
    const auto plain = parse_matrix_csv("a,b,c\n0,1,1\n1,0,0.5\n1,0.5,0\n");
    const auto labeled = parse_matrix_csv(",a,b,c\na,0,1,1\nb,1,0,1/2^1\n\nc,1,0.5,0\n");
    CHECK(plain == labeled);
    CHECK(plain.labels() == std::vector<std::string>{"a", "b", "c"});
    CHECK(plain(1, 2) == 0.5);
}

TEST_CASE("csv errors carry line and column") {
    try {
        parse_matrix_csv("a,b\n0,1\n1,zero\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 3);
    }
    try {
        parse_matrix_csv("a,b\n0,1,2,3\n1,0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_matrix_csv("a,b\n0,1\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix_csv(""), ParseError);
    CHECK_THROWS_AS(parse_matrix_csv("a,b\n0,1\n2,0\n"), StructuralError);
}

TEST_CASE("dyadic csv cells bypass snapping") {
    const auto raw = parse_matrix_csv("a,b,c\n0,1,1.0000000001\n1,0,1\n1.0000000001,1,0\n");
    CHECK(raw(0, 1) == raw(0, 2));
    const std::string lit = "1/2^0";
    const std::string near = std::to_string((std::uint64_t{1} << 52) + 1) + "/2^52";
    const auto exact = parse_matrix_csv("a,b,c\n0," + lit + "," + near + "\n" + lit + ",0," + lit + "\n" + near + "," +
                                        lit + ",0\n");
    CHECK(exact(0, 1) != exact(0, 2));
}

TEST_CASE("matrix round trips are bit-exact") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto kind = seed % 3 == 0 ? RadiusKind::irregular : RadiusKind::dyadic;
        const auto m = random_ultrametric(1 + seed % 20, 1 + seed % 6, seed, kind);
        CHECK(parse_matrix_csv(write_matrix_csv(m)) == m);
        CHECK(parse_matrix_json(dump(matrix_to_json(m))) == m);
        CHECK(parse_matrix(write_matrix(m, MatrixFormat::json)) == m);
    }
    const auto close = DistanceMatrix({"a", "b", "c"},
                                      {0, 1, 1 + std::ldexp(1.0, -40), 1, 0, 1, 1 + std::ldexp(1.0, -40), 1, 0},
                                      std::vector<bool>(9, true));
    CHECK(parse_matrix_csv(write_matrix_csv(close)) == close);
}

TEST_CASE("json matrices") {
    const auto m = parse_matrix_json(R"({"labels":["a","b"],"d":[[0,"1/2^2"],[0.25,0]]})");
    CHECK(m(0, 1) == 0.25);
    CHECK(parse_matrix_json(R"({"d":[[0]]})").labels() == std::vector<std::string>{"p0"});
    CHECK_THROWS_AS(parse_matrix_json(R"({"d":[[0]],"extra":1})"), SchemaError);
    CHECK_THROWS_AS(parse_matrix_json(R"({"d":[[0]],"schema_version":2})"), SchemaError);
    try {
        parse_matrix_json("{\n  \"d\": [[0]\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("tree documents round trip") {
    const auto rep = build(x4_space());
    const auto& t = *rep.tree.tree;
    const auto doc = parse_tree_document(dump(tree_document(t, &rep.clade.phi)));
    CHECK(doc.tree == t);
    CHECK(doc.members == rep.clade.phi);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = build(random_ultrametric(1 + seed % 15, 1 + seed % 5, seed));
        CHECK(parse_tree_document(dump(tree_document(*r.tree.tree))).tree == *r.tree.tree);
    }
    CHECK_THROWS_AS(parse_tree_document(R"({"root":{"children":{"0":{"stalk":true,"x":1}}}})"), SchemaError);
    CHECK_THROWS_AS(parse_tree_document(R"({"root":{"children":{"a":{"stalk":true}}}})"), SchemaError);
    CHECK_THROWS_AS(parse_tree_document(R"({"root":{"children":{"0":{}}}})"), SchemaError);
    CHECK_THROWS_AS(tree_to_json(complete_tree(2, 3)), std::invalid_argument);
}

TEST_CASE("schedules round trip") {
    const auto s = radius_schedule(x4_space());
    CHECK(schedule_from_json(schedule_to_json(s)) == s);
    const auto j = schedule_to_json(geometric_schedule(3));
    CHECK(j["zero_tail"] == false);
    CHECK(j["radii"].size() == 4);
}

TEST_CASE("reports label their scope") {
    const auto bin = analysis_to_json(analyze(complete_tree(2, 10), geometric_schedule(10)));
    CHECK(bin["perfect"]["scope"] == "up to horizon 10");
    CHECK(bin["perfect"]["value"] == true);
    const auto x4 = analysis_to_json(analyze(x4_space()));
    CHECK(x4["discrete"]["scope"] == "exact");
    CHECK(x4["schema_version"] == kSchemaVersion);
    CHECK(x4["doubling"]["bruteforce"] == 2);
}

TEST_CASE("ball requests") {
    const auto m = x4_space();
    const auto r = parse_ball_requests(R"({"balls":[{"center":"c","radius":"1/2^1"},{"center":"a","radius":0.3}]})", m);
    CHECK(r == std::vector<BallRequest>{{2, 0.5}, {0, 0.3}});
    CHECK_THROWS_AS(parse_ball_requests(R"({"balls":[{"center":"z","radius":1}]})", m), SchemaError);
    CHECK_THROWS_AS(parse_ball_requests(R"({"balls":[{"center":"a","radius":0}]})", m), SchemaError);
    CHECK_THROWS_AS(parse_ball_requests(R"({"balls":[],"other":[]})", m), SchemaError);
}
