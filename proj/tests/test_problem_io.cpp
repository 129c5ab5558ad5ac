#include "gridroute/astar.hpp"
#include "gridroute/generate.hpp"
#include "gridroute/problem.hpp"

#include <doctest.h>

using namespace gridroute;

namespace {

const std::string kMinimal =
    "grid 8 8 2\n"
    "vertical capacity 3\n"
    "horizontal capacity 3\n"
    "num net 1\n"
    "n0 0 2\n"
    "1 2 1\n"
    "6 5 2\n";

} // namespace

TEST_SUITE("problem_io") {

TEST_CASE("minimal problem parses") {
    const Problem p = parse_problem(kMinimal);
    CHECK(p.width == 8);
    CHECK(p.height == 8);
    CHECK(p.layers == 2);
    CHECK(p.vertical_capacity == 3);
    CHECK(p.horizontal_capacity == 3);
    REQUIRE(p.nets.size() == 1);
    CHECK(p.nets[0].name == "n0");
    CHECK(p.nets[0].id == 0);
    REQUIRE(p.nets[0].pins.size() == 2);
    CHECK(p.nets[0].pins[0] == Gcell{1, 2, 0}); // file layer 1 -> memory 0
    CHECK(p.nets[0].pins[1] == Gcell{6, 5, 1});
    CHECK(p.reduced_edges.empty());
}

TEST_CASE("reduced edge block parses") {
    const std::string text = kMinimal +
                             "num reduced edges 3\n"
                             "0 0 1 1 0 1 1\n"
                             "3 4 2 3 5 2 0\n"
                             "2 2 1 2 2 2 5\n";
    const Problem p = parse_problem(text);
    REQUIRE(p.reduced_edges.size() == 3);
    CHECK(p.reduced_edges[0].edge == make_edge(Gcell{0, 0, 0}, Gcell{1, 0, 0}));
    CHECK(p.reduced_edges[0].capacity == 1);
    CHECK(p.reduced_edges[1].edge == make_edge(Gcell{3, 4, 1}, Gcell{3, 5, 1}));
    CHECK(p.reduced_edges[2].edge.a.z == 0); // via edge is representable
    CHECK(p.reduced_edges[2].edge.b.z == 1);
}

TEST_CASE("out-of-bounds pin names the net") {
    const std::string text =
        "grid 8 8 2\n"
        "vertical capacity 3\n"
        "horizontal capacity 3\n"
        "num net 1\n"
        "badnet 0 2\n"
        "8 0 2\n"
        "0 0 1\n";
    CHECK_THROWS_WITH_AS(parse_problem(text),
                         doctest::Contains("badnet"), ParseError);
    try {
        parse_problem(text);
    } catch (const ParseError& e) {
        CHECK(e.line == 6);
    }
}

TEST_CASE("parser rejections") {
    // wrong token count
    CHECK_THROWS_AS(parse_problem("grid 8 8\n"), ParseError);
    // non-integer token
    CHECK_THROWS_AS(parse_problem("grid 8 eight 2\n"), ParseError);
    // unsupported layer count
    CHECK_THROWS_AS(parse_problem("grid 8 8 3\n"), ParseError);
    // duplicate net name
    CHECK_THROWS_AS(parse_problem("grid 4 4 2\n"
                                  "vertical capacity 1\n"
                                  "horizontal capacity 1\n"
                                  "num net 2\n"
                                  "a 0 1\n"
                                  "0 0 1\n"
                                  "a 1 1\n"
                                  "1 1 1\n"),
                    ParseError);
    // negative reduced capacity
    CHECK_THROWS_AS(parse_problem(kMinimal + "num reduced edges 1\n"
                                             "0 0 1 1 0 1 -2\n"),
                    ParseError);
    // non-adjacent reduced edge
    CHECK_THROWS_AS(parse_problem(kMinimal + "num reduced edges 1\n"
                                             "0 0 1 2 0 1 1\n"),
                    ParseError);
    // truncated net block
    CHECK_THROWS_AS(parse_problem("grid 4 4 2\n"
                                  "vertical capacity 1\n"
                                  "horizontal capacity 1\n"
                                  "num net 1\n"
                                  "a 0 3\n"
                                  "0 0 1\n"),
                    ParseError);
    // double space is a malformed token
    CHECK_THROWS_AS(parse_problem("grid 8  8 2\n"), ParseError);
}

TEST_CASE("problem round trip is byte identical") {
    const Problem p = parse_problem(kMinimal);
    const std::string canonical = write_problem(p);
    CHECK(canonical == kMinimal + "num reduced edges 0\n");
    CHECK(write_problem(parse_problem(canonical)) == canonical);
}

TEST_CASE("solution write formats") {
    RouteSolution s;
    s.nets.push_back({"n0", 0, {}});
    CHECK(write_solution(s) == "n0 0\n!\n"); // header lines only

    RouteSolution s2;
    s2.nets.push_back({"n0", 0,
                       {{Gcell{0, 0, 0}, Gcell{1, 0, 0}},
                        {Gcell{1, 0, 0}, Gcell{1, 0, 1}}}});
    CHECK(write_solution(s2) ==
          "n0 0\n"
          "(0,0,1)-(1,0,1)\n"
          "(1,0,1)-(1,0,2)\n"
          "!\n");
    const RouteSolution back = parse_solution(write_solution(s2));
    REQUIRE(back.nets.size() == 1);
    CHECK(back.nets[0].segments == s2.nets[0].segments);
}

TEST_CASE("solution parser rejects broken segments") {
    CHECK_THROWS_AS(parse_solution("n0 0\n(0,0,1)-(2,0,1)\n!\n"), ParseError);
    CHECK_THROWS_AS(parse_solution("n0 0\n(0,0,1)-(0,0,3)\n!\n"), ParseError);
    CHECK_THROWS_AS(parse_solution("n0 0\n(0,0,1)(1,0,1)\n!\n"), ParseError);
    CHECK_THROWS_AS(parse_solution("n0 0\n(0,0,1)-(1,0,1)\n"), ParseError); // missing '!'
}

TEST_CASE("generated ten-net solution round-trips structurally") {
    GenSpec spec;
    spec.width = 8;
    spec.height = 8;
    spec.net_count = 10;
    spec.max_pins_per_net = 2;
    spec.normal_capacity = 3;
    spec.seed = 20240901;
    const Problem p = generate(spec).front();
    const RouteSolution sol = route_problem(p).solution;

    const RouteSolution back = parse_solution(write_solution(sol));
    REQUIRE(back.nets.size() == sol.nets.size());
    for (size_t i = 0; i < sol.nets.size(); ++i) {
        CHECK(back.nets[i].name == sol.nets[i].name);
        CHECK(back.nets[i].id == sol.nets[i].id);
        CHECK(back.nets[i].segments == sol.nets[i].segments);
    }
    // and the text is stable through a second pass
    CHECK(write_solution(back) == write_solution(sol));
}

} // TEST_SUITE
