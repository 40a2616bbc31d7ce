#include <doctest.h>

#include "common.hpp"
#include "oracles.hpp"
#include "pfg/parser.hpp"
#include "pfg/pcp.hpp"

using namespace pfg;
using namespace pfg::testing;

namespace {

PcpInstance example_instance() { return {{"1", "10111", "10"}, {"111", "10", "0"}}; }
PcpInstance nosol_instance() { return {{"1"}, {"0"}}; }

}  // namespace

TEST_CASE("encode produces the five-rule difference-list DCG") {
    auto [g, m] = encode(example_instance());
    CHECK(print_grammar(g) ==
          "top s\n"
          "rule s -> +r(X,[],X,[])\n"
          "rule r(A0,A,B0,B) -> +r(A0,A1,B0,B1) +r(A1,A,B1,B)\n"
          "rule r([1|A],A,[1,1,1|B],B) -> -x\n"
          "rule r([1,0,1,1,1|A],A,[1,0|B],B) -> -x\n"
          "rule r([1,0|A],A,[0|B],B) -> -x\n");
    CHECK(m.states() == std::set<StateId>{"q"});
    CHECK(m.starts() == std::set<StateId>{"q"});
    CHECK(m.finals() == std::set<StateId>{"q"});
    REQUIRE(m.transitions().size() == 1);
    CHECK(m.transitions()[0].label == "x");
    CHECK(m.transitions()[0].from == "q");
    CHECK(m.transitions()[0].to == "q");
}

TEST_CASE("encode of the unsolvable pair gives a three-rule DCG") {
    auto [g, m] = encode(nosol_instance());
    (void)m;
    CHECK(g.rules.size() == 3);
    CHECK(print_grammar(g).find("rule r([1|A],A,[0|B],B) -> -x") != std::string::npos);
}

TEST_CASE("every encoding is off-line parsable") {
    std::vector<PcpInstance> battery = {example_instance(), nosol_instance(),
                                        {{"a"}, {"a"}},    {{"ab", "b"}, {"a", "bb"}},
                                        {{"ab"}, {"ba"}},  {{"a", "ba"}, {"ab", "a"}}};
    for (const PcpInstance& p : battery) {
        auto [g, m] = encode(p);
        (void)m;
        CHECK(offline_parsable(g));
        CHECK_FALSE(is_context_free(g));
    }
}

TEST_CASE("solve_bounded finds the known solution") {
    auto sol = solve_bounded(example_instance(), 4);
    REQUIRE(sol);
    CHECK(sol->indices == std::vector<std::size_t>{2, 1, 1, 3});
    CHECK(sol->witness == "101111110");

    CHECK_FALSE(solve_bounded(nosol_instance(), 10));

    auto trivial = solve_bounded({{"a"}, {"a"}}, 1);
    REQUIRE(trivial);
    CHECK(trivial->indices == std::vector<std::size_t>{1});
    CHECK(trivial->witness == "a");
}

TEST_CASE("solve_bounded returns the shortest solution") {
    // [1,2] works at length 2; longer repetitions also work.
    PcpInstance p{{"ab", "b"}, {"a", "bb"}};
    auto sol = solve_bounded(p, 6);
    REQUIRE(sol);
    CHECK(sol->indices == std::vector<std::size_t>{1, 2});
    CHECK(sol->witness == "abb");
}

TEST_CASE("verify_solution") {
    PcpInstance p = example_instance();
    CHECK(verify_solution(p, {{2, 1, 1, 3}, "101111110"}));
    CHECK(verify_solution(p, {{2, 1, 1, 3}, ""}));  // witness optional
    CHECK_FALSE(verify_solution(p, {{1}, ""}));     // "1" != "111"
    CHECK_FALSE(verify_solution(p, {{}, ""}));      // m >= 1 required
    CHECK_FALSE(verify_solution(p, {{2, 1, 1, 3}, "mismatch"}));
    CHECK_FALSE(verify_solution(p, {{9}, ""}));  // out of range
}

TEST_CASE("solve_bounded solutions always verify") {
    std::vector<PcpInstance> battery = {example_instance(), {{"a"}, {"a"}},
                                        {{"ab", "b"}, {"a", "bb"}},
                                        {{"a", "ba"}, {"ab", "a"}}};
    for (const PcpInstance& p : battery) {
        auto sol = solve_bounded(p, 4);
        REQUIRE(sol);
        CHECK(verify_solution(p, *sol));
    }
}

TEST_CASE("index recovery reproduces the paper sequence from both routes") {
    PcpInstance p = example_instance();
    auto [g, m] = encode(p, 0.5);

    // threshold route over the cyclic automaton
    DcgResult thr = intersect_dcg(g, m, Strategy::threshold(0.05));
    auto trees = extract_trees(thr.forest, 1);
    REQUIRE(!trees.empty());
    auto sol = recover_solution(p, thr.forest, trees[0]);
    REQUIRE(sol);
    CHECK(sol->indices == std::vector<std::size_t>{2, 1, 1, 3});
    CHECK(sol->witness == "101111110");

    // acyclic route over the chain x^4
    DcgResult chain = intersect_dcg(g, Fsa::from_string({"x", "x", "x", "x"}),
                                    Strategy::acyclic_only());
    auto chain_trees = extract_trees(chain.forest, 1);
    REQUIRE(!chain_trees.empty());
    auto sol2 = recover_solution(p, chain.forest, chain_trees[0]);
    REQUIRE(sol2);
    CHECK(sol2->indices == sol->indices);
    CHECK(sol2->witness == sol->witness);

    // the independent search agrees
    auto brute = solve_bounded(p, 4);
    REQUIRE(brute);
    CHECK(brute->indices == sol->indices);
    CHECK(brute->witness == sol->witness);
}

namespace {

/// Exhaustive search over index sequences of exactly `len` (the
/// two-sided correspondence needs per-length answers, not just the
/// shortest solution).
bool solvable_exact(const PcpInstance& p, std::size_t len) {
    std::function<bool(const std::string&, const std::string&, std::size_t)> rec =
        [&](const std::string& a, const std::string& b, std::size_t left) {
            if (left == 0) return !a.empty() && a == b;
            for (std::size_t i = 0; i < p.size(); ++i) {
                std::string a2 = a + p.list_a[i];
                std::string b2 = b + p.list_b[i];
                std::size_t n = std::min(a2.size(), b2.size());
                if (a2.compare(0, n, b2, 0, n) != 0) continue;
                if (rec(a2, b2, left - 1)) return true;
            }
            return false;
        };
    return rec("", "", len);
}

}  // namespace

TEST_CASE("encoding correspondence: solvable iff a validated tree exists") {
    std::vector<PcpInstance> battery = {example_instance(), nosol_instance(),
                                        {{"a"}, {"a"}},    {{"ab", "b"}, {"a", "bb"}},
                                        {{"ab"}, {"ba"}},  {{"a", "ba"}, {"ab", "a"}}};
    for (const PcpInstance& p : battery) {
        auto [g, m] = encode(p);
        (void)m;
        for (std::size_t len = 1; len <= 4; ++len) {
            Fsa chain = Fsa::from_string(std::vector<std::string>(len, "x"));
            DcgResult r = intersect_dcg(g, chain, Strategy::acyclic_only());
            auto trees = extract_trees(r.forest, 1, {std::nullopt, len});

            // both directions of the reduction at this length
            CHECK(solvable_exact(p, len) == !trees.empty());
            if (!trees.empty()) {
                auto sol = recover_solution(p, r.forest, trees[0]);
                REQUIRE(sol);
                CHECK(sol->indices.size() == len);
                CHECK(verify_solution(p, *sol));
            }
        }
    }
}

TEST_CASE("tree frontiers of encodings have one x per index") {
    PcpInstance p = example_instance();
    auto [g, m] = encode(p);
    (void)m;
    Fsa chain = Fsa::from_string({"x", "x", "x", "x"});
    DcgResult r = intersect_dcg(g, chain, Strategy::acyclic_only());
    for (const ParseTree& t : extract_trees(r.forest, 8)) {
        auto sol = recover_solution(p, r.forest, t);
        REQUIRE(sol);
        CHECK(sol->indices.size() == t.frontier().size());
    }
}

TEST_CASE("instance text format round-trips and validates") {
    PcpInstance p = example_instance();
    std::string text = print_pcp(p);
    CHECK(text == "pair 1 111\npair 10111 10\npair 10 0\n");
    PcpInstance back = parse_pcp(text);
    CHECK(back.list_a == p.list_a);
    CHECK(back.list_b == p.list_b);

    CHECK_THROWS_AS(parse_pcp("pair 1\n"), ParseError);
    CHECK_THROWS_AS(parse_pcp("pare 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_pcp(""), ParseError);  // k >= 1 violated
    CHECK_THROWS_AS(PcpInstance({{"1", "0"}, {"1"}}).check(), std::invalid_argument);
    CHECK_THROWS_AS(PcpInstance({{""}, {"0"}}).check(), std::invalid_argument);
}

TEST_CASE("solve_bounded rejects a zero bound") {
    CHECK_THROWS_AS(solve_bounded(example_instance(), 0), std::invalid_argument);
}
