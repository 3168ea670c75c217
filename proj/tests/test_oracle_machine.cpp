#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "oraclelab/oracle_machine.hpp"

using namespace oraclelab;

namespace {

PlainOracle mk(std::map<uint64_t, std::set<uint64_t>> e) {
  PlainOracle g;
  g.entries = std::move(e);
  return g;
}

Term query_program() { return lambda({"x"}, t_app(t_query(), t_var("x"))); }

}  // namespace

TEST_CASE("oracle json round trip, duplicate keys rejected") {
  PlainOracle g = mk({{5, {1, 2}}, {7, {}}});
  PlainOracle h = PlainOracle::from_json_text(g.to_json_text());
  CHECK(h.entries == g.entries);
  CHECK_THROWS_AS(PlainOracle::from_json_text(
                      R"({"entries":[{"key":1,"values":[2]},{"key":1,"values":[3]}]})"),
                  InputError);
  CHECK_THROWS_AS(PlainOracle::from_json_text("{nope"), InputError);
}

TEST_CASE("one query, two branches") {
  Budgets b;
  OutcomeSet o = eval_with_oracle(query_program(), decode(5), mk({{5, {1, 2}}}), b);
  REQUIRE(o.all_defined());
  CHECK(*o.codes() == std::set<uint64_t>{1, 2});
  CHECK(o.max_queries_used == 1);
}

TEST_CASE("key outside the domain diverges") {
  Budgets b;
  OutcomeSet o = eval_with_oracle(query_program(), decode(5), mk({{4, {1}}}), b);
  CHECK(o.status == OutcomeStatus::Divergent);
  CHECK(o.reason == DivergeReason::QueryOutsideDomain);
}

TEST_CASE("query-free program ignores the oracle") {
  Budgets b;
  OutcomeSet o = eval_with_oracle(t_app(t_k(), t_num(0)), decode(9), mk({{0, {1}}}), b);
  REQUIRE(o.all_defined());
  CHECK(*o.codes() == std::set<uint64_t>{encode(t_num(0))});
  CHECK(o.max_queries_used == 0);
}

TEST_CASE("empty answer set diverges") {
  Budgets b;
  OutcomeSet o = eval_with_oracle(query_program(), decode(5), mk({{5, {}}}), b);
  CHECK(o.status == OutcomeStatus::Divergent);
  CHECK(o.reason == DivergeReason::EmptyAnswerSet);
}

TEST_CASE("query budget enforcement") {
  Budgets b;
  b.max_queries = 1;
  Term two_queries = lambda({"x"}, t_app(t_query(), t_app(t_query(), t_var("x"))));
  OutcomeSet o = eval_with_oracle(two_queries, decode(0), mk({{0, {1}}, {1, {2}}}), b);
  CHECK(o.status == OutcomeStatus::QueryBudgetExceeded);
  b.max_queries = 2;
  o = eval_with_oracle(two_queries, decode(0), mk({{0, {1}}, {1, {2}}}), b);
  REQUIRE(o.all_defined());
  CHECK(*o.codes() == std::set<uint64_t>{2});
}

TEST_CASE("branch budget enforcement") {
  Budgets b;
  b.max_branches = 3;
  PlainOracle g = mk({{0, {1, 2, 3, 4, 5}}});
  OutcomeSet o = eval_with_oracle(query_program(), decode(0), g, b);
  CHECK(o.status == OutcomeStatus::BranchBudgetExceeded);
}

TEST_CASE("repeated key along one branch answers consistently") {
  Budgets b;
  // pair the two answers of the same key: consistent pairs only
  Term prog = lambda({"x"}, pair_term(t_app(t_query(), t_var("x")), t_app(t_query(), t_var("x"))));
  OutcomeSet o = eval_with_oracle(prog, decode(0), mk({{0, {0, 1}}}), b);
  REQUIRE(o.all_defined());
  REQUIRE(o.values.size() == 2);
  CHECK(term_eq(o.values[0], pair_term(t_k(), t_k())));
  CHECK(term_eq(o.values[1], pair_term(t_s(), t_s())));
  CHECK(o.max_queries_used == 1);  // the second access reuses the record
}

TEST_CASE("single-valued collapse against compile_table substitution") {
  Budgets b;
  b.fuel = 50'000;
  // keys and values chosen among NUM-fallback codes so that the table's
  // numeral-level identification matches query keys exactly
  std::map<uint64_t, uint64_t> table = {{2, 4}, {4, 7}, {7, 2}};
  PlainOracle g;
  for (auto [k, v] : table) g.entries[k] = {v};
  std::vector<Term> programs = {
      query_program(),
      lambda({"x"}, t_app(t_query(), t_app(t_query(), t_var("x")))),
      lambda({"x"}, pair_term(t_app(t_query(), t_var("x")), t_num(1))),
  };
  Term tab = compile_table(table);
  std::function<Term(const Term&)> subst = [&](const Term& t) -> Term {
    if (t->tag == Tag::Query) return tab;
    if (t->tag == Tag::App) return t_app(subst(t->left), subst(t->right));
    return t;
  };
  for (const Term& p : programs)
    for (uint64_t x : {2, 4, 7}) {
      OutcomeSet o = eval_with_oracle(p, decode(x), g, b);
      REQUIRE(o.all_defined());
      REQUIRE(o.values.size() == 1);
      EvalResult r = step_eval(subst(t_app(p, decode(x))), b);
      REQUIRE(r.defined());
      CHECK(term_eq(r.value, o.values[0]));
    }
}

TEST_CASE("budget monotonicity") {
  Budgets small;
  small.fuel = 60;
  small.max_queries = 2;
  small.max_branches = 4;
  Budgets big;
  big.fuel = 6000;
  big.max_queries = 8;
  big.max_branches = 64;
  PlainOracle g = mk({{0, {1, 2}}, {1, {2}}, {2, {0, 2}}});
  std::vector<Term> programs = {query_program(),
                                lambda({"x"}, t_app(t_query(), t_app(t_query(), t_var("x")))),
                                t_app(t_k(), t_num(3))};
  for (const Term& p : programs)
    for (uint64_t x = 0; x < 4; ++x) {
      OutcomeSet lo = eval_with_oracle(p, decode(x), g, small);
      if (lo.all_defined()) {
        OutcomeSet hi = eval_with_oracle(p, decode(x), g, big);
        CHECK(outcome_eq(lo, hi));
      }
    }
}

TEST_CASE("diamond: chained queries through a pair input") {
  Budgets b;
  PlainOracle g = mk({{0, {1}}, {1, {2}}});
  Term prog = lambda({"y"}, t_app(t_query(), t_app(t_query(), t_var("y"))));
  OutcomeSet o = diamond_eval(g, pair_term(prog, decode(0)), b);
  REQUIRE(o.all_defined());
  CHECK(*o.codes() == std::set<uint64_t>{2});

  // oracle unused
  o = diamond_eval(g, pair_term(t_app(t_s(), t_k(), t_k()), decode(9)), b);
  REQUIRE(o.all_defined());
  CHECK(*o.codes() == std::set<uint64_t>{9});

  // answer passthrough with a two-valued key
  o = diamond_eval(mk({{0, {0, 1}}}), pair_term(query_program(), decode(0)), b);
  REQUIRE(o.all_defined());
  CHECK(*o.codes() == std::set<uint64_t>{0, 1});
}

TEST_CASE("diamond: malformed input is a distinct divergence") {
  Budgets b;
  OutcomeSet o = diamond_eval(mk({{0, {1}}}), t_num(3), b);
  CHECK(o.status == OutcomeStatus::Divergent);
  CHECK(o.reason == DivergeReason::MalformedInput);
}
