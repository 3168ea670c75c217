#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oraclelab/kernel.hpp"

using namespace oraclelab;

namespace {

// Independent coding oracle: recomputes the pinned coding formula with its
// own arithmetic, used to freeze expected values.
uint64_t ref_pair(uint64_t a, uint64_t b) { return (a + b) * (a + b + 1) / 2 + b; }

// All closed terms over the constant basis up to a node count, numerals < 3.
void enum_terms(size_t max_size, std::vector<Term>& out) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  by_size[1] = {t_k(),   t_s(),    t_pair(), t_fst(),   t_snd(),  t_succ(), t_pred(),
                t_ifz(), t_fix(),  t_query(), t_num(0), t_num(1), t_num(2)};
  for (size_t n = 2; n <= max_size; ++n)
    for (size_t l = 1; l < n; ++l)
      for (const Term& a : by_size[l])
        for (const Term& b : by_size[n - 1 - l]) by_size[n].push_back(t_app(a, b));
  for (auto& v : by_size)
    for (auto& t : v) out.push_back(t);
}

Term skk() { return t_app(t_s(), t_k(), t_k()); }

}  // namespace

TEST_CASE("cantor pairing round trips and matches the formula") {
  CHECK(*cantor_pair(0, 0) == 0);
  CHECK(*cantor_pair(1, 0) == 1);
  CHECK(*cantor_pair(0, 1) == 2);
  for (uint64_t a = 0; a < 40; ++a)
    for (uint64_t b = 0; b < 40; ++b) {
      auto c = cantor_pair(a, b);
      REQUIRE(c.has_value());
      CHECK(*c == ref_pair(a, b));
      auto [x, y] = cantor_unpair(*c);
      CHECK(x == a);
      CHECK(y == b);
    }
  CHECK_FALSE(cantor_pair(UINT64_MAX, UINT64_MAX).has_value());
}

TEST_CASE("encode pins: first tag, application, fallback") {
  CHECK(encode(t_k()) == 0);  // pi(0,0)
  CHECK(encode(t_s()) == 1);
  CHECK(encode(t_pair()) == ref_pair(2, 0));
  // decode(encode(APP(K,S))) round trip
  Term t = t_app(t_k(), t_s());
  CHECK(term_eq(decode(encode(t)), t));
  CHECK(encode(t) == ref_pair(11, ref_pair(0, 1)));
  // total-decode rule: 10^9+13 has tag > 11, decodes to NUM(itself)
  uint64_t big = 1'000'000'013ull;
  auto [tag, payload] = cantor_unpair(big);
  (void)payload;
  REQUIRE(tag > 11);
  Term d = decode(big);
  CHECK(d->tag == Tag::Num);
  CHECK(d->num == big);
  // junk payload on a constant tag also falls back to NUM
  Term d5 = decode(5);  // pi(0,2)
  CHECK(d5->tag == Tag::Num);
  CHECK(d5->num == 5);
  CHECK(encode(d5) == 5);
}

TEST_CASE("coding round-trip exhaustive for terms of size <= 6") {
  std::vector<Term> terms;
  enum_terms(6, terms);
  CHECK(terms.size() > 1000);
  for (const Term& t : terms) {
    // size-6 codes overflow 64 bits; the arbitrary-precision route is exact
    CHECK(term_eq(big_decode_decimal(big_encode_decimal(t)), t));
    auto c = try_encode(t);
    if (c) CHECK(term_eq(decode(*c), t));
  }
}

TEST_CASE("encode is injective on enumerated closed terms") {
  std::vector<Term> terms;
  enum_terms(5, terms);
  std::set<std::string> seen;
  for (const Term& t : terms) CHECK(seen.insert(big_encode_decimal(t)).second);
}

TEST_CASE("big and small coding agree where both apply") {
  std::vector<Term> terms;
  enum_terms(4, terms);
  for (const Term& t : terms) {
    auto c = try_encode(t);
    if (c) CHECK(std::to_string(*c) == big_encode_decimal(t));
  }
  CHECK(term_eq(big_decode_decimal("1000000013"), t_num(1'000'000'013ull)));
}

TEST_CASE("step_eval basic rules") {
  Budgets b;
  SUBCASE("SKK is the identity") {
    EvalResult r = step_eval(t_app(skk(), t_num(7)), b);
    REQUIRE(r.defined());
    CHECK(term_eq(r.value, t_num(7)));
  }
  SUBCASE("IFZ zero branch") {
    EvalResult r = step_eval(t_app(t_ifz(), t_num(0), t_num(4), t_k()), b);
    REQUIRE(r.defined());
    CHECK(term_eq(r.value, t_num(4)));
  }
  SUBCASE("IFZ successor branch gets the predecessor") {
    EvalResult r = step_eval(t_app(t_ifz(), t_num(3), t_num(4), t_succ()), b);
    REQUIRE(r.defined());
    CHECK(term_eq(r.value, t_num(3)));  // SUCC (PRED-of-3=2) = 3
  }
  SUBCASE("numerals") {
    CHECK(term_eq(step_eval(t_app(t_succ(), t_num(2)), b).value, t_num(3)));
    CHECK(term_eq(step_eval(t_app(t_pred(), t_num(0)), b).value, t_num(0)));
    CHECK(term_eq(step_eval(t_app(t_pred(), t_num(9)), b).value, t_num(8)));
  }
  SUBCASE("FIX K applied to NUM(1) burns all fuel") {
    EvalResult r = step_eval(t_app(t_fix(), t_k(), t_num(1)), b.with_fuel(10));
    CHECK(r.status == EvalStatus::FuelExhausted);
    CHECK(r.steps == 10);
  }
  SUBCASE("stuck heads") {
    CHECK(step_eval(t_app(t_fst(), t_num(3)), b).status == EvalStatus::Stuck);
    CHECK(step_eval(t_app(t_succ(), t_k()), b).status == EvalStatus::Stuck);
    // K discards a stuck argument before it is reached
    EvalResult r = step_eval(t_app(t_k(), t_num(1), t_app(t_fst(), t_num(3))), b);
    REQUIRE(r.defined());
    CHECK(term_eq(r.value, t_num(1)));
  }
  SUBCASE("query without oracle is stuck") {
    CHECK(step_eval(t_app(t_query(), t_num(0)), b).status == EvalStatus::Stuck);
  }
}

TEST_CASE("apply: K law, successor, table code") {
  Budgets b;
  // apply(encode(K), c) then applied to d -> c for c,d in a small universe
  for (uint64_t c = 0; c < 8; ++c)
    for (uint64_t d = 0; d < 8; ++d) {
      EvalResult kc = apply(encode(t_k()), c, b);
      REQUIRE(kc.defined());
      EvalResult r = apply(*kc.code(), d, b);
      REQUIRE(r.defined());
      CHECK(term_eq(r.value, step_eval(decode(c), b).value));
    }
  CHECK(*apply(encode(t_succ()), encode(t_num(2)), b).code() == encode(t_num(3)));
  // table-compiled {5 -> 9} on NUM(5)
  Term tab = compile_table({{5, 9}});
  EvalResult r = apply_terms(tab, t_num(5), b);
  REQUIRE(r.defined());
  CHECK(*try_encode(r.value) == encode(t_num(9)));
}

TEST_CASE("code stability below first application code") {
  // every code < 66 decodes to a normal form that encodes back to itself
  Budgets b;
  for (uint64_t x = 0; x < 66; ++x) {
    EvalResult r = apply_terms(skk(), decode(x), b);
    REQUIRE(r.defined());
    CHECK(*r.code() == x);
  }
}

TEST_CASE("bracket abstraction pins") {
  CHECK(term_eq(lambda({"x"}, t_var("x")), skk()));
  CHECK(term_eq(lambda({"x"}, t_app(t_var("x"), t_var("x"))), t_app(t_s(), skk(), skk())));
  CHECK_THROWS_AS(lambda({"x"}, t_var("y")), CompileError);
  // C combinator: lambda([x,y,z], x z y) behaves as ((1 3) 2) on numerals
  Term c = lambda({"x", "y", "z"}, t_app(t_var("x"), t_var("z"), t_var("y")));
  Budgets b;
  EvalResult r = step_eval(t_app(c, t_num(1), t_num(2), t_num(3)), b);
  REQUIRE(r.defined());
  CHECK(term_eq(r.value, t_app(t_num(1), t_num(3), t_num(2))));
}

TEST_CASE("pairing laws") {
  Budgets b;
  auto c35 = cp(3, 5);
  REQUIRE(c35.has_value());
  CHECK(*fst(*c35, b).code() == 3);
  CHECK(*snd(*c35, b).code() == 5);
  // cp(0,0) agrees with the coding formula computed independently
  uint64_t pair_k = ref_pair(11, ref_pair(ref_pair(2, 0), 0));     // APP(PAIR, K)
  uint64_t expect = ref_pair(11, ref_pair(pair_k, 0));             // APP(APP(PAIR,K),K)
  CHECK(*cp(0, 0) == expect);
}

TEST_CASE("smn law") {
  Budgets b;
  // the smn codes for these exceed 64 bits, so the law runs at term level
  CHECK(*apply_terms(smn_term(t_fst(), decode(4)), decode(9), b).code() == 4);
  CHECK(*apply_terms(smn_term(t_snd(), decode(4)), decode(9), b).code() == 9);
  // identity code, a = b = 0: smn(id,0)*0 == id*cp(0,0) == cp(0,0)
  CHECK(*apply_terms(smn_term(skk(), decode(0)), decode(0), b).code() == *cp(0, 0));

  // law over a witness set: smn(e,a)*b  ~  e*cp(a,b)
  std::vector<Term> es = {
      skk(),
      t_k(),
      t_s(),
      t_succ(),
      t_pred(),
      t_fst(),
      t_snd(),
      lambda({"x"}, t_num(0)),
      lambda({"x"}, t_app(t_succ(), t_app(t_succ(), t_var("x")))),
      lambda({"x"}, pair_term(t_var("x"), t_var("x"))),
  };
  CHECK(es.size() == 10);
  for (const Term& e : es)
    for (uint64_t a = 0; a < 16; ++a)
      for (uint64_t bb = 0; bb < 16; ++bb) {
        EvalResult lhs = apply_terms(smn_term(e, decode(a)), decode(bb), b);
        EvalResult rhs = apply_terms(e, pair_term(decode(a), decode(bb)), b);
        CHECK(lhs.status == rhs.status);
        if (lhs.defined()) CHECK(term_eq(lhs.value, rhs.value));
      }
}

TEST_CASE("fuel monotonicity on random applications") {
  std::mt19937_64 rng(20240811);
  Budgets b;
  std::uniform_int_distribution<uint64_t> pick(0, 63);
  for (int i = 0; i < 200; ++i) {
    uint64_t a = pick(rng), x = pick(rng);
    for (uint64_t fuel : {5ull, 20ull, 100ull}) {
      EvalResult lo = apply(a, x, b.with_fuel(fuel));
      if (lo.defined()) {
        EvalResult hi = apply(a, x, b.with_fuel(2 * fuel));
        REQUIRE(hi.defined());
        CHECK(term_eq(lo.value, hi.value));
      }
    }
  }
}

TEST_CASE("compile_table correctness, exhaustive small tables") {
  Budgets b;
  b.fuel = 2000;
  // empty table diverges on anything
  Term empty = compile_table({});
  CHECK(apply_terms(empty, t_num(0), b).status == EvalStatus::FuelExhausted);
  CHECK(apply_terms(empty, t_num(7), b).status == EvalStatus::FuelExhausted);
  // {0->1, 1->0}
  Term flip = compile_table({{0, 1}, {1, 0}});
  CHECK(term_eq(apply_terms(flip, t_num(1), b).value, t_num(0)));
  CHECK(term_eq(apply_terms(flip, t_num(0), b).value, t_num(1)));
  // {7->7}
  Term id7 = compile_table({{7, 7}});
  CHECK(term_eq(apply_terms(id7, t_num(7), b).value, t_num(7)));

  // all tables on {0..3}->{0..3} with at most 2 entries
  std::vector<std::map<uint64_t, uint64_t>> tables;
  tables.push_back({});
  for (uint64_t k1 = 0; k1 < 4; ++k1)
    for (uint64_t v1 = 0; v1 < 4; ++v1) {
      tables.push_back({{k1, v1}});
      for (uint64_t k2 = k1 + 1; k2 < 4; ++k2)
        for (uint64_t v2 = 0; v2 < 4; ++v2) tables.push_back({{k1, v1}, {k2, v2}});
    }
  for (const auto& tab : tables) {
    Term code = compile_table(tab);
    for (uint64_t a = 0; a < 5; ++a) {
      EvalResult r = apply_terms(code, t_num(a), b);
      auto it = tab.find(a);
      if (it != tab.end()) {
        REQUIRE(r.defined());
        CHECK(term_eq(r.value, t_num(it->second)));
      } else {
        CHECK(r.status == EvalStatus::FuelExhausted);
      }
    }
  }
}
