// Fuel-bounded combinatory-term virtual machine with a total Godel coding,
// bracket-abstraction compiler, pairing, numerals, smn and table compilation.
#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oraclelab {

enum class Tag : uint8_t {
  K = 0,
  S = 1,
  Pair = 2,
  Fst = 3,
  Snd = 4,
  Succ = 5,
  Pred = 6,
  Ifz = 7,
  Fix = 8,
  Query = 9,
  Num = 10,
  App = 11,
  Var = 12,  // pre-compilation only; never reaches the evaluator
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  Tag tag;
  uint64_t num = 0;       // Num payload
  Term left, right;       // App children
  std::string var;        // Var name
  // -1 unknown, 0 has work (redex/stuck/query somewhere), 1 inert
  mutable std::atomic<int8_t> inert_memo{-1};
};

struct CodeOverflow : std::runtime_error {
  CodeOverflow() : std::runtime_error("term code exceeds 64-bit range") {}
};
struct CompileError : std::runtime_error {
  explicit CompileError(const std::string& w) : std::runtime_error(w) {}
};

// leaf / node constructors
Term t_k();
Term t_s();
Term t_pair();
Term t_fst();
Term t_snd();
Term t_succ();
Term t_pred();
Term t_ifz();
Term t_fix();
Term t_query();
Term t_num(uint64_t n);
Term t_app(Term l, Term r);
Term t_app(Term a, Term b, Term c);
Term t_app(Term a, Term b, Term c, Term d);
Term t_var(const std::string& name);

int term_cmp(const Term& a, const Term& b);
bool term_eq(const Term& a, const Term& b);
bool is_closed(const Term& t);
std::string show(const Term& t);

// Cantor pairing, overflow-checked
std::optional<uint64_t> cantor_pair(uint64_t a, uint64_t b);
std::pair<uint64_t, uint64_t> cantor_unpair(uint64_t c);

// Coding. decode is total on all naturals. encode is exact on arbitrary
// precision (big_encode); the 64-bit variants saturate to nullopt, which is
// sound everywhere a code is compared against a bounded key set.
std::optional<uint64_t> try_encode(const Term& t);
uint64_t encode(const Term& t);  // throws CodeOverflow
Term decode(uint64_t code);

// Arbitrary-precision coding for moderate terms (guarded against terms whose
// code would need more than ~2^20 bits).
struct BigNat;
std::string big_encode_decimal(const Term& t);  // throws CodeOverflow past guard
Term big_decode_decimal(const std::string& digits);

struct Budgets {
  uint64_t fuel = 10'000;
  uint32_t max_queries = 16;    // distinct keys asked along one branch
  uint32_t max_branches = 256;  // total branches spawned per evaluation
  uint32_t universe_bound = 64;
  uint64_t search_bound = 100'000;
  uint32_t game_depth = 3;
  Budgets with_fuel(uint64_t f) const {
    Budgets b = *this;
    b.fuel = f;
    return b;
  }
};

enum class EvalStatus { Defined, Stuck, FuelExhausted };

struct EvalResult {
  EvalStatus status;
  Term value;  // Defined: the normal form; otherwise the term at stop
  uint64_t steps = 0;
  bool defined() const { return status == EvalStatus::Defined; }
  // encode of the value when Defined and represantable
  std::optional<uint64_t> code() const;
};

// Deterministic leftmost-outermost search for the next reduction.
struct RedexSearch {
  enum class Kind { None, Redex, Stuck, Query } kind;
  std::vector<uint8_t> path;  // 0 = left, 1 = right, from the root
  Term query_key;             // normal argument of the QUERY redex
};

RedexSearch find_redex(const Term& t);
Term contract(const Term& t, const std::vector<uint8_t>& path);
Term replace_at(const Term& t, const std::vector<uint8_t>& path, const Term& r);

// Oracle-free evaluation; a fireable QUERY counts as Stuck here.
EvalResult step_eval(Term t, const Budgets& b);
EvalResult apply_terms(Term f, Term x, const Budgets& b);
EvalResult apply(uint64_t a, uint64_t x, const Budgets& b);

// Bracket abstraction: [x]x = S K K; [x]M = K M if x not free in M;
// [x](M N) = S [x]M [x]N. No eta step.
Term bracket_abstract(const std::string& v, Term body);
Term lambda(const std::vector<std::string>& vars, Term body);

// Pairing. cp works at code level, pair_term at term level.
Term pair_term(Term a, Term b);
bool is_pair_form(const Term& t, Term* a = nullptr, Term* b = nullptr);
std::optional<uint64_t> cp(uint64_t a, uint64_t b);
EvalResult fst(uint64_t c, const Budgets& b);
EvalResult snd(uint64_t c, const Budgets& b);

// smn(e,a) * b  ==  e * cp(a,b) at sufficient fuel
Term smn_term(Term e, Term a);
std::optional<uint64_t> smn(uint64_t e, uint64_t a);

// A closed term with no normal form (constant size cycle).
Term loop_term();

// Table compilation: apply(c, encode(NUM(a))) = encode(NUM(t(a))) on the
// domain; outside it the evaluation never defines.
Term compile_table(const std::map<uint64_t, uint64_t>& table);

}  // namespace oraclelab
