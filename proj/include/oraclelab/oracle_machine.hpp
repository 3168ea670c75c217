// Nondeterministic evaluation of QUERY-bearing terms against a finite plain
// multimap oracle, with query/branch/fuel budgets.
#pragma once

#include <map>
#include <set>
#include <string>

#include "oraclelab/kernel.hpp"

namespace oraclelab {

struct InputError : std::runtime_error {
  explicit InputError(const std::string& w) : std::runtime_error(w) {}
};

struct PlainOracle {
  std::string name = "oracle";
  std::map<uint64_t, std::set<uint64_t>> entries;

  bool has_key(uint64_t k) const { return entries.count(k) != 0; }
  // JSON: {"entries":[{"key":n,"values":[..]}]}; duplicate keys rejected
  static PlainOracle from_json_text(const std::string& text);
  std::string to_json_text() const;
};

enum class OutcomeStatus {
  AllDefined,
  Divergent,
  FuelExhausted,
  QueryBudgetExceeded,
  BranchBudgetExceeded,
};

enum class DivergeReason {
  None,
  QueryOutsideDomain,
  EmptyAnswerSet,
  StuckTerm,
  MalformedInput,
};

const char* to_string(OutcomeStatus s);
const char* to_string(DivergeReason r);

struct OutcomeSet {
  OutcomeStatus status = OutcomeStatus::Divergent;
  DivergeReason reason = DivergeReason::None;
  std::vector<Term> values;  // sorted by term_cmp, unique; AllDefined only
  uint32_t max_queries_used = 0;

  bool all_defined() const { return status == OutcomeStatus::AllDefined; }
  bool contains(const Term& t) const;
  // encode of every value; nullopt if any value exceeds 64-bit coding
  std::optional<std::set<uint64_t>> codes() const;
  std::string show() const;

  static OutcomeSet defined(std::vector<Term> vals, uint32_t queries = 0);
  static OutcomeSet divergent(DivergeReason r);
  static OutcomeSet of_status(OutcomeStatus s);
};

bool outcome_eq(const OutcomeSet& a, const OutcomeSet& b);

// Runs APP(program, input); on QUERY v with v normal, branches over the
// oracle answers. Along one branch, repeated queries with the same key
// return the recorded answer (the oracle acts as a stored blackbox), and
// only distinct keys count against max_queries.
OutcomeSet eval_with_oracle(Term program, Term input, const PlainOracle& g, const Budgets& b);
OutcomeSet eval_with_oracle(uint64_t program, uint64_t input, const PlainOracle& g,
                            const Budgets& b);

// Term-level branch evaluation (the term is run as-is).
OutcomeSet eval_term_with_oracle(Term t, const PlainOracle& g, const Budgets& b);

// g-diamond: interprets x as cp(program, argument) and runs the program with
// finitely many queries to g.
OutcomeSet diamond_eval(const PlainOracle& g, Term x, const Budgets& b);
OutcomeSet diamond_eval(const PlainOracle& g, uint64_t x, const Budgets& b);

}  // namespace oraclelab
