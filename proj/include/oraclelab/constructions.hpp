// The named oracle constructions: Med_Q, Weih_g, pointed Weih, the diamond
// machine, and the constructed witnesses u / eta / mu with bounded property
// checks.
#pragma once

#include "oraclelab/mmmap.hpp"
#include "oraclelab/oracle_machine.hpp"

namespace oraclelab {

enum class OracleKind { Table, Med, Weih, PWeih, Diamond };
const char* to_string(OracleKind k);

struct EvaluableOracle {
  OracleKind kind;
  std::string name;
  PlainOracle table;          // Table / Weih / PWeih / Diamond
  std::set<uint64_t> med_q;   // Med

  static EvaluableOracle make_table(PlainOracle g);
  static EvaluableOracle make_med(std::set<uint64_t> q);
  static EvaluableOracle make_weih(PlainOracle g);
  static EvaluableOracle make_pweih(PlainOracle g);
  static EvaluableOracle make_diamond(PlainOracle g);

  OutcomeSet evaluate(const Term& input, const Budgets& b) const;
  OutcomeSet evaluate(uint64_t code, const Budgets& b) const;
};

// Med_Q(tau) = phi_tau[Q]
OutcomeSet med_eval(const std::set<uint64_t>& q, uint64_t tau, const Budgets& b);
OutcomeSet med_eval(const std::set<uint64_t>& q, const Term& tau, const Budgets& b);

// Weih_g(h,k,x) on the right-nested triple <h,<k,x>>; one oracle access.
OutcomeSet weih_eval(const PlainOracle& g, const Term& hkx, const Budgets& b);

// Weih against id|_|g; keys must normalize to <tag, w> with tag K (0) for
// the identity summand or S (1) for g.
OutcomeSet pweih_eval(const PlainOracle& g, const Term& txz, const Budgets& b);

Term triple_term(Term h, Term k, Term x);
bool split_triple(const Term& t, Term* h, Term* k, Term* x);

// Constructed witnesses; throws CompileError for kinds without one.
Term transparency_witness(OracleKind k);
Term inflation_witness(OracleKind k);
Term idempotence_witness(OracleKind k);

enum class Property { Transparent, Inflationary, Idempotent };
enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Property p);
const char* to_string(Verdict v);

struct PropertySamples {
  std::vector<Term> f_codes;  // post-composed functions (transparent only)
  std::vector<Term> inputs;   // oracle inputs x
};

// Default, kind-appropriate sample set: programs from the standing witness
// code set and well-formed inputs for the machine shape.
PropertySamples default_samples(const EvaluableOracle& u);

struct PropertyReport {
  Verdict verdict = Verdict::Pass;
  int checked = 0;      // clause instances whose hypothesis held
  int vacuous = 0;      // instances skipped because the hypothesis failed
  int inconclusive = 0; // budget-limited instances
  std::string counterexample;
  std::optional<uint64_t> searched_witness;  // set when found by search
  std::string text() const;
};

// Verifies the observation clause for the property on the samples. If no
// constructed witness exists for the kind, searches codes up to
// b.search_bound for one.
PropertyReport check_property(const EvaluableOracle& u, Property p, const PropertySamples& s,
                              const Budgets& b);

// The standing ten-program witness code set used across the bounded checks.
std::vector<Term> witness_code_set();

// Catalog of small test oracles.
std::vector<PlainOracle> oracle_catalog();

}  // namespace oraclelab
