#include "oraclelab/constructions.hpp"

#include <algorithm>
#include <sstream>

namespace oraclelab {

const char* to_string(OracleKind k) {
  switch (k) {
    case OracleKind::Table: return "table";
    case OracleKind::Med: return "med";
    case OracleKind::Weih: return "weih";
    case OracleKind::PWeih: return "pweih";
    case OracleKind::Diamond: return "diamond";
  }
  return "?";
}

const char* to_string(Property p) {
  switch (p) {
    case Property::Transparent: return "transparent";
    case Property::Inflationary: return "inflationary";
    case Property::Idempotent: return "idempotent";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

EvaluableOracle EvaluableOracle::make_table(PlainOracle g) {
  return {OracleKind::Table, "table(" + g.name + ")", std::move(g), {}};
}
EvaluableOracle EvaluableOracle::make_med(std::set<uint64_t> q) {
  std::ostringstream name;
  name << "med{";
  bool first = true;
  for (uint64_t v : q) {
    if (!first) name << ",";
    first = false;
    name << v;
  }
  name << "}";
  return {OracleKind::Med, name.str(), {}, std::move(q)};
}
EvaluableOracle EvaluableOracle::make_weih(PlainOracle g) {
  return {OracleKind::Weih, "weih(" + g.name + ")", std::move(g), {}};
}
EvaluableOracle EvaluableOracle::make_pweih(PlainOracle g) {
  return {OracleKind::PWeih, "pweih(" + g.name + ")", std::move(g), {}};
}
EvaluableOracle EvaluableOracle::make_diamond(PlainOracle g) {
  return {OracleKind::Diamond, "diamond(" + g.name + ")", std::move(g), {}};
}

Term triple_term(Term h, Term k, Term x) {
  return pair_term(std::move(h), pair_term(std::move(k), std::move(x)));
}

bool split_triple(const Term& t, Term* h, Term* k, Term* x) {
  Term rest;
  if (!is_pair_form(t, h, &rest)) return false;
  return is_pair_form(rest, k, x);
}

OutcomeSet med_eval(const std::set<uint64_t>& q, const Term& tau, const Budgets& b) {
  std::vector<Term> out;
  bool fuel_out = false;
  for (uint64_t elem : q) {
    EvalResult r = apply_terms(tau, decode(elem), b);
    switch (r.status) {
      case EvalStatus::Defined: out.push_back(r.value); break;
      case EvalStatus::Stuck: return OutcomeSet::divergent(DivergeReason::StuckTerm);
      case EvalStatus::FuelExhausted: fuel_out = true; break;
    }
  }
  if (fuel_out) return OutcomeSet::of_status(OutcomeStatus::FuelExhausted);
  return OutcomeSet::defined(std::move(out));
}

OutcomeSet med_eval(const std::set<uint64_t>& q, uint64_t tau, const Budgets& b) {
  return med_eval(q, decode(tau), b);
}

namespace {

// Normalizes t far enough to read it as a triple.
bool settle_triple(const Term& t, const Budgets& b, Term* h, Term* k, Term* x, OutcomeSet* err) {
  if (split_triple(t, h, k, x)) return true;
  EvalResult r = step_eval(t, b);
  if (r.status == EvalStatus::FuelExhausted) {
    *err = OutcomeSet::of_status(OutcomeStatus::FuelExhausted);
    return false;
  }
  if (r.status == EvalStatus::Stuck || !split_triple(r.value, h, k, x)) {
    *err = OutcomeSet::divergent(DivergeReason::MalformedInput);
    return false;
  }
  return true;
}

OutcomeSet weih_like_eval(const PlainOracle& g, const Term& input, const Budgets& b,
                          bool pointed) {
  Term h, k, x;
  OutcomeSet err;
  if (!settle_triple(input, b, &h, &k, &x, &err)) return err;

  EvalResult z = apply_terms(h, x, b);
  if (z.status == EvalStatus::FuelExhausted)
    return OutcomeSet::of_status(OutcomeStatus::FuelExhausted);
  if (z.status == EvalStatus::Stuck) return OutcomeSet::divergent(DivergeReason::StuckTerm);

  // answer terms of the single oracle access
  std::vector<Term> answers;
  if (!pointed) {
    auto key = try_encode(z.value);
    if (!key || !g.has_key(*key)) return OutcomeSet::divergent(DivergeReason::QueryOutsideDomain);
    for (uint64_t a : g.entries.at(*key)) answers.push_back(decode(a));
  } else {
    // id |_| g: keys are tagged pairs <K,w> (identity) or <S,w> (g)
    Term tag, w;
    if (!is_pair_form(z.value, &tag, &w))
      return OutcomeSet::divergent(DivergeReason::QueryOutsideDomain);
    if (tag->tag == Tag::K) {
      answers.push_back(w);
    } else if (tag->tag == Tag::S) {
      auto key = try_encode(w);
      if (!key || !g.has_key(*key))
        return OutcomeSet::divergent(DivergeReason::QueryOutsideDomain);
      for (uint64_t a : g.entries.at(*key)) answers.push_back(decode(a));
    } else {
      return OutcomeSet::divergent(DivergeReason::QueryOutsideDomain);
    }
  }

  std::vector<Term> out;
  bool fuel_out = false;
  for (const Term& y : answers) {
    EvalResult r = apply_terms(k, pair_term(x, y), b);
    switch (r.status) {
      case EvalStatus::Defined: out.push_back(r.value); break;
      case EvalStatus::Stuck: return OutcomeSet::divergent(DivergeReason::StuckTerm);
      case EvalStatus::FuelExhausted: fuel_out = true; break;
    }
  }
  if (fuel_out) return OutcomeSet::of_status(OutcomeStatus::FuelExhausted);
  return OutcomeSet::defined(std::move(out), 1);
}

}  // namespace

OutcomeSet weih_eval(const PlainOracle& g, const Term& hkx, const Budgets& b) {
  return weih_like_eval(g, hkx, b, false);
}

OutcomeSet pweih_eval(const PlainOracle& g, const Term& txz, const Budgets& b) {
  return weih_like_eval(g, txz, b, true);
}

OutcomeSet EvaluableOracle::evaluate(const Term& input, const Budgets& b) const {
  switch (kind) {
    case OracleKind::Table: {
      Term t = input;
      RedexSearch f = find_redex(t);
      if (f.kind != RedexSearch::Kind::None) {
        EvalResult r = step_eval(t, b);
        if (r.status == EvalStatus::FuelExhausted)
          return OutcomeSet::of_status(OutcomeStatus::FuelExhausted);
        if (r.status == EvalStatus::Stuck)
          return OutcomeSet::divergent(DivergeReason::StuckTerm);
        t = r.value;
      }
      auto key = try_encode(t);
      if (!key || !table.has_key(*key))
        return OutcomeSet::divergent(DivergeReason::QueryOutsideDomain);
      std::vector<Term> vals;
      for (uint64_t v : table.entries.at(*key)) vals.push_back(decode(v));
      return OutcomeSet::defined(std::move(vals));
    }
    case OracleKind::Med: return med_eval(med_q, input, b);
    case OracleKind::Weih: return weih_eval(table, input, b);
    case OracleKind::PWeih: return pweih_eval(table, input, b);
    case OracleKind::Diamond: return diamond_eval(table, input, b);
  }
  return OutcomeSet::divergent(DivergeReason::MalformedInput);
}

OutcomeSet EvaluableOracle::evaluate(uint64_t code, const Budgets& b) const {
  return evaluate(decode(code), b);
}

// ---------------------------------------------------------------------------
// Witnesses

namespace {

Term compose_combinator() {  // B = \f g y. f (g y)
  return lambda({"f", "g", "y"}, t_app(t_var("f"), t_app(t_var("g"), t_var("y"))));
}

Term fst_of(Term t) { return t_app(t_fst(), std::move(t)); }
Term snd_of(Term t) { return t_app(t_snd(), std::move(t)); }

}  // namespace

Term transparency_witness(OracleKind k) {
  switch (k) {
    case OracleKind::Med:
      // u*f*tau is a code of phi_f . phi_tau
      return compose_combinator();
    case OracleKind::Weih:
    case OracleKind::PWeih: {
      // u = \l t. <fst t, B l (fst (snd t)), snd (snd t)>
      Term body = triple_term(fst_of(t_var("t")),
                              t_app(compose_combinator(), t_var("l"), fst_of(snd_of(t_var("t")))),
                              snd_of(snd_of(t_var("t"))));
      return lambda({"l", "t"}, body);
    }
    case OracleKind::Diamond: {
      // u = \f t. <B f (fst t), snd t>
      Term body = pair_term(t_app(compose_combinator(), t_var("f"), fst_of(t_var("t"))),
                            snd_of(t_var("t")));
      return lambda({"f", "t"}, body);
    }
    case OracleKind::Table:
      throw CompileError("no constructed transparency witness for table oracles");
  }
  throw CompileError("unsupported kind");
}

Term inflation_witness(OracleKind k) {
  switch (k) {
    case OracleKind::Diamond:
      // eta = \x. <K x, K>: the constant program returning x, run on 0
      return lambda({"x"}, pair_term(t_app(t_k(), t_var("x")), t_k()));
    case OracleKind::PWeih:
      // eta = \x. <h0, SND, x> with h0 = \w.<K,w> routing to the id summand
      return lambda({"x"}, triple_term(lambda({"w"}, pair_term(t_k(), t_var("w"))), t_snd(),
                                       t_var("x")));
    case OracleKind::Med:
      // Med_Q(K x) = {x} whenever Q is nonempty-evaluable
      return t_k();
    default:
      throw CompileError(std::string("no constructed inflation witness for ") + to_string(k));
  }
}

Term idempotence_witness(OracleKind k) {
  switch (k) {
    case OracleKind::Diamond: {
      // dialogue flattening: mu = \t. <SUB (fst t), snd t>
      // SUB = \w y. (fst (w y)) (snd (w y))
      Term sub = lambda({"w", "y"}, t_app(fst_of(t_app(t_var("w"), t_var("y"))),
                                          snd_of(t_app(t_var("w"), t_var("y")))));
      return lambda({"t"}, pair_term(t_app(sub, fst_of(t_var("t"))), snd_of(t_var("t"))));
    }
    case OracleKind::Med:
      // mu = \x q. (x q) q
      return lambda({"x", "q"}, t_app(t_app(t_var("x"), t_var("q")), t_var("q")));
    default:
      throw CompileError(std::string("no constructed idempotence witness for ") + to_string(k));
  }
}

// ---------------------------------------------------------------------------
// Samples and property checks

std::vector<Term> witness_code_set() {
  Term id = t_app(t_s(), t_k(), t_k());
  return {
      id,
      t_k(),
      t_s(),
      t_succ(),
      t_pred(),
      lambda({"x"}, t_num(0)),
      lambda({"x"}, t_app(t_succ(), t_app(t_succ(), t_var("x")))),
      t_fst(),
      t_snd(),
      lambda({"x"}, pair_term(t_var("x"), t_var("x"))),
  };
}

std::vector<PlainOracle> oracle_catalog() {
  PlainOracle choice;
  choice.name = "choice";
  choice.entries = {{0, {0, 1}}};
  PlainOracle cycle4;
  cycle4.name = "cycle4";
  cycle4.entries = {{0, {1}}, {1, {2}}, {2, {3}}, {3, {0}}};
  PlainOracle id4;
  id4.name = "id4";
  id4.entries = {{0, {0}}, {1, {1}}, {2, {2}}, {3, {3}}};
  return {choice, cycle4, id4};
}

PropertySamples default_samples(const EvaluableOracle& u) {
  PropertySamples s;
  s.f_codes = witness_code_set();
  Term id = t_app(t_s(), t_k(), t_k());
  switch (u.kind) {
    case OracleKind::Table:
      for (const auto& [k, vs] : u.table.entries) {
        (void)vs;
        s.inputs.push_back(decode(k));
      }
      for (uint64_t x = 0; x < 4; ++x) s.inputs.push_back(decode(x));
      break;
    case OracleKind::Med:
      for (const Term& t : witness_code_set()) s.inputs.push_back(t);
      break;
    case OracleKind::Weih: {
      std::vector<Term> hs = {id};
      for (const auto& [k, vs] : u.table.entries) {
        (void)vs;
        hs.push_back(lambda({"w"}, decode(k)));  // constant key
      }
      std::vector<Term> ks = {t_snd(), t_fst(), lambda({"p"}, t_num(0))};
      for (const Term& h : hs)
        for (const Term& k : ks)
          for (uint64_t x = 0; x < 4; ++x) s.inputs.push_back(triple_term(h, k, decode(x)));
      break;
    }
    case OracleKind::PWeih: {
      Term h0 = lambda({"w"}, pair_term(t_k(), t_var("w")));
      std::vector<Term> hs = {h0};
      for (const auto& [k, vs] : u.table.entries) {
        (void)vs;
        hs.push_back(lambda({"w"}, pair_term(t_s(), decode(k))));
      }
      std::vector<Term> ks = {t_snd(), t_fst()};
      for (const Term& h : hs)
        for (const Term& k : ks)
          for (uint64_t x = 0; x < 4; ++x) s.inputs.push_back(triple_term(h, k, decode(x)));
      break;
    }
    case OracleKind::Diamond: {
      for (uint64_t x = 0; x < 4; ++x)
        s.inputs.push_back(pair_term(t_app(t_k(), decode(x)), t_k()));  // constant programs
      for (const auto& [k, vs] : u.table.entries) {
        (void)vs;
        s.inputs.push_back(pair_term(t_query(), decode(k)));  // one query
        s.inputs.push_back(pair_term(lambda({"y"}, t_app(t_query(), t_var("y"))), decode(k)));
      }
      // two-stage inputs: the first run yields another program/argument pair
      s.inputs.push_back(pair_term(t_app(t_k(), pair_term(t_succ(), t_num(3))), t_k()));
      s.inputs.push_back(pair_term(t_app(t_k(), pair_term(id, t_num(1))), t_k()));
      break;
    }
  }
  return s;
}

std::string PropertyReport::text() const {
  std::ostringstream os;
  os << to_string(verdict) << " (checked " << checked << ", vacuous " << vacuous
     << ", inconclusive " << inconclusive << ")";
  if (searched_witness) os << " witness-code " << *searched_witness;
  if (!counterexample.empty()) os << " counterexample: " << counterexample;
  return os.str();
}

namespace {

enum class ClauseOutcome { Holds, Violated, Vacuous, Inconclusive };

// U(u*f*x) subseteq f * U(x), checked when the right side is defined.
ClauseOutcome transparent_clause(const EvaluableOracle& u_oracle, const Term& u, const Term& f,
                                 const Term& x, const Budgets& b, std::string* why) {
  OutcomeSet ux = u_oracle.evaluate(x, b);
  if (ux.status == OutcomeStatus::FuelExhausted ||
      ux.status == OutcomeStatus::QueryBudgetExceeded ||
      ux.status == OutcomeStatus::BranchBudgetExceeded)
    return ClauseOutcome::Inconclusive;
  if (!ux.all_defined()) return ClauseOutcome::Vacuous;
  std::vector<Term> rhs;
  for (const Term& y : ux.values) {
    EvalResult r = apply_terms(f, y, b);
    if (r.status == EvalStatus::Stuck) return ClauseOutcome::Vacuous;  // f*U(x) undefined
    if (r.status == EvalStatus::FuelExhausted) return ClauseOutcome::Inconclusive;
    rhs.push_back(r.value);
  }
  EvalResult uf = apply_terms(u, f, b);
  if (!uf.defined()) return ClauseOutcome::Inconclusive;
  EvalResult ufx = apply_terms(uf.value, x, b);
  if (!ufx.defined()) return ClauseOutcome::Inconclusive;
  OutcomeSet lhs = u_oracle.evaluate(ufx.value, b);
  if (lhs.status == OutcomeStatus::FuelExhausted ||
      lhs.status == OutcomeStatus::QueryBudgetExceeded ||
      lhs.status == OutcomeStatus::BranchBudgetExceeded)
    return ClauseOutcome::Inconclusive;
  if (!lhs.all_defined()) {
    *why = "U(u*f*x) undefined: " + lhs.show();
    return ClauseOutcome::Violated;
  }
  for (const Term& v : lhs.values) {
    bool found = false;
    for (const Term& w : rhs)
      if (term_eq(v, w)) {
        found = true;
        break;
      }
    if (!found) {
      *why = "value " + show(v) + " outside f*U(x)";
      return ClauseOutcome::Violated;
    }
  }
  return ClauseOutcome::Holds;
}

ClauseOutcome inflation_clause(const EvaluableOracle& u_oracle, const Term& eta, const Term& x,
                               const Budgets& b, std::string* why) {
  EvalResult nx = step_eval(x, b);
  if (!nx.defined()) return ClauseOutcome::Vacuous;
  EvalResult ex = apply_terms(eta, x, b);
  if (ex.status == EvalStatus::FuelExhausted) return ClauseOutcome::Inconclusive;
  if (ex.status == EvalStatus::Stuck) {
    *why = "eta*x stuck";
    return ClauseOutcome::Violated;
  }
  OutcomeSet lhs = u_oracle.evaluate(ex.value, b);
  if (lhs.status == OutcomeStatus::FuelExhausted ||
      lhs.status == OutcomeStatus::QueryBudgetExceeded ||
      lhs.status == OutcomeStatus::BranchBudgetExceeded)
    return ClauseOutcome::Inconclusive;
  if (!lhs.all_defined()) {
    *why = "U(eta*x) undefined: " + lhs.show();
    return ClauseOutcome::Violated;
  }
  for (const Term& v : lhs.values)
    if (!term_eq(v, nx.value)) {
      *why = "U(eta*x) contains " + show(v) + " != " + show(nx.value);
      return ClauseOutcome::Violated;
    }
  return ClauseOutcome::Holds;
}

ClauseOutcome idempotence_clause(const EvaluableOracle& u_oracle, const Term& mu, const Term& x,
                                 const Budgets& b, std::string* why) {
  OutcomeSet ux = u_oracle.evaluate(x, b);
  if (ux.status == OutcomeStatus::FuelExhausted ||
      ux.status == OutcomeStatus::QueryBudgetExceeded ||
      ux.status == OutcomeStatus::BranchBudgetExceeded)
    return ClauseOutcome::Inconclusive;
  if (!ux.all_defined()) return ClauseOutcome::Vacuous;
  std::vector<Term> rhs;
  for (const Term& y : ux.values) {
    OutcomeSet uy = u_oracle.evaluate(y, b);
    if (uy.status == OutcomeStatus::FuelExhausted ||
        uy.status == OutcomeStatus::QueryBudgetExceeded ||
        uy.status == OutcomeStatus::BranchBudgetExceeded)
      return ClauseOutcome::Inconclusive;
    if (!uy.all_defined()) return ClauseOutcome::Vacuous;  // x outside dom(U o U)
    rhs.insert(rhs.end(), uy.values.begin(), uy.values.end());
  }
  EvalResult mx = apply_terms(mu, x, b);
  if (mx.status == EvalStatus::FuelExhausted) return ClauseOutcome::Inconclusive;
  if (mx.status == EvalStatus::Stuck) {
    *why = "mu*x stuck";
    return ClauseOutcome::Violated;
  }
  OutcomeSet lhs = u_oracle.evaluate(mx.value, b);
  if (lhs.status == OutcomeStatus::FuelExhausted ||
      lhs.status == OutcomeStatus::QueryBudgetExceeded ||
      lhs.status == OutcomeStatus::BranchBudgetExceeded)
    return ClauseOutcome::Inconclusive;
  if (!lhs.all_defined()) {
    *why = "U(mu*x) undefined: " + lhs.show();
    return ClauseOutcome::Violated;
  }
  for (const Term& v : lhs.values) {
    bool found = false;
    for (const Term& w : rhs)
      if (term_eq(v, w)) {
        found = true;
        break;
      }
    if (!found) {
      *why = "value " + show(v) + " outside U(U(x))";
      return ClauseOutcome::Violated;
    }
  }
  return ClauseOutcome::Holds;
}

std::optional<Term> constructed_witness(OracleKind k, Property p) {
  try {
    switch (p) {
      case Property::Transparent: return transparency_witness(k);
      case Property::Inflationary: return inflation_witness(k);
      case Property::Idempotent: return idempotence_witness(k);
    }
  } catch (const CompileError&) {
  }
  return std::nullopt;
}

}  // namespace

PropertyReport check_property(const EvaluableOracle& u_oracle, Property p,
                              const PropertySamples& s, const Budgets& b) {
  PropertyReport rep;
  auto run_with = [&](const Term& w) {
    PropertyReport r;
    std::string why;
    auto record = [&](ClauseOutcome c, const std::string& at) {
      switch (c) {
        case ClauseOutcome::Holds: ++r.checked; break;
        case ClauseOutcome::Vacuous: ++r.vacuous; break;
        case ClauseOutcome::Inconclusive: ++r.inconclusive; break;
        case ClauseOutcome::Violated:
          r.verdict = Verdict::Fail;
          if (r.counterexample.empty()) r.counterexample = at + ": " + why;
          break;
      }
    };
    if (p == Property::Transparent) {
      for (const Term& f : s.f_codes)
        for (const Term& x : s.inputs)
          record(transparent_clause(u_oracle, w, f, x, b, &why),
                 "f=" + show(f) + " x=" + show(x));
    } else if (p == Property::Inflationary) {
      for (const Term& x : s.inputs) record(inflation_clause(u_oracle, w, x, b, &why), "x=" + show(x));
    } else {
      for (const Term& x : s.inputs)
        record(idempotence_clause(u_oracle, w, x, b, &why), "x=" + show(x));
    }
    if (r.verdict != Verdict::Fail && r.inconclusive > 0 && r.checked == 0)
      r.verdict = Verdict::Inconclusive;
    return r;
  };

  if (auto w = constructed_witness(u_oracle.kind, p)) {
    rep = run_with(*w);
    return rep;
  }

  // no constructed witness: bounded search for one
  uint64_t bound = std::min<uint64_t>(b.search_bound, 200'000);
  for (uint64_t c = 0; c <= bound; ++c) {
    PropertyReport r = run_with(decode(c));
    if (r.verdict == Verdict::Pass && r.checked + r.vacuous > 0 && r.inconclusive == 0) {
      r.searched_witness = c;
      return r;
    }
  }
  rep.verdict = Verdict::Fail;
  rep.counterexample =
      "no witness code <= " + std::to_string(bound) + " tracks the clause on the samples";
  return rep;
}

}  // namespace oraclelab
