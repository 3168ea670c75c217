#include "oraclelab/oracle_machine.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <sstream>

namespace oraclelab {

using nlohmann::json;

PlainOracle PlainOracle::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("oracle JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    throw InputError("oracle JSON: expected {\"entries\":[...]}");
  PlainOracle g;
  if (j.contains("name")) g.name = j["name"].get<std::string>();
  for (const auto& e : j["entries"]) {
    if (!e.contains("key") || !e.contains("values"))
      throw InputError("oracle JSON: entry needs key and values");
    uint64_t key = e["key"].get<uint64_t>();
    if (g.entries.count(key)) throw InputError("oracle JSON: duplicate key " + std::to_string(key));
    auto& vals = g.entries[key];
    for (const auto& v : e["values"]) vals.insert(v.get<uint64_t>());
  }
  return g;
}

std::string PlainOracle::to_json_text() const {
  json entries = json::array();
  for (const auto& [k, vs] : this->entries) {
    json vals = json::array();
    for (uint64_t v : vs) vals.push_back(v);
    entries.push_back({{"key", k}, {"values", vals}});
  }
  json j = {{"name", name}, {"entries", entries}};
  return j.dump(2);
}

const char* to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::AllDefined: return "all-defined";
    case OutcomeStatus::Divergent: return "divergent";
    case OutcomeStatus::FuelExhausted: return "fuel-exhausted";
    case OutcomeStatus::QueryBudgetExceeded: return "query-budget-exceeded";
    case OutcomeStatus::BranchBudgetExceeded: return "branch-budget-exceeded";
  }
  return "?";
}

const char* to_string(DivergeReason r) {
  switch (r) {
    case DivergeReason::None: return "none";
    case DivergeReason::QueryOutsideDomain: return "query-outside-domain";
    case DivergeReason::EmptyAnswerSet: return "empty-answer-set";
    case DivergeReason::StuckTerm: return "stuck-term";
    case DivergeReason::MalformedInput: return "malformed-input";
  }
  return "?";
}

bool OutcomeSet::contains(const Term& t) const {
  for (const Term& v : values)
    if (term_eq(v, t)) return true;
  return false;
}

std::optional<std::set<uint64_t>> OutcomeSet::codes() const {
  std::set<uint64_t> out;
  for (const Term& v : values) {
    auto c = try_encode(v);
    if (!c) return std::nullopt;
    out.insert(*c);
  }
  return out;
}

std::string OutcomeSet::show() const {
  std::ostringstream os;
  os << to_string(status);
  if (status == OutcomeStatus::Divergent && reason != DivergeReason::None)
    os << "(" << to_string(reason) << ")";
  if (status == OutcomeStatus::AllDefined) {
    os << " {";
    bool first = true;
    for (const Term& v : values) {
      if (!first) os << ", ";
      first = false;
      auto c = try_encode(v);
      if (c)
        os << *c;
      else
        os << oraclelab::show(v);
    }
    os << "}";
  }
  return os.str();
}

OutcomeSet OutcomeSet::defined(std::vector<Term> vals, uint32_t queries) {
  std::sort(vals.begin(), vals.end(),
            [](const Term& a, const Term& b) { return term_cmp(a, b) < 0; });
  vals.erase(std::unique(vals.begin(), vals.end(),
                         [](const Term& a, const Term& b) { return term_eq(a, b); }),
             vals.end());
  OutcomeSet o;
  o.status = OutcomeStatus::AllDefined;
  o.values = std::move(vals);
  o.max_queries_used = queries;
  return o;
}

OutcomeSet OutcomeSet::divergent(DivergeReason r) {
  OutcomeSet o;
  o.status = OutcomeStatus::Divergent;
  o.reason = r;
  return o;
}

OutcomeSet OutcomeSet::of_status(OutcomeStatus s) {
  OutcomeSet o;
  o.status = s;
  return o;
}

bool outcome_eq(const OutcomeSet& a, const OutcomeSet& b) {
  if (a.status != b.status) return false;
  if (a.values.size() != b.values.size()) return false;
  for (size_t i = 0; i < a.values.size(); ++i)
    if (!term_eq(a.values[i], b.values[i])) return false;
  return true;
}

namespace {

struct Branch {
  Term term;
  uint64_t steps;
  std::map<uint64_t, uint64_t> answers;  // key -> chosen value, per branch
};

}  // namespace

OutcomeSet eval_term_with_oracle(Term t, const PlainOracle& g, const Budgets& b) {
  std::deque<Branch> work;
  work.push_back({std::move(t), 0, {}});
  uint32_t spawned = 1;
  uint32_t max_queries_used = 0;

  std::vector<Term> done;
  bool fuel_out = false, query_out = false;
  std::optional<DivergeReason> diverged;

  while (!work.empty()) {
    Branch br = std::move(work.front());
    work.pop_front();
    for (;;) {
      RedexSearch f = find_redex(br.term);
      if (f.kind == RedexSearch::Kind::None) {
        done.push_back(br.term);
        break;
      }
      if (f.kind == RedexSearch::Kind::Stuck) {
        if (!diverged) diverged = DivergeReason::StuckTerm;
        break;
      }
      if (br.steps == b.fuel) {
        fuel_out = true;
        break;
      }
      if (f.kind == RedexSearch::Kind::Redex) {
        br.term = contract(br.term, f.path);
        ++br.steps;
        continue;
      }
      // query redex
      auto key = try_encode(f.query_key);
      if (!key || !g.has_key(*key)) {
        // a key past the 64-bit range lies outside any admissible domain
        if (!diverged) diverged = DivergeReason::QueryOutsideDomain;
        break;
      }
      auto remembered = br.answers.find(*key);
      if (remembered != br.answers.end()) {
        br.term = replace_at(br.term, f.path, decode(remembered->second));
        ++br.steps;
        continue;
      }
      const auto& answers = g.entries.at(*key);
      if (answers.empty()) {
        if (!diverged) diverged = DivergeReason::EmptyAnswerSet;
        break;
      }
      if (br.answers.size() + 1 > b.max_queries) {
        query_out = true;
        break;
      }
      max_queries_used = std::max<uint32_t>(max_queries_used, (uint32_t)br.answers.size() + 1);
      ++br.steps;
      bool first = true;
      for (uint64_t a : answers) {
        if (first) {          // current branch takes the least answer
          first = false;
          continue;
        }
        if (spawned == b.max_branches)
          return OutcomeSet::of_status(OutcomeStatus::BranchBudgetExceeded);
        ++spawned;
        Branch forked = br;
        forked.answers[*key] = a;
        forked.term = replace_at(forked.term, f.path, decode(a));
        work.push_back(std::move(forked));
      }
      uint64_t least = *answers.begin();
      br.answers[*key] = least;
      br.term = replace_at(br.term, f.path, decode(least));
    }
  }

  if (diverged) return OutcomeSet::divergent(*diverged);
  if (query_out) return OutcomeSet::of_status(OutcomeStatus::QueryBudgetExceeded);
  if (fuel_out) return OutcomeSet::of_status(OutcomeStatus::FuelExhausted);
  return OutcomeSet::defined(std::move(done), max_queries_used);
}

OutcomeSet eval_with_oracle(Term program, Term input, const PlainOracle& g, const Budgets& b) {
  return eval_term_with_oracle(t_app(std::move(program), std::move(input)), g, b);
}

OutcomeSet eval_with_oracle(uint64_t program, uint64_t input, const PlainOracle& g,
                            const Budgets& b) {
  return eval_with_oracle(decode(program), decode(input), g, b);
}

OutcomeSet diamond_eval(const PlainOracle& g, Term x, const Budgets& b) {
  Term prog, arg;
  if (!is_pair_form(x, &prog, &arg)) {
    // allow a reducible input to settle into a pair first
    EvalResult r = step_eval(x, b);
    if (r.status == EvalStatus::FuelExhausted)
      return OutcomeSet::of_status(OutcomeStatus::FuelExhausted);
    if (r.status == EvalStatus::Stuck || !is_pair_form(r.value, &prog, &arg))
      return OutcomeSet::divergent(DivergeReason::MalformedInput);
  }
  return eval_with_oracle(prog, arg, g, b);
}

OutcomeSet diamond_eval(const PlainOracle& g, uint64_t x, const Budgets& b) {
  return diamond_eval(g, decode(x), b);
}

}  // namespace oraclelab
