// Finite partial multimaps with public and secret inputs. Plain multimaps
// are the one-secret special case.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oraclelab/oracle_machine.hpp"

namespace oraclelab {

struct CapError : std::runtime_error {
  explicit CapError(const std::string& w) : std::runtime_error(w) {}
};

struct MMMap {
  std::string name;
  std::vector<uint64_t> publics;       // sorted, unique
  std::vector<std::string> secrets;    // label set, order fixed at build time
  // (public, secret index) -> finite answer set (may be empty)
  std::map<std::pair<uint64_t, uint32_t>, std::set<uint64_t>> entries;

  bool plain() const { return secrets.size() == 1; }
  bool has_public(uint64_t x) const;
  std::optional<uint32_t> secret_index(const std::string& s) const;
  // secrets q with (x|q) in dom
  std::vector<uint32_t> secrets_at(uint64_t x) const;
  bool in_dom(uint64_t x) const { return !secrets_at(x).empty(); }
  const std::set<uint64_t>& val(uint64_t x, uint32_t q) const;
  std::set<uint64_t> all_answers() const;

  void check_shape() const;  // entries reference declared publics/secrets
  void check_caps() const;   // |publics|<=8, |secrets|<=4, answers/entry<=4

  static MMMap from_json_text(const std::string& text);
  std::string to_json_text() const;
};

MMMap make_plain(std::string name, const std::map<uint64_t, std::set<uint64_t>>& table,
                 std::vector<uint64_t> extra_publics = {});
MMMap from_plain_oracle(const PlainOracle& g);
PlainOracle to_plain_oracle(const MMMap& f);  // requires f.plain()

// Extensional join: publics tagged pi(0,x) / pi(1,x), secrets disjoint union.
MMMap join(const MMMap& f, const MMMap& g);

// Identity plain map on a finite carrier.
MMMap id_finite(const std::set<uint64_t>& carrier);

// Plain composition g after f: x in dom iff x in dom(f) and every y in f(x)
// lies in dom(g); value = union of g(y).
MMMap compose_plain(const MMMap& f, const MMMap& g);

// m.m. composition g after f; secrets are pairs (p, sigma) with sigma mapping
// every f-answer to a g-secret.
MMMap compose_mm(const MMMap& f, const MMMap& g);

// Secrets replaced by the distinct value sets; val(x, S) = S.
MMMap canonicalize(const MMMap& f);

// Same value-set family per public.
bool mm_equivalent(const MMMap& f, const MMMap& g);

// The standing test catalog.
MMMap cat_id2();
MMMap cat_choice2();
MMMap cat_false1();
MMMap cat_secretbit();
MMMap cat_empty();
std::vector<MMMap> catalog6();

}  // namespace oraclelab
