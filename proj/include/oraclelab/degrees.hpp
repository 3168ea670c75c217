// Extensional brute-force reducibility over finite m.m. maps: extended
// many-one, (strong / pointed / extended) Weihrauch, and depth-bounded
// Turing-Weihrauch via the consistent-secret-set game.
#pragma once

#include <memory>
#include <variant>

#include "oraclelab/mmmap.hpp"

namespace oraclelab {

enum class RKind { EM, EW, SW, PEW, TW };
const char* to_string(RKind k);
std::optional<RKind> rkind_of(const std::string& s);

// extended many-one: a single public transformation
struct EmWitness {
  std::map<uint64_t, uint64_t> phi;  // publics(f) -> publics(g)
};

// per-x data of an extended Weihrauch reduction
struct EwAtX {
  uint64_t z = 0;                        // queried g-public
  std::map<uint32_t, uint32_t> sigma;    // f-secret -> g-secret (Nimue)
  std::map<uint64_t, uint64_t> h;        // g-answer -> f-answer (outer)
};
struct EwWitness {
  std::map<uint64_t, EwAtX> per_x;  // keyed by dom-publics of f
};

// strong Weihrauch: phi_plus is shared across instances
struct SwWitness {
  std::map<uint64_t, uint64_t> phi_minus;
  std::map<uint64_t, uint64_t> phi_plus;
};

// pointed: per instance either a direct answer or one query
struct PewAtX {
  bool escape = false;
  uint64_t answer = 0;  // when escape
  EwAtX query;          // otherwise
};
struct PewWitness {
  std::map<uint64_t, PewAtX> per_x;
};

// Turing-Weihrauch strategy tree over consistent secret sets
struct TwNode {
  bool answer_now = false;
  uint64_t answer = 0;                   // when answer_now
  uint64_t z = 0;                        // else: queried g-public
  std::map<uint32_t, uint32_t> nimue;    // consistent f-secret -> g-secret
  std::map<uint64_t, std::shared_ptr<const TwNode>> children;  // per g-answer
};
struct TwWitness {
  uint32_t depth = 0;
  std::map<uint64_t, std::shared_ptr<const TwNode>> per_x;
};

using AnyWitness = std::variant<EmWitness, EwWitness, SwWitness, PewWitness, TwWitness>;

std::string show_witness(const AnyWitness& w, const MMMap& f, const MMMap& g);

// Searches are exhaustive within the caps; absence is proven
// non-reducibility (TW verdicts are depth-qualified). Every returned witness
// has already passed the independent verifier.
std::optional<EmWitness> reduce_em(const MMMap& f, const MMMap& g);
std::optional<EwWitness> reduce_ew(const MMMap& f, const MMMap& g);
std::optional<SwWitness> reduce_sw(const MMMap& f, const MMMap& g);
std::optional<PewWitness> reduce_pew(const MMMap& f, const MMMap& g);
std::optional<TwWitness> reduce_tw(const MMMap& f, const MMMap& g, uint32_t depth);

std::optional<AnyWitness> reduce(RKind k, const MMMap& f, const MMMap& g, uint32_t depth);

// Definition-only re-verification (verify.cpp); reads nothing from the
// search path.
bool verify_em(const MMMap& f, const MMMap& g, const EmWitness& w);
bool verify_ew(const MMMap& f, const MMMap& g, const EwWitness& w);
bool verify_sw(const MMMap& f, const MMMap& g, const SwWitness& w);
bool verify_pew(const MMMap& f, const MMMap& g, const PewWitness& w);
bool verify_tw(const MMMap& f, const MMMap& g, const TwWitness& w);
bool verify(RKind k, const MMMap& f, const MMMap& g, const AnyWitness& w);

// Witness composition f<=g, g<=h |- f<=h (TW composes at depth d1*d2).
EmWitness compose_em(const EmWitness& a, const EmWitness& b);
EwWitness compose_ew(const MMMap& f, const MMMap& g, const MMMap& h, const EwWitness& a,
                     const EwWitness& b);
SwWitness compose_sw(const SwWitness& a, const SwWitness& b);
PewWitness compose_pew(const MMMap& f, const MMMap& g, const MMMap& h, const PewWitness& a,
                       const PewWitness& b);
TwWitness compose_tw(const MMMap& f, const MMMap& g, const MMMap& h, const TwWitness& a,
                     const TwWitness& b);

// Degree poset over a catalog.
struct PosetReport {
  RKind kind;
  uint32_t tw_depth = 0;
  std::vector<std::string> names;
  std::vector<std::vector<bool>> reducible;          // [i][j]: catalog[i] <= catalog[j]
  std::vector<std::vector<uint32_t>> degrees;        // index sets, sorted by representative
  std::vector<std::pair<uint32_t, uint32_t>> hasse;  // strict cover edges between degrees
  std::string to_dot() const;
  std::string to_text() const;
};

PosetReport poset_report(const std::vector<MMMap>& catalog, RKind kind, uint32_t tw_depth);

}  // namespace oraclelab
