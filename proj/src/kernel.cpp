#include "oraclelab/kernel.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>

namespace oraclelab {

namespace {

Term make_leaf(Tag tag) {
  auto n = std::make_shared<TermNode>();
  n->tag = tag;
  return n;
}

const Term& leaf(Tag tag) {
  static const Term k = make_leaf(Tag::K);
  static const Term s = make_leaf(Tag::S);
  static const Term pair = make_leaf(Tag::Pair);
  static const Term fst = make_leaf(Tag::Fst);
  static const Term snd = make_leaf(Tag::Snd);
  static const Term succ = make_leaf(Tag::Succ);
  static const Term pred = make_leaf(Tag::Pred);
  static const Term ifz = make_leaf(Tag::Ifz);
  static const Term fix = make_leaf(Tag::Fix);
  static const Term query = make_leaf(Tag::Query);
  switch (tag) {
    case Tag::K: return k;
    case Tag::S: return s;
    case Tag::Pair: return pair;
    case Tag::Fst: return fst;
    case Tag::Snd: return snd;
    case Tag::Succ: return succ;
    case Tag::Pred: return pred;
    case Tag::Ifz: return ifz;
    case Tag::Fix: return fix;
    case Tag::Query: return query;
    default: throw std::logic_error("not a leaf tag");
  }
}

}  // namespace

Term t_k() { return leaf(Tag::K); }
Term t_s() { return leaf(Tag::S); }
Term t_pair() { return leaf(Tag::Pair); }
Term t_fst() { return leaf(Tag::Fst); }
Term t_snd() { return leaf(Tag::Snd); }
Term t_succ() { return leaf(Tag::Succ); }
Term t_pred() { return leaf(Tag::Pred); }
Term t_ifz() { return leaf(Tag::Ifz); }
Term t_fix() { return leaf(Tag::Fix); }
Term t_query() { return leaf(Tag::Query); }

Term t_num(uint64_t n) {
  auto t = std::make_shared<TermNode>();
  t->tag = Tag::Num;
  t->num = n;
  return t;
}

Term t_app(Term l, Term r) {
  auto t = std::make_shared<TermNode>();
  t->tag = Tag::App;
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

Term t_app(Term a, Term b, Term c) { return t_app(t_app(std::move(a), std::move(b)), std::move(c)); }
Term t_app(Term a, Term b, Term c, Term d) {
  return t_app(t_app(std::move(a), std::move(b), std::move(c)), std::move(d));
}

Term t_var(const std::string& name) {
  auto t = std::make_shared<TermNode>();
  t->tag = Tag::Var;
  t->var = name;
  return t;
}

int term_cmp(const Term& a, const Term& b) {
  if (a.get() == b.get()) return 0;
  if (a->tag != b->tag) return a->tag < b->tag ? -1 : 1;
  switch (a->tag) {
    case Tag::Num:
      if (a->num != b->num) return a->num < b->num ? -1 : 1;
      return 0;
    case Tag::Var:
      return a->var.compare(b->var);
    case Tag::App: {
      int c = term_cmp(a->left, b->left);
      if (c != 0) return c;
      return term_cmp(a->right, b->right);
    }
    default:
      return 0;
  }
}

bool term_eq(const Term& a, const Term& b) { return term_cmp(a, b) == 0; }

bool is_closed(const Term& t) {
  switch (t->tag) {
    case Tag::Var: return false;
    case Tag::App: return is_closed(t->left) && is_closed(t->right);
    default: return true;
  }
}

std::string show(const Term& t) {
  switch (t->tag) {
    case Tag::K: return "K";
    case Tag::S: return "S";
    case Tag::Pair: return "PAIR";
    case Tag::Fst: return "FST";
    case Tag::Snd: return "SND";
    case Tag::Succ: return "SUCC";
    case Tag::Pred: return "PRED";
    case Tag::Ifz: return "IFZ";
    case Tag::Fix: return "FIX";
    case Tag::Query: return "QUERY";
    case Tag::Num: return "NUM(" + std::to_string(t->num) + ")";
    case Tag::Var: return t->var;
    case Tag::App: {
      std::string l = show(t->left);
      std::string r = show(t->right);
      if (t->right->tag == Tag::App) r = "(" + r + ")";
      return l + " " + r;
    }
  }
  return "?";
}

std::optional<uint64_t> cantor_pair(uint64_t a, uint64_t b) {
  unsigned __int128 s = (unsigned __int128)a + b;
  unsigned __int128 v = s * (s + 1) / 2 + b;
  if (v > UINT64_MAX) return std::nullopt;
  return (uint64_t)v;
}

std::pair<uint64_t, uint64_t> cantor_unpair(uint64_t c) {
  // largest t with t(t+1)/2 <= c
  uint64_t t = (uint64_t)((std::sqrt(8.0L * (long double)c + 1.0L) - 1.0L) / 2.0L);
  auto tri = [](unsigned __int128 x) { return x * (x + 1) / 2; };
  while (tri(t) > c) --t;
  while (tri(t + 1) <= c) ++t;
  uint64_t b = c - (uint64_t)tri(t);
  uint64_t a = t - b;
  return {a, b};
}

namespace {

// Codes whose tag/payload shape is produced by no canonical encoding decode
// to NUM(code). That keeps decode total and numeral codes stable.
bool is_num_fallback(uint64_t code) {
  auto [tag, payload] = cantor_unpair(code);
  if (tag >= 12) return true;
  if (tag <= 9 && payload != 0) return true;
  return false;
}

}  // namespace

std::optional<uint64_t> try_encode(const Term& t) {
  switch (t->tag) {
    case Tag::Num:
      if (is_num_fallback(t->num)) return t->num;
      return cantor_pair(10, t->num);
    case Tag::App: {
      auto l = try_encode(t->left);
      if (!l) return std::nullopt;
      auto r = try_encode(t->right);
      if (!r) return std::nullopt;
      auto p = cantor_pair(*l, *r);
      if (!p) return std::nullopt;
      return cantor_pair(11, *p);
    }
    case Tag::Var:
      throw CompileError("cannot encode a term with free variables");
    default:
      return cantor_pair((uint64_t)t->tag, 0);
  }
}

uint64_t encode(const Term& t) {
  auto c = try_encode(t);
  if (!c) throw CodeOverflow{};
  return *c;
}

Term decode(uint64_t code) {
  auto [tag, payload] = cantor_unpair(code);
  if (tag <= 9 && payload == 0) return leaf((Tag)tag);
  if (tag == 10) return t_num(payload);
  if (tag == 11) {
    auto [l, r] = cantor_unpair(payload);
    return t_app(decode(l), decode(r));
  }
  return t_num(code);  // total-decode fallback
}

// ---------------------------------------------------------------------------
// Arbitrary-precision coding

namespace {

using bignat = boost::multiprecision::cpp_int;
constexpr unsigned kBigBitGuard = 1u << 20;

bignat big_pair(const bignat& a, const bignat& b) {
  bignat s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<bignat, bignat> big_unpair(const bignat& c) {
  bignat w = 8 * c + 1;
  bignat t = boost::multiprecision::sqrt(w);
  t = (t - 1) / 2;
  while (t * (t + 1) / 2 > c) --t;
  while ((t + 1) * (t + 2) / 2 <= c) ++t;
  bignat b = c - t * (t + 1) / 2;
  return {t - b, b};
}

bignat big_encode(const Term& t) {
  switch (t->tag) {
    case Tag::Num:
      if (is_num_fallback(t->num)) return bignat(t->num);
      return big_pair(10, bignat(t->num));
    case Tag::App: {
      bignat l = big_encode(t->left);
      bignat r = big_encode(t->right);
      if (msb(l + 1) + msb(r + 1) > kBigBitGuard) throw CodeOverflow{};
      return big_pair(11, big_pair(l, r));
    }
    case Tag::Var:
      throw CompileError("cannot encode a term with free variables");
    default:
      return big_pair(bignat((uint64_t)t->tag), 0);
  }
}

Term big_decode(const bignat& code) {
  auto [tag, payload] = big_unpair(code);
  if (tag <= 9 && payload == 0) return leaf((Tag)(uint8_t)tag);
  if (tag == 10) {
    if (payload > UINT64_MAX) throw CodeOverflow{};  // numeral beyond payload range
    return t_num((uint64_t)payload);
  }
  if (tag == 11) {
    auto [l, r] = big_unpair(payload);
    return t_app(big_decode(l), big_decode(r));
  }
  if (code > UINT64_MAX) throw CodeOverflow{};
  return t_num((uint64_t)code);
}

}  // namespace

std::string big_encode_decimal(const Term& t) { return big_encode(t).str(); }

Term big_decode_decimal(const std::string& digits) { return big_decode(bignat(digits)); }

// ---------------------------------------------------------------------------
// Reduction

namespace {

bool pair_shape(const Term& t, Term* a, Term* b) {
  if (t->tag != Tag::App || t->left->tag != Tag::App) return false;
  if (t->left->left->tag != Tag::Pair) return false;
  if (a) *a = t->left->right;
  if (b) *b = t->right;
  return true;
}

// Kinds of activity a node can host at its root.
enum class RootAct { None, Redex, Stuck, Query };

// Looks only at the root pattern; arguments of strict constants must be
// inert before the root can act.
RootAct root_activity(const Term& t, bool& needs_arg_first, const Term** arg) {
  needs_arg_first = false;
  if (t->tag != Tag::App) return RootAct::None;
  const Term& l = t->left;
  const Term& r = t->right;
  // K a b
  if (l->tag == Tag::App && l->left->tag == Tag::K) return RootAct::Redex;
  // S a b c
  if (l->tag == Tag::App && l->left->tag == Tag::App && l->left->left->tag == Tag::S)
    return RootAct::Redex;
  // FIX f
  if (l->tag == Tag::Fix) return RootAct::Redex;
  // FST p / SND p
  if (l->tag == Tag::Fst || l->tag == Tag::Snd) {
    needs_arg_first = true;
    *arg = &r;
    if (pair_shape(r, nullptr, nullptr)) return RootAct::Redex;
    return RootAct::Stuck;
  }
  // SUCC n / PRED n
  if (l->tag == Tag::Succ || l->tag == Tag::Pred) {
    needs_arg_first = true;
    *arg = &r;
    if (r->tag == Tag::Num) return RootAct::Redex;
    return RootAct::Stuck;
  }
  // IFZ n a f
  if (l->tag == Tag::App && l->left->tag == Tag::App && l->left->left->tag == Tag::Ifz) {
    needs_arg_first = true;
    *arg = &l->left->right;
    if (l->left->right->tag == Tag::Num) return RootAct::Redex;
    return RootAct::Stuck;
  }
  // QUERY v
  if (l->tag == Tag::Query) {
    needs_arg_first = true;
    *arg = &r;
    return RootAct::Query;
  }
  return RootAct::None;
}

bool inert(const Term& t);

bool compute_inert(const Term& t) {
  if (t->tag != Tag::App) {
    if (t->tag == Tag::Var) throw CompileError("evaluator reached a free variable");
    return true;
  }
  bool needs_arg = false;
  const Term* arg = nullptr;
  RootAct act = root_activity(t, needs_arg, &arg);
  if (act == RootAct::Redex && !needs_arg) return false;
  if (needs_arg) {
    if (!inert(*arg)) return false;  // work inside the strict argument
    return false;                    // root fires, sticks, or queries
  }
  if (act != RootAct::None) return false;
  return inert(t->left) && inert(t->right);
}

bool inert(const Term& t) {
  int8_t m = t->inert_memo.load(std::memory_order_relaxed);
  if (m >= 0) return m != 0;
  bool v = compute_inert(t);
  t->inert_memo.store(v ? 1 : 0, std::memory_order_relaxed);
  return v;
}

void search(const Term& t, std::vector<uint8_t>& path, RedexSearch& out) {
  bool needs_arg = false;
  const Term* arg = nullptr;
  RootAct act = root_activity(t, needs_arg, &arg);
  if (act != RootAct::None && !needs_arg) {
    out.kind = RedexSearch::Kind::Redex;
    out.path = path;
    return;
  }
  if (needs_arg) {
    if (!inert(*arg)) {
      // descend to the strict argument position
      const Term& l = t->left;
      if (l->tag == Tag::App && l->left->tag == Tag::App && l->left->left->tag == Tag::Ifz) {
        path.push_back(0);
        path.push_back(0);
        path.push_back(1);
        search(l->left->right, path, out);
      } else {
        path.push_back(1);
        search(t->right, path, out);
      }
      return;
    }
    switch (act) {
      case RootAct::Redex:
        out.kind = RedexSearch::Kind::Redex;
        out.path = path;
        return;
      case RootAct::Stuck:
        out.kind = RedexSearch::Kind::Stuck;
        out.path = path;
        return;
      case RootAct::Query:
        out.kind = RedexSearch::Kind::Query;
        out.path = path;
        out.query_key = *arg;
        return;
      default: break;
    }
  }
  // no root activity: leftmost subterm with work
  if (!inert(t->left)) {
    path.push_back(0);
    search(t->left, path, out);
    return;
  }
  path.push_back(1);
  search(t->right, path, out);
}

Term contract_here(const Term& t) {
  const Term& l = t->left;
  const Term& r = t->right;
  if (l->tag == Tag::App && l->left->tag == Tag::K) return l->right;
  if (l->tag == Tag::App && l->left->tag == Tag::App && l->left->left->tag == Tag::S) {
    const Term& a = l->left->right;
    const Term& b = l->right;
    return t_app(t_app(a, r), t_app(b, r));
  }
  if (l->tag == Tag::Fix) return t_app(r, t);  // FIX f -> f (FIX f)
  if (l->tag == Tag::Fst || l->tag == Tag::Snd) {
    Term a, b;
    if (!pair_shape(r, &a, &b)) throw std::logic_error("contract: not a pair");
    return l->tag == Tag::Fst ? a : b;
  }
  if (l->tag == Tag::Succ) return t_num(r->num + 1);
  if (l->tag == Tag::Pred) return t_num(r->num == 0 ? 0 : r->num - 1);
  if (l->tag == Tag::App && l->left->tag == Tag::App && l->left->left->tag == Tag::Ifz) {
    uint64_t n = l->left->right->num;
    const Term& zero_branch = l->right;
    const Term& succ_branch = r;
    if (n == 0) return zero_branch;
    return t_app(succ_branch, t_num(n - 1));
  }
  throw std::logic_error("contract: no redex at path");
}

}  // namespace

RedexSearch find_redex(const Term& t) {
  RedexSearch out;
  if (inert(t)) {
    out.kind = RedexSearch::Kind::None;
    return out;
  }
  std::vector<uint8_t> path;
  search(t, path, out);
  return out;
}

Term replace_at(const Term& t, const std::vector<uint8_t>& path, const Term& r) {
  // rebuild bottom-up along the path
  std::vector<Term> spine;
  Term node = t;
  for (uint8_t step : path) {
    spine.push_back(node);
    node = step == 0 ? node->left : node->right;
  }
  Term cur = r;
  for (size_t i = path.size(); i-- > 0;) {
    const Term& parent = spine[i];
    cur = path[i] == 0 ? t_app(cur, parent->right) : t_app(parent->left, cur);
  }
  return cur;
}

Term contract(const Term& t, const std::vector<uint8_t>& path) {
  const Term* node = &t;
  for (uint8_t step : path) node = step == 0 ? &(*node)->left : &(*node)->right;
  return replace_at(t, path, contract_here(*node));
}

EvalResult step_eval(Term t, const Budgets& b) {
  uint64_t steps = 0;
  for (;;) {
    RedexSearch f = find_redex(t);
    switch (f.kind) {
      case RedexSearch::Kind::None:
        return {EvalStatus::Defined, t, steps};
      case RedexSearch::Kind::Stuck:
      case RedexSearch::Kind::Query:
        // a fireable query without an oracle is an artifact-level type error
        return {EvalStatus::Stuck, t, steps};
      case RedexSearch::Kind::Redex:
        if (steps == b.fuel) return {EvalStatus::FuelExhausted, t, steps};
        t = contract(t, f.path);
        ++steps;
        break;
    }
  }
}

EvalResult apply_terms(Term f, Term x, const Budgets& b) {
  return step_eval(t_app(std::move(f), std::move(x)), b);
}

EvalResult apply(uint64_t a, uint64_t x, const Budgets& b) {
  return apply_terms(decode(a), decode(x), b);
}

std::optional<uint64_t> EvalResult::code() const {
  if (status != EvalStatus::Defined) return std::nullopt;
  return try_encode(value);
}

// ---------------------------------------------------------------------------
// Bracket abstraction

namespace {

bool free_in(const std::string& v, const Term& t) {
  switch (t->tag) {
    case Tag::Var: return t->var == v;
    case Tag::App: return free_in(v, t->left) || free_in(v, t->right);
    default: return false;
  }
}

}  // namespace

Term bracket_abstract(const std::string& v, Term body) {
  if (body->tag == Tag::Var && body->var == v) return t_app(t_s(), t_k(), t_k());
  if (!free_in(v, body)) return t_app(t_k(), body);
  // body is an application containing v
  return t_app(t_s(), bracket_abstract(v, body->left), bracket_abstract(v, body->right));
}

Term lambda(const std::vector<std::string>& vars, Term body) {
  Term t = std::move(body);
  for (size_t i = vars.size(); i-- > 0;) t = bracket_abstract(vars[i], t);
  if (!is_closed(t)) throw CompileError("unbound variable in lambda body");
  return t;
}

// ---------------------------------------------------------------------------
// Pairing, smn, tables

Term pair_term(Term a, Term b) { return t_app(t_pair(), std::move(a), std::move(b)); }

bool is_pair_form(const Term& t, Term* a, Term* b) { return pair_shape(t, a, b); }

std::optional<uint64_t> cp(uint64_t a, uint64_t b) {
  return try_encode(pair_term(decode(a), decode(b)));
}

EvalResult fst(uint64_t c, const Budgets& b) {
  return step_eval(t_app(t_fst(), decode(c)), b);
}

EvalResult snd(uint64_t c, const Budgets& b) {
  return step_eval(t_app(t_snd(), decode(c)), b);
}

Term smn_term(Term e, Term a) {
  return bracket_abstract("x", t_app(std::move(e), pair_term(std::move(a), t_var("x"))));
}

std::optional<uint64_t> smn(uint64_t e, uint64_t a) {
  return try_encode(smn_term(decode(e), decode(a)));
}

Term loop_term() { return t_app(t_fix(), t_app(t_s(), t_k(), t_k())); }

Term compile_table(const std::map<uint64_t, uint64_t>& table) {
  if (table.empty()) return t_app(t_k(), loop_term());
  uint64_t max_key = table.rbegin()->first;
  // chain_k handles numeral n-k; beyond the last key, diverge
  Term chain = t_app(t_k(), loop_term());
  for (uint64_t k = max_key + 1; k-- > 0;) {
    auto it = table.find(k);
    Term hit = it != table.end() ? t_num(it->second) : loop_term();
    chain = bracket_abstract("n", t_app(t_ifz(), t_var("n"), hit, chain));
  }
  return chain;
}

}  // namespace oraclelab
