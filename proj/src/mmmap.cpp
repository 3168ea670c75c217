#include "oraclelab/mmmap.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace oraclelab {

using nlohmann::json;

bool MMMap::has_public(uint64_t x) const {
  return std::binary_search(publics.begin(), publics.end(), x);
}

std::optional<uint32_t> MMMap::secret_index(const std::string& s) const {
  for (uint32_t i = 0; i < secrets.size(); ++i)
    if (secrets[i] == s) return i;
  return std::nullopt;
}

std::vector<uint32_t> MMMap::secrets_at(uint64_t x) const {
  std::vector<uint32_t> out;
  for (uint32_t q = 0; q < secrets.size(); ++q)
    if (entries.count({x, q})) out.push_back(q);
  return out;
}

const std::set<uint64_t>& MMMap::val(uint64_t x, uint32_t q) const {
  return entries.at({x, q});
}

std::set<uint64_t> MMMap::all_answers() const {
  std::set<uint64_t> out;
  for (const auto& [k, vs] : entries) out.insert(vs.begin(), vs.end());
  return out;
}

void MMMap::check_shape() const {
  for (const auto& [k, vs] : entries) {
    (void)vs;
    if (!has_public(k.first))
      throw InputError(name + ": entry references undeclared public " + std::to_string(k.first));
    if (k.second >= secrets.size())
      throw InputError(name + ": entry references undeclared secret");
  }
  if (secrets.empty()) throw InputError(name + ": secret set must be nonempty");
  for (const auto& [k, vs] : entries)
    for (uint64_t v : vs)
      if (v >= (1ull << 32)) throw InputError(name + ": answer exceeds 2^32");
}

void MMMap::check_caps() const {
  if (publics.size() > 8) throw CapError(name + ": more than 8 publics");
  if (secrets.size() > 4) throw CapError(name + ": more than 4 secrets");
  for (const auto& [k, vs] : entries) {
    (void)k;
    if (vs.size() > 4) throw CapError(name + ": more than 4 answers in one entry");
  }
}

MMMap MMMap::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("mmmap JSON: ") + e.what());
  }
  MMMap f;
  f.name = j.value("name", "unnamed");
  for (const auto& p : j.at("publics")) f.publics.push_back(p.get<uint64_t>());
  std::sort(f.publics.begin(), f.publics.end());
  f.publics.erase(std::unique(f.publics.begin(), f.publics.end()), f.publics.end());
  for (const auto& s : j.at("secrets")) f.secrets.push_back(s.get<std::string>());
  if (f.secrets.empty()) f.secrets = {"*"};
  for (const auto& e : j.at("entries")) {
    uint64_t pub = e.at("public").get<uint64_t>();
    std::string sec = e.contains("secret") ? e.at("secret").get<std::string>() : "*";
    auto qi = f.secret_index(sec);
    if (!qi) throw InputError(f.name + ": unknown secret label " + sec);
    auto key = std::make_pair(pub, *qi);
    if (f.entries.count(key)) throw InputError(f.name + ": duplicate entry");
    std::set<uint64_t> vals;
    for (const auto& v : e.at("values")) vals.insert(v.get<uint64_t>());
    f.entries[key] = std::move(vals);
  }
  f.check_shape();
  return f;
}

std::string MMMap::to_json_text() const {
  json pubs = json::array();
  for (uint64_t p : publics) pubs.push_back(p);
  json secs = json::array();
  for (const auto& s : secrets) secs.push_back(s);
  json es = json::array();
  for (const auto& [k, vs] : entries) {
    json vals = json::array();
    for (uint64_t v : vs) vals.push_back(v);
    es.push_back({{"public", k.first}, {"secret", secrets[k.second]}, {"values", vals}});
  }
  return json{{"name", name}, {"publics", pubs}, {"secrets", secs}, {"entries", es}}.dump(2);
}

MMMap make_plain(std::string name, const std::map<uint64_t, std::set<uint64_t>>& table,
                 std::vector<uint64_t> extra_publics) {
  MMMap f;
  f.name = std::move(name);
  f.secrets = {"*"};
  for (const auto& [k, vs] : table) {
    f.publics.push_back(k);
    f.entries[{k, 0}] = vs;
  }
  for (uint64_t p : extra_publics) f.publics.push_back(p);
  std::sort(f.publics.begin(), f.publics.end());
  f.publics.erase(std::unique(f.publics.begin(), f.publics.end()), f.publics.end());
  return f;
}

MMMap from_plain_oracle(const PlainOracle& g) { return make_plain(g.name, g.entries); }

PlainOracle to_plain_oracle(const MMMap& f) {
  if (!f.plain()) throw InputError(f.name + ": not a plain map");
  PlainOracle g;
  g.name = f.name;
  for (const auto& [k, vs] : f.entries) g.entries[k.first] = vs;
  return g;
}

MMMap join(const MMMap& f, const MMMap& g) {
  MMMap j;
  j.name = "join(" + f.name + "," + g.name + ")";
  for (uint64_t x : f.publics) j.publics.push_back(*cantor_pair(0, x));
  for (uint64_t x : g.publics) j.publics.push_back(*cantor_pair(1, x));
  std::sort(j.publics.begin(), j.publics.end());
  j.publics.erase(std::unique(j.publics.begin(), j.publics.end()), j.publics.end());
  for (const auto& s : f.secrets) j.secrets.push_back("0:" + s);
  for (const auto& s : g.secrets) j.secrets.push_back("1:" + s);
  for (const auto& [k, vs] : f.entries) j.entries[{*cantor_pair(0, k.first), k.second}] = vs;
  uint32_t off = (uint32_t)f.secrets.size();
  for (const auto& [k, vs] : g.entries)
    j.entries[{*cantor_pair(1, k.first), k.second + off}] = vs;
  return j;
}

MMMap id_finite(const std::set<uint64_t>& carrier) {
  std::map<uint64_t, std::set<uint64_t>> t;
  for (uint64_t x : carrier) t[x] = {x};
  return make_plain("id", t);
}

MMMap compose_plain(const MMMap& f, const MMMap& g) {
  if (!f.plain() || !g.plain()) throw InputError("compose_plain needs plain maps");
  std::map<uint64_t, std::set<uint64_t>> out;
  for (const auto& [k, ys] : f.entries) {
    bool total = true;
    std::set<uint64_t> acc;
    for (uint64_t y : ys) {
      auto it = g.entries.find({y, 0});
      if (it == g.entries.end()) {
        total = false;
        break;
      }
      acc.insert(it->second.begin(), it->second.end());
    }
    if (total) out[k.first] = std::move(acc);
  }
  MMMap r = make_plain("(" + g.name + "*" + f.name + ")", out);
  return r;
}

MMMap compose_mm(const MMMap& f, const MMMap& g) {
  // Secrets are pairs (p, sigma); sigma assigns a g-secret to every possible
  // f-answer. Enumerating sigma over the global f-answer set keeps labels
  // well defined across entries.
  std::vector<uint64_t> f_answers(f.all_answers().begin(), f.all_answers().end());
  size_t n_sigma = 1;
  for (size_t i = 0; i < f_answers.size(); ++i) {
    n_sigma *= g.secrets.size();
    if (n_sigma > 4096) throw CapError("compose_mm: sigma space too large");
  }
  MMMap c;
  c.name = "(" + g.name + "." + f.name + ")";
  c.publics = f.publics;
  std::vector<std::vector<uint32_t>> sigmas;
  std::vector<uint32_t> cur(f_answers.size(), 0);
  for (size_t s = 0; s < n_sigma; ++s) {
    sigmas.push_back(cur);
    for (size_t i = 0; i < cur.size(); ++i) {
      if (++cur[i] < g.secrets.size()) break;
      cur[i] = 0;
    }
  }
  for (uint32_t p = 0; p < f.secrets.size(); ++p)
    for (size_t s = 0; s < sigmas.size(); ++s) {
      std::ostringstream lab;
      lab << f.secrets[p] << ";";
      for (size_t i = 0; i < f_answers.size(); ++i)
        lab << f_answers[i] << ">" << g.secrets[sigmas[s][i]] << (i + 1 < f_answers.size() ? "," : "");
      c.secrets.push_back(lab.str());
    }
  auto sigma_of = [&](size_t s, uint64_t y) {
    for (size_t i = 0; i < f_answers.size(); ++i)
      if (f_answers[i] == y) return sigmas[s][i];
    throw std::logic_error("compose_mm: answer not indexed");
  };
  for (uint64_t x : f.publics)
    for (uint32_t p = 0; p < f.secrets.size(); ++p) {
      auto it = f.entries.find({x, p});
      if (it == f.entries.end()) continue;
      for (size_t s = 0; s < sigmas.size(); ++s) {
        bool total = true;
        std::set<uint64_t> acc;
        for (uint64_t y : it->second) {
          auto git = g.entries.find({y, sigma_of(s, y)});
          if (git == g.entries.end()) {
            total = false;
            break;
          }
          acc.insert(git->second.begin(), git->second.end());
        }
        if (total) c.entries[{x, (uint32_t)(p * sigmas.size() + s)}] = std::move(acc);
      }
    }
  return c;
}

namespace {

std::string value_set_label(const std::set<uint64_t>& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (uint64_t v : s) {
    if (!first) os << ",";
    first = false;
    os << v;
  }
  os << "}";
  return os.str();
}

}  // namespace

MMMap canonicalize(const MMMap& f) {
  std::set<std::set<uint64_t>> value_sets;
  for (const auto& [k, vs] : f.entries) {
    (void)k;
    value_sets.insert(vs);
  }
  MMMap c;
  c.name = f.name + "~";
  c.publics = f.publics;
  std::vector<std::set<uint64_t>> sets(value_sets.begin(), value_sets.end());
  if (sets.empty()) {
    c.secrets = {"*"};
    return c;
  }
  for (const auto& s : sets) c.secrets.push_back(value_set_label(s));
  for (uint64_t x : f.publics)
    for (uint32_t p = 0; p < f.secrets.size(); ++p) {
      auto it = f.entries.find({x, p});
      if (it == f.entries.end()) continue;
      for (uint32_t i = 0; i < sets.size(); ++i)
        if (sets[i] == it->second) c.entries[{x, i}] = sets[i];
    }
  return c;
}

bool mm_equivalent(const MMMap& f, const MMMap& g) {
  std::set<uint64_t> xs(f.publics.begin(), f.publics.end());
  xs.insert(g.publics.begin(), g.publics.end());
  for (uint64_t x : xs) {
    std::set<std::set<uint64_t>> a, b;
    for (uint32_t q : f.secrets_at(x)) a.insert(f.val(x, q));
    for (uint32_t q : g.secrets_at(x)) b.insert(g.val(x, q));
    if (a != b) return false;
  }
  return true;
}

MMMap cat_id2() { return make_plain("ID2", {{0, {0}}, {1, {1}}}); }
MMMap cat_choice2() { return make_plain("CHOICE2", {{0, {0, 1}}}); }
MMMap cat_false1() { return make_plain("FALSE1", {{0, {}}}); }

MMMap cat_secretbit() {
  MMMap f;
  f.name = "SECRETBIT";
  f.publics = {0};
  f.secrets = {"0", "1"};
  f.entries[{0, 0}] = {0};
  f.entries[{0, 1}] = {1};
  return f;
}

MMMap cat_empty() {
  MMMap f;
  f.name = "EMPTY";
  f.secrets = {"*"};
  return f;
}

std::vector<MMMap> catalog6() {
  std::vector<MMMap> v = {cat_id2(), cat_choice2(), cat_false1(), cat_secretbit(), cat_empty()};
  v.push_back(join(cat_id2(), cat_choice2()));
  return v;
}

}  // namespace oraclelab
