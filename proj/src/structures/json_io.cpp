#include "structures/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace ppw {

json structure_to_json(const Structure& s) {
  json j;
  j["vocab"] = json::array();
  for (const auto& sym : s.vocab) j["vocab"].push_back({{"name", sym.name}, {"arity", sym.arity}});
  j["universe"] = json::array();
  for (auto e : s.universe) j["universe"].push_back(s.label(e));
  j["relations"] = json::object();
  for (std::size_t i = 0; i < s.vocab.size(); ++i) {
    json rows = json::array();
    for (const auto& t : s.relations[i]) {
      json row = json::array();
      for (auto e : t) row.push_back(s.label(e));
      rows.push_back(std::move(row));
    }
    j["relations"][s.vocab[i].name] = std::move(rows);
  }
  return j;
}

namespace {

bool is_numeral(const std::string& x) {
  if (x.empty() || x.size() > 9) return false;
  if (x.size() > 1 && x[0] == '0') return false;
  return std::all_of(x.begin(), x.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string element_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  throw std::invalid_argument("universe entries must be strings");
}

}  // namespace

Structure structure_from_json(const json& j) {
  Structure s;
  for (const auto& v : j.at("vocab"))
    s.vocab.push_back({v.at("name").get<std::string>(), v.at("arity").get<int>()});
  std::vector<std::string> names;
  for (const auto& v : j.at("universe")) names.push_back(element_text(v));
  bool numeric = std::all_of(names.begin(), names.end(), is_numeral);
  std::unordered_map<std::string, Element> id;
  for (std::size_t i = 0; i < names.size(); ++i) {
    Element e = numeric ? static_cast<Element>(std::stoul(names[i])) : static_cast<Element>(i);
    if (!id.emplace(names[i], e).second)
      throw std::invalid_argument("duplicate universe entry " + names[i]);
    s.universe.push_back(e);
    if (!numeric) s.labels[e] = names[i];
  }
  s.relations.resize(s.vocab.size());
  const auto& rels = j.at("relations");
  for (auto it = rels.begin(); it != rels.end(); ++it) {
    int idx = s.index_of(it.key());
    if (idx < 0) throw std::invalid_argument("relation not in vocabulary: " + it.key());
    for (const auto& row : it.value()) {
      Tuple t;
      for (const auto& v : row) {
        auto f = id.find(element_text(v));
        if (f == id.end()) throw std::invalid_argument("unknown element " + element_text(v));
        t.push_back(f->second);
      }
      s.relations[idx].push_back(std::move(t));
    }
  }
  s.normalize();
  s.validate();
  return s;
}

std::string tuple_to_string(const Structure& s, const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += s.label(t[i]);
  }
  return out + ")";
}

std::string map_to_string(const Structure& a, const Structure& b, const ElementMap& f) {
  std::string out = "{";
  bool first = true;
  for (const auto& [x, y] : f) {
    if (!first) out += ", ";
    first = false;
    out += a.label(x) + "->" + b.label(y);
  }
  return out + "}";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace ppw
