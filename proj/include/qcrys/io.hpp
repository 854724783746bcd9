#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "binfinity.hpp"
#include "character.hpp"
#include "crystal_graph.hpp"
#include "quiver.hpp"

// External formats number colors, vertices and arrows from 1.
namespace qcrys::io {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("file-read", "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("json-parse", what + ": " + e.what());
  }
}

// -- Cartan data

inline json to_json(const CartanDatum& c) { return json{{"rank", c.rank()}, {"matrix", c.matrix()}}; }

/// Accepts {"matrix": [[...]]} (with optional "rank") or a bare matrix.
inline CartanDatum cartan_from_json(const json& j) {
  try {
    const json& m = j.is_object() ? j.at("matrix") : j;
    auto rows = m.get<std::vector<std::vector<Int>>>();
    if (j.is_object() && j.contains("rank") && j.at("rank").get<std::size_t>() != rows.size()) {
      throw InputError("cartan-rank", "\"rank\" disagrees with the matrix size");
    }
    return CartanDatum(std::move(rows));
  } catch (const json::exception& e) {
    throw InputError("cartan-json", std::string("malformed Cartan matrix: ") + e.what());
  }
}

/// A preset name ("A3", "D4", "E6", "A2~") or the path of a JSON matrix file.
inline CartanDatum load_cartan(const std::string& type_or_path) {
  try {
    return CartanDatum::preset(type_or_path);
  } catch (const InputError&) {
    std::ifstream probe(type_or_path);
    if (!probe) throw;
  }
  return cartan_from_json(parse_json(read_file(type_or_path), type_or_path));
}

// -- weights and values

inline json to_json(const WeightVector& w) { return json{{"lam", w.lam}, {"nu", w.nu}}; }

inline WeightVector weight_from_json(const json& j) {
  return {j.at("lam").get<std::vector<Int>>(), j.at("nu").get<std::vector<Int>>()};
}

inline json to_json(const ExtInt& x) { return x.is_finite() ? json(x.value()) : json("-inf"); }

inline ExtInt ext_int_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "-inf") throw InputError("ext-int", "expected an integer or \"-inf\"");
    return ExtInt::neg_inf();
  }
  return ExtInt(j.get<Int>());
}

// -- character tables

inline json to_json(const CharacterTable& t) {
  json rows = json::array();
  for (const auto& [nu, m] : t.sorted_rows()) rows.push_back({{"nu", nu}, {"mult", m}});
  return json{{"lambda", t.lam.lam}, {"height_bound", t.height_bound}, {"total", t.total()}, {"rows", rows}};
}

inline std::string to_csv(const CharacterTable& t) {
  std::ostringstream os;
  const std::size_t n = t.lam.rank();
  for (std::size_t j = 0; j < n; ++j) os << "nu" << j + 1 << ',';
  os << "mult\n";
  for (const auto& [nu, m] : t.sorted_rows()) {
    for (Int x : nu) os << x << ',';
    os << m << '\n';
  }
  return os.str();
}

// -- crystal graphs

/// {"cartan", "truncated", "elements": [{key, wt, eps, phi}], "edges": [{from, to, i}]}.
/// Edges are the f-links; an f-link leaving a truncated graph has "to": null.
inline json to_json(const CrystalGraph& g) {
  json elements = json::array();
  json edges = json::array();
  for (const auto& nd : g.nodes()) {
    json eps = json::array(), phi = json::array();
    for (std::size_t i = 0; i < g.rank(); ++i) {
      eps.push_back(to_json(nd.eps[i]));
      phi.push_back(to_json(nd.phi[i]));
    }
    elements.push_back({{"key", nd.key}, {"wt", to_json(nd.wt)}, {"eps", eps}, {"phi", phi}});
    for (std::size_t i = 0; i < g.rank(); ++i) {
      const Link& l = nd.f[i];
      if (l.is_to()) edges.push_back({{"from", nd.key}, {"to", g.node(l.target).key}, {"i", i + 1}});
      if (l.kind == LinkKind::beyond) edges.push_back({{"from", nd.key}, {"to", nullptr}, {"i", i + 1}});
    }
  }
  return json{{"cartan", g.cartan().matrix()}, {"truncated", g.truncated()}, {"elements", elements}, {"edges", edges}};
}

/// Inverse of to_json; e-links are derived from the f-edges.
inline CrystalGraph graph_from_json(const json& j) {
  try {
    const CartanDatum c = cartan_from_json(j.at("cartan"));
    const std::size_t n = c.rank();
    std::vector<CrystalNode> nodes;
    std::map<std::string, std::size_t> index;
    for (const auto& el : j.at("elements")) {
      CrystalNode nd{el.at("key").get<std::string>(), weight_from_json(el.at("wt")), {}, {}, {}, {}};
      for (const auto& x : el.at("eps")) nd.eps.push_back(ext_int_from_json(x));
      for (const auto& x : el.at("phi")) nd.phi.push_back(ext_int_from_json(x));
      nd.f.assign(n, Link::none());
      if (!index.emplace(nd.key, nodes.size()).second) throw InputError("graph-keys", "duplicate element key '" + nd.key + "'");
      nodes.push_back(std::move(nd));
    }
    for (const auto& ed : j.at("edges")) {
      const auto from = index.find(ed.at("from").get<std::string>());
      if (from == index.end()) throw InputError("graph-links", "edge from unknown element");
      const auto i = ed.at("i").get<std::size_t>();
      if (i < 1 || i > n) throw InputError("index-range", "edge color " + std::to_string(i) + " outside 1.." + std::to_string(n));
      Link& slot = nodes[from->second].f[i - 1];
      if (slot.kind != LinkKind::none) throw InputError("graph-links", "two f-edges of one color leave '" + from->first + "'");
      if (ed.at("to").is_null()) {
        slot = Link::beyond();
        continue;
      }
      const auto to = index.find(ed.at("to").get<std::string>());
      if (to == index.end()) throw InputError("graph-links", "edge to unknown element");
      slot = Link::to(to->second);
    }
    return CrystalGraph(c, std::move(nodes), j.value("truncated", false));
  } catch (const json::exception& e) {
    throw InputError("graph-json", std::string("malformed crystal graph: ") + e.what());
  }
}

inline std::string to_dot(const CrystalGraph& g, const std::string& name = "crystal") {
  static const char* const palette[] = {"red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"};
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  for (std::size_t b = 0; b < g.size(); ++b) {
    os << "  n" << b << " [label=\"" << g.node(b).wt.to_string() << "\", tooltip=\"" << g.node(b).key << "\"];\n";
  }
  for (std::size_t b = 0; b < g.size(); ++b) {
    for (std::size_t i = 0; i < g.rank(); ++i) {
      const Link& l = g.f_link(b, i);
      if (!l.is_to()) continue;
      os << "  n" << b << " -> n" << l.target << " [label=\"" << i + 1 << "\", color=\"" << palette[i % 8] << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

// -- strings in B(infinity)

inline json to_json(const StringElement& s, const IotaSequence& iota) {
  std::vector<std::size_t> cycle;
  for (auto i : iota.cycle()) cycle.push_back(i + 1);
  return json{{"iota", cycle}, {"a", s.entries()}};
}

inline std::pair<StringElement, IotaSequence> string_from_json(const json& j, std::size_t rank) {
  try {
    std::vector<std::size_t> cycle;
    for (auto i : j.at("iota").get<std::vector<std::size_t>>()) {
      if (i < 1) throw InputError("index-range", "iota entries are 1-based");
      cycle.push_back(i - 1);
    }
    return {StringElement(j.at("a").get<std::vector<Int>>()), IotaSequence(std::move(cycle), rank)};
  } catch (const json::exception& e) {
    throw InputError("string-json", std::string("malformed string element: ") + e.what());
  }
}

// -- quiver data

inline json to_json(const DoubledQuiver& q) {
  json arrows = json::array();
  for (const auto& a : q.arrows()) {
    arrows.push_back({{"id", a.id + 1}, {"out", a.out + 1}, {"in", a.in + 1}, {"bar", a.bar + 1},
                      {"omega", a.in_orientation}, {"eps", a.sign}});
  }
  return json{{"vertices", q.vertices()}, {"arrows", arrows}};
}

inline DoubledQuiver quiver_from_json(const json& j) {
  try {
    std::vector<QuiverArrow> arrows;
    for (const auto& a : j.at("arrows")) {
      auto one = [&](const char* k) {
        const auto x = a.at(k).get<std::size_t>();
        if (x < 1) throw InputError("index-range", "quiver ids are 1-based");
        return x - 1;
      };
      arrows.push_back({one("id"), one("out"), one("in"), one("bar"), a.at("omega").get<bool>(), a.at("eps").get<int>()});
    }
    return DoubledQuiver(j.at("vertices").get<std::size_t>(), std::move(arrows));
  } catch (const json::exception& e) {
    throw InputError("quiver-json", std::string("malformed quiver: ") + e.what());
  }
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw InputError("rational", "expected \"p/q\" or an integer");
  Rational x;
  if (x.set_str(j.get<std::string>(), 10) != 0) throw InputError("rational", "cannot parse '" + j.get<std::string>() + "'");
  x.canonicalize();
  return x;
}

/// Rows of a block; an empty JSON array stands for any block with no rows.
inline Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  Matrix m(rows, cols);
  if (!j.is_array() || j.size() != rows) throw InputError("datum-shape", what + " must have " + std::to_string(rows) + " rows");
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError("datum-shape", what + " must have " + std::to_string(cols) + " columns");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational_from_json(j[r][c]);
  }
  return m;
}

inline json to_json(const GradedDims& d) { return json{{"v", d.v}, {"w", d.w}}; }

inline json to_json(const ADHMDatum& d) {
  json B = json::object(), t = json::object(), s = json::object();
  for (std::size_t k = 0; k < d.B.size(); ++k) B[std::to_string(k + 1)] = to_json(d.B[k]);
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    t[std::to_string(i + 1)] = to_json(d.t[i]);
    s[std::to_string(i + 1)] = to_json(d.s[i]);
  }
  return json{{"dims", to_json(d.dims)}, {"B", B}, {"t", t}, {"s", s}};
}

/// Blocks missing from the JSON are zero.
inline ADHMDatum datum_from_json(const DoubledQuiver& q, const json& j) {
  try {
    GradedDims dims{j.at("dims").at("v").get<std::vector<Int>>(), j.at("dims").at("w").get<std::vector<Int>>()};
    ADHMDatum d = ADHMDatum::zero(q, dims);
    auto blocks = [&](const char* name, std::size_t count) {
      std::map<std::size_t, json> out;
      if (!j.contains(name)) return out;
      for (const auto& [k, v] : j.at(name).items()) {
        std::size_t id = 0;
        try {
          id = std::stoul(k);
        } catch (const std::exception&) {
          throw InputError("datum-json", std::string(name) + " key '" + k + "' is not an id");
        }
        if (id < 1 || id > count) throw InputError("index-range", std::string(name) + " id " + k + " out of range");
        out[id - 1] = v;
      }
      return out;
    };
    for (const auto& [k, v] : blocks("B", q.arrows().size())) {
      const auto& a = q.arrow(k);
      d.B[k] = matrix_from_json(v, dims.dim_v(a.in), dims.dim_v(a.out), "B[" + std::to_string(k + 1) + "]");
    }
    for (const auto& [k, v] : blocks("t", q.vertices())) d.t[k] = matrix_from_json(v, dims.dim_w(k), dims.dim_v(k), "t");
    for (const auto& [k, v] : blocks("s", q.vertices())) d.s[k] = matrix_from_json(v, dims.dim_v(k), dims.dim_w(k), "s");
    return d;
  } catch (const json::exception& e) {
    throw InputError("datum-json", std::string("malformed datum: ") + e.what());
  }
}

}  // namespace qcrys::io
