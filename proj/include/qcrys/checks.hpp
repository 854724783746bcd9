#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "crystal_graph.hpp"

namespace qcrys {

/// One failed check, located at an element and a color.
struct Violation {
  std::string check;    // name of the violated rule
  std::string element;  // element key
  std::size_t color = 0;
  std::string detail;
};

/// Names of the crystal axioms as reported in Violation::check.
namespace axiom {
inline constexpr const char* phi_balance = "phi=eps+<h,wt>";         // phi = eps + <h_i, wt>
inline constexpr const char* raise_shift = "e-shift";                 // e_i moves wt, eps, phi by +a_i, -1, +1
inline constexpr const char* lower_shift = "f-shift";                 // f_i moves wt, eps, phi by -a_i, +1, -1
inline constexpr const char* inverse_pair = "e-f-inverse";            // b' = e_i b  <=>  b = f_i b'
inline constexpr const char* isolated = "minus-infinity-isolated";    // phi_i = -inf  =>  e_i b = f_i b = 0
inline constexpr const char* string_length = "string-length";         // eps/phi equal e/f string lengths
}  // namespace axiom

struct AxiomOptions {
  /// Also require eps_i(b) and phi_i(b) to equal the lengths of the e_i- and
  /// f_i-strings through b whenever they are finite.
  bool string_lengths = false;
};

struct AxiomReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

struct StringLengths {
  std::optional<Int> up;    // max k with e^k b != 0; nullopt if the string leaves the graph
  std::optional<Int> down;  // max k with f^k b != 0
};

inline StringLengths string_lengths(const CrystalGraph& g, std::size_t b, std::size_t i) {
  auto walk = [&](auto link_of) -> std::optional<Int> {
    Int k = 0;
    std::size_t cur = b;
    for (std::size_t steps = 0; steps <= g.size(); ++steps) {
      const Link& l = link_of(cur);
      if (l.kind == LinkKind::beyond) return std::nullopt;
      if (!l.is_to()) return k;
      cur = l.target;
      ++k;
    }
    return std::nullopt;  // cyclic string
  };
  return {walk([&](std::size_t x) -> const Link& { return g.e_link(x, i); }),
          walk([&](std::size_t x) -> const Link& { return g.f_link(x, i); })};
}

/// Checks the crystal axioms at every element, color and link.
inline AxiomReport check_axioms(const CrystalGraph& g, AxiomOptions opts = {}) {
  AxiomReport report;
  const auto& c = g.cartan();
  auto add = [&](const char* check, std::size_t b, std::size_t i, std::string detail) {
    report.violations.push_back({check, g.node(b).key, i, std::move(detail)});
  };
  auto values = [&](std::size_t b, std::size_t i) {
    const auto& nd = g.node(b);
    return "wt " + nd.wt.to_string() + ", eps " + nd.eps[i].to_string() + ", phi " + nd.phi[i].to_string();
  };

  for (std::size_t b = 0; b < g.size(); ++b) {
    const auto& nd = g.node(b);
    for (std::size_t i = 0; i < g.rank(); ++i) {
      const ExtInt eps = nd.eps[i];
      const ExtInt phi = nd.phi[i];
      const Int wt_i = pairing(c, i, nd.wt);
      if (eps.is_finite() != phi.is_finite() || (phi.is_finite() && phi.value() != eps.value() + wt_i)) {
        add(axiom::phi_balance, b, i, values(b, i) + ", <h,wt> " + std::to_string(wt_i));
      }

      const Link& fl = nd.f[i];
      const Link& el = nd.e[i];
      if (phi.is_neg_inf() && (fl.is_to() || el.is_to())) {
        add(axiom::isolated, b, i, "phi = -inf but an operator is defined");
      }

      if (fl.is_to()) {
        const auto& t = g.node(fl.target);
        const WeightVector expected = nd.wt - WeightVector::simple_root(g.rank(), i);
        if (t.wt != expected || t.eps[i] != eps + ExtInt(1) || t.phi[i] != phi + ExtInt(-1)) {
          add(axiom::lower_shift, b, i, "source " + values(b, i) + "; target '" + t.key + "' " + values(fl.target, i));
        }
        const Link& back = t.e[i];
        if (!back.is_to() || back.target != b) {
          add(axiom::inverse_pair, b, i, "f leads to '" + t.key + "' whose e does not return");
        }
      }
      if (el.is_to()) {
        const auto& t = g.node(el.target);
        const WeightVector expected = nd.wt + WeightVector::simple_root(g.rank(), i);
        if (t.wt != expected || t.eps[i] != eps + ExtInt(-1) || t.phi[i] != phi + ExtInt(1)) {
          add(axiom::raise_shift, b, i, "source " + values(b, i) + "; target '" + t.key + "' " + values(el.target, i));
        }
        const Link& back = t.f[i];
        if (!back.is_to() || back.target != b) {
          add(axiom::inverse_pair, b, i, "e leads to '" + t.key + "' whose f does not return");
        }
      }

      if (opts.string_lengths && eps.is_finite() && phi.is_finite()) {
        const auto lengths = string_lengths(g, b, i);
        if (lengths.up && *lengths.up != eps.value()) {
          add(axiom::string_length, b, i, "eps " + eps.to_string() + " but e-string length " + std::to_string(*lengths.up));
        }
        if (lengths.down && *lengths.down != phi.value()) {
          add(axiom::string_length, b, i, "phi " + phi.to_string() + " but f-string length " + std::to_string(*lengths.down));
        }
      }
    }
  }
  return report;
}

/// A partial map from elements of one graph to elements of another or 0.
/// Keys form the domain; std::nullopt stands for the zero element.
using ElementMap = std::map<std::size_t, std::optional<std::size_t>>;

namespace morphism {
inline constexpr const char* preserves_structure = "preserves-structure";
inline constexpr const char* commutes_e = "commutes-e";
inline constexpr const char* commutes_f = "commutes-f";
inline constexpr const char* strict_e = "strict-e";
inline constexpr const char* strict_f = "strict-f";
}  // namespace morphism

struct MorphismReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks that `psi` is a crystal morphism g1 -> g2 (+ {0}): weight, eps and
/// phi are preserved where psi is nonzero, and psi(x b) = x psi(b) for
/// x in {e_i, f_i} whenever both psi(b) and psi(x b) are nonzero.
///
/// With `strict`, commutation is required outright, the zero cases included:
/// at b with psi(b) != 0 both e_i and f_i must commute, and at b with
/// psi(b) = 0 f_i b must map to 0. Operators that leave a truncated graph
/// are skipped.
inline MorphismReport check_morphism(const CrystalGraph& g1, const CrystalGraph& g2, const ElementMap& psi,
                                     bool strict) {
  MorphismReport report;
  if (!(g1.cartan() == g2.cartan())) {
    report.violations.push_back({morphism::preserves_structure, "", 0, "graphs have different Cartan data"});
    return report;
  }
  auto name = [](const std::optional<std::size_t>& img, const CrystalGraph& g) {
    return img ? "'" + g.node(*img).key + "'" : std::string("0");
  };
  auto add = [&](const char* check, std::size_t b, std::size_t i, std::string detail) {
    report.violations.push_back({check, g1.node(b).key, i, std::move(detail)});
  };

  for (const auto& [b, img] : psi) {
    if (img) {
      const auto& x = g1.node(b);
      const auto& y = g2.node(*img);
      if (x.wt != y.wt || x.eps != y.eps || x.phi != y.phi) {
        add(morphism::preserves_structure, b, 0, "image " + name(img, g2) + " differs in wt/eps/phi");
      }
    }
    for (std::size_t i = 0; i < g1.rank(); ++i) {
      for (const bool lowering : {false, true}) {
        const Link& l1 = lowering ? g1.f_link(b, i) : g1.e_link(b, i);
        if (l1.kind == LinkKind::beyond) continue;
        // psi of the moved element, when known
        std::optional<std::optional<std::size_t>> lhs;
        if (!l1.is_to()) {
          lhs = std::optional<std::size_t>{};
        } else if (auto it = psi.find(l1.target); it != psi.end()) {
          lhs = it->second;
        }
        if (!lhs) continue;

        if (!img) {
          if (strict && lowering && lhs->has_value()) {
            add(morphism::strict_f, b, i, "psi(b) = 0 but psi(f b) = " + name(*lhs, g2));
          }
          continue;
        }
        const Link& l2 = lowering ? g2.f_link(*img, i) : g2.e_link(*img, i);
        if (l2.kind == LinkKind::beyond) continue;
        const std::optional<std::size_t> rhs = l2.is_to() ? std::optional(l2.target) : std::nullopt;
        if (*lhs == rhs) continue;
        if (strict) {
          add(lowering ? morphism::strict_f : morphism::strict_e, b, i,
              "psi(op b) = " + name(*lhs, g2) + " but op psi(b) = " + name(rhs, g2));
        } else if (lhs->has_value()) {
          add(lowering ? morphism::commutes_f : morphism::commutes_e, b, i,
              "psi(op b) = " + name(*lhs, g2) + " but op psi(b) = " + name(rhs, g2));
        }
      }
    }
  }
  return report;
}

/// Pairs g1 and g2 breadth-first along f- and e-links starting from
/// top1 <-> top2. Returns the bijection when it exists and preserves wt, eps,
/// phi and every link; std::nullopt otherwise. Both graphs must be connected.
inline std::optional<std::vector<std::size_t>> isomorphism_from_tops(const CrystalGraph& g1, std::size_t top1,
                                                                     const CrystalGraph& g2, std::size_t top2) {
  if (!(g1.cartan() == g2.cartan()) || g1.size() != g2.size()) return std::nullopt;
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> fwd(g1.size(), unset), back(g2.size(), unset);
  std::deque<std::size_t> queue;
  auto pair = [&](std::size_t x, std::size_t y) {
    if (fwd[x] == unset && back[y] == unset) {
      fwd[x] = y;
      back[y] = x;
      queue.push_back(x);
      return true;
    }
    return fwd[x] == y;
  };
  pair(top1, top2);
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    const std::size_t y = fwd[x];
    const auto& a = g1.node(x);
    const auto& b = g2.node(y);
    if (a.wt != b.wt || a.eps != b.eps || a.phi != b.phi) return std::nullopt;
    for (std::size_t i = 0; i < g1.rank(); ++i) {
      for (const bool lowering : {true, false}) {
        const Link& l1 = lowering ? a.f[i] : a.e[i];
        const Link& l2 = lowering ? b.f[i] : b.e[i];
        if (l1.kind != l2.kind) return std::nullopt;
        if (l1.is_to() && !pair(l1.target, l2.target)) return std::nullopt;
      }
    }
  }
  if (std::find(fwd.begin(), fwd.end(), unset) != fwd.end()) return std::nullopt;
  return fwd;
}

/// Subgraph on the given nodes (in the given order); links to nodes outside
/// the subset are dropped.
inline CrystalGraph induced_subgraph(const CrystalGraph& g, const std::vector<std::size_t>& members) {
  std::map<std::size_t, std::size_t> position;
  for (std::size_t p = 0; p < members.size(); ++p) position[members[p]] = p;
  auto remap = [&](Link l) {
    if (!l.is_to()) return l;
    auto it = position.find(l.target);
    return it == position.end() ? Link::none() : Link::to(it->second);
  };
  std::vector<CrystalNode> nodes;
  for (std::size_t b : members) {
    CrystalNode nd = g.node(b);
    for (auto& l : nd.f) l = remap(l);
    for (auto& l : nd.e) l = remap(l);
    nodes.push_back(std::move(nd));
  }
  return CrystalGraph(g.cartan(), std::move(nodes), g.truncated());
}

/// Connected components under all colored links, ordered by (size, smallest key).
inline std::vector<CrystalGraph> connected_components(const CrystalGraph& g) {
  std::vector<std::size_t> parent(g.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t b = 0; b < g.size(); ++b)
    for (std::size_t i = 0; i < g.rank(); ++i)
      for (const Link* l : {&g.f_link(b, i), &g.e_link(b, i)})
        if (l->is_to()) parent[root(b)] = root(l->target);

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t b = 0; b < g.size(); ++b) groups[root(b)].push_back(b);
  std::vector<std::vector<std::size_t>> parts;
  for (auto& [r, members] : groups) {
    std::sort(members.begin(), members.end(),
              [&](std::size_t x, std::size_t y) { return g.node(x).key < g.node(y).key; });
    parts.push_back(std::move(members));
  }
  std::sort(parts.begin(), parts.end(), [&](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return g.node(x.front()).key < g.node(y.front()).key;
  });
  std::vector<CrystalGraph> out;
  for (const auto& members : parts) out.push_back(induced_subgraph(g, members));
  return out;
}

}  // namespace qcrys
