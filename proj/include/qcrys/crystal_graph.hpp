#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crystal.hpp"

namespace qcrys {

enum class LinkKind {
  none,    // the operator returns 0
  to,      // the operator lands on `target`
  beyond,  // the operator lands outside a truncated graph
};

struct Link {
  LinkKind kind = LinkKind::none;
  std::size_t target = 0;

  static Link none() { return {}; }
  static Link to(std::size_t t) { return {LinkKind::to, t}; }
  static Link beyond() { return {LinkKind::beyond, 0}; }

  bool is_to() const { return kind == LinkKind::to; }
  friend bool operator==(const Link&, const Link&) = default;
};

struct CrystalNode {
  std::string key;
  WeightVector wt;
  std::vector<ExtInt> eps;
  std::vector<ExtInt> phi;
  std::vector<Link> f;
  std::vector<Link> e;  // left empty to derive from f
};

/// A finite explicit crystal: elements with structure values and colored
/// f- and e-links. Immutable once built; nodes are kept in the order given.
class CrystalGraph {
 public:
  CrystalGraph(CartanDatum c, std::vector<CrystalNode> nodes, bool truncated = false)
      : cartan_(std::move(c)), nodes_(std::move(nodes)), truncated_(truncated) {
    const std::size_t n = cartan_.rank();
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      auto& node = nodes_[k];
      cartan_.check_weight(node.wt);
      if (node.eps.size() != n || node.phi.size() != n || node.f.size() != n ||
          !(node.e.empty() || node.e.size() == n)) {
        throw InputError("graph-shape", "node '" + node.key + "' has structure vectors of the wrong length");
      }
      if (!index_.emplace(node.key, k).second) throw InputError("graph-keys", "duplicate element key '" + node.key + "'");
      for (const auto* links : {&node.f, &node.e})
        for (const auto& l : *links)
          if (l.is_to() && l.target >= nodes_.size()) throw InputError("graph-links", "link target out of range");
    }
    // derive e-links as the inverse of f-links where not supplied
    std::vector<bool> derive(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      derive[k] = nodes_[k].e.empty();
      if (derive[k]) nodes_[k].e.assign(n, Link::none());
    }
    for (std::size_t k = 0; k < nodes_.size(); ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const Link& l = nodes_[k].f[i];
        if (l.is_to() && derive[l.target] && !nodes_[l.target].e[i].is_to()) nodes_[l.target].e[i] = Link::to(k);
      }
  }

  const CartanDatum& cartan() const { return cartan_; }
  std::size_t rank() const { return cartan_.rank(); }
  std::size_t size() const { return nodes_.size(); }
  bool truncated() const { return truncated_; }
  const std::vector<CrystalNode>& nodes() const { return nodes_; }
  const CrystalNode& node(std::size_t b) const { return nodes_.at(b); }

  std::optional<std::size_t> find(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Link& f_link(std::size_t b, std::size_t i) const { return nodes_.at(b).f.at(i); }
  const Link& e_link(std::size_t b, std::size_t i) const { return nodes_.at(b).e.at(i); }

  std::optional<std::size_t> f(std::size_t b, std::size_t i) const {
    const Link& l = f_link(b, i);
    return l.is_to() ? std::optional(l.target) : std::nullopt;
  }
  std::optional<std::size_t> e(std::size_t b, std::size_t i) const {
    const Link& l = e_link(b, i);
    return l.is_to() ? std::optional(l.target) : std::nullopt;
  }

  /// Number of f-links of color i arriving at b.
  std::size_t f_in_degree(std::size_t b, std::size_t i) const {
    std::size_t d = 0;
    for (const auto& node : nodes_)
      if (node.f.at(i).is_to() && node.f[i].target == b) ++d;
    return d;
  }

  /// Largest |ht| of wt(b) - top among elements whose weight lies in top + Q.
  Int depth_below(const WeightVector& top) const {
    Int d = 0;
    for (const auto& node : nodes_) {
      if (node.wt.lam != top.lam) continue;
      d = std::max(d, std::abs((node.wt - top).height()));
    }
    return d;
  }

 private:
  CartanDatum cartan_;
  std::vector<CrystalNode> nodes_;
  std::map<std::string, std::size_t> index_;
  bool truncated_ = false;
};

/// Read-only crystal view of a complete CrystalGraph.
class GraphCrystal {
 public:
  using element_type = std::size_t;

  explicit GraphCrystal(std::shared_ptr<const CrystalGraph> g) : g_(std::move(g)) {}
  explicit GraphCrystal(CrystalGraph g) : g_(std::make_shared<const CrystalGraph>(std::move(g))) {}

  const CrystalGraph& graph() const { return *g_; }
  const CartanDatum& cartan() const { return g_->cartan(); }
  WeightVector weight(std::size_t b) const { return g_->node(b).wt; }
  ExtInt eps(std::size_t b, std::size_t i) const { return g_->node(b).eps.at(i); }
  ExtInt phi(std::size_t b, std::size_t i) const { return g_->node(b).phi.at(i); }
  std::optional<std::size_t> f(std::size_t b, std::size_t i) const { return follow(g_->f_link(b, i)); }
  std::optional<std::size_t> e(std::size_t b, std::size_t i) const { return follow(g_->e_link(b, i)); }
  std::string key(std::size_t b) const { return g_->node(b).key; }

 private:
  static std::optional<std::size_t> follow(const Link& l) {
    if (l.kind == LinkKind::beyond) throw DepthError("graph-horizon", "operator leaves a truncated crystal graph");
    return l.is_to() ? std::optional(l.target) : std::nullopt;
  }

  std::shared_ptr<const CrystalGraph> g_;
};

inline constexpr std::size_t kMaterializeLimit = 2'000'000;

/// Breadth-first closure of `seeds` under all e_i and f_i, restricted to
/// elements accepted by `in_range`. Operators leaving the range become
/// `beyond` links and mark the graph truncated. Nodes are sorted by key.
template <Crystal C>
CrystalGraph materialize(const C& crystal, const std::vector<typename C::element_type>& seeds,
                         const std::function<bool(const typename C::element_type&)>& in_range,
                         std::size_t limit = kMaterializeLimit) {
  using E = typename C::element_type;
  const std::size_t n = crystal.cartan().rank();
  std::map<std::string, std::size_t> index;
  std::vector<E> elems;
  std::vector<std::string> keys;
  std::deque<std::size_t> queue;

  auto intern = [&](const E& b) {
    std::string k = crystal.key(b);
    auto [it, inserted] = index.emplace(k, elems.size());
    if (inserted) {
      if (elems.size() >= limit) throw InputError("element-limit", "crystal closure exceeds element limit");
      elems.push_back(b);
      keys.push_back(std::move(k));
      queue.push_back(it->second);
    }
    return it->second;
  };
  for (const auto& s : seeds)
    if (in_range(s)) intern(s);

  std::vector<std::vector<Link>> f_links;
  std::vector<std::vector<Link>> e_links;
  bool truncated = false;
  auto resolve = [&](const std::optional<E>& target) {
    if (!target) return Link::none();
    if (!in_range(*target)) {
      truncated = true;
      return Link::beyond();
    }
    return Link::to(intern(*target));
  };
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    if (f_links.size() <= k) {
      f_links.resize(k + 1);
      e_links.resize(k + 1);
    }
    std::vector<Link> fl(n), el(n);
    for (std::size_t i = 0; i < n; ++i) {
      const E b = elems[k];
      fl[i] = resolve(crystal.f(b, i));
      el[i] = resolve(crystal.e(b, i));
    }
    f_links[k] = std::move(fl);
    e_links[k] = std::move(el);
  }

  std::vector<std::size_t> order(elems.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<std::size_t> position(elems.size());
  for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = p;
  auto remap = [&](Link l) {
    if (l.is_to()) l.target = position[l.target];
    return l;
  };

  std::vector<CrystalNode> nodes;
  nodes.reserve(elems.size());
  for (std::size_t k : order) {
    CrystalNode node{keys[k], crystal.weight(elems[k]), std::vector<ExtInt>(n), std::vector<ExtInt>(n), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      node.eps[i] = crystal.eps(elems[k], i);
      node.phi[i] = crystal.phi(elems[k], i);
      node.f.push_back(remap(f_links[k][i]));
      node.e.push_back(remap(e_links[k][i]));
    }
    nodes.push_back(std::move(node));
  }
  return CrystalGraph(crystal.cartan(), std::move(nodes), truncated);
}

/// Closure without a range restriction; the crystal must be finite.
template <Crystal C>
CrystalGraph materialize(const C& crystal, const std::vector<typename C::element_type>& seeds) {
  return materialize(crystal, seeds, [](const typename C::element_type&) { return true; });
}

}  // namespace qcrys
