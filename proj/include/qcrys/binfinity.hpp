#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crystal.hpp"
#include "crystal_graph.hpp"

namespace qcrys {

/// The periodic index sequence iota = (cycle, cycle, ...) fixing the order of
/// the elementary factors. Position k (0-based) has color cycle[k % r].
class IotaSequence {
 public:
  IotaSequence(std::vector<std::size_t> cycle, std::size_t rank) : cycle_(std::move(cycle)) {
    if (cycle_.empty()) throw InputError("iota-cover", "iota cycle must be nonempty");
    std::vector<bool> seen(rank, false);
    for (auto i : cycle_) {
      if (i >= rank) throw InputError("index-range", "iota index " + std::to_string(i + 1) + " outside 1.." + std::to_string(rank));
      seen[i] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw InputError("iota-cover", "iota cycle must contain every index");
    }
  }

  /// (0, 1, ..., n-1)
  static IotaSequence standard(std::size_t rank) {
    std::vector<std::size_t> cycle(rank);
    for (std::size_t i = 0; i < rank; ++i) cycle[i] = i;
    return IotaSequence(std::move(cycle), rank);
  }

  std::size_t color(std::size_t position) const { return cycle_[position % cycle_.size()]; }
  const std::vector<std::size_t>& cycle() const { return cycle_; }

  /// Smallest position >= from with the given color.
  std::size_t next_position(std::size_t from, std::size_t i) const {
    std::size_t k = from;
    while (color(k) != i) ++k;
    return k;
  }

  friend bool operator==(const IotaSequence&, const IotaSequence&) = default;

 private:
  std::vector<std::size_t> cycle_;
};

/// Finitely supported string a_1, a_2, ... of nonpositive integers standing
/// for  ... (x) b_{iota_2}(a_2) (x) b_{iota_1}(a_1)  in the semi-infinite
/// tensor product of elementary crystals. Trailing zeros are dropped.
class StringElement {
 public:
  StringElement() = default;
  explicit StringElement(std::vector<Int> a) : a_(std::move(a)) {
    for (Int x : a_)
      if (x > 0) throw InputError("string-nonpositive", "string entries must be <= 0");
    normalize();
  }

  const std::vector<Int>& entries() const { return a_; }
  std::size_t length() const { return a_.size(); }
  Int at(std::size_t k) const { return k < a_.size() ? a_[k] : 0; }
  bool is_highest() const { return a_.empty(); }

  /// "(a_1,a_2,...)"; the highest element is "()".
  std::string key() const {
    std::string s = "(";
    for (std::size_t k = 0; k < a_.size(); ++k) s += (k ? "," : "") + std::to_string(a_[k]);
    return s + ")";
  }

  friend bool operator==(const StringElement&, const StringElement&) = default;
  friend auto operator<=>(const StringElement&, const StringElement&) = default;

 private:
  friend class BInfinityCrystal;
  void normalize() {
    while (!a_.empty() && a_.back() == 0) a_.pop_back();
  }
  std::vector<Int> a_;
};

/// B(infinity) realized inside the semi-infinite tensor product of elementary
/// crystals along iota. eps/phi/e/f are obtained by folding the two-factor
/// tensor rules from position 1 outward: T_k = b_k (x) T_{k-1}.
class BInfinityCrystal {
 public:
  using element_type = StringElement;

  BInfinityCrystal(CartanDatum c, IotaSequence iota) : cartan_(std::move(c)), iota_(std::move(iota)) {
    // revalidate against this datum's rank
    IotaSequence(iota_.cycle(), cartan_.rank());
  }
  explicit BInfinityCrystal(CartanDatum c) : BInfinityCrystal(c, IotaSequence::standard(c.rank())) {}

  const CartanDatum& cartan() const { return cartan_; }
  const IotaSequence& iota() const { return iota_; }
  StringElement highest() const { return {}; }

  WeightVector weight(const StringElement& s) const {
    auto w = WeightVector::zero(cartan_.rank());
    for (std::size_t k = 0; k < s.length(); ++k) w.nu[iota_.color(k)] += s.entries()[k];
    return w;
  }

  ExtInt eps(const StringElement& s, std::size_t i) const { return fold(s, i).back().eps; }
  ExtInt phi(const StringElement& s, std::size_t i) const { return fold(s, i).back().phi; }

  std::optional<StringElement> f(const StringElement& s, std::size_t i) const {
    const auto levels = fold(s, i);
    const std::size_t k = descend(s, i, levels, /*lowering=*/true);
    if (iota_.color(k) != i) return std::nullopt;
    return shifted(s, k, -1);
  }

  std::optional<StringElement> e(const StringElement& s, std::size_t i) const {
    const auto levels = fold(s, i);
    if (levels.back().eps == ExtInt(0)) return std::nullopt;
    const std::size_t k = descend(s, i, levels, /*lowering=*/false);
    if (iota_.color(k) != i) return std::nullopt;
    if (s.at(k) >= 0) throw InternalError("string-nonpositive", "e would create a positive string entry");
    return shifted(s, k, +1);
  }

  std::string key(const StringElement& s) const { return s.key(); }

 private:
  struct Level {
    ExtInt eps;
    ExtInt phi;
    Int wt = 0;  // <h_i, wt(T_k)>
  };

  /// Positions 0..L'-1 where L' extends the support by one position of color
  /// i; all further factors are b_j(0) and leave eps_i/phi_i unchanged.
  std::size_t horizon(const StringElement& s, std::size_t i) const { return iota_.next_position(s.length(), i) + 1; }

  StructureValues factor(const StringElement& s, std::size_t k, std::size_t i) const {
    const std::size_t j = iota_.color(k);
    const Int a = s.at(k);
    auto wt = WeightVector::zero(cartan_.rank());
    wt.nu[j] = a;
    if (j == i) return {wt, ExtInt(-a), ExtInt(a)};
    return {wt, ExtInt::neg_inf(), ExtInt::neg_inf()};
  }

  std::vector<Level> fold(const StringElement& s, std::size_t i) const {
    cartan_.check_index(i);
    const std::size_t top = horizon(s, i);
    std::vector<Level> levels;
    levels.reserve(top);
    Level prev{ExtInt::neg_inf(), ExtInt::neg_inf(), 0};  // empty product
    for (std::size_t k = 0; k < top; ++k) {
      const auto b = factor(s, k, i);
      const Int wt_b = s.at(k) * cartan_.a(i, iota_.color(k));
      Level cur{max(b.eps, prev.eps - wt_b), max(b.phi + ExtInt(prev.wt), prev.phi), prev.wt + wt_b};
      levels.push_back(cur);
      prev = cur;
    }
    return levels;
  }

  /// Position of the factor the operator acts on.
  std::size_t descend(const StringElement& s, std::size_t i, const std::vector<Level>& levels, bool lowering) const {
    for (std::size_t k = levels.size() - 1; k > 0; --k) {
      const ExtInt phi_b = factor(s, k, i).phi;
      const ExtInt eps_rest = levels[k - 1].eps;
      const Side side = lowering ? route_f(phi_b, eps_rest) : route_e(phi_b, eps_rest);
      if (side == Side::left) return k;
    }
    return 0;
  }

  static StringElement shifted(const StringElement& s, std::size_t k, Int delta) {
    std::vector<Int> a = s.entries();
    if (a.size() <= k) a.resize(k + 1, 0);
    a[k] += delta;
    return StringElement(std::move(a));
  }

  CartanDatum cartan_;
  IotaSequence iota_;
};

/// The guarded part of B(infinity) (x) T_lambda: structure functions are those
/// of the tensor product, f_i is applied only when phi_i > 0 and e_i only when
/// eps_i > 0. Its closure from b_0 (x) t_lambda realizes B(lambda).
class BLambdaCrystal {
 public:
  using element_type = StringElement;

  BLambdaCrystal(CartanDatum c, WeightVector lam, IotaSequence iota)
      : product_(BInfinityCrystal(c, std::move(iota)), TCrystal(c, lam)), lam_(std::move(lam)) {
    require_dominant_lambda(product_.cartan(), lam_);
  }
  BLambdaCrystal(const CartanDatum& c, WeightVector lam)
      : BLambdaCrystal(c, std::move(lam), IotaSequence::standard(c.rank())) {}

  const CartanDatum& cartan() const { return product_.cartan(); }
  const BInfinityCrystal& binfinity() const { return product_.left(); }
  const WeightVector& lambda() const { return lam_; }

  WeightVector weight(const StringElement& s) const { return product_.weight(pair(s)); }
  ExtInt eps(const StringElement& s, std::size_t i) const { return product_.eps(pair(s), i); }
  ExtInt phi(const StringElement& s, std::size_t i) const { return product_.phi(pair(s), i); }

  std::optional<StringElement> f(const StringElement& s, std::size_t i) const {
    if (!(phi(s, i) > ExtInt(0))) return std::nullopt;
    auto r = product_.f(pair(s), i);
    if (!r) return std::nullopt;
    return r->first;
  }
  std::optional<StringElement> e(const StringElement& s, std::size_t i) const {
    if (!(eps(s, i) > ExtInt(0))) return std::nullopt;
    auto r = product_.e(pair(s), i);
    if (!r) return std::nullopt;
    return r->first;
  }
  std::string key(const StringElement& s) const { return s.key(); }

 private:
  std::pair<StringElement, TCrystal::element_type> pair(const StringElement& s) const { return {s, {}}; }

  TensorCrystal<BInfinityCrystal, TCrystal> product_;
  WeightVector lam_;
};

/// A generated B(lambda) with the data needed to query it.
struct BLambdaGraph {
  CrystalGraph graph;
  WeightVector lam;
  IotaSequence iota;
  Int depth;

  std::size_t top() const {
    auto k = graph.find(StringElement().key());
    if (!k) throw InternalError("blambda-top", "generated graph lacks its highest element");
    return *k;
  }
};

/// Breadth-first closure of b_0 (x) t_lambda under the guarded operators,
/// keeping elements with |ht(wt - lambda)| <= depth. For finite types and
/// depth at least the height of the lowest weight the result is complete.
inline BLambdaGraph generate_blambda(const CartanDatum& c, const WeightVector& lam, Int depth,
                                     const IotaSequence& iota) {
  if (depth < 0) throw InputError("depth", "depth must be >= 0");
  const BLambdaCrystal crystal(c, lam, iota);
  const auto& binf = crystal.binfinity();
  auto graph = materialize(crystal, {StringElement()}, [&](const StringElement& s) {
    return std::abs(binf.weight(s).height()) <= depth;
  });
  return {std::move(graph), lam, iota, depth};
}

inline BLambdaGraph generate_blambda(const CartanDatum& c, const WeightVector& lam, Int depth) {
  return generate_blambda(c, lam, depth, IotaSequence::standard(c.rank()));
}

/// pi_lambda(s (x) t_lambda): the element of the generated B(lambda) with the
/// same key, or std::nullopt for 0. Throws DepthError when the graph was cut
/// off above the height of s and the answer is unknown.
inline std::optional<std::size_t> pi_lambda(const BLambdaGraph& g, const StringElement& s) {
  if (auto k = g.graph.find(s.key())) return k;
  const BInfinityCrystal binf(g.graph.cartan(), g.iota);
  if (g.graph.truncated() && std::abs(binf.weight(s).height()) >= g.depth) {
    throw DepthError("generation-depth", "B(lambda) generated to depth " + std::to_string(g.depth) +
                                             " cannot decide element " + s.key());
  }
  return std::nullopt;
}

}  // namespace qcrys
