#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "cartan.hpp"
#include "ext_int.hpp"

namespace qcrys {

/// A crystal whose elements are values of `element_type`. The operators
/// return std::nullopt for the element 0.
template <class C>
concept Crystal = requires(const C& c, const typename C::element_type& b, std::size_t i) {
  typename C::element_type;
  { c.cartan() } -> std::convertible_to<const CartanDatum&>;
  { c.weight(b) } -> std::convertible_to<WeightVector>;
  { c.eps(b, i) } -> std::convertible_to<ExtInt>;
  { c.phi(b, i) } -> std::convertible_to<ExtInt>;
  { c.e(b, i) } -> std::convertible_to<std::optional<typename C::element_type>>;
  { c.f(b, i) } -> std::convertible_to<std::optional<typename C::element_type>>;
  { c.key(b) } -> std::convertible_to<std::string>;
};

/// The three structure values of one element for one color.
struct StructureValues {
  WeightVector wt;
  ExtInt eps;
  ExtInt phi;
};

template <Crystal C>
StructureValues structure_of(const C& crystal, const typename C::element_type& b, std::size_t i) {
  return {crystal.weight(b), crystal.eps(b, i), crystal.phi(b, i)};
}

/// eps, phi and wt of b1 (x) b2 at color i:
///   eps = max(eps(b1), eps(b2) - wt_i(b1)),  phi = max(phi(b1) + wt_i(b2), phi(b2)).
inline StructureValues tensor_structure(const CartanDatum& c, const StructureValues& b1, const StructureValues& b2,
                                        std::size_t i) {
  const Int wt1 = pairing(c, i, b1.wt);
  const Int wt2 = pairing(c, i, b2.wt);
  return {b1.wt + b2.wt, max(b1.eps, b2.eps - wt1), max(b1.phi + ExtInt(wt2), b2.phi)};
}

enum class Side { left, right };

/// f_i acts on the left factor iff phi_i(b1) > eps_i(b2).
inline constexpr Side route_f(ExtInt phi1, ExtInt eps2) { return phi1 > eps2 ? Side::left : Side::right; }

/// e_i acts on the left factor iff phi_i(b1) >= eps_i(b2).
inline constexpr Side route_e(ExtInt phi1, ExtInt eps2) { return phi1 >= eps2 ? Side::left : Side::right; }

/// The one-element crystal T_lambda: weight lambda, eps = phi = -inf, no arrows.
class TCrystal {
 public:
  struct element_type {
    friend bool operator==(const element_type&, const element_type&) = default;
    friend auto operator<=>(const element_type&, const element_type&) = default;
  };

  TCrystal(CartanDatum c, WeightVector lam) : cartan_(std::move(c)), lam_(std::move(lam)) {
    cartan_.check_weight(lam_);
  }

  const CartanDatum& cartan() const { return cartan_; }
  const WeightVector& lambda() const { return lam_; }
  element_type element() const { return {}; }

  WeightVector weight(const element_type&) const { return lam_; }
  ExtInt eps(const element_type&, std::size_t i) const {
    cartan_.check_index(i);
    return ExtInt::neg_inf();
  }
  ExtInt phi(const element_type&, std::size_t i) const {
    cartan_.check_index(i);
    return ExtInt::neg_inf();
  }
  std::optional<element_type> e(const element_type&, std::size_t) const { return std::nullopt; }
  std::optional<element_type> f(const element_type&, std::size_t) const { return std::nullopt; }
  std::string key(const element_type&) const { return "t"; }

 private:
  CartanDatum cartan_;
  WeightVector lam_;
};

/// The elementary crystal B_i = { b_i(n) : n in Z } with wt = n alpha_i,
/// eps_i = -n, phi_i = n, and -inf for the other colors.
class ElementaryCrystal {
 public:
  using element_type = Int;

  ElementaryCrystal(CartanDatum c, std::size_t color) : cartan_(std::move(c)), color_(color) {
    cartan_.check_index(color_);
  }

  const CartanDatum& cartan() const { return cartan_; }
  std::size_t color() const { return color_; }

  WeightVector weight(Int n) const {
    auto w = WeightVector::zero(cartan_.rank());
    w.nu[color_] = n;
    return w;
  }
  ExtInt eps(Int n, std::size_t i) const {
    cartan_.check_index(i);
    return i == color_ ? ExtInt(-n) : ExtInt::neg_inf();
  }
  ExtInt phi(Int n, std::size_t i) const {
    cartan_.check_index(i);
    return i == color_ ? ExtInt(n) : ExtInt::neg_inf();
  }
  std::optional<Int> e(Int n, std::size_t i) const {
    return i == color_ ? std::optional<Int>(n + 1) : std::nullopt;
  }
  std::optional<Int> f(Int n, std::size_t i) const {
    return i == color_ ? std::optional<Int>(n - 1) : std::nullopt;
  }
  std::string key(Int n) const { return "b" + std::to_string(color_ + 1) + "(" + std::to_string(n) + ")"; }

 private:
  CartanDatum cartan_;
  std::size_t color_;
};

/// B1 (x) B2 with the tensor product rules above.
template <Crystal C1, Crystal C2>
class TensorCrystal {
 public:
  using left_type = typename C1::element_type;
  using right_type = typename C2::element_type;
  using element_type = std::pair<left_type, right_type>;

  TensorCrystal(C1 left, C2 right) : left_(std::move(left)), right_(std::move(right)) {
    if (!(left_.cartan() == right_.cartan())) {
      throw InputError("tensor-cartan", "tensor factors must share a Cartan datum");
    }
  }

  const CartanDatum& cartan() const { return left_.cartan(); }
  const C1& left() const { return left_; }
  const C2& right() const { return right_; }

  WeightVector weight(const element_type& b) const { return left_.weight(b.first) + right_.weight(b.second); }

  ExtInt eps(const element_type& b, std::size_t i) const {
    return tensor_structure(cartan(), structure_of(left_, b.first, i), structure_of(right_, b.second, i), i).eps;
  }
  ExtInt phi(const element_type& b, std::size_t i) const {
    return tensor_structure(cartan(), structure_of(left_, b.first, i), structure_of(right_, b.second, i), i).phi;
  }

  std::optional<element_type> f(const element_type& b, std::size_t i) const {
    if (route_f(left_.phi(b.first, i), right_.eps(b.second, i)) == Side::left) {
      auto x = left_.f(b.first, i);
      if (!x) return std::nullopt;
      return element_type{std::move(*x), b.second};
    }
    auto y = right_.f(b.second, i);
    if (!y) return std::nullopt;
    return element_type{b.first, std::move(*y)};
  }

  std::optional<element_type> e(const element_type& b, std::size_t i) const {
    if (route_e(left_.phi(b.first, i), right_.eps(b.second, i)) == Side::left) {
      auto x = left_.e(b.first, i);
      if (!x) return std::nullopt;
      return element_type{std::move(*x), b.second};
    }
    auto y = right_.e(b.second, i);
    if (!y) return std::nullopt;
    return element_type{b.first, std::move(*y)};
  }

  std::string key(const element_type& b) const { return "[" + left_.key(b.first) + " x " + right_.key(b.second) + "]"; }

 private:
  C1 left_;
  C2 right_;
};

template <Crystal C1, Crystal C2>
TensorCrystal<C1, C2> tensor(C1 a, C2 b) {
  return TensorCrystal<C1, C2>(std::move(a), std::move(b));
}

}  // namespace qcrys
