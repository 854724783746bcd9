#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "ext_int.hpp"
#include "matrix.hpp"

namespace qcrys {

/// A weight written as  sum_i lam[i] Lambda_i + sum_i nu[i] alpha_i.
///
/// Keeping the fundamental-weight part and the root-lattice part apart avoids
/// choosing a basis of the weight lattice for non-finite types. Equality is
/// componentwise, so Lambda_1 - alpha_1 and its expression in fundamental
/// weights alone are different WeightVectors.
struct WeightVector {
  std::vector<Int> lam;
  std::vector<Int> nu;

  static WeightVector zero(std::size_t n) { return {std::vector<Int>(n, 0), std::vector<Int>(n, 0)}; }

  static WeightVector fundamental(std::size_t n, std::size_t i) {
    WeightVector w = zero(n);
    w.lam.at(i) = 1;
    return w;
  }

  static WeightVector simple_root(std::size_t n, std::size_t i) {
    WeightVector w = zero(n);
    w.nu.at(i) = 1;
    return w;
  }

  /// Weight with the given fundamental-weight coefficients and nu = 0.
  static WeightVector from_lambda(std::vector<Int> lam) {
    const std::size_t n = lam.size();
    return {std::move(lam), std::vector<Int>(n, 0)};
  }

  static WeightVector from_root(std::vector<Int> nu) {
    const std::size_t n = nu.size();
    return {std::vector<Int>(n, 0), std::move(nu)};
  }

  std::size_t rank() const { return lam.size(); }

  /// sum of root coordinates.
  Int height() const { return std::accumulate(nu.begin(), nu.end(), Int{0}); }

  bool in_root_lattice() const {
    return std::all_of(lam.begin(), lam.end(), [](Int x) { return x == 0; });
  }

  WeightVector& operator+=(const WeightVector& o) {
    for (std::size_t k = 0; k < lam.size(); ++k) {
      lam[k] += o.lam.at(k);
      nu[k] += o.nu.at(k);
    }
    return *this;
  }
  WeightVector& operator-=(const WeightVector& o) {
    for (std::size_t k = 0; k < lam.size(); ++k) {
      lam[k] -= o.lam.at(k);
      nu[k] -= o.nu.at(k);
    }
    return *this;
  }
  friend WeightVector operator+(WeightVector a, const WeightVector& b) { return a += b; }
  friend WeightVector operator-(WeightVector a, const WeightVector& b) { return a -= b; }
  friend WeightVector operator*(Int k, WeightVector a) {
    for (auto& x : a.lam) x *= k;
    for (auto& x : a.nu) x *= k;
    return a;
  }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
  friend auto operator<=>(const WeightVector&, const WeightVector&) = default;

  std::string to_string() const {
    std::ostringstream os;
    os << "lam=(";
    for (std::size_t k = 0; k < lam.size(); ++k) os << (k ? "," : "") << lam[k];
    os << ") nu=(";
    for (std::size_t k = 0; k < nu.size(); ++k) os << (k ? "," : "") << nu[k];
    os << ')';
    return os.str();
  }
};

enum class TypeClass { finite, non_finite };

/// Symmetric generalized Cartan matrix with derived data.
///
/// Indices are 0-based throughout the library; external formats use 1-based
/// colors.
class CartanDatum {
 public:
  explicit CartanDatum(std::vector<std::vector<Int>> matrix) : a_(std::move(matrix)) {
    const std::size_t n = a_.size();
    if (n == 0) throw InputError("cartan-rank", "Cartan matrix must have positive rank");
    for (std::size_t i = 0; i < n; ++i) {
      if (a_[i].size() != n) throw InputError("cartan-shape", "Cartan matrix must be square");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (a_[i][i] != 2) throw InputError("cartan-diagonal", "a_ii must equal 2");
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && a_[i][j] > 0) throw InputError("cartan-offdiagonal", "a_ij must be <= 0 for i != j");
        if (a_[i][j] != a_[j][i]) throw InputError("cartan-symmetric", "Cartan matrix must be symmetric");
      }
    }
    // positive definite iff every leading principal minor is positive
    type_ = TypeClass::finite;
    for (std::size_t k = 1; k <= n; ++k) {
      Matrix minor(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = static_cast<long>(a_[i][j]);
      if (sgn(determinant(minor)) <= 0) {
        type_ = TypeClass::non_finite;
        break;
      }
    }
  }

  /// Named types: "A<n>" (n >= 1), "D<n>" (n >= 4), "E6", "E7", "E8", and the
  /// untwisted affine "A<n>~" (n >= 1, rank n + 1).
  static CartanDatum preset(const std::string& name);

  std::size_t rank() const { return a_.size(); }
  Int a(std::size_t i, std::size_t j) const { return a_.at(i).at(j); }
  const std::vector<std::vector<Int>>& matrix() const { return a_; }
  TypeClass type_class() const { return type_; }
  bool is_finite() const { return type_ == TypeClass::finite; }

  void check_index(std::size_t i) const {
    if (i >= rank()) {
      throw InputError("index-range", "index " + std::to_string(i + 1) + " outside 1.." + std::to_string(rank()));
    }
  }
  void check_weight(const WeightVector& w) const {
    if (w.lam.size() != rank() || w.nu.size() != rank()) {
      throw InputError("weight-rank", "weight has rank " + std::to_string(w.lam.size()) + ", expected " +
                                          std::to_string(rank()));
    }
  }
  void require_finite(const char* what) const {
    if (!is_finite()) throw InputError("finite-type", std::string(what) + " requires a finite-type Cartan datum");
  }

  friend bool operator==(const CartanDatum& x, const CartanDatum& y) { return x.a_ == y.a_; }

 private:
  std::vector<std::vector<Int>> a_;
  TypeClass type_ = TypeClass::finite;
};

namespace detail {

inline void link(std::vector<std::vector<Int>>& a, std::size_t i, std::size_t j, Int m = 1) {
  a[i][j] -= m;
  a[j][i] -= m;
}

inline std::vector<std::vector<Int>> diagonal_two(std::size_t n) {
  std::vector<std::vector<Int>> a(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 2;
  return a;
}

}  // namespace detail

inline CartanDatum CartanDatum::preset(const std::string& name) {
  auto bad = [&]() { return InputError("cartan-preset", "unknown Cartan type '" + name + "'"); };
  if (name.size() < 2) throw bad();
  const char family = name[0];
  const bool affine = name.back() == '~';
  const std::string digits = name.substr(1, name.size() - 1 - (affine ? 1 : 0));
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw bad();
  const std::size_t n = std::stoul(digits);
  if (n == 0 || n > 64) throw bad();

  if (family == 'A' && affine) {
    auto a = detail::diagonal_two(n + 1);
    if (n == 1) {
      detail::link(a, 0, 1, 2);
    } else {
      for (std::size_t i = 0; i <= n; ++i) detail::link(a, i, (i + 1) % (n + 1));
    }
    return CartanDatum(std::move(a));
  }
  if (affine) throw bad();
  auto a = detail::diagonal_two(n);
  switch (family) {
    case 'A':
      for (std::size_t i = 0; i + 1 < n; ++i) detail::link(a, i, i + 1);
      break;
    case 'D':
      if (n < 4) throw bad();
      for (std::size_t i = 0; i + 2 < n; ++i) detail::link(a, i, i + 1);
      detail::link(a, n - 3, n - 1);
      break;
    case 'E':
      if (n < 6 || n > 8) throw bad();
      // Bourbaki labelling: 1-3-4-5-...-n chain with 2 attached to 4
      detail::link(a, 0, 2);
      detail::link(a, 1, 3);
      for (std::size_t i = 2; i + 1 < n; ++i) detail::link(a, i, i + 1);
      break;
    default:
      throw bad();
  }
  return CartanDatum(std::move(a));
}

/// <h_i, w> = lam_i + sum_j a_ij nu_j.
inline Int pairing(const CartanDatum& c, std::size_t i, const WeightVector& w) {
  c.check_index(i);
  c.check_weight(w);
  Int s = w.lam[i];
  for (std::size_t j = 0; j < c.rank(); ++j) s += c.a(i, j) * w.nu[j];
  return s;
}

/// All pairings <h_i, w>, i = 0..n-1.
inline std::vector<Int> pairings(const CartanDatum& c, const WeightVector& w) {
  std::vector<Int> out(c.rank());
  for (std::size_t i = 0; i < c.rank(); ++i) out[i] = pairing(c, i, w);
  return out;
}

/// Simple reflection s_i(w) = w - <h_i, w> alpha_i; only the root part moves.
inline WeightVector reflect(const CartanDatum& c, std::size_t i, const WeightVector& w) {
  const Int p = pairing(c, i, w);
  WeightVector out = w;
  out.nu[i] -= p;
  return out;
}

inline bool is_dominant(const CartanDatum& c, const WeightVector& w) {
  c.check_weight(w);
  for (std::size_t i = 0; i < c.rank(); ++i)
    if (pairing(c, i, w) < 0) return false;
  return true;
}

/// Dominant weights in the form the character and crystal generators accept:
/// nonnegative fundamental coefficients and zero root part.
inline void require_dominant_lambda(const CartanDatum& c, const WeightVector& lam) {
  c.check_weight(lam);
  const bool ok = std::all_of(lam.lam.begin(), lam.lam.end(), [](Int x) { return x >= 0; }) &&
                  std::all_of(lam.nu.begin(), lam.nu.end(), [](Int x) { return x == 0; });
  if (!ok) throw InputError("dominant-weight", "expected a dominant weight with lam >= 0 and nu = 0, got " + lam.to_string());
}

inline WeightVector rho(const CartanDatum& c) {
  return WeightVector::from_lambda(std::vector<Int>(c.rank(), 1));
}

/// Positive roots of a finite type, as root-lattice vectors, sorted by
/// (height, coordinates). Obtained by closing the simple roots under simple
/// reflections, keeping the positive images.
inline std::vector<WeightVector> positive_roots(const CartanDatum& c) {
  c.require_finite("positive_roots");
  const std::size_t n = c.rank();
  std::set<std::vector<Int>> seen;
  std::deque<WeightVector> queue;
  for (std::size_t i = 0; i < n; ++i) {
    auto a = WeightVector::simple_root(n, i);
    seen.insert(a.nu);
    queue.push_back(std::move(a));
  }
  while (!queue.empty()) {
    WeightVector beta = std::move(queue.front());
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      WeightVector image = reflect(c, i, beta);
      const bool positive = std::all_of(image.nu.begin(), image.nu.end(), [](Int x) { return x >= 0; });
      if (!positive) continue;  // only s_i(alpha_i) = -alpha_i leaves the positive cone
      if (seen.insert(image.nu).second) queue.push_back(std::move(image));
    }
  }
  std::vector<WeightVector> roots;
  for (const auto& nu : seen) roots.push_back(WeightVector::from_root(nu));
  std::sort(roots.begin(), roots.end(), [](const WeightVector& x, const WeightVector& y) {
    if (x.height() != y.height()) return x.height() < y.height();
    return x.nu < y.nu;
  });
  return roots;
}

/// (A^{-1}) over Q. Finite type only (A is then nonsingular).
inline Matrix inverse_cartan(const CartanDatum& c) {
  c.require_finite("inverse Cartan matrix");
  Matrix a(c.rank(), c.rank());
  for (std::size_t i = 0; i < c.rank(); ++i)
    for (std::size_t j = 0; j < c.rank(); ++j) a(i, j) = static_cast<long>(c.a(i, j));
  auto inv = inverse(a);
  if (!inv) throw InternalError("cartan-inverse", "positive definite Cartan matrix reported singular");
  return *inv;
}

/// (w, w) with (alpha_i, alpha_j) = a_ij, (Lambda_i, alpha_j) = delta_ij and
/// (Lambda_i, Lambda_j) = (A^{-1})_ij.
inline Rational norm_squared(const CartanDatum& c, const WeightVector& w) {
  c.check_weight(w);
  const Matrix inv = inverse_cartan(c);
  const std::size_t n = c.rank();
  Rational s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s += inv(i, j) * static_cast<long>(w.lam[i] * w.lam[j]);
      s += static_cast<long>(c.a(i, j) * w.nu[i] * w.nu[j]);
    }
    s += 2 * static_cast<long>(w.lam[i] * w.nu[i]);
  }
  return s;
}

/// One Weyl group element, recorded through its action on a fixed weight.
struct WeylElement {
  WeightVector image;   // w(mu)
  std::size_t length;   // l(w)
};

inline constexpr std::size_t kWeylGroupLimit = 1'000'000;

/// Enumerates W by breadth-first closure on the orbit of rho, carrying the
/// image of `mu` along. rho is regular, so orbit points and group elements are
/// in bijection and BFS distance equals length.
inline std::vector<WeylElement> weyl_orbit_images(const CartanDatum& c, const WeightVector& mu,
                                                  std::size_t limit = kWeylGroupLimit) {
  c.require_finite("Weyl group enumeration");
  c.check_weight(mu);
  struct Entry {
    WeightVector rho_image;
    WeightVector mu_image;
    std::size_t length;
  };
  std::map<std::vector<Int>, bool> seen;
  std::deque<Entry> queue{{rho(c), mu, 0}};
  seen[queue.front().rho_image.nu] = true;
  std::vector<WeylElement> out;
  while (!queue.empty()) {
    Entry e = std::move(queue.front());
    queue.pop_front();
    out.push_back({e.mu_image, e.length});
    if (out.size() > limit) throw InputError("weyl-group-size", "Weyl group exceeds element limit");
    for (std::size_t i = 0; i < c.rank(); ++i) {
      WeightVector r = reflect(c, i, e.rho_image);
      if (seen.emplace(r.nu, true).second) {
        queue.push_back({std::move(r), reflect(c, i, e.mu_image), e.length + 1});
      }
    }
  }
  return out;
}

/// |ht| of lam - w_0(lam): how far the lowest weight of L(lam) lies below lam.
inline Int lowest_weight_depth(const CartanDatum& c, const WeightVector& lam) {
  Int lowest = 0;
  for (const auto& w : weyl_orbit_images(c, lam)) lowest = std::max(lowest, (lam - w.image).height());
  return lowest;
}

}  // namespace qcrys
