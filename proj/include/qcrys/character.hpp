#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "cartan.hpp"

namespace qcrys {

/// Weight multiplicities of the irreducible highest weight module L(lam),
/// keyed by the root part nu of lam + nu (nu in Q_-).
struct CharacterTable {
  WeightVector lam;
  std::map<std::vector<Int>, Int> entries;  // nu -> multiplicity, zero entries omitted
  Int height_bound = 0;

  Int multiplicity(const std::vector<Int>& nu) const {
    auto it = entries.find(nu);
    return it == entries.end() ? 0 : it->second;
  }

  Int total() const {
    Int s = 0;
    for (const auto& [nu, m] : entries) s += m;
    return s;
  }

  /// Rows ordered from the top weight down: by |ht(nu)| ascending, then nu
  /// lexicographically.
  std::vector<std::pair<std::vector<Int>, Int>> sorted_rows() const {
    std::vector<std::pair<std::vector<Int>, Int>> rows(entries.begin(), entries.end());
    auto height = [](const std::vector<Int>& nu) {
      Int h = 0;
      for (Int x : nu) h += x;
      return -h;
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const auto& x, const auto& y) {
      if (height(x.first) != height(y.first)) return height(x.first) < height(y.first);
      return x.first < y.first;
    });
    return rows;
  }
};

/// Coefficients of prod_{alpha > 0} 1/(1 - e^{-alpha}) = sum_gamma K(gamma) e^{-gamma}
/// for gamma in Q_+ with ht(gamma) <= cutoff (Kostant partition function).
inline std::map<std::vector<Int>, Int> kostant_series(const std::vector<WeightVector>& positive,
                                                      std::size_t rank, Int cutoff) {
  std::map<std::vector<Int>, Int> series{{std::vector<Int>(rank, 0), 1}};
  for (const auto& alpha : positive) {
    const Int h = alpha.height();
    std::map<std::vector<Int>, Int> next;
    for (const auto& [gamma, coeff] : series) {
      std::vector<Int> g = gamma;
      Int height = 0;
      for (Int x : g) height += x;
      for (Int k = 0; height + k * h <= cutoff; ++k) {
        next[g] += coeff;
        for (std::size_t j = 0; j < rank; ++j) g[j] += alpha.nu[j];
      }
    }
    series = std::move(next);
  }
  return series;
}

/// Weyl-Kac character of L(lam) truncated to |ht(nu)| <= height_bound.
///
/// The numerator sum over W is expanded through the orbit of lam + rho; each
/// term w(lam + rho) - rho keeps lam as its fundamental part, so it contributes
/// e^{lam + beta_w} with beta_w in Q_-. The denominator is inverted as a
/// truncated series in e^{-alpha_i}, exact up to the bound since every
/// coefficient at height h only involves series terms of height <= h.
inline CharacterTable weyl_kac_character(const CartanDatum& c, const WeightVector& lam, Int height_bound) {
  c.require_finite("weyl_kac_character");
  require_dominant_lambda(c, lam);
  if (height_bound < 0) throw InputError("height-bound", "height_bound must be >= 0");

  const std::size_t n = c.rank();
  // nothing lies below the lowest weight w_0(lam), the deepest point of W lam
  const Int bound = std::min(height_bound, lowest_weight_depth(c, lam));
  const auto series = kostant_series(positive_roots(c), n, bound);

  std::map<std::vector<Int>, Int> acc;
  for (const auto& w : weyl_orbit_images(c, lam + rho(c))) {
    const Int sign = (w.length % 2 == 0) ? 1 : -1;
    const auto& beta = w.image.nu;  // w(lam + rho) - rho = lam + beta
    Int beta_height = 0;
    for (Int x : beta) beta_height += x;
    if (-beta_height > bound) continue;
    for (const auto& [gamma, k] : series) {
      Int h = -beta_height;
      for (Int x : gamma) h += x;
      if (h > bound) continue;
      std::vector<Int> nu(n);
      for (std::size_t j = 0; j < n; ++j) nu[j] = beta[j] - gamma[j];
      acc[nu] += sign * k;
    }
  }

  CharacterTable table{lam, {}, height_bound};
  for (auto& [nu, m] : acc) {
    if (m < 0) throw InternalError("character-nonnegative", "negative multiplicity in Weyl-Kac expansion");
    if (m != 0) table.entries.emplace(nu, m);
  }
  return table;
}

}  // namespace qcrys
