#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cartan.hpp"
#include "matrix.hpp"

namespace qcrys {

/// An arrow of the doubled quiver. `bar` is the id of the reversed arrow;
/// `sign` is +1 on the chosen orientation and -1 on its reverse.
struct QuiverArrow {
  std::size_t id;
  std::size_t out;
  std::size_t in;
  std::size_t bar;
  bool in_orientation;
  int sign;
};

/// The doubled quiver of a symmetric Cartan matrix: |a_ij| arrows i -> j for
/// every i != j, paired with their reverses.
class DoubledQuiver {
 public:
  DoubledQuiver(std::size_t vertices, std::vector<QuiverArrow> arrows)
      : n_(vertices), arrows_(std::move(arrows)) {
    for (std::size_t k = 0; k < arrows_.size(); ++k) {
      const auto& a = arrows_[k];
      if (a.id != k) throw InputError("quiver-ids", "arrow ids must be 0..|H|-1 in order");
      if (a.out >= n_ || a.in >= n_) throw InputError("quiver-vertex", "arrow endpoint out of range");
      if (a.out == a.in) throw InputError("quiver-loop", "doubled quiver has no loops");
      if (a.bar >= arrows_.size() || a.bar == k) throw InputError("quiver-bar", "bar must be a fixed-point-free involution");
      const auto& b = arrows_[a.bar];
      if (b.bar != k || b.out != a.in || b.in != a.out) throw InputError("quiver-bar", "bar must reverse its arrow");
      if (a.in_orientation == b.in_orientation) throw InputError("quiver-orientation", "exactly one of tau, bar tau is oriented");
      if (a.sign + b.sign != 0 || (a.sign != 1 && a.sign != -1)) throw InputError("quiver-sign", "sign(tau) + sign(bar tau) = 0");
    }
  }

  std::size_t vertices() const { return n_; }
  const std::vector<QuiverArrow>& arrows() const { return arrows_; }
  const QuiverArrow& arrow(std::size_t id) const { return arrows_.at(id); }

  std::vector<std::size_t> arrows_out_of(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& a : arrows_)
      if (a.out == i) out.push_back(a.id);
    return out;
  }
  std::vector<std::size_t> arrows_into(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& a : arrows_)
      if (a.in == i) out.push_back(a.id);
    return out;
  }

  /// True when the underlying graph (one edge per arrow pair) is a forest.
  bool is_forest() const {
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& a : arrows_) {
      if (!a.in_orientation) continue;
      const auto r1 = root(a.out), r2 = root(a.in);
      if (r1 == r2) return false;
      parent[r1] = r2;
    }
    return true;
  }

 private:
  std::size_t n_;
  std::vector<QuiverArrow> arrows_;
};

/// Builds H for c. Without a seed each edge is oriented from the smaller to
/// the larger vertex; with a seed each edge pair is oriented by a coin flip.
inline DoubledQuiver build_doubled_quiver(const CartanDatum& c, std::optional<std::uint64_t> orientation_seed = {}) {
  std::optional<std::mt19937_64> rng;
  if (orientation_seed) rng.emplace(*orientation_seed);
  std::vector<QuiverArrow> arrows;
  for (std::size_t i = 0; i < c.rank(); ++i) {
    for (std::size_t j = i + 1; j < c.rank(); ++j) {
      for (Int m = 0; m < -c.a(i, j); ++m) {
        const bool forward = rng ? ((*rng)() & 1u) == 0 : true;
        const std::size_t id = arrows.size();
        arrows.push_back({id, i, j, id + 1, forward, forward ? 1 : -1});
        arrows.push_back({id + 1, j, i, id, !forward, forward ? -1 : 1});
      }
    }
  }
  return DoubledQuiver(c.rank(), std::move(arrows));
}

/// Dimension vectors: v_i = dim V_i, w_i = dim W_i.
struct GradedDims {
  std::vector<Int> v;
  std::vector<Int> w;

  std::size_t rank() const { return v.size(); }
  std::size_t dim_v(std::size_t i) const { return static_cast<std::size_t>(v.at(i)); }
  std::size_t dim_w(std::size_t i) const { return static_cast<std::size_t>(w.at(i)); }

  /// lambda = sum w_i Lambda_i
  WeightVector lambda() const { return WeightVector::from_lambda(w); }
  /// lambda + nu with nu = -sum v_i alpha_i
  WeightVector weight() const {
    WeightVector x = lambda();
    for (std::size_t i = 0; i < v.size(); ++i) x.nu[i] = -v[i];
    return x;
  }

  friend bool operator==(const GradedDims&, const GradedDims&) = default;
};

inline void check_dims(const DoubledQuiver& q, const GradedDims& d) {
  if (d.v.size() != q.vertices() || d.w.size() != q.vertices()) {
    throw InputError("dims-rank", "dimension vectors must have one entry per vertex");
  }
  for (std::size_t i = 0; i < d.v.size(); ++i)
    if (d.v[i] < 0 || d.w[i] < 0) throw InputError("dims-nonnegative", "dimensions must be >= 0");
}

/// <h_i, lambda + nu> read off the quiver: w_i - 2 v_i + sum_{out(tau)=i} v_in(tau).
inline Int weight_pairing(const DoubledQuiver& q, const GradedDims& d, std::size_t i) {
  check_dims(q, d);
  Int p = d.w.at(i) - 2 * d.v.at(i);
  for (auto id : q.arrows_out_of(i)) p += d.v[q.arrow(id).in];
  return p;
}

/// A point (B, t, s) of X(W; nu) with B_tau : V_out -> V_in, t_i : V_i -> W_i,
/// s_i : W_i -> V_i, all over Q.
struct ADHMDatum {
  GradedDims dims;
  std::vector<Matrix> B;  // by arrow id
  std::vector<Matrix> t;  // by vertex
  std::vector<Matrix> s;  // by vertex

  static ADHMDatum zero(const DoubledQuiver& q, const GradedDims& dims) {
    check_dims(q, dims);
    ADHMDatum d{dims, {}, {}, {}};
    for (const auto& a : q.arrows()) d.B.emplace_back(dims.dim_v(a.in), dims.dim_v(a.out));
    for (std::size_t i = 0; i < q.vertices(); ++i) {
      d.t.emplace_back(dims.dim_w(i), dims.dim_v(i));
      d.s.emplace_back(dims.dim_v(i), dims.dim_w(i));
    }
    return d;
  }

  friend bool operator==(const ADHMDatum&, const ADHMDatum&) = default;
};

inline void check_shapes(const DoubledQuiver& q, const ADHMDatum& d) {
  check_dims(q, d.dims);
  if (d.B.size() != q.arrows().size() || d.t.size() != q.vertices() || d.s.size() != q.vertices()) {
    throw InputError("datum-shape", "datum has the wrong number of blocks");
  }
  for (const auto& a : q.arrows()) {
    const auto& b = d.B[a.id];
    if (b.rows() != d.dims.dim_v(a.in) || b.cols() != d.dims.dim_v(a.out)) {
      throw InputError("datum-shape", "B block of arrow " + std::to_string(a.id + 1) + " has shape " + b.shape());
    }
  }
  for (std::size_t i = 0; i < q.vertices(); ++i) {
    if (d.t[i].rows() != d.dims.dim_w(i) || d.t[i].cols() != d.dims.dim_v(i) ||
        d.s[i].rows() != d.dims.dim_v(i) || d.s[i].cols() != d.dims.dim_w(i)) {
      throw InputError("datum-shape", "t/s block at vertex " + std::to_string(i + 1) + " has the wrong shape");
    }
  }
}

/// An element g = (g_i) of G(nu) = prod GL(V_i).
struct GroupElement {
  std::vector<Matrix> g;
};

/// mu_i = sum_{out(tau) = i} sign(tau) B_{bar tau} B_tau + s_i t_i.
inline std::vector<Matrix> moment_map(const DoubledQuiver& q, const ADHMDatum& d) {
  check_shapes(q, d);
  std::vector<Matrix> mu;
  for (std::size_t i = 0; i < q.vertices(); ++i) mu.push_back(d.s[i] * d.t[i]);
  for (const auto& a : q.arrows()) mu[a.out] += Rational(a.sign) * (d.B[a.bar] * d.B[a.id]);
  return mu;
}

inline bool moment_map_vanishes(const DoubledQuiver& q, const ADHMDatum& d) {
  for (const auto& m : moment_map(q, d))
    if (!m.is_zero()) return false;
  return true;
}

/// omega(x, y) = sum_tau tr(sign(tau) B_{bar tau} B'_tau) + sum_i tr(s_i t'_i - s'_i t_i).
inline Rational symplectic_form(const DoubledQuiver& q, const ADHMDatum& x, const ADHMDatum& y) {
  check_shapes(q, x);
  check_shapes(q, y);
  if (!(x.dims == y.dims)) throw InputError("dims-mismatch", "symplectic form needs equal dimensions");
  Rational total = 0;
  for (const auto& a : q.arrows()) total += a.sign * (x.B[a.bar] * y.B[a.id]).trace();
  for (std::size_t i = 0; i < q.vertices(); ++i) {
    total += (x.s[i] * y.t[i]).trace() - (y.s[i] * x.t[i]).trace();
  }
  return total;
}

/// (B, t, s) -> (g_in B g_out^{-1}, t g^{-1}, g s).
inline ADHMDatum group_act(const DoubledQuiver& q, const GroupElement& g, const ADHMDatum& d) {
  check_shapes(q, d);
  if (g.g.size() != q.vertices()) throw InputError("group-shape", "group element needs one block per vertex");
  std::vector<Matrix> inv;
  for (std::size_t i = 0; i < q.vertices(); ++i) {
    if (g.g[i].rows() != d.dims.dim_v(i) || g.g[i].cols() != d.dims.dim_v(i)) {
      throw InputError("group-shape", "g_" + std::to_string(i + 1) + " has shape " + g.g[i].shape());
    }
    auto x = inverse(g.g[i]);
    if (!x) throw InputError("group-invertible", "g_" + std::to_string(i + 1) + " is singular");
    inv.push_back(std::move(*x));
  }
  ADHMDatum out = d;
  for (const auto& a : q.arrows()) out.B[a.id] = g.g[a.in] * d.B[a.id] * inv[a.out];
  for (std::size_t i = 0; i < q.vertices(); ++i) {
    out.t[i] = d.t[i] * inv[i];
    out.s[i] = g.g[i] * d.s[i];
  }
  return out;
}

/// Result of the stability test. On failure `witness[i]` holds a basis
/// (columns) of a nonzero B-invariant graded subspace inside Ker t.
struct StabilityResult {
  bool stable;
  std::vector<Matrix> witness;
};

/// Largest B-invariant graded subspace contained in Ker t, computed as a
/// greatest fixpoint: U_i <- U_i  cap  B_tau^{-1}(U_in(tau)) for out(tau) = i.
inline StabilityResult is_stable(const DoubledQuiver& q, const ADHMDatum& d) {
  check_shapes(q, d);
  std::vector<Matrix> u;
  for (std::size_t i = 0; i < q.vertices(); ++i) u.push_back(kernel_basis(d.t[i]));
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& a : q.arrows()) {
      Matrix& ui = u[a.out];
      if (ui.cols() == 0) continue;
      // x = ui y with B x in span(u_in): annihilator(u_in) B ui y = 0
      const Matrix ann = left_annihilator(u[a.in]);
      if (ann.rows() == 0) continue;
      const Matrix y = kernel_basis(ann * d.B[a.id] * ui);
      if (y.cols() < ui.cols()) {
        ui = column_space_basis(ui * y);
        changed = true;
      }
    }
  }
  bool zero = true;
  for (const auto& x : u) zero = zero && x.cols() == 0;
  return {zero, zero ? std::vector<Matrix>{} : u};
}

/// The map  (+)_{in(tau) = i} V_out(tau) (+) W_i -> V_i  given by (B_tau, s_i).
inline Matrix into_vertex_map(const DoubledQuiver& q, const ADHMDatum& d, std::size_t i) {
  Matrix m(d.dims.dim_v(i), 0);
  for (auto id : q.arrows_into(i)) m = hstack(m, d.B[id]);
  return hstack(m, d.s[i]);
}

/// dim Coker of into_vertex_map.
inline std::size_t eps_i(const DoubledQuiver& q, const ADHMDatum& d, std::size_t i) {
  check_shapes(q, d);
  if (i >= q.vertices()) throw InputError("index-range", "vertex out of range");
  return d.dims.dim_v(i) - rank(into_vertex_map(q, d, i));
}

/// Decides nilpotency with the image filtration
/// V^(k+1)_j = sum_{in(tau) = j} B_tau(V^(k)_out(tau)), which reaches 0 iff
/// every long enough path composition vanishes.
inline bool is_nilpotent(const DoubledQuiver& q, const ADHMDatum& d) {
  check_shapes(q, d);
  std::vector<Matrix> level;
  std::size_t total = 0;
  for (std::size_t i = 0; i < q.vertices(); ++i) {
    level.push_back(Matrix::identity(d.dims.dim_v(i)));
    total += level.back().cols();
  }
  while (total > 0) {
    std::vector<Matrix> next;
    for (std::size_t j = 0; j < q.vertices(); ++j) next.emplace_back(d.dims.dim_v(j), 0);
    for (const auto& a : q.arrows()) next[a.in] = hstack(next[a.in], d.B[a.id] * level[a.out]);
    std::size_t next_total = 0;
    for (auto& m : next) {
      m = column_space_basis(m);
      next_total += m.cols();
    }
    if (next_total == total) return false;  // the filtration is decreasing, so it stalled at a nonzero space
    total = next_total;
    level = std::move(next);
  }
  return true;
}

/// dim X(W;nu) - 2 dim G(nu) against ||lambda||^2 - ||lambda + nu||^2.
struct DimensionIdentity {
  Int lhs;
  Rational rhs;
  bool equal;
};

inline DimensionIdentity dimension_identity(const CartanDatum& c, const DoubledQuiver& q, const GradedDims& dims) {
  c.require_finite("dimension_identity");
  check_dims(q, dims);
  Int lhs = 0;
  for (const auto& a : q.arrows()) lhs += dims.v[a.out] * dims.v[a.in];
  for (std::size_t i = 0; i < q.vertices(); ++i) lhs += 2 * dims.v[i] * dims.w[i] - 2 * dims.v[i] * dims.v[i];
  const Rational rhs = norm_squared(c, dims.lambda()) - norm_squared(c, dims.weight());
  return {lhs, rhs, Rational(static_cast<long>(lhs)) == rhs};
}

namespace detail {

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace detail

inline constexpr std::size_t kSampleRetries = 32;

/// A stable point of the Lagrangian locus: s = 0, B supported on the
/// orientation (so B is nilpotent and mu = 0 on a forest), and random integer
/// blocks on the orientation and t. Retries until stable.
inline ADHMDatum sample_lagrangian_point(const DoubledQuiver& q, const GradedDims& dims, std::uint64_t seed,
                                         std::size_t retries = kSampleRetries) {
  check_dims(q, dims);
  if (!q.is_forest()) throw InputError("quiver-forest", "Lagrangian sampler needs a forest-shaped quiver");
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt < retries; ++attempt) {
    ADHMDatum d = ADHMDatum::zero(q, dims);
    for (const auto& a : q.arrows())
      if (a.in_orientation) d.B[a.id] = detail::random_matrix(rng, dims.dim_v(a.in), dims.dim_v(a.out), -3, 3);
    for (std::size_t i = 0; i < q.vertices(); ++i) d.t[i] = detail::random_matrix(rng, dims.dim_w(i), dims.dim_v(i), -3, 3);
    if (is_stable(q, d).stable) {
      if (!moment_map_vanishes(q, d) || !is_nilpotent(q, d)) {
        throw InternalError("lagrangian-sample", "sampled point is not in the Lagrangian locus");
      }
      return d;
    }
  }
  throw ExhaustedError("stability", "no stable point found within " + std::to_string(retries) + " attempts");
}

/// Random invertible g with small integer entries.
inline GroupElement random_group_element(const GradedDims& dims, std::mt19937_64& rng) {
  GroupElement g;
  for (std::size_t i = 0; i < dims.rank(); ++i) {
    const std::size_t n = dims.dim_v(i);
    for (;;) {
      Matrix m = detail::random_matrix(rng, n, n, -2, 2);
      if (sgn(determinant(m)) != 0) {
        g.g.push_back(std::move(m));
        break;
      }
    }
  }
  return g;
}

/// Random point of X(W;nu) with small integer entries; each block is zero with
/// probability 1/4 so that degenerate configurations occur.
inline ADHMDatum random_datum(const DoubledQuiver& q, const GradedDims& dims, std::mt19937_64& rng) {
  ADHMDatum d = ADHMDatum::zero(q, dims);
  std::bernoulli_distribution keep(0.75);
  for (auto& m : d.B)
    if (keep(rng)) m = detail::random_matrix(rng, m.rows(), m.cols(), -2, 2);
  for (auto& m : d.t)
    if (keep(rng)) m = detail::random_matrix(rng, m.rows(), m.cols(), -2, 2);
  for (auto& m : d.s)
    if (keep(rng)) m = detail::random_matrix(rng, m.rows(), m.cols(), -2, 2);
  return d;
}

}  // namespace qcrys
