#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "quiver.hpp"

namespace qcrys {

/// Tangent vectors at a datum are data of the same dims; these helpers
/// identify them with column vectors, blocks in the order B (by arrow id),
/// t, s, entries row-major.
inline std::size_t tangent_dimension(const DoubledQuiver& q, const GradedDims& dims) {
  std::size_t n = 0;
  for (const auto& a : q.arrows()) n += dims.dim_v(a.in) * dims.dim_v(a.out);
  for (std::size_t i = 0; i < q.vertices(); ++i) n += 2 * dims.dim_v(i) * dims.dim_w(i);
  return n;
}

inline Matrix flatten(const ADHMDatum& d) {
  std::vector<const Matrix*> blocks;
  for (const auto& m : d.B) blocks.push_back(&m);
  for (const auto& m : d.t) blocks.push_back(&m);
  for (const auto& m : d.s) blocks.push_back(&m);
  std::size_t n = 0;
  for (const auto* m : blocks) n += m->rows() * m->cols();
  Matrix x(n, 1);
  std::size_t k = 0;
  for (const auto* m : blocks)
    for (std::size_t r = 0; r < m->rows(); ++r)
      for (std::size_t c = 0; c < m->cols(); ++c) x(k++, 0) = (*m)(r, c);
  return x;
}

inline ADHMDatum unflatten(const DoubledQuiver& q, const GradedDims& dims, const Matrix& x) {
  ADHMDatum d = ADHMDatum::zero(q, dims);
  if (x.cols() != 1 || x.rows() != tangent_dimension(q, dims)) {
    throw InputError("tangent-shape", "vector of shape " + x.shape() + " does not match the datum");
  }
  std::size_t k = 0;
  auto fill = [&](Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = x(k++, 0);
  };
  for (auto& m : d.B) fill(m);
  for (auto& m : d.t) fill(m);
  for (auto& m : d.s) fill(m);
  return d;
}

/// Lie algebra elements xi = (xi_i) of G(nu), flattened block by block.
inline std::size_t group_dimension(const GradedDims& dims) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < dims.rank(); ++i) n += dims.dim_v(i) * dims.dim_v(i);
  return n;
}

inline std::vector<Matrix> unflatten_algebra(const GradedDims& dims, const Matrix& x) {
  std::vector<Matrix> xi;
  std::size_t k = 0;
  for (std::size_t i = 0; i < dims.rank(); ++i) {
    Matrix m(dims.dim_v(i), dims.dim_v(i));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = x(k++, 0);
    xi.push_back(std::move(m));
  }
  return xi;
}

inline Matrix flatten_algebra(const std::vector<Matrix>& xi) {
  std::size_t n = 0;
  for (const auto& m : xi) n += m.rows() * m.cols();
  Matrix x(n, 1);
  std::size_t k = 0;
  for (const auto& m : xi)
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) x(k++, 0) = m(r, c);
  return x;
}

/// Derivative of the action at d: (xi_in B - B xi_out, -t xi, xi s).
inline ADHMDatum infinitesimal_action(const DoubledQuiver& q, const ADHMDatum& d, const std::vector<Matrix>& xi) {
  check_shapes(q, d);
  ADHMDatum a = d;
  for (const auto& arr : q.arrows()) a.B[arr.id] = xi[arr.in] * d.B[arr.id] - d.B[arr.id] * xi[arr.out];
  for (std::size_t i = 0; i < q.vertices(); ++i) {
    a.t[i] = Rational(-1) * (d.t[i] * xi[i]);
    a.s[i] = xi[i] * d.s[i];
  }
  return a;
}

/// Derivative of mu at d in the direction x.
inline std::vector<Matrix> moment_map_derivative(const DoubledQuiver& q, const ADHMDatum& d, const ADHMDatum& x) {
  check_shapes(q, d);
  check_shapes(q, x);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < q.vertices(); ++i) out.push_back(x.s[i] * d.t[i] + d.s[i] * x.t[i]);
  for (const auto& a : q.arrows()) {
    out[a.out] += Rational(a.sign) * (x.B[a.bar] * d.B[a.id] + d.B[a.bar] * x.B[a.id]);
  }
  return out;
}

/// Matrix of d mu at d with respect to the flattened coordinates.
inline Matrix moment_map_jacobian(const DoubledQuiver& q, const ADHMDatum& d) {
  const std::size_t n = tangent_dimension(q, d.dims);
  Matrix jac(group_dimension(d.dims), 0);
  for (std::size_t k = 0; k < n; ++k) {
    Matrix e(n, 1);
    e(k, 0) = 1;
    jac = hstack(jac, flatten_algebra(moment_map_derivative(q, d, unflatten(q, d.dims, e))));
  }
  return jac;
}

struct FreeActionReport {
  std::size_t stabilizer_dim;
  std::size_t moment_rank;
  std::size_t group_dim;  // sum v_i^2, the expected rank

  bool ok() const { return stabilizer_dim == 0 && moment_rank == group_dim; }
};

/// (a) dimension of the infinitesimal stabilizer {xi : xi . d = 0};
/// (b) rank of d mu at d.
inline FreeActionReport free_action_checks(const DoubledQuiver& q, const ADHMDatum& d) {
  check_shapes(q, d);
  const std::size_t g = group_dimension(d.dims);
  Matrix action(tangent_dimension(q, d.dims), 0);
  for (std::size_t k = 0; k < g; ++k) {
    Matrix e(g, 1);
    e(k, 0) = 1;
    action = hstack(action, flatten(infinitesimal_action(q, d, unflatten_algebra(d.dims, e))));
  }
  return {g - rank(action), rank(moment_map_jacobian(q, d)), g};
}

/// Basis (columns) of the kernel of d mu at d, in flattened coordinates.
inline Matrix moment_map_kernel(const DoubledQuiver& q, const ADHMDatum& d) {
  return kernel_basis(moment_map_jacobian(q, d));
}

namespace detail {

inline void require_point(const DoubledQuiver& q, const ADHMDatum& d, std::size_t i, const char* op) {
  check_shapes(q, d);
  if (i >= q.vertices()) throw InputError("index-range", std::string(op) + ": vertex out of range");
  if (!moment_map_vanishes(q, d)) throw InputError("moment-map", std::string(op) + " needs mu(d) = 0");
  if (!is_stable(q, d).stable) throw InputError("stability", std::string(op) + " needs a stable point");
}

inline void verify_move(const DoubledQuiver& q, const ADHMDatum& d, std::size_t i, std::size_t expected_eps,
                        const char* op) {
  if (!moment_map_vanishes(q, d)) throw InternalError(op, "result has mu != 0");
  if (!is_stable(q, d).stable) throw InternalError(op, "result is not stable");
  if (eps_i(q, d, i) != expected_eps) throw InternalError(op, "result has the wrong eps_i");
}

}  // namespace detail

struct ShrinkResult {
  ADHMDatum datum;
  Matrix inclusion;  // columns: basis of the retained subspace of V_i
};

/// Restricts V_i to the image of the maps into i plus the first standard
/// basis vectors needed to reach dimension v_i - k.
inline ShrinkResult shrink_i(const DoubledQuiver& q, const ADHMDatum& d, std::size_t i, std::size_t k) {
  detail::require_point(q, d, i, "shrink_i");
  const std::size_t c = eps_i(q, d, i);
  if (k > c) throw InputError("move-range", "shrink_i needs 0 <= k <= eps_i = " + std::to_string(c));
  const std::size_t vi = d.dims.dim_v(i);
  const Matrix p = complete_with_standard(column_space_basis(into_vertex_map(q, d, i)), vi - k);

  ADHMDatum out = d;
  out.dims.v[i] -= static_cast<Int>(k);
  for (const auto& a : q.arrows()) {
    if (a.in == i) out.B[a.id] = solve_in_basis(p, d.B[a.id]);
    if (a.out == i) out.B[a.id] = d.B[a.id] * p;
  }
  out.s[i] = solve_in_basis(p, d.s[i]);
  out.t[i] = d.t[i] * p;
  detail::verify_move(q, out, i, c - k, "shrink_i");
  return {std::move(out), p};
}

/// Ker of (u, w) -> sum_{out(tau)=i} sign(tau) B_{bar tau} u_tau + s_i w on
/// (+)_{out(tau)=i} V_in(tau) (+) W_i.
inline Matrix out_kernel(const DoubledQuiver& q, const ADHMDatum& d, std::size_t i) {
  check_shapes(q, d);
  Matrix m(d.dims.dim_v(i), 0);
  for (auto id : q.arrows_out_of(i)) m = hstack(m, Rational(q.arrow(id).sign) * d.B[q.arrow(id).bar]);
  return kernel_basis(hstack(m, d.s[i]));
}

/// V_i -> (+)_{out(tau)=i} V_in(tau) (+) W_i,  x -> (B_tau x, t_i x).
inline Matrix out_of_vertex_map(const DoubledQuiver& q, const ADHMDatum& d, std::size_t i) {
  Matrix m(0, d.dims.dim_v(i));
  for (auto id : q.arrows_out_of(i)) m = vstack(m, d.B[id]);
  return vstack(m, d.t[i]);
}

struct ExtendResult {
  ADHMDatum datum;
  std::size_t kernel_dim;
};

inline constexpr std::size_t kExtendRetries = 64;

/// Enlarges V_i by l: maps into i are extended by zero on the new summand,
/// the maps out of i on it are l random vectors of out_kernel chosen so that
/// the out-of-i map stays injective.
inline ExtendResult extend_i(const DoubledQuiver& q, const ADHMDatum& d, std::size_t i, std::size_t l,
                             std::uint64_t seed, std::size_t retries = kExtendRetries) {
  detail::require_point(q, d, i, "extend_i");
  const std::size_t c = eps_i(q, d, i);
  const Int room = static_cast<Int>(c) + weight_pairing(q, d.dims, i);
  const Matrix kernel = out_kernel(q, d, i);
  if (static_cast<Int>(l) > room) {
    throw InputError("move-range", "extend_i needs 0 <= l <= eps_i + <h_i, lambda+nu> = " + std::to_string(room));
  }
  if (l == 0) return {d, kernel.cols()};

  const Matrix base = out_of_vertex_map(q, d, i);
  const std::size_t vi = d.dims.dim_v(i);
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt < retries; ++attempt) {
    const Matrix coeffs = detail::random_matrix(rng, kernel.cols(), l, -3, 3);
    const Matrix fresh = kernel * coeffs;
    if (rank(hstack(base, fresh)) != vi + l) continue;

    ADHMDatum out = d;
    out.dims.v[i] += static_cast<Int>(l);
    std::size_t row = 0;
    for (auto id : q.arrows_out_of(i)) {
      const std::size_t h = d.B[id].rows();
      out.B[id] = hstack(d.B[id], fresh.row_block(row, h));
      row += h;
    }
    out.t[i] = hstack(d.t[i], fresh.row_block(row, d.t[i].rows()));
    for (auto id : q.arrows_into(i)) out.B[id] = vstack(d.B[id], Matrix(l, d.B[id].cols()));
    out.s[i] = vstack(d.s[i], Matrix(l, d.s[i].cols()));
    if (!is_stable(q, out).stable) continue;
    detail::verify_move(q, out, i, c + l, "extend_i");
    return {std::move(out), kernel.cols()};
  }
  throw ExhaustedError("extend-retries", "no admissible extension found within " + std::to_string(retries) + " attempts");
}

}  // namespace qcrys
