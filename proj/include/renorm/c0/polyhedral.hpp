#pragma once

#include "renorm/c0/schedule.hpp"
#include "renorm/coords.hpp"
#include "renorm/norm_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace renorm::c0 {

enum class PolyKind { one, inf };

inline const char* to_string(PolyKind k) { return k == PolyKind::one ? "one" : "inf"; }

inline constexpr std::size_t default_depth_cap = 10;

namespace detail {

inline void check_depth(const ParamSchedule& P, PolyKind kind, std::size_t n)
{
  if (n < 1 || n > P.depth()) throw std::out_of_range("polyhedral norm: depth outside [1, schedule depth]");
  if (kind == PolyKind::one && n < 2) throw std::out_of_range("polyhedral norm: kind one starts at depth 2");
}

} // namespace detail

/// ⦀x⦀_{kind,n} through the recursion
///   ⦀x⦀_{∞,1} = |x_1|,
///   ⦀x⦀_{1,n} = ⦀P_{n−1}x⦀_{∞,n−1}/w_n + |x_n|/h_n,
///   ⦀x⦀_{∞,n} = max{⦀x⦀_{1,n}, ⦀P_{n−1}x⦀_{∞,n−1}, |x_n|}.
/// Only coordinates 1..n are read.
inline double polyhedral_eval(const ParamSchedule& P, PolyKind kind, std::size_t n, const CoordVector& x)
{
  detail::check_depth(P, kind, n);
  double inf = std::abs(x.coord(1));
  for (std::size_t k = 2; k <= n; ++k) {
    const double xk = std::abs(x.coord(k));
    const double one = inf / P.w(k) + xk / P.h(k);
    if (k == n && kind == PolyKind::one) return one;
    inf = std::max({one, inf, xk});
  }
  return inf;
}

/// Symmetric list of functionals u_j on ℝ^n with ⦀x⦀ = max_j |<u_j, x>|.
///
/// Rows of `rows` are the functionals; both u and −u are stored.
struct FunctionalList
{
  Eigen::MatrixXd rows;

  std::size_t size() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(rows.cols()); }

  Eigen::VectorXd values(const CoordVector& x) const { return rows * x.truncated(dim()).dense(); }

  double max_abs(const CoordVector& x) const { return size() == 0 ? 0.0 : values(x).cwiseAbs().maxCoeff(); }

  std::vector<CoordFunctional> functionals() const
  {
    std::vector<CoordFunctional> out;
    out.reserve(size());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) out.emplace_back(Eigen::VectorXd(rows.row(i).transpose()));
    return out;
  }
};

namespace detail {

inline Eigen::MatrixXd extend(const Eigen::MatrixXd& m, Eigen::Index cols)
{
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), cols);
  out.leftCols(m.cols()) = m;
  return out;
}

inline Eigen::MatrixXd inf_rows(const ParamSchedule& P, std::size_t n);

inline Eigen::MatrixXd one_rows(const ParamSchedule& P, std::size_t n, const Eigen::MatrixXd& prev_inf)
{
  const auto cols = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd base = extend(prev_inf, cols) / P.w(n);
  Eigen::MatrixXd out(2 * base.rows(), cols);
  for (Eigen::Index i = 0; i < base.rows(); ++i)
    for (int s = 0; s < 2; ++s) {
      Eigen::RowVectorXd r = base.row(i);
      r[cols - 1] = (s == 0 ? 1.0 : -1.0) / P.h(n);
      out.row(2 * i + s) = r;
    }
  return out;
}

inline Eigen::MatrixXd inf_rows(const ParamSchedule& P, std::size_t n)
{
  if (n == 1) {
    Eigen::MatrixXd m(2, 1);
    m << 1.0, -1.0;
    return m;
  }
  const auto cols = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd prev = inf_rows(P, n - 1);
  const Eigen::MatrixXd one = one_rows(P, n, prev);
  Eigen::MatrixXd out(one.rows() + prev.rows() + 2, cols);
  out.topRows(one.rows()) = one;
  out.middleRows(one.rows(), prev.rows()) = extend(prev, cols);
  out.bottomRows(2).setZero();
  out(out.rows() - 2, cols - 1) = 1.0;
  out(out.rows() - 1, cols - 1) = -1.0;
  return out;
}

} // namespace detail

/// Explicit generating functionals of ⦀·⦀_{kind,n}.
///
/// The inf list has 3^n − 1 members, so depth is capped.
inline FunctionalList functional_list(const ParamSchedule& P, PolyKind kind, std::size_t n,
                                      std::size_t depth_cap = default_depth_cap)
{
  detail::check_depth(P, kind, n);
  if (n > depth_cap) throw std::length_error("functional_list: depth cap exceeded");
  if (kind == PolyKind::inf) return {detail::inf_rows(P, n)};
  return {detail::one_rows(P, n, detail::inf_rows(P, n - 1))};
}

/// Oracle for ⦀·⦀_{kind,n} against ℓ∞: ‖x‖∞ ≤ ⦀x⦀_{∞,n} ≤ c_n‖x‖∞ and
/// min(1/w_n, 1/h_n)‖x‖∞ ≤ ⦀x⦀_{1,n} ≤ c_n‖x‖∞.
inline NormOracle polyhedral_oracle(const ParamSchedule& P, PolyKind kind, std::size_t n)
{
  detail::check_depth(P, kind, n);
  const double lo = kind == PolyKind::inf ? 1.0 : std::min(1.0 / P.w(n), 1.0 / P.h(n));
  return {[P, kind, n](const CoordVector& x) { return polyhedral_eval(P, kind, n, x); }, lo, P.c(n),
          std::string("poly_") + to_string(kind) + "_" + std::to_string(n), Reference::linf};
}

} // namespace renorm::c0
