#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace renorm {

struct VectorTag {};
struct FunctionalTag {};

/// Finitely supported real sequence (x_1, x_2, ..., x_N, 0, 0, ...).
///
/// Coordinates are 1-based, matching the canonical basis e_1, e_2, ...
/// Storage is dense up to the dimension bound; reading past it yields 0,
/// so values of different bounds combine as the sequences they represent.
template <class Tag>
class Coords
{
public:
  Coords() = default;
  explicit Coords(std::size_t dim) : values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))) {}
  explicit Coords(Eigen::VectorXd values) : values_(std::move(values)) {}
  Coords(std::initializer_list<double> values)
    : values_(static_cast<Eigen::Index>(values.size()))
  {
    Eigen::Index i = 0;
    for (double v : values) values_[i++] = v;
  }

  /// Builds from (index, value) entries; repeated indices are rejected.
  static Coords from_entries(std::size_t dim, const std::vector<std::pair<std::size_t, double>>& entries)
  {
    Coords out(dim);
    std::vector<bool> seen(dim + 1, false);
    for (const auto& [k, v] : entries) {
      if (k == 0 || k > dim) throw std::out_of_range("coordinate index outside [1, dim]");
      if (seen[k]) throw std::invalid_argument("duplicate coordinate index");
      seen[k] = true;
      out.values_[static_cast<Eigen::Index>(k - 1)] = v;
    }
    return out;
  }

  std::size_t dim() const { return static_cast<std::size_t>(values_.size()); }

  double coord(std::size_t k) const
  {
    if (k == 0) throw std::out_of_range("coordinates are 1-based");
    return k <= dim() ? values_[static_cast<Eigen::Index>(k - 1)] : 0.0;
  }

  void set_coord(std::size_t k, double v)
  {
    if (k == 0) throw std::out_of_range("coordinates are 1-based");
    if (k > dim()) resize(k);
    values_[static_cast<Eigen::Index>(k - 1)] = v;
  }

  const Eigen::VectorXd& dense() const { return values_; }

  /// Largest index carrying a nonzero value; 0 for the zero sequence.
  std::size_t support_max() const
  {
    for (std::size_t k = dim(); k > 0; --k)
      if (values_[static_cast<Eigen::Index>(k - 1)] != 0.0) return k;
    return 0;
  }

  bool is_zero() const { return support_max() == 0; }

  /// Canonical form: nonzero entries in increasing index order.
  std::vector<std::pair<std::size_t, double>> entries() const
  {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t k = 1; k <= dim(); ++k)
      if (double v = values_[static_cast<Eigen::Index>(k - 1)]; v != 0.0) out.emplace_back(k, v);
    return out;
  }

  /// P_n: keeps coordinates 1..n (zero-padded when n exceeds the bound).
  Coords truncated(std::size_t n) const
  {
    Coords out(n);
    const auto m = static_cast<Eigen::Index>(std::min(n, dim()));
    out.values_.head(m) = values_.head(m);
    return out;
  }

  Coords padded(std::size_t n) const { return n <= dim() ? *this : truncated(n); }

  void resize(std::size_t n) { *this = truncated(n); }

  double norm2() const { return values_.norm(); }
  double norm1() const { return values_.lpNorm<1>(); }
  double norm_inf() const { return values_.size() == 0 ? 0.0 : values_.lpNorm<Eigen::Infinity>(); }

  Coords& operator+=(const Coords& o) { return combine(o, 1.0); }
  Coords& operator-=(const Coords& o) { return combine(o, -1.0); }
  Coords& operator*=(double s)
  {
    values_ *= s;
    return *this;
  }

  friend Coords operator+(Coords a, const Coords& b) { return a += b; }
  friend Coords operator-(Coords a, const Coords& b) { return a -= b; }
  friend Coords operator-(Coords a) { return a *= -1.0; }
  friend Coords operator*(double s, Coords a) { return a *= s; }
  friend Coords operator*(Coords a, double s) { return a *= s; }
  friend Coords operator/(Coords a, double s) { return a *= 1.0 / s; }

  /// Coordinate-wise equality of the represented sequences.
  friend bool operator==(const Coords& a, const Coords& b)
  {
    const std::size_t n = std::max(a.dim(), b.dim());
    for (std::size_t k = 1; k <= n; ++k)
      if (a.coord(k) != b.coord(k)) return false;
    return true;
  }

  /// Linear combination a·self + b·o without temporaries of mismatched size.
  Coords& axpy(double s, const Coords& o) { return combine(o, s); }

private:
  Coords& combine(const Coords& o, double s)
  {
    if (o.dim() > dim()) resize(o.dim());
    values_.head(o.values_.size()) += s * o.values_;
    return *this;
  }

  Eigen::VectorXd values_;
};

using CoordVector = Coords<VectorTag>;
using CoordFunctional = Coords<FunctionalTag>;

/// e_k (or e_k^*) with dimension bound dim.
template <class C = CoordVector>
C unit(std::size_t dim, std::size_t k)
{
  C out(dim);
  out.set_coord(k, 1.0);
  return out;
}

/// <φ, x> = Σ φ_i x_i over the common support.
inline double pairing(const CoordFunctional& phi, const CoordVector& x)
{
  const auto m = static_cast<Eigen::Index>(std::min(phi.dim(), x.dim()));
  return phi.dense().head(m).dot(x.dense().head(m));
}

/// Riesz identification in the coordinate model (ℓ2 is self-dual).
inline CoordFunctional as_functional(const CoordVector& x) { return CoordFunctional(x.dense()); }
inline CoordVector as_vector(const CoordFunctional& f) { return CoordVector(f.dense()); }

} // namespace renorm
