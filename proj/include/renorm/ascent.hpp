#pragma once

#include "renorm/config.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace renorm {

/// Parameter layout: `blocks` consecutive blocks of `block_dim` entries, each
/// kept on the ℓ2 unit sphere.
struct SphereProduct
{
  int blocks = 1;
  int block_dim = 1;

  int size() const { return blocks * block_dim; }

  void normalize(Eigen::VectorXd& p) const
  {
    for (int b = 0; b < blocks; ++b) {
      auto seg = p.segment(b * block_dim, block_dim);
      const double n = seg.norm();
      if (n > 0.0) seg /= n;
    }
  }

  Eigen::VectorXd random_point(Rng& rng) const
  {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd p(size());
    for (int i = 0; i < size(); ++i) p[i] = g(rng);
    normalize(p);
    return p;
  }
};

struct AscentOptions
{
  int budget = 400;      ///< objective evaluations per refined start
  int refine = 4;        ///< best seed starts that get refined
  int random_starts = 8;
  double sigma0 = 0.25;
  double sigma_min = 1e-9;
  std::uint64_t seed = 0;
};

struct AscentResult
{
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd arg;
  long evaluations = 0;
};

/// Multi-start (1+1)-ES with the one-fifth success rule on a product of spheres.
///
/// Every seed start is scored once; the best `refine` of them and
/// `random_starts` random points are then climbed. Each climb draws from its
/// own derived stream, so results do not depend on evaluation order.
template <class Objective>
AscentResult maximize_on_spheres(const Objective& objective, const SphereProduct& space,
                                 std::vector<Eigen::VectorXd> seeds, const AscentOptions& opt)
{
  AscentResult best;
  auto score = [&](const Eigen::VectorXd& p) {
    const double v = objective(p);
    ++best.evaluations;
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  };
  auto offer = [&](double v, const Eigen::VectorXd& p) {
    if (v > best.value) {
      best.value = v;
      best.arg = p;
    }
  };

  std::vector<std::pair<double, Eigen::VectorXd>> scored;
  scored.reserve(seeds.size());
  for (auto& s : seeds) {
    space.normalize(s);
    const double v = score(s);
    offer(v, s);
    scored.emplace_back(v, s);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<std::pair<double, Eigen::VectorXd>> starts;
  for (std::size_t i = 0; i < scored.size() && static_cast<int>(i) < opt.refine; ++i) starts.push_back(scored[i]);
  for (int r = 0; r < opt.random_starts; ++r) {
    Rng rng = derived_rng(opt.seed, 1000 + static_cast<std::uint64_t>(r));
    Eigen::VectorXd p = space.random_point(rng);
    const double v = score(p);
    offer(v, p);
    starts.emplace_back(v, std::move(p));
  }

  const double up = 1.5, down = std::pow(1.5, -0.25);
  for (std::size_t k = 0; k < starts.size(); ++k) {
    auto [fp, p] = starts[k];
    Rng rng = derived_rng(opt.seed, k);
    std::normal_distribution<double> g(0.0, 1.0);
    double sigma = opt.sigma0;
    for (int e = 0; e < opt.budget && sigma > opt.sigma_min; ++e) {
      Eigen::VectorXd c = p;
      for (int i = 0; i < c.size(); ++i) c[i] += sigma * g(rng);
      space.normalize(c);
      const double fc = score(c);
      if (fc > fp) {
        fp = fc;
        p = std::move(c);
        sigma *= up;
      } else {
        sigma *= down;
      }
    }
    offer(fp, p);
  }
  return best;
}

} // namespace renorm
