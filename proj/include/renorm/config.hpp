#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace renorm {

/// A membership predicate does not describe a bounded convex body with 0 inside.
struct invalid_set_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// No feasible configuration exists for a probe constraint.
struct infeasible_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// A construction invariant (inequality family, bracket, identity) failed.
struct invariant_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct ToleranceConfig
{
  double gauge_tol = 1e-10;
  /// Objective evaluations per ascent start.
  int optimizer_budget = 400;
  /// Random restarts added to the deterministic seed starts.
  int random_starts = 8;
  std::uint64_t rng_seed = 20240601;

  void validate() const
  {
    if (!(gauge_tol > 0.0)) throw std::invalid_argument("gauge_tol must be positive");
    if (optimizer_budget <= 0) throw std::invalid_argument("optimizer_budget must be positive");
    if (random_starts < 0) throw std::invalid_argument("random_starts must be nonnegative");
  }
};

using Rng = std::mt19937_64;

/// Independent stream for restart `stream` of a run seeded with `seed`.
inline Rng derived_rng(std::uint64_t seed, std::uint64_t stream)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

} // namespace renorm
