#pragma once

#include "renorm/renorm.hpp"
#include "renorm/report/records.hpp"
#include "renorm/report/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace renorm::report {

enum class Scenario { thmA, thmB, thmC, smooth_c0, oracles };

inline const char* to_string(Scenario s)
{
  switch (s) {
    case Scenario::thmA: return "thmA";
    case Scenario::thmB: return "thmB";
    case Scenario::thmC: return "thmC";
    case Scenario::smooth_c0: return "smooth-c0";
    case Scenario::oracles: return "oracles";
  }
  return "?";
}

inline Scenario parse_scenario(const std::string& s)
{
  for (auto k : {Scenario::thmA, Scenario::thmB, Scenario::thmC, Scenario::smooth_c0, Scenario::oracles})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown scenario '" + s + "' (expected thmA, thmB, thmC, smooth-c0 or oracles)");
}

/// Everything a run depends on. Defaults are per scenario; see defaults_for.
struct ScenarioConfig
{
  Scenario scenario = Scenario::thmA;
  double delta = 0.1;
  std::size_t truncation = 40;
  std::size_t n_max = 20;
  std::uint64_t seed = 20240601;
  std::string out_dir = "out";

  double gauge_tol = 1e-10;
  int optimizer_budget = 400;
  int random_starts = 8;

  // Theorem scenarios.
  std::vector<std::size_t> trend_truncations{8, 16, 32};
  double probe_gap = 1e-3;
  std::size_t direction_count = 20;
  double direction_separation = 1.0;
  std::size_t segment_points = 20;
  std::size_t coincidence_samples = 1000;

  // smooth-c0.
  std::size_t sandwich_samples = 10000;
  std::size_t gradient_points = 100;
  std::size_t dual_samples = 10000;

  // oracles.
  std::size_t q_pairs = 10000;
  std::size_t q_dim = 16;
  std::size_t convexity_samples = 2000;

  int figure_resolution = 720;

  ToleranceConfig tolerances() const
  {
    ToleranceConfig t;
    t.gauge_tol = gauge_tol;
    t.optimizer_budget = optimizer_budget;
    t.random_starts = random_starts;
    t.rng_seed = seed;
    return t;
  }

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

inline bool is_theorem(Scenario s) { return s == Scenario::thmA || s == Scenario::thmB || s == Scenario::thmC; }

inline slice::TheoremKind theorem_kind(Scenario s)
{
  switch (s) {
    case Scenario::thmA: return slice::TheoremKind::A;
    case Scenario::thmB: return slice::TheoremKind::B;
    case Scenario::thmC: return slice::TheoremKind::C;
    default: throw std::invalid_argument("theorem_kind: not a theorem scenario");
  }
}

inline ScenarioConfig defaults_for(Scenario s)
{
  ScenarioConfig c;
  c.scenario = s;
  if (s == Scenario::smooth_c0) {
    c.delta = 0.25;
    c.truncation = 8;
    c.n_max = 8;
  } else if (s == Scenario::oracles) {
    c.delta = 0.1;
    c.truncation = 8;
    c.n_max = 8;
  } else {
    c.n_max = std::min(c.n_max, slice::model_capacity(theorem_kind(s), c.truncation));
  }
  return c;
}

inline void ScenarioConfig::validate() const
{
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid config: " + what); };
  if (!(gauge_tol > 0.0 && gauge_tol <= 1e-6)) fail("gauge_tol must lie in (0, 1e-6]");
  if (optimizer_budget <= 0) fail("optimizer_budget must be positive");
  if (random_starts < 0) fail("random_starts must be nonnegative");
  if (figure_resolution < 64 || figure_resolution > 100000) fail("figure_resolution must lie in [64, 100000]");
  if (out_dir.empty()) fail("out_dir must not be empty");

  if (is_theorem(scenario)) {
    const auto kind = theorem_kind(scenario);
    if (!slice::admissible_delta(delta)) fail("delta must satisfy 0 < delta < 1 and (1-delta)^4 > 1/2");
    if (truncation < 4) fail("truncation must be at least 4");
    const std::size_t cap = slice::model_capacity(kind, truncation);
    if (n_max < 1 || n_max > cap)
      fail("n_max must lie in [1, " + std::to_string(cap) + "] for truncation " + std::to_string(truncation));
    if (trend_truncations.empty()) fail("trend_truncations must not be empty");
    for (std::size_t i = 0; i < trend_truncations.size(); ++i) {
      if (slice::model_capacity(kind, trend_truncations[i]) < 1 || trend_truncations[i] < 4)
        fail("trend_truncations entries must admit at least one tuple");
      if (i && trend_truncations[i] <= trend_truncations[i - 1]) fail("trend_truncations must increase");
    }
    if (!(probe_gap > 0.0 && probe_gap < 1.0)) fail("probe_gap must lie in (0, 1)");
    if (direction_count < 1) fail("direction_count must be positive");
    if (!(direction_separation > 0.0 && direction_separation < 2.0)) fail("direction_separation must lie in (0, 2)");
    if (segment_points < 2) fail("segment_points must be at least 2");
    if (coincidence_samples < 1) fail("coincidence_samples must be positive");
  } else if (scenario == Scenario::smooth_c0) {
    if (!(delta > 0.0 && delta <= 0.25)) fail("delta must lie in (0, 1/4]");
    if (truncation < 2 || truncation > c0::default_depth_cap) fail("truncation (depth) must lie in [2, 10]");
    if (n_max < 2 || n_max > truncation) fail("n_max must lie in [2, truncation]");
    if (sandwich_samples < 1) fail("sandwich_samples must be positive");
    if (gradient_points < 1) fail("gradient_points must be positive");
    if (dual_samples < 1) fail("dual_samples must be positive");
  } else {
    if (!slice::admissible_delta(delta) || delta > 0.25) fail("delta must satisfy (1-delta)^4 > 1/2");
    if (truncation < 3 || truncation > c0::default_depth_cap) fail("truncation must lie in [3, 10]");
    if (n_max < 2 || n_max > truncation) fail("n_max must lie in [2, truncation]");
    if (q_pairs < 1) fail("q_pairs must be positive");
    if (q_dim < 1) fail("q_dim must be positive");
    if (convexity_samples < 1000) fail("convexity_samples must be at least 1000");
  }
}

// JSON config: keys mirror the field names; unknown keys are rejected.

inline nlohmann::ordered_json to_json(const ScenarioConfig& c)
{
  nlohmann::ordered_json j;
  j["scenario"] = to_string(c.scenario);
  j["delta"] = c.delta;
  j["truncation"] = c.truncation;
  j["n_max"] = c.n_max;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["gauge_tol"] = c.gauge_tol;
  j["optimizer_budget"] = c.optimizer_budget;
  j["random_starts"] = c.random_starts;
  j["trend_truncations"] = c.trend_truncations;
  j["probe_gap"] = c.probe_gap;
  j["direction_count"] = c.direction_count;
  j["direction_separation"] = c.direction_separation;
  j["segment_points"] = c.segment_points;
  j["coincidence_samples"] = c.coincidence_samples;
  j["sandwich_samples"] = c.sandwich_samples;
  j["gradient_points"] = c.gradient_points;
  j["dual_samples"] = c.dual_samples;
  j["q_pairs"] = c.q_pairs;
  j["q_dim"] = c.q_dim;
  j["convexity_samples"] = c.convexity_samples;
  j["figure_resolution"] = c.figure_resolution;
  return j;
}

/// Overwrites the fields present in `j` (except scenario, handled by the caller).
inline void apply_json(ScenarioConfig& c, const nlohmann::json& j)
{
  if (!j.is_object()) throw std::invalid_argument("invalid config: top level must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "scenario") continue;
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "truncation") c.truncation = v.get<std::size_t>();
      else if (key == "n_max") c.n_max = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "out_dir") c.out_dir = v.get<std::string>();
      else if (key == "gauge_tol") c.gauge_tol = v.get<double>();
      else if (key == "optimizer_budget") c.optimizer_budget = v.get<int>();
      else if (key == "random_starts") c.random_starts = v.get<int>();
      else if (key == "trend_truncations") c.trend_truncations = v.get<std::vector<std::size_t>>();
      else if (key == "probe_gap") c.probe_gap = v.get<double>();
      else if (key == "direction_count") c.direction_count = v.get<std::size_t>();
      else if (key == "direction_separation") c.direction_separation = v.get<double>();
      else if (key == "segment_points") c.segment_points = v.get<std::size_t>();
      else if (key == "coincidence_samples") c.coincidence_samples = v.get<std::size_t>();
      else if (key == "sandwich_samples") c.sandwich_samples = v.get<std::size_t>();
      else if (key == "gradient_points") c.gradient_points = v.get<std::size_t>();
      else if (key == "dual_samples") c.dual_samples = v.get<std::size_t>();
      else if (key == "q_pairs") c.q_pairs = v.get<std::size_t>();
      else if (key == "q_dim") c.q_dim = v.get<std::size_t>();
      else if (key == "convexity_samples") c.convexity_samples = v.get<std::size_t>();
      else if (key == "figure_resolution") c.figure_resolution = v.get<int>();
      else throw std::invalid_argument("invalid config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument("invalid config: key '" + key + "' has the wrong type");
    }
  }
}

struct ScenarioResult
{
  ScenarioConfig config;
  Report report;
  std::vector<Table> tables;
  std::vector<std::string> figures; ///< paths relative to out_dir
  std::vector<std::string> errors;  ///< messages of steps that threw

  bool pass() const { return errors.empty() && report.all_pass(); }
};

namespace detail {

inline CoordVector random_box(Rng& rng, std::size_t dim)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoordVector x(dim);
  for (std::size_t k = 1; k <= dim; ++k) x.set_coord(k, u(rng));
  return x;
}

inline CoordVector random_sphere(Rng& rng, std::size_t dim)
{
  std::normal_distribution<double> g(0.0, 1.0);
  CoordVector x(dim);
  do {
    for (std::size_t k = 1; k <= dim; ++k) x.set_coord(k, g(rng));
  } while (x.norm2() == 0.0);
  return (1.0 / x.norm2()) * x;
}

inline std::string tag(const std::string& key, std::size_t v) { return "." + key + "=" + std::to_string(v); }

/// Runs a step; an exception becomes a failed record and an error message.
inline void guarded(ScenarioResult& out, const std::string& step, const std::function<void()>& body)
{
  try {
    body();
  } catch (const std::exception& e) {
    out.report.add({step + ".error", std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), false});
    out.errors.push_back(step + ": " + e.what());
  }
}

inline std::filesystem::path figure_path(const ScenarioConfig& c, const std::string& name)
{
  return std::filesystem::path(c.out_dir) / "figures" / name;
}

// Theorem scenarios.

inline void theorem_lemma(const ScenarioConfig& cfg, const slice::OmegaConfig& om, ScenarioResult& out)
{
  const std::string pre = to_string(cfg.scenario);
  const double gt = cfg.gauge_tol;
  Table t{"lemma_" + pre, {"n", "lambda", "lambda_lo", "lambda_hi", "segment_max_error"}, {}};
  double below = std::numeric_limits<double>::infinity(), above = -below, seg = 0.0;
  for (std::size_t n = 1; n <= cfg.n_max; ++n) {
    const auto& al = om.alpha(n);
    const auto k = slice::slice_constants(al, gt);
    double err = 0.0;
    for (std::size_t i = 0; i < cfg.segment_points; ++i) {
      const double s = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(cfg.segment_points - 1);
      CoordVector p = k.lambda0 * al.x0;
      p.axpy(s * (1.0 - k.lambda0) / al.C, al.h0);
      err = std::max(err, std::abs(slice::slice_norm_eval(al, p, gt) - 1.0));
    }
    below = std::min(below, k.lambda0 - k.lambda_lo);
    above = std::max(above, k.lambda0 - k.lambda_hi);
    seg = std::max(seg, err);
    t.add_row({static_cast<long long>(n), k.lambda0, k.lambda_lo, k.lambda_hi, err});
  }
  out.report.check_ge(pre + ".lemma_a.lambda_minus_lower_endpoint", below, 0.0);
  out.report.check_le(pre + ".lemma_a.lambda_minus_upper_endpoint", above, 0.0);
  out.report.check_le(pre + ".lemma_b.segment_norm_error", seg, 1e-9);

  Rng rng = derived_rng(cfg.seed, 0x1e33a);
  std::normal_distribution<double> g(0.0, 1.0);
  std::size_t hits = 0;
  double worst = 0.0;
  for (std::size_t draw = 0; hits < cfg.coincidence_samples && draw < 100 * cfg.coincidence_samples; ++draw) {
    const auto& al = om.alpha(1 + hits % cfg.n_max);
    CoordVector x(cfg.truncation);
    for (std::size_t k = 1; k <= cfg.truncation; ++k) x.set_coord(k, g(rng));
    const double nx = x.norm2();
    if (std::abs(pairing(al.f0, x)) > al.squeeze() * nx) continue;
    ++hits;
    worst = std::max(worst, std::abs(slice::slice_norm_eval(al, x, gt) - nx) / nx);
  }
  out.report.check_ge(pre + ".lemma_c.coincidence_samples", static_cast<double>(hits), static_cast<double>(cfg.coincidence_samples));
  out.report.check_le(pre + ".lemma_c.coincidence_relative_error", worst, 1e-12);
  out.tables.push_back(std::move(t));
}

inline slice::FailureTable theorem_witnesses(const ScenarioConfig& cfg, const slice::OmegaConfig& om, ScenarioResult& out)
{
  using slice::TheoremKind;
  const std::string pre = to_string(cfg.scenario);
  const auto kind = om.kind;
  const auto ft = slice::failure_report(om, cfg.n_max, cfg.gauge_tol);
  Table t{"failure_" + pre, {"n", "lambda", "norm_a", "norm_b", "norm_mid", "separation", "mid_lower"}, {}};
  double top = 0.0, mid_margin = std::numeric_limits<double>::infinity();
  double min_sep = std::numeric_limits<double>::infinity(), formula_err = 0.0, drift = 0.0;
  const double d = cfg.delta;
  for (const auto& r : ft.rows) {
    t.add_row({static_cast<long long>(r.n), r.lambda, r.norm_a, r.norm_b, r.norm_mid, r.separation, r.mid_lower});
    top = std::max({top, r.norm_a, r.norm_b, r.norm_mid});
    mid_margin = std::min(mid_margin, r.norm_mid - r.mid_lower);
    min_sep = std::min(min_sep, r.separation);
    const double formula = (kind == TheoremKind::A ? 2.0 : 1.0) * (1.0 - r.lambda) / (1.0 + d);
    formula_err = std::max(formula_err, std::abs(r.separation - formula));
    drift = std::max(drift, std::abs(r.separation - ft.rows.front().separation));
  }
  out.report.check_le(pre + ".witness.max_norm_of_a_b_mid", top, 1.0 + 1e-9);
  // mid_lower is 1/(1+η_n) = 1/(1+2^{-n}).
  out.report.check_ge(pre + ".witness.midpoint_minus_lower", mid_margin, -1e-12);
  out.report.check_true(pre + ".witness.midpoint_monotone", ft.midpoint_monotone);
  const double eps = slice::slice_epsilon(d, om.C);
  const double floor = (1.0 - 1.0 / std::sqrt(1.0 + eps)) / (1.0 + d);
  switch (kind) {
    case TheoremKind::A:
      out.report.check_le(pre + ".witness.separation_formula_error", formula_err, 1e-9);
      out.report.check_le(pre + ".witness.separation_drift", drift, 1e-9);
      break;
    case TheoremKind::B:
      out.report.check_ge(pre + ".witness.psi0_separation_minus_floor", min_sep - floor, -1e-9);
      break;
    case TheoremKind::C:
      out.report.check_le(pre + ".witness.separation_formula_error", formula_err, 1e-12);
      out.report.check_ge(pre + ".witness.separation_minus_floor", min_sep - floor, -1e-9);
      out.report.check_ge(pre + ".witness.separation_min", min_sep, std::numeric_limits<double>::min());
      break;
  }
  out.tables.push_back(std::move(t));
  return ft;
}

inline void theorem_trends(const ScenarioConfig& cfg, const slice::FailureTable& ft, ScenarioResult& out)
{
  using slice::TheoremKind;
  const std::string pre = to_string(cfg.scenario);
  const auto kind = theorem_kind(cfg.scenario);
  const ToleranceConfig tol = cfg.tolerances();

  if (kind != TheoremKind::B) {
    // Kind A probes along e1 (the h_n direction); kind C probes all directions.
    const double t = ft.rows.front().separation;
    Table tab{"trend_" + pre, {"truncation", "separation", "constraint", "value", "evaluations"}, {}};
    std::vector<double> values;
    for (std::size_t N : cfg.trend_truncations) {
      const auto om = slice::make_model_omega(kind, cfg.delta, N, tol);
      const auto c = kind == TheoremKind::A ? ProbeConstraint::along(unit(N, 1)) : ProbeConstraint::none();
      const auto r = midpoint_sup_probe(slice::omega_norm_oracle(om, cfg.gauge_tol), t, c, N, tol);
      values.push_back(r.value);
      tab.add_row({static_cast<long long>(N), t, std::string(kind == TheoremKind::A ? "direction_e1" : "none"), r.value,
                   static_cast<long long>(r.evaluations)});
    }
    for (std::size_t i = 1; i < values.size(); ++i)
      out.report.check_ge(pre + ".trend.increase" + tag("N", cfg.trend_truncations[i]), values[i] - values[i - 1], 0.0);
    out.report.check_ge(pre + ".trend.final_value", values.back(), 1.0 - cfg.probe_gap);
    out.tables.push_back(std::move(tab));
    return;
  }

  // Kind B: the witnesses only fail against ψ0; along fixed directions the
  // midpoint supremum stays below 1. The asserted separation is pinned in the
  // config; the witness separation is reported alongside, unasserted.
  const std::size_t N = cfg.trend_truncations.back();
  const auto om = slice::make_model_omega(kind, cfg.delta, N, tol);
  const auto norm = slice::omega_norm_oracle(om, cfg.gauge_tol);
  const auto w = slice::witness_pair(om, 1, cfg.gauge_tol);
  const double t_witness = (w.b - w.a).norm2();
  Table tab{"directions_" + pre, {"direction", "truncation", "separation", "asserted", "value", "evaluations"}, {}};
  Rng rng = derived_rng(cfg.seed, 0xd1ec);
  for (std::size_t i = 0; i < cfg.direction_count; ++i) {
    const CoordVector v = random_sphere(rng, N);
    const auto r = midpoint_sup_probe(norm, cfg.direction_separation, ProbeConstraint::along(v), N, tol);
    out.report.check_le(pre + ".direction.value" + tag("k", i + 1), r.value, 1.0 - cfg.probe_gap);
    tab.add_row({static_cast<long long>(i + 1), static_cast<long long>(N), cfg.direction_separation, std::string("yes"),
                 r.value, static_cast<long long>(r.evaluations)});
    const auto s = midpoint_sup_probe(norm, t_witness, ProbeConstraint::along(v), N, tol);
    tab.add_row({static_cast<long long>(i + 1), static_cast<long long>(N), t_witness, std::string("no"), s.value,
                 static_cast<long long>(s.evaluations)});
  }
  out.tables.push_back(std::move(tab));
}

inline void theorem_figure(const ScenarioConfig& cfg, const slice::OmegaConfig& om, ScenarioResult& out)
{
  const std::string pre = to_string(cfg.scenario);
  const auto& al = om.alpha(1);
  const auto k = slice::slice_constants(al, cfg.gauge_tol);
  const double half = (1.0 - k.lambda0) / al.C;
  const SectionPlane plane{al.x0, al.h0};
  const std::string name = "slice_section_" + pre + ".svg";
  Guide seg{"segment lambda x + s(1-lambda)/C h", {{k.lambda0, -half}, {k.lambda0, half}}, false};
  const auto fig = render_section_svg({Layer{slice::slice_norm_oracle(al, cfg.gauge_tol), "#cccccc", "#333333"}}, plane,
                                      cfg.figure_resolution, figure_path(cfg, name), {seg},
                                      "slice norm section through span{x_1, h_1}");
  out.figures.push_back("figures/" + name);
  std::size_t flat = 0;
  double dev = 0.0;
  for (const auto& p : fig.curves.front().vertices)
    if (p[0] > 0.0 && std::abs(p[1]) <= half) {
      ++flat;
      dev = std::max(dev, std::abs(p[0] - k.lambda0));
    }
  out.report.check_le(pre + ".figure.gauge_self_check", fig.max_gauge_error, self_check_tol);
  out.report.check_ge(pre + ".figure.flat_segment_vertices", static_cast<double>(flat), 2.0);
  out.report.check_le(pre + ".figure.flat_segment_deviation", dev, 1e-9);
}

inline void run_theorem(const ScenarioConfig& cfg, ScenarioResult& out)
{
  const std::string pre = to_string(cfg.scenario);
  std::optional<slice::OmegaConfig> om;
  guarded(out, pre + ".model", [&] { om = slice::make_model_omega(theorem_kind(cfg.scenario), cfg.delta, cfg.truncation, cfg.tolerances()); });
  if (!om) return;
  guarded(out, pre + ".lemma", [&] { theorem_lemma(cfg, *om, out); });
  std::optional<slice::FailureTable> ft;
  guarded(out, pre + ".witness", [&] { ft = theorem_witnesses(cfg, *om, out); });
  if (ft) guarded(out, pre + ".trend", [&] { theorem_trends(cfg, *ft, out); });
  guarded(out, pre + ".figure", [&] { theorem_figure(cfg, *om, out); });
}

// smooth-c0.

inline void c0_schedule(const ScenarioConfig& cfg, const c0::SmoothC0Norm& L, ScenarioResult& out)
{
  const auto& P = L.schedule();
  for (const auto& c : P.audit()) out.report.check_ge("smooth-c0.schedule." + c.name, c.slack, 0.0);
  if (cfg.delta == 0.25) {
    out.report.check_eq("smooth-c0.schedule.w_2", P.w(2), 1.1);
    out.report.check_eq("smooth-c0.schedule.h_2", P.h(2), 2.75);
  }
  Table t{"schedule", {"n", "epsilon", "c", "w", "h", "eta", "ratio", "list_size", "exponent"}, {}};
  for (std::size_t n = 2; n <= P.depth(); ++n)
    t.add_row({static_cast<long long>(n), P.epsilon(n), P.c(n), P.w(n), P.h(n), P.eta(n), P.ratio(n),
               static_cast<long long>(L.agg(n).list().size()), static_cast<long long>(L.agg(n).exponent())});
  out.tables.push_back(std::move(t));
}

inline void c0_sandwiches(const ScenarioConfig& cfg, const c0::SmoothC0Norm& L, ScenarioResult& out)
{
  using c0::PolyKind;
  const auto& P = L.schedule();
  Table t{"sandwich", {"n", "samples", "inf_violation", "list_error", "smoothing_violation", "level_violation",
                       "coincidence_samples", "coincidence_error"}, {}};
  Rng rng = derived_rng(cfg.seed, 0x5a9d);
  for (std::size_t n = 2; n <= P.depth(); ++n) {
    const auto inf_list = c0::functional_list(P, PolyKind::inf, n);
    const auto one_list = c0::functional_list(P, PolyKind::one, n);
    const auto& S = L.agg(n);
    double inf_v = -1.0, list_e = 0.0, smooth_v = -1.0, level_v = -1.0, coin_e = 0.0;
    std::size_t coin = 0;
    for (std::size_t s = 0; s < cfg.sandwich_samples; ++s) {
      CoordVector x = random_box(rng, n);
      // Every other sample is pushed into the region |x_n| ≤ δ/2·‖x‖∞.
      if (s % 2 == 0) x.set_coord(n, x.coord(n) * P.delta() / 2.0 * 0.999);
      const double xi = x.norm_inf();
      const double vi = c0::polyhedral_eval(P, PolyKind::inf, n, x);
      const double vo = c0::polyhedral_eval(P, PolyKind::one, n, x);
      inf_v = std::max({inf_v, (xi - vi) / xi, (vi - P.c(n) * xi) / xi});
      list_e = std::max({list_e, std::abs(inf_list.max_abs(x) - vi), std::abs(one_list.max_abs(x) - vo)});
      const double m = S.max_eval(x), a = S(x);
      smooth_v = std::max({smooth_v, (m - a) / m, (a - (1.0 + S.eta()) * m) / m});
      const auto ch = L.chain(x, n);
      const auto& c = ch.back();
      level_v = std::max({level_v, (c.max() - c.gauge) / c.gauge, (c.gauge - (1.0 + P.eta(n)) * c.max()) / c.gauge,
                          (vi - c.gauge) / c.gauge, (c.gauge - P.eta_product(n) * vi) / c.gauge});
      if (std::abs(x.coord(n)) <= P.delta() / 2.0 * xi) {
        ++coin;
        coin_e = std::max(coin_e, std::abs(c.gauge - c.prev) / c.prev);
      }
    }
    const std::string sfx = tag("n", n);
    out.report.check_le("smooth-c0.sandwich.inf_norm_relative_violation" + sfx, inf_v, 1e-15);
    out.report.check_le("smooth-c0.sandwich.list_vs_recursion_error" + sfx, list_e, 1e-12);
    out.report.check_le("smooth-c0.sandwich.smoothing_relative_violation" + sfx, smooth_v, 1e-15);
    out.report.check_le("smooth-c0.sandwich.level_property_ii_relative_violation" + sfx, level_v, 1e-12);
    out.report.check_le("smooth-c0.sandwich.level_property_iii_relative_error" + sfx, coin_e, 1e-12);
    t.add_row({static_cast<long long>(n), static_cast<long long>(cfg.sandwich_samples), inf_v, list_e, smooth_v, level_v,
               static_cast<long long>(coin), coin_e});
  }
  out.tables.push_back(std::move(t));
}

/// Five-point central difference; the aggregates have exponents up to ~2·10⁴,
/// so the second-order rule would be limited by truncation error.
inline double central_difference(const std::function<double(const CoordVector&)>& f, const CoordVector& x, std::size_t k,
                                 double h)
{
  auto at = [&](double s) {
    CoordVector y = x;
    y.set_coord(k, x.coord(k) + s * h);
    return f(y);
  };
  return (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h);
}

inline void c0_gradients(const ScenarioConfig& cfg, const c0::SmoothC0Norm& L, ScenarioResult& out)
{
  Table t{"gradient", {"n", "exponent", "points", "max_relative_error"}, {}};
  Rng rng = derived_rng(cfg.seed, 0x96ad);
  for (std::size_t n = 2; n <= L.depth(); ++n) {
    const auto& S = L.agg(n);
    const auto f = [&S](const CoordVector& y) { return S(y); };
    // Step scaled to the exponent keeps h·p small.
    const double h = 1e-3 / S.exponent();
    double worst = 0.0;
    for (std::size_t s = 0; s < cfg.gradient_points; ++s) {
      const CoordVector x = random_sphere(rng, n);
      const Eigen::VectorXd g = S.gradient(x);
      Eigen::VectorXd fd(static_cast<Eigen::Index>(n));
      for (std::size_t k = 1; k <= n; ++k) fd[static_cast<Eigen::Index>(k - 1)] = central_difference(f, x, k, h);
      worst = std::max(worst, (g - fd).norm() / g.norm());
    }
    out.report.check_le("smooth-c0.gradient.relative_error" + tag("n", n), worst, 1e-6);
    t.add_row({static_cast<long long>(n), static_cast<long long>(S.exponent()), static_cast<long long>(cfg.gradient_points), worst});
  }
  out.tables.push_back(std::move(t));
}

inline std::string join_coords(const CoordVector& z)
{
  std::string s;
  for (std::size_t k = 1; k <= z.dim(); ++k) s += (k > 1 ? ";" : "") + format_double(z.coord(k));
  return s;
}

inline void c0_dual(const ScenarioConfig& cfg, const c0::SmoothC0Norm& L, ScenarioResult& out)
{
  const auto& P = L.schedule();
  const auto rep = c0::dual_witness_report(L, cfg.n_max, cfg.tolerances(), cfg.dual_samples);
  Table t{"dual_witness", {"n", "z", "one_norm", "inf_norm", "final_norm", "final_bound", "pair_f", "pair_g", "product"}, {}};
  for (const auto& r : rep.rows)
    t.add_row({static_cast<long long>(r.n), join_coords(r.z), r.one_norm, r.inf_norm, r.final_norm, r.final_bound, r.pair_f,
               r.pair_g, r.product});
  out.tables.push_back(std::move(t));

  if (cfg.delta == 0.25) {
    out.report.check_near("smooth-c0.dual.z_2.coord_1", rep.rows.front().z.coord(1), 0.7, 1e-15);
    out.report.check_near("smooth-c0.dual.z_2.coord_2", rep.rows.front().z.coord(2), 1.0, 1e-15);
  }
  out.report.check_le("smooth-c0.dual.one_norm_error", rep.max_one_error, 1e-10);
  out.report.check_le("smooth-c0.dual.final_norm_excess", rep.max_final_excess, 1e-9);
  out.report.check_le("smooth-c0.dual.pairing_error", rep.max_pair_error, 1e-10);
  out.report.check_le("smooth-c0.dual.certificate_f_excess", rep.cert_f_excess, 1e-12);
  out.report.check_le("smooth-c0.dual.certificate_g_excess", rep.cert_g_excess, 1e-12);
  out.report.check_le("smooth-c0.dual.f_upper", rep.f_upper, 1.0);
  out.report.check_le("smooth-c0.dual.g_upper", rep.g_upper, 1.0);
  const double eta = P.eta(cfg.n_max);
  out.report.check_ge("smooth-c0.dual.mid_lower", rep.mid_lower, 1.0 / ((1.0 + eta) * (1.0 + eta)) - 1e-6);
  out.report.check_le("smooth-c0.dual.mid_lower_at_most_1", rep.mid_lower, 1.0);

  // Lower bound for (f+g)/2 from the witness z_m, for each m ≤ n_max.
  Table g{"dual_gap", {"m", "mid_lower", "gap"}, {}};
  const std::size_t first = std::min<std::size_t>(4, cfg.n_max);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& r : rep.rows) {
    if (r.n < first) continue;
    const double lower = 0.5 * (r.pair_f + r.pair_g) / r.final_norm;
    const double gap = 1.0 - lower;
    g.add_row({static_cast<long long>(r.n), lower, gap});
    if (std::isfinite(prev)) out.report.check_le("smooth-c0.dual.gap_shrinks" + tag("m", r.n), gap, prev);
    prev = gap;
  }
  out.tables.push_back(std::move(g));
}

inline void c0_figure(const ScenarioConfig& cfg, const c0::SmoothC0Norm& L, ScenarioResult& out)
{
  using c0::PolyKind;
  const auto& P = L.schedule();
  const auto inf2 = c0::polyhedral_oracle(P, PolyKind::inf, 2);
  const auto one2 = c0::polyhedral_oracle(P, PolyKind::one, 2);
  const SectionPlane plane{unit(2, 1), unit(2, 2)};
  const std::string name = "figure1_c0_balls.svg";
  const auto fig = render_section_svg(
    {Layer{one2, "#dddddd", "#888888"}, Layer{inf2, "#777777", "#222222"}}, plane, cfg.figure_resolution,
    figure_path(cfg, name), {square_guide("unit square of l-infinity", 1.0), square_guide("square of half-width 1/c_2", 1.0 / P.c(2), "#2e86c1")},
    "unit balls of the n = 2 polyhedral norms (dark: inf, light: one)");
  out.figures.push_back("figures/" + name);
  const auto& one_curve = fig.curves[0];
  const auto& inf_curve = fig.curves[1];
  const auto sup = linf_norm(2);
  out.report.check_le("smooth-c0.figure.gauge_self_check", fig.max_gauge_error, self_check_tol);
  out.report.check_le("smooth-c0.figure.inf_ball_inside_unit_square", max_norm_on(inf_curve, plane, sup), 1.0 + 1e-12);
  out.report.check_ge("smooth-c0.figure.inf_ball_contains_scaled_square", min_norm_on(inf_curve, plane, sup) * P.c(2), 1.0 - 1e-12);
  out.report.check_le("smooth-c0.figure.inf_ball_inside_one_ball", max_norm_on(inf_curve, plane, one2), 1.0 + 1e-12);
  out.report.check_ge("smooth-c0.figure.one_ball_outside_inf_ball", min_norm_on(one_curve, plane, inf2), 1.0 - 1e-12);
}

inline void run_smooth_c0(const ScenarioConfig& cfg, ScenarioResult& out)
{
  std::optional<c0::SmoothC0Norm> L;
  guarded(out, "smooth-c0.schedule", [&] { L.emplace(c0::build_schedule(cfg.delta, cfg.truncation)); });
  if (!L) return;
  guarded(out, "smooth-c0.schedule", [&] { c0_schedule(cfg, *L, out); });
  guarded(out, "smooth-c0.figure", [&] { c0_figure(cfg, *L, out); });
  guarded(out, "smooth-c0.sandwich", [&] { c0_sandwiches(cfg, *L, out); });
  guarded(out, "smooth-c0.gradient", [&] { c0_gradients(cfg, *L, out); });
  guarded(out, "smooth-c0.dual", [&] { c0_dual(cfg, *L, out); });
}

// oracles.

inline void oracle_q(const ScenarioConfig& cfg, ScenarioResult& out, Table& t)
{
  Rng rng = derived_rng(cfg.seed, 0x9f);
  const auto l2 = l2_norm();
  const auto n1 = l2_norm(), n2 = linf_norm(cfg.q_dim);
  const double a1 = 0.7, a2 = 2.3;
  const auto mix = quadratic_mean_combine(n1, n2, a1, a2);
  double hilbert = 0.0, linear = 0.0;
  for (std::size_t s = 0; s < cfg.q_pairs; ++s) {
    const auto x = random_box(rng, cfg.q_dim), y = random_box(rng, cfg.q_dim);
    hilbert = std::max(hilbert, std::abs(q_functional(l2, x, y) - testkit::hilbert_q_oracle(x, y)));
    const double lhs = q_functional_raw(mix, x, y);
    const double rhs = a1 * q_functional_raw(n1, x, y) + a2 * q_functional_raw(n2, x, y);
    const double scale = 1.0 + std::abs(rhs) + mix(x) * mix(x) + mix(y) * mix(y);
    linear = std::max(linear, std::abs(lhs - rhs) / scale);
  }
  out.report.check_le("oracles.q.hilbert_identity_error", hilbert, 1e-12);
  out.report.check_le("oracles.q.linearity_relative_error", linear, 1e-12);
  t.add_row({std::string("q_functional(l2)"), std::string("hilbert_q_oracle"), hilbert, 1e-12});
  t.add_row({std::string("q_functional(qmean)"), std::string("a1 Q1 + a2 Q2"), linear, 1e-12});
}

inline slice::AlphaTuple section_tuple(double delta)
{
  slice::AlphaTuple a;
  a.delta = delta;
  a.C = 1.0 + delta;
  a.x0 = unit(3, 2);
  a.h0 = unit(3, 1);
  a.f0 = unit<CoordFunctional>(3, 2);
  a.g0 = unit<CoordFunctional>(3, 1);
  a.validate();
  return a;
}

inline void oracle_gauges(const ScenarioConfig& cfg, ScenarioResult& out, Table& t)
{
  const double gt = cfg.gauge_tol;
  const auto a = section_tuple(cfg.delta);
  Rng rng = derived_rng(cfg.seed, 0x9a);
  double slice_excess = -1.0;
  auto member = [&](const CoordVector& x) { return slice::slice_norm_eval(a, x, gt) <= 1.0; };
  for (int s = 0; s < 8; ++s) {
    const CoordVector x = random_sphere(rng, 3);
    const auto scan = testkit::gauge_by_ray_scan(member, x, 0.5, 2.0, 100000);
    slice_excess = std::max(slice_excess, std::abs(slice::slice_norm_eval(a, x, gt) - scan.value) - scan.error_bound);
  }
  out.report.check_le("oracles.gauge.slice_norm_vs_ray_scan_excess", slice_excess, 0.0);
  t.add_row({std::string("slice_norm_eval"), std::string("gauge_by_ray_scan"), slice_excess, 0.0});

  const auto P = c0::build_schedule(std::min(cfg.delta, 0.25), cfg.truncation);
  const auto poly = c0::polyhedral_oracle(P, c0::PolyKind::inf, 3);
  double poly_excess = -1.0;
  for (int s = 0; s < 8; ++s) {
    const CoordVector x = random_sphere(rng, 3);
    const auto scan = testkit::gauge_by_ray_scan([&](const CoordVector& y) { return poly(y) <= 1.0; }, x, 0.2, 3.0, 100000);
    poly_excess = std::max(poly_excess, std::abs(poly(x) - scan.value) - scan.error_bound);
  }
  out.report.check_le("oracles.gauge.polyhedral_vs_ray_scan_excess", poly_excess, 0.0);
  t.add_row({std::string("polyhedral_eval(inf,3)"), std::string("gauge_by_ray_scan"), poly_excess, 0.0});

  // B̂ membership: golden-section line minimum against a dense t grid, away
  // from the boundary band the two resolutions cannot separate.
  std::size_t mismatches = 0, compared = 0;
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  for (int s = 0; s < 2000; ++s) {
    CoordVector y(3);
    y.set_coord(2, u(rng));
    y.set_coord(3, u(rng));
    const double g = slice::bhat_gauge(a, y, gt);
    if (std::abs(g - 1.0) < 1e-3) continue;
    ++compared;
    if (slice::bhat_contains(a, y, gt) != testkit::bhat_contains_by_scan(a, y)) ++mismatches;
  }
  out.report.check_le("oracles.gauge.bhat_membership_mismatches", static_cast<double>(mismatches), 0.0);
  t.add_row({std::string("bhat_contains"), std::string("bhat_contains_by_scan"), static_cast<double>(mismatches), 0.0});
}

inline void oracle_duals(const ScenarioConfig& cfg, ScenarioResult& out, Table& t)
{
  const ToleranceConfig tol = cfg.tolerances();
  const auto P = c0::build_schedule(std::min(cfg.delta, 0.25), cfg.truncation);
  const std::vector<NormOracle> norms{l2_norm(), l1_norm(3), linf_norm(3), c0::polyhedral_oracle(P, c0::PolyKind::inf, 3),
                                      c0::polyhedral_oracle(P, c0::PolyKind::one, 3)};
  const std::vector<CoordFunctional> phis{{1.0, 0.0, 0.0}, {0.3, -0.7, 0.2}, {1.0, 1.0, 1.0}};
  const testkit::ScanGrid grid{3, 128, 1.0};
  for (const auto& n : norms) {
    double lower_excess = -1.0, upper_excess = -1.0;
    for (const auto& phi : phis) {
      const auto b = dual_norm_bounds(n, phi, 3, tol);
      const auto scan = testkit::dual_by_sphere_scan(n, phi, grid);
      lower_excess = std::max(lower_excess, b.lower - (scan.value + scan.error_bound));
      upper_excess = std::max(upper_excess, scan.value - b.upper * (1.0 + 1e-12));
    }
    out.report.check_le("oracles.dual." + n.label() + ".lower_above_scan", lower_excess, 0.0);
    out.report.check_le("oracles.dual." + n.label() + ".scan_above_upper", upper_excess, 0.0);
    t.add_row({"dual_norm_bounds(" + n.label() + ").lower", std::string("dual_by_sphere_scan"), lower_excess, 0.0});
    t.add_row({"dual_norm_bounds(" + n.label() + ").upper", std::string("dual_by_sphere_scan"), upper_excess, 0.0});
  }
}

inline void oracle_convexity(const ScenarioConfig& cfg, ScenarioResult& out, Table& t)
{
  const double gt = cfg.gauge_tol;
  const long samples = static_cast<long>(cfg.convexity_samples);
  const std::size_t N = cfg.truncation;
  const auto P = c0::build_schedule(std::min(cfg.delta, 0.25), N);
  const auto L = std::make_shared<const c0::SmoothC0Norm>(P);
  const auto small = std::make_shared<const c0::SmoothC0Norm>(c0::build_schedule(std::min(cfg.delta, 0.25), 3));
  const auto a = section_tuple(cfg.delta);
  const auto om = slice::make_model_omega(slice::TheoremKind::A, cfg.delta, N, cfg.tolerances());

  struct Item
  {
    NormOracle norm;
    std::size_t dim;
  };
  std::vector<Item> items{{l2_norm(), N},
                          {l1_norm(N), N},
                          {linf_norm(N), N},
                          {quadratic_mean_combine(l2_norm(), linf_norm(N), 0.7, 2.3), N},
                          {finite_max_combine({l1_norm(N), scaled(l2_norm(), 2.0)}), N},
                          {slice::slice_norm_oracle(a, gt), 3},
                          {slice::omega_norm_oracle(om, gt), N},
                          {c0::level_norm_oracle(small, 3), 3},
                          {c0::final_norm_oracle(small), 3},
                          {c0::final_norm_oracle(L), N}};
  for (std::size_t n = 2; n <= N; ++n) {
    items.push_back({c0::polyhedral_oracle(P, c0::PolyKind::inf, n), n});
    items.push_back({c0::polyhedral_oracle(P, c0::PolyKind::one, n), n});
    auto agg = std::make_shared<const c0::SmoothAggNorm>(L->agg(n));
    items.push_back({c0::smooth_agg_oracle(agg, 1.0, P.c(n)), n});
  }
  std::uint64_t stream = 0;
  for (const auto& it : items) {
    const double worst = testkit::convexity_midpoint_scan(it.norm, it.dim, samples, cfg.seed + (++stream));
    const std::string name = it.norm.label() + ".dim=" + std::to_string(it.dim);
    out.report.check_le("oracles.convexity." + name, worst, 1e-9);
    t.add_row({"convexity(" + name + ")", std::string("convexity_midpoint_scan"), worst, 1e-9});
  }
}

inline void run_oracles(const ScenarioConfig& cfg, ScenarioResult& out)
{
  Table t{"oracles", {"evaluator", "oracle", "value", "bound"}, {}};
  guarded(out, "oracles.q", [&] { oracle_q(cfg, out, t); });
  guarded(out, "oracles.gauge", [&] { oracle_gauges(cfg, out, t); });
  guarded(out, "oracles.dual", [&] { oracle_duals(cfg, out, t); });
  guarded(out, "oracles.convexity", [&] { oracle_convexity(cfg, out, t); });
  out.tables.push_back(std::move(t));
}

inline std::string summary_text(const ScenarioResult& r)
{
  std::string s = "scenario: " + std::string(to_string(r.config.scenario)) + "\n";
  auto j = to_json(r.config);
  j.erase("out_dir");
  s += "config: " + j.dump() + "\n";
  std::size_t passed = 0;
  for (const auto& rec : r.report.records()) passed += rec.pass ? 1 : 0;
  s += "checks passed: " + std::to_string(passed) + " / " + std::to_string(r.report.records().size()) + "\n";
  for (const auto& t : r.tables) s += "table: tables/" + t.name + ".csv (" + std::to_string(t.rows.size()) + " rows)\n";
  for (const auto& f : r.figures) s += "figure: " + f + "\n";
  for (const auto& e : r.errors) s += "error: " + e + "\n";
  for (const auto& f : r.report.failures())
    s += "FAILED " + f.name + ": value " + format_double(f.value) + " bound " + format_double(f.bound) + "\n";
  s += std::string("result: ") + (r.pass() ? "PASS" : "FAIL") + "\n";
  return s;
}

} // namespace detail

/// Runs the scenario, writing figures as they are rendered and then
/// report.jsonl, tables/*.csv, config.json and summary.txt under out_dir.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
  cfg.validate();
  ScenarioResult out;
  out.config = cfg;
  std::filesystem::create_directories(cfg.out_dir);
  if (is_theorem(cfg.scenario))
    detail::run_theorem(cfg, out);
  else if (cfg.scenario == Scenario::smooth_c0)
    detail::run_smooth_c0(cfg, out);
  else
    detail::run_oracles(cfg, out);

  const std::filesystem::path dir(cfg.out_dir);
  std::string lines;
  for (const auto& r : out.report.records()) lines += to_json_line(r) + "\n";
  write_text(dir / "report.jsonl", lines);
  for (const auto& t : out.tables) write_text(dir / "tables" / (t.name + ".csv"), to_csv(t));
  // out_dir is left out so that runs into different directories match byte for byte.
  auto j = to_json(cfg);
  j.erase("out_dir");
  write_text(dir / "config.json", j.dump(2) + "\n");
  write_text(dir / "summary.txt", detail::summary_text(out));
  return out;
}

} // namespace renorm::report
