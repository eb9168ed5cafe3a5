#pragma once

// Executable property audits. Each audit returns a Verdict with structured
// evidence; violated verdicts carry a witness that replay_witness() can
// re-evaluate from its stored description alone.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "fdepth/core.hpp"
#include "fdepth/depths.hpp"
#include "fdepth/distributions.hpp"
#include "fdepth/envelope.hpp"
#include "json.hpp"

namespace fdepth {

using json = nlohmann::json;

enum class Status { satisfied, violated, inapplicable };
enum class Property { P1, P2G, P3, P4, P5, P6 };

inline constexpr Property kAllProperties[] = {Property::P1, Property::P2G, Property::P3,
                                              Property::P4, Property::P5,  Property::P6};

inline std::string_view property_id(Property p) {
  switch (p) {
    case Property::P1: return "P-1";
    case Property::P2G: return "P-2G";
    case Property::P3: return "P-3";
    case Property::P4: return "P-4";
    case Property::P5: return "P-5";
    case Property::P6: return "P-6";
  }
  return "?";
}

inline std::string_view status_id(Status s) {
  switch (s) {
    case Status::satisfied: return "satisfied";
    case Status::violated: return "violated";
    case Status::inapplicable: return "inapplicable";
  }
  return "?";
}

inline std::string_view status_symbol(Status s) {
  switch (s) {
    case Status::satisfied: return "✓";
    case Status::violated: return "✗";
    case Status::inapplicable: return "–";
  }
  return "?";
}

struct Verdict {
  Status status = Status::inapplicable;
  double tolerance = 0.0;
  json evidence = json::object();
  std::string note;

  [[nodiscard]] json to_json() const {
    json j{{"status", std::string(status_id(status))},
           {"tolerance", tolerance},
           {"evidence", evidence}};
    if (!note.empty()) j["note"] = note;
    return j;
  }
};

// Measures with a replayable description

/// A reference law for depth evaluation together with a JSON description
/// from which it can be rebuilt bit-exactly.
struct Measure {
  std::variant<FunctionalSample, AtomicDistribution> law;
  json descriptor;

  [[nodiscard]] DepthEvaluator depth(DepthKind k, const DepthParams& p) const {
    return std::visit([&](const auto& l) { return make_depth(k, l, p); }, law);
  }
  [[nodiscard]] const GridPtr& grid() const {
    return std::visit([](const auto& l) -> const GridPtr& { return l.grid(); }, law);
  }
};

inline json curve_json(const Curve& c) { return json(std::vector<double>(c.values().begin(), c.values().end())); }

inline json grid_json(const Grid& g) {
  return json(std::vector<double>(g.points().begin(), g.points().end()));
}

inline Measure gp_measure(const GPSpec& spec, std::size_t n, std::uint64_t seed) {
  json d{{"type", "gp"}, {"spec", gp_spec_to_json(spec)}, {"n", n}, {"seed", seed}};
  return {GaussianProcess(spec).sample(n, seed), std::move(d)};
}

inline Measure gp_measure(const GaussianProcess& gp, std::size_t n, std::uint64_t seed) {
  json d{{"type", "gp"}, {"spec", gp_spec_to_json(gp.spec())}, {"n", n}, {"seed", seed}};
  return {gp.sample(n, seed), std::move(d)};
}

inline Measure named_atomic_measure(const std::string& name, const GridPtr& grid) {
  json d{{"type", "atomic"}, {"name", name}, {"grid", grid_json(*grid)}};
  if (name == "counterexample_p3") return {counterexample_p3(grid), d};
  if (name == "counterexample_p3_rt") return {counterexample_p3_rt(grid), d};
  if (name == "counterexample_p5") return {counterexample_p5(grid), d};
  throw ParameterError("unknown atomic distribution '" + name + "'");
}

inline Measure inline_measure(const FunctionalSample& s) {
  json curves = json::array();
  for (const auto& c : s.curves()) curves.push_back(curve_json(c));
  json d{{"type", "inline"},
         {"grid", grid_json(*s.grid())},
         {"curves", curves},
         {"weights", std::vector<double>(s.weights().begin(), s.weights().end())}};
  return {s, std::move(d)};
}

inline Measure mix_measure(const Measure& base, double level, double eps, std::uint64_t seed) {
  const auto& s = std::get<FunctionalSample>(base.law);
  Distribution outlier = AtomicDistribution({constant_curve(s.grid(), level)}, {1.0});
  json d{{"type", "mix"}, {"base", base.descriptor}, {"outlier_level", level},
         {"epsilon", eps}, {"seed", seed}};
  return {contaminate(s, outlier, eps, seed), std::move(d)};
}

/// Curve maps used by the audits: affine x -> slope * x + shift, or a
/// pointwise shrink x -> alpha * x.
struct CurveMap {
  json descriptor;

  [[nodiscard]] Curve operator()(const Curve& x) const {
    const auto type = descriptor.at("type").get<std::string>();
    if (type == "affine") {
      const double slope = descriptor.at("slope").get<double>();
      std::vector<double> v(x.values().begin(), x.values().end());
      if (descriptor.contains("shift")) {
        const auto b = descriptor.at("shift").get<std::vector<double>>();
        if (b.size() != v.size()) throw DomainError("shift length does not match grid");
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = slope * v[i] + b[i];
      } else {
        for (auto& e : v) e *= slope;
      }
      return x.with_values(std::move(v));
    }
    if (type == "shrink") {
      const auto a = descriptor.at("alpha").get<std::vector<double>>();
      return apply_shrink(x, make_shrink_map(Curve(x.grid(), a)));
    }
    throw ParameterError("unknown curve map '" + type + "'");
  }

  [[nodiscard]] Measure push(const Measure& m) const {
    json d = m.descriptor;
    d["transform"] = descriptor;
    return std::visit(
        [&](const auto& l) -> Measure {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, AtomicDistribution>) {
            return {l.pushforward(*this), d};
          } else {
            return {l.transformed(*this), d};
          }
        },
        m.law);
  }
};

inline CurveMap affine_map(double slope, const std::optional<Curve>& shift = std::nullopt) {
  json d{{"type", "affine"}, {"slope", slope}};
  if (shift) d["shift"] = curve_json(*shift);
  return {d};
}

inline CurveMap shrink_map(const ShrinkMap& m) { return {{{"type", "shrink"}, {"alpha", curve_json(m.alpha)}}}; }

inline Measure rebuild_measure(const json& d) {
  auto build = [&]() -> Measure {
    const auto type = d.at("type").get<std::string>();
    if (type == "gp") {
      return gp_measure(gp_spec_from_json(d.at("spec")), d.at("n").get<std::size_t>(),
                        d.at("seed").get<std::uint64_t>());
    }
    if (type == "atomic") {
      auto grid = std::make_shared<const Grid>(d.at("grid").get<std::vector<double>>());
      return named_atomic_measure(d.at("name").get<std::string>(), grid);
    }
    if (type == "inline") {
      auto grid = std::make_shared<const Grid>(d.at("grid").get<std::vector<double>>());
      std::vector<Curve> curves;
      for (const auto& c : d.at("curves")) curves.emplace_back(grid, c.get<std::vector<double>>());
      return inline_measure(FunctionalSample(std::move(curves), d.at("weights").get<std::vector<double>>()));
    }
    if (type == "mix") {
      return mix_measure(rebuild_measure(d.at("base")), d.at("outlier_level").get<double>(),
                         d.at("epsilon").get<double>(), d.at("seed").get<std::uint64_t>());
    }
    throw ParameterError("unknown measure type '" + type + "'");
  };
  Measure m = build();
  if (d.contains("transform")) m = CurveMap{d.at("transform")}.push(m);
  m.descriptor = d;
  return m;
}

inline DepthParams params_from_json(const json& j) {
  DepthParams p;
  if (j.contains("h")) p.h = j.at("h").get<double>();
  if (j.contains("J")) p.J = j.at("J").get<int>();
  if (j.contains("directions")) p.directions = j.at("directions").get<int>();
  if (j.contains("direction_seed")) p.direction_seed = j.at("direction_seed").get<std::uint64_t>();
  if (j.contains("direction_kernel")) {
    const auto& k = j.at("direction_kernel");
    p.direction_variance = k.value("variance", 1.0);
    p.direction_length_scale = k.value("length_scale", 0.0);
  }
  return p;
}

/// Witness: (measure, query, depth value) triples under a fixed depth.
struct WitnessBuilder {
  DepthKind kind;
  DepthParams params;
  json entries = json::array();

  void add(const Measure& m, const Curve& q, double value) {
    entries.push_back({{"measure", m.descriptor}, {"query", curve_json(q)}, {"value", value}});
  }
  [[nodiscard]] json build() const {
    return {{"depth", std::string(depth_id(kind))}, {"params", params.to_json(kind)}, {"entries", entries}};
  }
};

/// Re-evaluates every stored (measure, query) pair of a witness.
inline std::vector<double> replay_witness(const json& w) {
  const auto kind = parse_depth(w.at("depth").get<std::string>());
  const auto params = params_from_json(w.at("params"));
  std::vector<double> out;
  for (const auto& e : w.at("entries")) {
    const auto m = rebuild_measure(e.at("measure"));
    const Curve q(m.grid(), e.at("query").get<std::vector<double>>());
    out.push_back(m.depth(kind, params)(q));
  }
  return out;
}

// Configuration

struct AuditConfig {
  std::uint64_t seed = 20240501;
  double grid_start = 0.0;
  double grid_end = 1.0;
  std::size_t grid_points = 101;
  KernelSpec kernel{"squared_exponential", 1.0, 0.1};

  std::size_t n = 2000;        // Monte-Carlo sample size (P-2G, P-6 contamination)
  std::size_t band_n = 300;    // sample size for the D_J (J >= 3) P-2G evaluations
  std::size_t replicates = 20;
  std::size_t min_mc_n = 100;  // below this Monte-Carlo cells are under-powered
  DepthParams depth;           // h = 1, J = 2, k = 20
  int p2g_J = 3;

  double p1_scale = 4.0;
  std::size_t p1_n = 200;

  std::size_t p3_n = 500;
  std::size_t p3_rays = 10;

  std::size_t p4_n = 300;
  std::size_t p4_probes = 10;
  std::size_t p4_perturbations = 200;
  std::vector<double> p4_deltas{0.5, 0.1, 0.02, 0.004, 1e-3, 1e-4};
  std::vector<double> p4_eps{0.05, 0.01};

  double p5_delta = 2.5;
  double p5_alpha = 0.5;

  std::vector<std::size_t> p6_sizes{100, 400, 1600};
  std::size_t p6_reference = 25600;
  std::vector<double> p6_eps{0.2, 0.1, 0.05, 0.01};
  double outlier_level = 50.0;
  double p6_c_factor = 2.0;  // C_max = factor * depth upper bound

  unsigned threads = 1;
  std::optional<std::string> timestamp;

  [[nodiscard]] GridPtr grid() const { return Grid::uniform(grid_start, grid_end, grid_points); }
  [[nodiscard]] GPSpec gp() const { return {grid(), std::nullopt, kernel}; }
  [[nodiscard]] DepthParams params_for(DepthKind) const { return depth; }

  [[nodiscard]] json to_json() const {
    json j{{"seed", seed},
           {"grid", {{"start", grid_start}, {"end", grid_end}, {"points", grid_points}}},
           {"kernel", kernel_to_json(kernel)},
           {"n", n},
           {"band_n", band_n},
           {"replicates", replicates},
           {"min_mc_n", min_mc_n},
           {"h", depth.h},
           {"J", depth.J},
           {"p2g_J", p2g_J},
           {"directions", depth.directions},
           {"direction_seed", depth.direction_seed},
           {"p1", {{"scale", p1_scale}, {"n", p1_n}}},
           {"p3", {{"n", p3_n}, {"rays", p3_rays}}},
           {"p4",
            {{"n", p4_n},
             {"probes", p4_probes},
             {"perturbations", p4_perturbations},
             {"deltas", p4_deltas},
             {"eps", p4_eps}}},
           {"p5", {{"delta", p5_delta}, {"alpha", p5_alpha}}},
           {"p6",
            {{"sizes", p6_sizes},
             {"reference", p6_reference},
             {"eps", p6_eps},
             {"outlier_level", outlier_level},
             {"c_factor", p6_c_factor}}}};
    return j;
  }

  static AuditConfig from_json(const json& j) {
    AuditConfig c;
    try {
      c.seed = j.value("seed", c.seed);
      if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid_start = g.value("start", c.grid_start);
        c.grid_end = g.value("end", c.grid_end);
        c.grid_points = g.value("points", c.grid_points);
      }
      if (j.contains("kernel")) {
        const auto& k = j.at("kernel");
        c.kernel.type = k.value("type", c.kernel.type);
        c.kernel.variance = k.value("variance", c.kernel.variance);
        c.kernel.length_scale = k.value("length_scale", c.kernel.length_scale);
      }
      c.n = j.value("n", c.n);
      c.band_n = j.value("band_n", c.band_n);
      c.replicates = j.value("replicates", c.replicates);
      c.min_mc_n = j.value("min_mc_n", c.min_mc_n);
      c.depth.h = j.value("h", c.depth.h);
      c.depth.J = j.value("J", c.depth.J);
      c.p2g_J = j.value("p2g_J", c.p2g_J);
      c.depth.directions = j.value("directions", c.depth.directions);
      c.depth.direction_seed = j.value("direction_seed", c.depth.direction_seed);
      if (j.contains("p1")) {
        c.p1_scale = j["p1"].value("scale", c.p1_scale);
        c.p1_n = j["p1"].value("n", c.p1_n);
      }
      if (j.contains("p3")) {
        c.p3_n = j["p3"].value("n", c.p3_n);
        c.p3_rays = j["p3"].value("rays", c.p3_rays);
      }
      if (j.contains("p4")) {
        const auto& p = j.at("p4");
        c.p4_n = p.value("n", c.p4_n);
        c.p4_probes = p.value("probes", c.p4_probes);
        c.p4_perturbations = p.value("perturbations", c.p4_perturbations);
        c.p4_deltas = p.value("deltas", c.p4_deltas);
        c.p4_eps = p.value("eps", c.p4_eps);
      }
      if (j.contains("p5")) {
        c.p5_delta = j["p5"].value("delta", c.p5_delta);
        c.p5_alpha = j["p5"].value("alpha", c.p5_alpha);
      }
      if (j.contains("p6")) {
        const auto& p = j.at("p6");
        c.p6_sizes = p.value("sizes", c.p6_sizes);
        c.p6_reference = p.value("reference", c.p6_reference);
        c.p6_eps = p.value("eps", c.p6_eps);
        c.outlier_level = p.value("outlier_level", c.outlier_level);
        c.p6_c_factor = p.value("c_factor", c.p6_c_factor);
      }
      if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
      if (j.contains("timestamp") && j.at("timestamp").is_string()) {
        c.timestamp = j.at("timestamp").get<std::string>();
      }
    } catch (const json::exception& e) {
      throw ParameterError(std::string("invalid audit config: ") + e.what());
    }
    c.validate();
    return c;
  }

  void validate() const {
    kernel.validate();
    if (grid_points < 2 || !(grid_end > grid_start)) throw ParameterError("invalid audit grid");
    if (replicates < 2) throw ParameterError("at least two replicates are required");
    if (n < 1 || band_n < 1 || p1_n < 1 || p3_n < 1 || p4_n < 1) {
      throw ParameterError("sample sizes must be positive");
    }
    if (p2g_J < 2 || depth.J < 2) throw ParameterError("band order must be at least 2");
    if (!(p1_scale > 0.0)) throw ParameterError("P-1 scale must be positive");
    if (p6_sizes.empty() || p6_eps.empty() || p4_deltas.empty() || p4_eps.empty()) {
      throw ParameterError("audit ladders must be nonempty");
    }
    for (double e : p6_eps) {
      if (!(e > 0.0 && e < 1.0)) throw ParameterError("contamination levels must lie in (0, 1)");
    }
    if (!(p5_alpha > 0.0 && p5_alpha < 1.0)) throw ParameterError("shrink factor must lie in (0, 1)");
    depth.validate(DepthKind::h);
    depth.validate(DepthKind::rt);
  }
};

// Small statistics helpers

namespace stats {

inline double mean(const std::vector<double>& v) {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

inline double sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  CompensatedSum s;
  for (double x : v) s.add((x - m) * (x - m));
  return std::sqrt(s.value() / static_cast<double>(v.size() - 1));
}

inline double se(const std::vector<double>& v) {
  return sd(v) / std::sqrt(static_cast<double>(v.size()));
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Type-7 sample quantile.
inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace stats

// Probe sets

/// Zero curve, constants at +-0.5, +-1, +-1.5 standard deviations, then
/// `draws` GP paths.
inline std::vector<Curve> p2g_probes(const GaussianProcess& gp, std::size_t draws, std::uint64_t seed) {
  const auto& g = gp.grid();
  const double s = std::sqrt(gp.spec().kernel.variance);
  std::vector<Curve> probes{constant_curve(g, 0.0)};
  for (double c : {0.5, 1.0, 1.5}) {
    probes.push_back(constant_curve(g, c * s));
    probes.push_back(constant_curve(g, -c * s));
  }
  for (auto& c : gp.draw_curves(draws, seed)) probes.push_back(std::move(c));
  return probes;
}

/// Pointwise mean, constants at +-0.5 and +-1, and leading sample curves, to
/// a total of `count`.
inline std::vector<Curve> default_probes(const FunctionalSample& s, std::size_t count = 10) {
  const auto& g = s.grid();
  std::vector<Curve> probes{s.pointwise_mean()};
  for (double c : {0.5, -0.5, 1.0, -1.0}) probes.push_back(constant_curve(g, c));
  for (std::size_t i = 0; probes.size() < count && i < s.size(); ++i) probes.push_back(s.curve(i));
  if (probes.size() > count) probes.erase(probes.begin() + static_cast<std::ptrdiff_t>(count), probes.end());
  return probes;
}

inline std::vector<std::size_t> depth_order(const std::vector<double>& d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  return idx;
}

// P-1: distance invariance

/// The transformation class used for each depth: scaling by sqrt(a) for the
/// L2 depths; a reflected affine map -a x + b for the sup-norm depths.
inline CurveMap p1_transform(DepthKind k, double a, const GridPtr& grid) {
  if (!uses_sup_metric(k)) return affine_map(std::sqrt(a));
  const double v0 = grid->front(), len = grid->back() - grid->front();
  auto b = curve_from(grid, [&](double v) { return 0.5 * std::sin(2.0 * std::numbers::pi * (v - v0) / len); });
  return affine_map(-a, b);
}

inline Verdict audit_p1(DepthKind kind, const Measure& base, const CurveMap& f,
                        const DepthParams& params, std::vector<Curve> probes = {}) {
  const double tol = 1e-9;
  const auto& sample = std::get<FunctionalSample>(base.law);
  if (probes.empty()) probes = default_probes(sample);
  const Measure pushed = f.push(base);
  const auto D = base.depth(kind, params);
  const auto Df = pushed.depth(kind, params);
  std::vector<double> before, after;
  double worst = 0.0;
  std::size_t worst_i = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    before.push_back(D(probes[i]));
    after.push_back(Df(f(probes[i])));
    const double diff = std::abs(after.back() - before.back());
    if (diff > worst) {
      worst = diff;
      worst_i = i;
    }
  }
  Verdict v;
  v.tolerance = tol;
  const bool order_same = depth_order(before) == depth_order(after);
  const bool argmax_same = depth_order(before).front() == depth_order(after).front();
  v.evidence = {{"transform", f.descriptor},
                {"probes", probes.size()},
                {"before", before},
                {"after", after},
                {"max_abs_change", worst},
                {"order_preserved", order_same},
                {"argmax_preserved", argmax_same}};
  if (worst > tol) {
    v.status = Status::violated;
    WitnessBuilder w{kind, params};
    w.add(base, probes[worst_i], before[worst_i]);
    w.add(pushed, f(probes[worst_i]), after[worst_i]);
    v.evidence["witness"] = w.build();
  } else {
    v.status = Status::satisfied;
  }
  return v;
}

inline Verdict audit_p1(DepthKind kind, const FunctionalSample& base, double a,
                        const DepthParams& params = {}) {
  if (!(a > 0.0)) throw ParameterError("P-1 scale must be positive");
  return audit_p1(kind, inline_measure(base), p1_transform(kind, a, base.grid()), params);
}

// P-2G: maximality at the Gaussian-process mean

inline Verdict audit_p2g(DepthKind kind, const GaussianProcess& gp, std::size_t n,
                         std::size_t replicates, std::uint64_t seed, const DepthParams& params,
                         std::size_t min_n = 100) {
  Verdict v;
  v.tolerance = 3.0;  // standard errors
  if (n < min_n) {
    v.status = Status::inapplicable;
    v.note = "under-powered: n = " + std::to_string(n) + " < " + std::to_string(min_n);
    v.evidence = {{"n", n}};
    return v;
  }
  const auto probes = p2g_probes(gp, 20, derive_seed(seed, 9001));
  const std::size_t P = probes.size();
  std::vector<std::vector<double>> diff(P, std::vector<double>(replicates));
  std::vector<double> zero_depth(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto sample = gp.sample(n, derive_seed(seed, r));
    const auto D = make_depth(kind, sample, params);
    const double d0 = D(probes[0]);
    zero_depth[r] = d0;
    for (std::size_t p = 1; p < P; ++p) diff[p][r] = D(probes[p]) - d0;
  }
  json per_probe = json::array();
  std::size_t worst_p = 0, best_p = 0;
  double worst_z = -std::numeric_limits<double>::infinity();
  double best_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 1; p < P; ++p) {
    const double m = stats::mean(diff[p]);
    const double se = stats::se(diff[p]);
    per_probe.push_back({{"probe", p}, {"mean_diff", m}, {"se", se}});
    // Positive diff means the probe is deeper than the zero curve.
    const double z = se > 0.0 ? m / se : (m > 0.0 ? std::numeric_limits<double>::infinity() : (m < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0));
    if (z > worst_z) {
      worst_z = z;
      worst_p = p;
    }
    const double margin = -m - 4.0 * se;
    if (margin > best_margin) {
      best_margin = margin;
      best_p = p;
    }
  }
  v.evidence = {{"n", n},
                {"replicates", replicates},
                {"params", params.to_json(kind)},
                {"zero_depth_mean", stats::mean(zero_depth)},
                {"zero_depth_se", stats::se(zero_depth)},
                {"probes", per_probe},
                {"probe_labels", "0: zero; 1-6: constants +-0.5, +-1, +-1.5 sd; 7+: GP draws"},
                {"max_z", worst_z},
                {"best_margin_probe", best_p}};
  const double worst_mean = stats::mean(diff[worst_p]);
  if (worst_z > 3.0 && worst_mean > 0.0) {
    v.status = Status::violated;
    std::size_t r_star = 0;
    for (std::size_t r = 1; r < replicates; ++r) {
      if (diff[worst_p][r] > diff[worst_p][r_star]) r_star = r;
    }
    const auto m = gp_measure(gp, n, derive_seed(seed, r_star));
    const auto D = m.depth(kind, params);
    WitnessBuilder w{kind, params};
    w.add(m, probes[0], D(probes[0]));
    w.add(m, probes[worst_p], D(probes[worst_p]));
    v.evidence["witness"] = w.build();
    v.note = "probe " + std::to_string(worst_p) + " is deeper than the zero curve";
  } else if (best_margin > 0.0) {
    v.status = Status::satisfied;
  } else {
    v.status = Status::inapplicable;
    v.note = "degenerate: no probe is separated from the zero curve by 4 standard errors";
  }
  return v;
}

// P-3: strict decrease away from the deepest point

namespace detail {

inline bool p3_distances_ok(const Curve& z, const Curve& y, const Curve& x, bool sup) {
  auto d = [&](const Curve& a, const Curve& b) { return sup ? sup_distance(a, b) : l2_distance(a, b); };
  const double dyz = d(y, z), dyx = d(y, x), dxz = d(x, z);
  return std::min(dyz, dyx) > 0.0 && std::max(dyz, dyx) < dxz;
}

}  // namespace detail

/// Counterexample check: z deepest, then D(x) < D(y) < D(z) must hold.
inline Verdict audit_p3_atomic(DepthKind kind, const Measure& m, const Curve& z, const Curve& y,
                               const Curve& x, const std::vector<Curve>& support_probes,
                               const DepthParams& params) {
  Verdict v;
  v.tolerance = 0.0;
  const bool sup = uses_sup_metric(kind);
  if (!detail::p3_distances_ok(z, y, x, sup)) {
    throw ParameterError("P-3 triple violates the distance conditions");
  }
  const auto D = m.depth(kind, params);
  const double dz = D(z), dy = D(y), dx = D(x);
  double dmax = dz;
  for (const auto& c : support_probes) dmax = std::max(dmax, D(c));
  v.evidence = {{"measure", m.descriptor}, {"D_z", dz}, {"D_y", dy}, {"D_x", dx}, {"max_probe_depth", dmax}};
  if (dmax > dz) {
    v.status = Status::inapplicable;
    v.note = "z is not the deepest point among the probes";
    return v;
  }
  if (dx < dy && dy < dz) {
    v.status = Status::satisfied;
  } else {
    v.status = Status::violated;
    WitnessBuilder w{kind, params};
    w.add(m, z, dz);
    w.add(m, y, dy);
    w.add(m, x, dx);
    v.evidence["witness"] = w.build();
    v.note = dx == dy ? "tie D(x) = D(y)" : "non-strict ordering";
  }
  return v;
}

inline Verdict audit_p3(DepthKind kind, const GridPtr& grid, const DepthParams& params) {
  if (kind == DepthKind::rt) {
    const auto m = named_atomic_measure("counterexample_p3_rt", grid);
    std::vector<Curve> probes;
    for (double c : {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0}) probes.push_back(constant_curve(grid, c));
    return audit_p3_atomic(kind, m, constant_curve(grid, 0.3), constant_curve(grid, 0.6),
                           constant_curve(grid, 0.9), probes, params);
  }
  const auto m = named_atomic_measure("counterexample_p3", grid);
  std::vector<Curve> probes;
  for (double c : {-1.0, -0.5, 0.0, 0.5, 1.0}) probes.push_back(constant_curve(grid, c));
  return audit_p3_atomic(kind, m, constant_curve(grid, 1.0), constant_curve(grid, 0.6),
                         constant_curve(grid, 0.2), probes, params);
}

/// Positive check along rays from the sample mean: for directions g the
/// triples (mean, mean + g/2, mean + g) must be strictly ordered. Requires the
/// sample mean to be the deepest probed point.
inline Verdict audit_p3_rays(DepthKind kind, const GaussianProcess& gp, std::size_t n,
                             std::size_t rays, std::uint64_t seed, const DepthParams& params) {
  Verdict v;
  v.tolerance = 0.0;
  const auto m = gp_measure(gp, n, seed);
  const auto& sample = std::get<FunctionalSample>(m.law);
  const auto D = m.depth(kind, params);
  const Curve z = sample.pointwise_mean();
  const double dz = D(z);
  const auto dirs = gp.draw_curves(rays, derive_seed(seed, 1));
  json triples = json::array();
  double dmax_other = -std::numeric_limits<double>::infinity();
  bool strict = true;
  std::size_t bad = 0;
  std::vector<std::array<Curve, 2>> pts;
  std::vector<std::array<double, 2>> vals;
  for (std::size_t r = 0; r < rays; ++r) {
    const Curve y = axpy(0.5, dirs[r], z);
    const Curve x = axpy(1.0, dirs[r], z);
    const double dy = D(y), dx = D(x);
    triples.push_back({dz, dy, dx});
    pts.push_back({y, x});
    vals.push_back({dy, dx});
    dmax_other = std::max({dmax_other, dy, dx});
    if (!(dx < dy && dy < dz) && strict) {
      strict = false;
      bad = r;
    }
  }
  for (std::size_t i = 0; i < sample.size(); ++i) dmax_other = std::max(dmax_other, D(sample.curve(i)));
  v.evidence = {{"measure", m.descriptor}, {"D_mean", dz}, {"triples", triples}, {"max_other_depth", dmax_other}};
  if (dmax_other > dz) {
    v.status = Status::inapplicable;
    v.note = "the sample mean is not the deepest probed point";
    return v;
  }
  if (strict) {
    v.status = Status::satisfied;
  } else {
    v.status = Status::violated;
    WitnessBuilder w{kind, params};
    w.add(m, z, dz);
    w.add(m, pts[bad][0], vals[bad][0]);
    w.add(m, pts[bad][1], vals[bad][1]);
    v.evidence["witness"] = w.build();
  }
  return v;
}

// P-4: upper semicontinuity, probed

inline Verdict audit_p4(DepthKind kind, const Measure& m, const std::vector<Curve>& probes,
                        const std::vector<double>& deltas, const std::vector<double>& eps_list,
                        std::size_t perturbations, std::uint64_t seed, const DepthParams& params) {
  Verdict v;
  v.tolerance = *std::min_element(eps_list.begin(), eps_list.end());
  const auto D = m.depth(kind, params);
  const auto& grid = m.grid();
  const bool sup = uses_sup_metric(kind);
  std::vector<double> ladder = deltas;
  std::sort(ladder.rbegin(), ladder.rend());

  // Unit-norm perturbation directions: half smooth GP paths, half rough noise.
  KernelSpec k{"squared_exponential", 1.0, 0.1 * (grid->back() - grid->front())};
  GaussianProcess smooth(GPSpec{grid, std::nullopt, k});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Curve> dirs;
  for (std::size_t i = 0; i < perturbations; ++i) {
    Curve r = i % 2 == 0 ? smooth.draw(rng) : curve_from(grid, [&](double) { return unif(rng); });
    const double nrm = sup ? sup_norm(r) : l2_norm(r);
    dirs.push_back(scaled(r, 0.999 / nrm));
  }

  json per_probe = json::array();
  bool all_ok = true;
  std::size_t bad_probe = 0;
  double bad_eps = 0.0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const double dx = D(probes[p]);
    json found = json::object();
    std::vector<bool> ok(eps_list.size(), false);
    std::vector<double> sup_d;
    for (double delta : ladder) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& r : dirs) best = std::max(best, D(axpy(delta, r, probes[p])));
      sup_d.push_back(best);
      bool all = true;
      for (std::size_t e = 0; e < eps_list.size(); ++e) {
        if (!ok[e] && best <= dx + eps_list[e]) {
          ok[e] = true;
          found[format_double(eps_list[e])] = delta;
        }
        all = all && ok[e];
      }
      if (all) break;
    }
    per_probe.push_back({{"D_x", dx}, {"sup_depth_by_delta", sup_d}, {"delta_found", found}});
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      if (!ok[e] && all_ok) {
        all_ok = false;
        bad_probe = p;
        bad_eps = eps_list[e];
      }
    }
  }
  v.evidence = {{"measure", m.descriptor},
                {"metric", sup ? "sup" : "L2"},
                {"deltas", ladder},
                {"eps", eps_list},
                {"perturbations", perturbations},
                {"probes", per_probe}};
  if (all_ok) {
    v.status = Status::satisfied;
    v.note = "no upper-semicontinuity violation found at the probe resolution";
  } else {
    v.status = Status::violated;
    const double dx = D(probes[bad_probe]);
    const double delta = ladder.back();
    WitnessBuilder w{kind, params};
    w.add(m, probes[bad_probe], dx);
    for (const auto& r : dirs) {
      const Curve y = axpy(delta, r, probes[bad_probe]);
      const double dy = D(y);
      if (dy > dx + bad_eps) {
        w.add(m, y, dy);
        break;
      }
    }
    v.evidence["witness"] = w.build();
  }
  return v;
}

// P-5: receptivity to convex hull width

inline Verdict audit_p5(DepthKind kind, const Measure& m, double delta, double alpha,
                        const DepthParams& params) {
  Verdict v;
  v.tolerance = 1e-9;
  const auto& grid = m.grid();
  const Envelope env = std::visit([](const auto& l) { return envelope_of(l); }, m.law);
  Mask region;
  try {
    region = find_L_delta(env, delta);
  } catch (const ParameterError& e) {
    v.status = Status::inapplicable;
    v.note = e.what();
    return v;
  }
  const double frac = lebesgue_fraction(region, *grid);
  if (!(frac > 0.0 && frac < 1.0)) {
    v.status = Status::inapplicable;
    v.note = "L_delta or its complement has zero measure";
    return v;
  }
  const auto shrink = make_shrink_map(grid, region, alpha);
  const CurveMap f = shrink_map(shrink);
  const Measure pushed = f.push(m);
  const auto D = m.depth(kind, params);
  const auto Df = pushed.depth(kind, params);

  // Hull queries a L + (1 - a) U; the maximum over them stands in for sup D.
  std::vector<double> coeffs{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<Curve> queries;
  std::vector<double> before;
  for (double a : coeffs) {
    std::vector<double> q(grid->size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = a * env.lower[i] + (1.0 - a) * env.upper[i];
    queries.emplace_back(grid, std::move(q));
    before.push_back(D(queries.back()));
  }
  const double dmax = *std::max_element(before.begin(), before.end());
  json rows = json::array();
  bool all_increase = true;
  bool any = false;
  std::size_t bad = 0;
  std::vector<double> after(queries.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (!(before[q] < dmax)) continue;
    any = true;
    after[q] = Df(f(queries[q]));
    const double margin = after[q] - before[q];
    rows.push_back({{"alpha_hull", coeffs[q]}, {"before", before[q]}, {"after", after[q]}, {"margin", margin}});
    if (!(margin > v.tolerance) && all_increase) {
      all_increase = false;
      bad = q;
    }
  }
  v.evidence = {{"measure", m.descriptor},
                {"delta", delta},
                {"shrink_alpha", alpha},
                {"region_fraction", frac},
                {"max_depth", dmax},
                {"queries", rows}};
  if (!any) {
    v.status = Status::inapplicable;
    v.note = "no hull query lies below the maximal depth";
  } else if (all_increase) {
    v.status = Status::satisfied;
  } else {
    v.status = Status::violated;
    WitnessBuilder w{kind, params};
    w.add(m, queries[bad], before[bad]);
    w.add(pushed, f(queries[bad]), after[bad]);
    v.evidence["witness"] = w.build();
  }
  return v;
}

// P-6: continuity in P

struct ContaminationRecord {
  std::vector<double> eps;
  std::vector<double> mean_change;  // per epsilon, over replicates
  std::vector<double> se_change;
  double fitted_c = 0.0;
  std::vector<std::size_t> argmax_kept;  // per epsilon, count of replicates
  std::size_t replicates = 0;

  [[nodiscard]] json to_json() const {
    json j{{"eps", eps}, {"mean_abs_change", mean_change}, {"se", se_change},
           {"fitted_C", fitted_c}, {"replicates", replicates}};
    if (!argmax_kept.empty()) j["argmax_kept"] = argmax_kept;
    return j;
  }
};

/// |D(x, mix(eps)) - D(x, base)| for x = zero curve over replicates; C is the
/// smallest constant with mean change <= C eps + 3 SE at every eps. With
/// `probes` given, also counts replicates whose deepest probe is unchanged.
inline ContaminationRecord contamination_experiment(DepthKind kind, const GaussianProcess& gp,
                                                    double outlier_level,
                                                    const std::vector<double>& eps_list,
                                                    std::size_t n, std::size_t replicates,
                                                    std::uint64_t seed, const DepthParams& params,
                                                    const std::vector<Curve>& probes = {}) {
  ContaminationRecord rec;
  rec.eps = eps_list;
  rec.replicates = replicates;
  const Curve zero = constant_curve(gp.grid(), 0.0);
  Distribution outlier = AtomicDistribution({constant_curve(gp.grid(), outlier_level)}, {1.0});
  std::vector<std::vector<double>> change(eps_list.size(), std::vector<double>(replicates));
  if (!probes.empty()) rec.argmax_kept.assign(eps_list.size(), 0);
  auto argmax = [&](const DepthEvaluator& D) {
    std::vector<double> d = D.all(probes);
    return depth_order(d).front();
  };
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto base = gp.sample(n, derive_seed(seed, r));
    const auto D0 = make_depth(kind, base, params);
    const double d0 = D0(zero);
    const std::size_t a0 = probes.empty() ? 0 : argmax(D0);
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      const auto mixed = contaminate(base, outlier, eps_list[e], derive_seed(seed, 1000 + r));
      const auto De = make_depth(kind, mixed, params);
      change[e][r] = std::abs(De(zero) - d0);
      if (!probes.empty() && argmax(De) == a0) ++rec.argmax_kept[e];
    }
  }
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    rec.mean_change.push_back(stats::mean(change[e]));
    rec.se_change.push_back(stats::se(change[e]));
    rec.fitted_c = std::max(rec.fitted_c, (rec.mean_change[e] - 3.0 * rec.se_change[e]) / eps_list[e]);
  }
  return rec;
}

struct ConvergenceRecord {
  std::vector<std::size_t> sizes;
  std::vector<double> median_error;
  std::vector<double> noise_band;
  double reference = 0.0;
  std::size_t reference_n = 0;
  std::size_t improved = 0;  // replicates with error(largest n) < error(smallest n)
  bool monotone = false;

  [[nodiscard]] json to_json() const {
    return {{"sizes", sizes}, {"median_abs_error", median_error}, {"noise_band", noise_band},
            {"reference_depth", reference}, {"reference_n", reference_n},
            {"replicates_improved", improved}, {"monotone_within_noise", monotone}};
  }
};

/// |D(0, P_n) - D(0, P_ref)| along increasing n; samples of different sizes
/// within a replicate are nested prefixes of one draw.
inline ConvergenceRecord convergence_experiment(DepthKind kind, const GaussianProcess& gp,
                                                const std::vector<std::size_t>& sizes,
                                                std::size_t reference_n, std::size_t replicates,
                                                std::uint64_t seed, const DepthParams& params) {
  ConvergenceRecord rec;
  rec.sizes = sizes;
  rec.reference_n = reference_n;
  const Curve zero = constant_curve(gp.grid(), 0.0);
  rec.reference = make_depth(kind, gp.sample(reference_n, derive_seed(seed, 777)), params)(zero);
  const std::size_t nmax = *std::max_element(sizes.begin(), sizes.end());
  std::vector<std::vector<double>> err(sizes.size(), std::vector<double>(replicates));
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto all = gp.draw_curves(nmax, derive_seed(seed, r));
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      FunctionalSample s(std::vector<Curve>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(sizes[k])));
      err[k][r] = std::abs(make_depth(kind, s, params)(zero) - rec.reference);
    }
  }
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    rec.median_error.push_back(stats::median(err[k]));
    // Standard error of a median is about 1.2533 sd / sqrt(R).
    rec.noise_band.push_back(3.0 * 1.2533 * stats::sd(err[k]) / std::sqrt(static_cast<double>(replicates)));
  }
  for (std::size_t r = 0; r < replicates; ++r) rec.improved += err.back()[r] < err.front()[r];
  bool mono = rec.median_error.back() < rec.median_error.front();
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    const double band = std::max(rec.noise_band[k], rec.noise_band[k + 1]);
    mono = mono && rec.median_error[k + 1] <= rec.median_error[k] + band;
  }
  rec.monotone = mono;
  return rec;
}

inline Verdict audit_p6(DepthKind kind, const GaussianProcess& gp, const AuditConfig& c,
                        std::uint64_t seed, const DepthParams& params) {
  Verdict v;
  v.tolerance = 3.0;
  const std::size_t smallest = *std::min_element(c.p6_sizes.begin(), c.p6_sizes.end());
  if (c.n < c.min_mc_n || smallest < c.min_mc_n) {
    v.status = Status::inapplicable;
    v.note = "under-powered: Monte-Carlo sample sizes below " + std::to_string(c.min_mc_n);
    v.evidence = {{"n", c.n}, {"sizes", c.p6_sizes}};
    return v;
  }
  const auto conv = convergence_experiment(kind, gp, c.p6_sizes, c.p6_reference, c.replicates,
                                           derive_seed(seed, 1), params);
  const auto cont = contamination_experiment(kind, gp, c.outlier_level, c.p6_eps, c.n, c.replicates,
                                             derive_seed(seed, 2), params);
  const double c_max = c.p6_c_factor * depth_upper_bound(kind, params);
  v.evidence = {{"convergence", conv.to_json()},
                {"contamination", cont.to_json()},
                {"C_max", c_max}};
  if (kind == DepthKind::bd) {
    v.evidence["caveat"] =
        "continuity of the band depth in P assumes an equicontinuous function class; on a finite "
        "grid every sample is equicontinuous at grid resolution, so the caveat is not distinguishable";
  }
  const bool ok_conv = conv.monotone;
  const bool ok_cont = cont.fitted_c <= c_max;
  if (ok_conv && ok_cont) {
    v.status = Status::satisfied;
  } else {
    v.status = Status::violated;
    v.note = std::string(ok_conv ? "" : "empirical depth does not approach the reference; ") +
             (ok_cont ? "" : "contamination effect exceeds C_max * eps");
    // Witness: the zero curve under the base and most contaminated replicate-0 samples.
    const auto base = gp_measure(gp, c.n, derive_seed(derive_seed(seed, 2), 0));
    const auto mixed = mix_measure(base, c.outlier_level, c.p6_eps.front(),
                                   derive_seed(derive_seed(seed, 2), 1000));
    const Curve zero = constant_curve(gp.grid(), 0.0);
    WitnessBuilder w{kind, params};
    w.add(base, zero, base.depth(kind, params)(zero));
    w.add(mixed, zero, mixed.depth(kind, params)(zero));
    v.evidence["witness"] = w.build();
  }
  return v;
}

// Full audit

struct Golden {
  static Status expected(DepthKind k, Property p) {
    // Rows in depth order, columns P-1, P-2G, P-3, P-4, P-5, P-6.
    static constexpr const char* rows[] = {"xvvvvv", "vvxvxv", "vvxvxv", "vvxvxv", "vxxvxv", "vvxvxv"};
    const char c = rows[static_cast<int>(k)][static_cast<int>(p)];
    return c == 'v' ? Status::satisfied : Status::violated;
  }
};

struct AuditReport {
  AuditConfig config;
  Verdict cells[6][6];

  [[nodiscard]] const Verdict& at(DepthKind k, Property p) const {
    return cells[static_cast<int>(k)][static_cast<int>(p)];
  }

  [[nodiscard]] std::vector<std::string> mismatches() const {
    std::vector<std::string> out;
    for (auto k : kAllDepths) {
      for (auto p : kAllProperties) {
        if (at(k, p).status != Golden::expected(k, p)) {
          out.push_back(std::string(depth_label(k)) + " " + std::string(property_id(p)) + ": " +
                        std::string(status_id(at(k, p).status)) + ", expected " +
                        std::string(status_id(Golden::expected(k, p))));
        }
      }
    }
    return out;
  }

  [[nodiscard]] std::vector<std::string> inapplicable() const {
    std::vector<std::string> out;
    for (auto k : kAllDepths) {
      for (auto p : kAllProperties) {
        if (at(k, p).status == Status::inapplicable) {
          out.push_back(std::string(depth_label(k)) + " " + std::string(property_id(p)));
        }
      }
    }
    return out;
  }

  [[nodiscard]] bool matches_golden() const { return mismatches().empty(); }

  [[nodiscard]] json to_json() const {
    json cells_j = json::array();
    json matrix = json::object();
    json golden = json::object();
    for (auto k : kAllDepths) {
      std::string row, grow;
      for (auto p : kAllProperties) {
        json c = at(k, p).to_json();
        c["depth"] = std::string(depth_id(k));
        c["property"] = std::string(property_id(p));
        cells_j.push_back(std::move(c));
        row += status_symbol(at(k, p).status);
        grow += status_symbol(Golden::expected(k, p));
      }
      matrix[std::string(depth_label(k))] = row;
      golden[std::string(depth_label(k))] = grow;
    }
    json j{{"schema", 1},
           {"config", config.to_json()},
           {"kernel", kernel_to_json(config.kernel)},
           {"cells", cells_j},
           {"matrix", matrix},
           {"golden", golden},
           {"matches_golden", matches_golden()},
           {"mismatches", mismatches()},
           {"inapplicable", inapplicable()}};
    if (config.timestamp) j["timestamp"] = *config.timestamp;
    return j;
  }

  [[nodiscard]] std::string to_markdown() const {
    std::string s = "| | P-1 | P-2G | P-3 | P-4 | P-5 | P-6 |\n|---|---|---|---|---|---|---|\n";
    for (auto k : kAllDepths) {
      s += "| " + std::string(depth_label(k)) + " |";
      for (auto p : kAllProperties) s += " " + std::string(status_symbol(at(k, p).status)) + " |";
      s += "\n";
    }
    const auto mm = mismatches();
    auto short_num = [](double x) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", x);
      return std::string(buf);
    };
    s += "\nKernel: squared exponential, variance " + short_num(config.kernel.variance) +
         ", length scale " + short_num(config.kernel.length_scale) + ". Seed " +
         std::to_string(config.seed) + ".\n";
    if (mm.empty()) {
      s += "\nAll 36 cells match the reference pattern.\n";
    } else {
      s += "\nCells differing from the reference pattern:\n\n";
      for (const auto& m : mm) s += "- " + m + "\n";
    }
    for (auto k : kAllDepths) {
      for (auto p : kAllProperties) {
        const auto& v = at(k, p);
        if (!v.note.empty()) {
          s += "\nNote (" + std::string(depth_label(k)) + ", " + std::string(property_id(p)) + "): " + v.note + "\n";
        }
      }
    }
    return s;
  }
};

inline Verdict run_audit_cell(DepthKind kind, Property prop, const AuditConfig& c) {
  const GaussianProcess gp(c.gp());
  const auto grid = gp.grid();
  const DepthParams params = c.params_for(kind);
  const std::uint64_t seed = derive_seed(c.seed, static_cast<std::uint64_t>(prop));
  switch (prop) {
    case Property::P1: {
      const auto base = gp_measure(gp, c.p1_n, seed);
      return audit_p1(kind, base, p1_transform(kind, c.p1_scale, grid), params);
    }
    case Property::P2G: {
      DepthParams p = params;
      std::size_t n = c.n;
      if (kind == DepthKind::bd) {
        p.J = c.p2g_J;
        n = std::min(c.n, c.band_n);
      }
      auto v = audit_p2g(kind, gp, n, c.replicates, seed, p, c.min_mc_n);
      if (kind == DepthKind::hr && v.status == Status::satisfied) {
        v.note = "the zero curve is the deepest probe; the reference table lists this cell as violated";
      }
      return v;
    }
    case Property::P3:
      if (kind == DepthKind::h) return audit_p3_rays(kind, gp, c.p3_n, c.p3_rays, seed, params);
      return audit_p3(kind, grid, params);
    case Property::P4: {
      const auto m = gp_measure(gp, c.p4_n, seed);
      const auto probes = default_probes(std::get<FunctionalSample>(m.law), c.p4_probes);
      return audit_p4(kind, m, probes, c.p4_deltas, c.p4_eps, c.p4_perturbations,
                      derive_seed(seed, 1), params);
    }
    case Property::P5: {
      const auto m = named_atomic_measure("counterexample_p5", grid);
      return audit_p5(kind, m, c.p5_delta, c.p5_alpha, params);
    }
    case Property::P6: return audit_p6(kind, gp, c, seed, params);
  }
  throw ParameterError("unknown property");
}

inline AuditReport run_full_audit(const AuditConfig& c) {
  c.validate();
  AuditReport report;
  report.config = c;
  std::vector<std::pair<DepthKind, Property>> jobs;
  for (auto k : kAllDepths) {
    for (auto p : kAllProperties) jobs.emplace_back(k, p);
  }
  const unsigned workers = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(jobs.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        const auto [k, p] = jobs[i];
        report.cells[static_cast<int>(k)][static_cast<int>(p)] = run_audit_cell(k, p, c);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return report;
}

}  // namespace fdepth
