#pragma once

// Reconstruction of sparsely observed curves and the stability of depth values
// computed from the reconstructed sample.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fdepth/audit.hpp"
#include "fdepth/core.hpp"
#include "fdepth/csv.hpp"
#include "fdepth/depths.hpp"
#include "fdepth/distributions.hpp"

namespace fdepth {

struct SparseObservation {
  std::vector<std::size_t> points;  // grid indices, strictly increasing
  std::vector<double> values;

  void validate(std::size_t m) const {
    if (points.size() != values.size()) throw DataError("observation indices and values differ in length");
    if (points.size() < 2) throw DataError("a curve needs at least two observed points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i] >= m) throw DataError("observation index outside the grid");
      if (i > 0 && points[i] <= points[i - 1]) throw DataError("observation indices must be strictly increasing");
      if (!std::isfinite(values[i])) throw DataError("observed values must be finite");
    }
  }
};

/// Piecewise-linear interpolation in grid abscissae; constant beyond the first
/// and last observed points.
inline Curve reconstruct_curve(const SparseObservation& obs, const GridPtr& target) {
  obs.validate(target->size());
  const auto& g = *target;
  std::vector<double> out(g.size());
  std::size_t k = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (v <= obs.points.front()) {
      out[v] = obs.values.front();
    } else if (v >= obs.points.back()) {
      out[v] = obs.values.back();
    } else {
      while (obs.points[k + 1] < v) ++k;
      const std::size_t a = obs.points[k], b = obs.points[k + 1];
      if (v == b) {
        out[v] = obs.values[k + 1];
      } else {
        const double t = (g.point(v) - g.point(a)) / (g.point(b) - g.point(a));
        out[v] = obs.values[k] + t * (obs.values[k + 1] - obs.values[k]);
      }
    }
  }
  return Curve(target, std::move(out));
}

inline FunctionalSample reconstruct_linear(const std::vector<SparseObservation>& obs, const GridPtr& target) {
  if (obs.empty()) throw DataError("no curves to reconstruct");
  std::vector<Curve> curves;
  curves.reserve(obs.size());
  for (const auto& o : obs) curves.push_back(reconstruct_curve(o, target));
  return FunctionalSample(std::move(curves));
}

/// Sparse observations from a table read in sparse mode (NaN = unobserved).
inline std::vector<SparseObservation> sparse_from_table(const CsvTable& t) {
  std::vector<SparseObservation> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    SparseObservation o;
    for (std::size_t v = 0; v < t.rows[r].size(); ++v) {
      if (!std::isnan(t.rows[r][v])) {
        o.points.push_back(v);
        o.values.push_back(t.rows[r][v]);
      }
    }
    if (o.points.size() < 2) {
      throw DataError("line " + std::to_string(t.row_lines[r]) + ": fewer than two observed values");
    }
    out.push_back(std::move(o));
  }
  return out;
}

/// Keeps max(2, round(rate m)) random grid points of `x` and adds N(0, sd^2) noise.
template <class Rng>
SparseObservation subsample(const Curve& x, double rate, double noise_sd, Rng& rng) {
  const std::size_t m = x.size();
  const auto keep = std::min(m, std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(rate * static_cast<double>(m)))));
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  for (std::size_t i = 0; i < keep; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, m - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  std::normal_distribution<double> noise(0.0, 1.0);
  SparseObservation o;
  o.points = idx;
  for (auto i : idx) o.values.push_back(noise_sd > 0.0 ? x[i] + noise_sd * noise(rng) : x[i]);
  return o;
}

struct StabilityRecord {
  double sparse_rate = 1.0;
  double noise_sd = 0.0;
  double max_deviation = 0.0;
  double median_deviation = 0.0;
  std::vector<double> per_seed_median;
  std::size_t probes = 0;

  [[nodiscard]] json to_json() const {
    return {{"sparse_rate", sparse_rate},   {"noise_sd", noise_sd},
            {"max_deviation", max_deviation}, {"median_deviation", median_deviation},
            {"per_seed_median", per_seed_median}, {"probes", probes}};
  }
};

/// Probe set: zero curve, pointwise mean and up to 20 leading sample curves.
inline std::vector<Curve> stability_probes(const FunctionalSample& full) {
  std::vector<Curve> probes{constant_curve(full.grid(), 0.0), full.pointwise_mean()};
  for (std::size_t i = 0; i < std::min<std::size_t>(20, full.size()); ++i) probes.push_back(full.curve(i));
  return probes;
}

inline StabilityRecord depth_stability(DepthKind kind, const FunctionalSample& full, double sparse_rate,
                                       double noise_sd, const std::vector<std::uint64_t>& seeds,
                                       const DepthParams& params = {}) {
  if (!(sparse_rate > 0.0 && sparse_rate <= 1.0)) throw ParameterError("sparse rate must lie in (0, 1]");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw ParameterError("noise sd must be nonnegative");
  if (seeds.empty()) throw ParameterError("at least one seed is required");
  StabilityRecord rec;
  rec.sparse_rate = sparse_rate;
  rec.noise_sd = noise_sd;
  const auto probes = stability_probes(full);
  rec.probes = probes.size();
  const auto reference = make_depth(kind, full, params).all(probes);
  std::vector<double> pooled;
  for (auto seed : seeds) {
    std::mt19937_64 rng(seed);
    std::vector<SparseObservation> obs;
    obs.reserve(full.size());
    for (const auto& c : full.curves()) obs.push_back(subsample(c, sparse_rate, noise_sd, rng));
    auto rec_sample = reconstruct_linear(obs, full.grid());
    FunctionalSample weighted(rec_sample.curves(), std::vector<double>(full.weights().begin(), full.weights().end()));
    const auto d = make_depth(kind, weighted, params).all(probes);
    std::vector<double> dev(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) dev[i] = std::abs(d[i] - reference[i]);
    rec.per_seed_median.push_back(stats::median(dev));
    pooled.insert(pooled.end(), dev.begin(), dev.end());
  }
  rec.max_deviation = *std::max_element(pooled.begin(), pooled.end());
  rec.median_deviation = stats::median(pooled);
  return rec;
}

}  // namespace fdepth
