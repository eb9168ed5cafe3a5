#pragma once

// Pointwise envelopes, the convex hull they span, the low-width region L_delta
// and the pointwise shrink map used to probe hull-width receptivity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fdepth/core.hpp"
#include "fdepth/distributions.hpp"

namespace fdepth {

enum class EnvelopeSource { sample, atoms };

struct Envelope {
  Curve lower;
  Curve upper;
  EnvelopeSource source = EnvelopeSource::sample;

  Envelope(Curve l, Curve u, EnvelopeSource s) : lower(std::move(l)), upper(std::move(u)), source(s) {
    require_same_grid(lower, upper);
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (lower[i] > upper[i]) throw DomainError("envelope lower bound exceeds upper bound");
    }
  }

  [[nodiscard]] std::vector<double> width() const {
    std::vector<double> w(lower.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = upper[i] - lower[i];
    return w;
  }
};

namespace detail {
inline Envelope envelope_of_curves(const std::vector<Curve>& curves, EnvelopeSource src) {
  if (curves.empty()) throw DomainError("envelope of an empty set");
  const std::size_t m = curves.front().size();
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
  for (const auto& c : curves) {
    require_same_grid(c, curves.front());
    for (std::size_t v = 0; v < m; ++v) {
      lo[v] = std::min(lo[v], c[v]);
      hi[v] = std::max(hi[v], c[v]);
    }
  }
  const auto& g = curves.front().grid();
  return Envelope(Curve(g, std::move(lo)), Curve(g, std::move(hi)), src);
}
}  // namespace detail

/// For a sample the observed curves stand in for the support; for an atomic
/// law the support is exact. Zero-weight curves are ignored.
inline Envelope envelope_of(const FunctionalSample& s) {
  std::vector<Curve> support;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.weight(i) > 0.0) support.push_back(s.curve(i));
  }
  return detail::envelope_of_curves(support, EnvelopeSource::sample);
}

inline Envelope envelope_of(const AtomicDistribution& d) {
  return detail::envelope_of_curves(d.atoms(), EnvelopeSource::atoms);
}

/// True iff a single alpha in [0, 1] gives x = alpha L + (1 - alpha) U at
/// every grid point, up to tol.
inline bool hull_contains(const Curve& x, const Envelope& env, double tol = 1e-9) {
  require_same_grid(x, env.lower);
  double lo = 0.0, hi = 1.0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    const double L = env.lower[v], U = env.upper[v];
    const double w = U - L;
    if (w <= tol) {
      if (std::abs(x[v] - L) > tol && std::abs(x[v] - U) > tol) return false;
      continue;
    }
    // alpha = (U - x) / (U - L)
    lo = std::max(lo, (U - x[v] - tol) / w);
    hi = std::min(hi, (U - x[v] + tol) / w);
    if (lo > hi) return false;
  }
  return true;
}

/// Grid mask {v : U(v) - L(v) <= delta}. delta must lie in
/// [min width, max width) so that both the region and its complement are
/// nonempty on the grid.
inline Mask find_L_delta(const Envelope& env, double delta) {
  const auto w = env.width();
  const double wmin = *std::min_element(w.begin(), w.end());
  const double wmax = *std::max_element(w.begin(), w.end());
  if (!(delta >= wmin && delta < wmax)) {
    throw ParameterError("delta must lie in [" + format_double(wmin) + ", " +
                         format_double(wmax) + ")");
  }
  Mask m(w.size());
  for (std::size_t v = 0; v < w.size(); ++v) m[v] = w[v] <= delta;
  return m;
}

struct ShrinkMap {
  Curve alpha;
  Mask region;
};

inline ShrinkMap make_shrink_map(const GridPtr& grid, const Mask& region, double alpha) {
  if (region.size() != grid->size()) throw DomainError("region mask does not match grid");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("shrink factor must lie in (0, 1)");
  std::vector<double> a(grid->size());
  for (std::size_t v = 0; v < a.size(); ++v) a[v] = region[v] ? alpha : 1.0;
  return {Curve(grid, std::move(a)), region};
}

inline ShrinkMap make_shrink_map(const Curve& alpha) {
  Mask region(alpha.size());
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    if (!(alpha[v] > 0.0 && alpha[v] <= 1.0)) throw ParameterError("shrink factors must lie in (0, 1]");
    region[v] = alpha[v] < 1.0;
  }
  return {alpha, std::move(region)};
}

inline Curve apply_shrink(const Curve& x, const ShrinkMap& map) {
  require_same_grid(x, map.alpha);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = map.alpha[i] * x[i];
  return x.with_values(std::move(v));
}

inline ShrinkMap compose(const ShrinkMap& a, const ShrinkMap& b) {
  return make_shrink_map(apply_shrink(a.alpha, b));
}

}  // namespace fdepth
