#pragma once

// Centre-outward ranking, trimming and depth-based outlier flags.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fdepth/audit.hpp"
#include "fdepth/core.hpp"
#include "fdepth/depths.hpp"

namespace fdepth {

struct RankResult {
  std::vector<double> depth;
  std::vector<std::size_t> rank;   // 1 = deepest
  std::vector<std::size_t> order;  // curve indices, deepest first
  std::size_t deepest = 0;
};

/// Descending depth; ties keep input order.
inline RankResult rank_by_depth(std::vector<double> depth) {
  RankResult r;
  r.order = depth_order(depth);
  r.rank.resize(depth.size());
  for (std::size_t k = 0; k < r.order.size(); ++k) r.rank[r.order[k]] = k + 1;
  r.deepest = r.order.empty() ? 0 : r.order.front();
  r.depth = std::move(depth);
  return r;
}

inline std::vector<double> self_depths(DepthKind kind, const FunctionalSample& s, const DepthParams& p) {
  return make_depth(kind, s, p).all(s.curves());
}

struct TrimResult {
  std::vector<std::size_t> kept;  // input order
  std::vector<std::size_t> dropped;
  Curve trimmed_mean;
};

/// Drops the floor(alpha n) curves with the lowest depth (ties: later index
/// dropped first) and averages the rest.
inline TrimResult trim(const FunctionalSample& s, const std::vector<double>& depth, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("trim fraction must lie in [0, 1)");
  if (depth.size() != s.size()) throw DomainError("depth vector does not match sample");
  const auto r = rank_by_depth(depth);
  const auto drop = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(s.size())));
  std::vector<bool> gone(s.size(), false);
  for (std::size_t k = 0; k < drop; ++k) gone[r.order[s.size() - 1 - k]] = true;
  std::vector<std::size_t> kept, dropped;
  std::vector<double> mean(s.grid()->size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (gone[i]) {
      dropped.push_back(i);
    } else {
      kept.push_back(i);
    }
  }
  for (std::size_t v = 0; v < mean.size(); ++v) {
    CompensatedSum acc;
    for (auto i : kept) acc.add(s.curve(i)[v]);
    mean[v] = acc.value() / static_cast<double>(kept.size());
  }
  return {std::move(kept), std::move(dropped), Curve(s.grid(), std::move(mean))};
}

struct OutlierResult {
  double threshold = 0.0;
  std::vector<bool> flagged;
};

/// Flags curves whose depth is at or below the type-7 q-quantile of the
/// sample depths.
inline OutlierResult flag_outliers(const std::vector<double>& depth, double q) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantile level must lie in (0, 1)");
  if (depth.empty()) throw DomainError("no depths to threshold");
  OutlierResult r;
  r.threshold = stats::quantile(depth, q);
  for (double d : depth) r.flagged.push_back(d <= r.threshold);
  return r;
}

}  // namespace fdepth
