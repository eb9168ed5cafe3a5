#pragma once

// The six functional depths on grid data: h-depth, random Tukey, band depth,
// modified band depth, half-region and modified half-region depth.
//
// Each depth has an evaluator that preprocesses the reference measure once
// and can then be applied to many query curves. Evaluators are immutable and
// safe to share across threads.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "fdepth/core.hpp"
#include "fdepth/distributions.hpp"
#include "json.hpp"

namespace fdepth {

enum class DepthKind { h, rt, bd, mbd, hr, mhr };

inline constexpr DepthKind kAllDepths[] = {DepthKind::h,   DepthKind::rt, DepthKind::bd,
                                           DepthKind::mbd, DepthKind::hr, DepthKind::mhr};

inline std::string_view depth_id(DepthKind k) {
  switch (k) {
    case DepthKind::h: return "h";
    case DepthKind::rt: return "rt";
    case DepthKind::bd: return "bd";
    case DepthKind::mbd: return "mbd";
    case DepthKind::hr: return "hr";
    case DepthKind::mhr: return "mhr";
  }
  return "?";
}

/// Display label used in report tables.
inline std::string_view depth_label(DepthKind k) {
  switch (k) {
    case DepthKind::h: return "D_h";
    case DepthKind::rt: return "D_RT";
    case DepthKind::bd: return "D_J";
    case DepthKind::mbd: return "D_MJ";
    case DepthKind::hr: return "D_HR";
    case DepthKind::mhr: return "D_MHR";
  }
  return "?";
}

inline DepthKind parse_depth(std::string_view s) {
  for (auto k : kAllDepths) {
    if (s == depth_id(k)) return k;
  }
  throw ParameterError("unknown depth '" + std::string(s) + "' (expected h, rt, bd, mbd, hr, mhr)");
}

inline bool uses_sup_metric(DepthKind k) { return k != DepthKind::h && k != DepthKind::rt; }

struct DepthParams {
  double h = 1.0;
  int J = 2;
  int directions = 20;
  std::uint64_t direction_seed = 20240501;
  double direction_variance = 1.0;
  double direction_length_scale = 0.0;  // 0 means 0.2 * lambda(V)

  void validate(DepthKind k) const {
    if (k == DepthKind::h && !(h > 0.0 && std::isfinite(h))) {
      throw ParameterError("bandwidth h must be positive");
    }
    if ((k == DepthKind::bd || k == DepthKind::mbd) && J < 2) {
      throw ParameterError("band order J must be at least 2");
    }
    if (k == DepthKind::rt) {
      if (directions < 1) throw ParameterError("random Tukey needs at least one direction");
      if (!(direction_variance > 0.0)) throw ParameterError("direction variance must be positive");
      if (direction_length_scale < 0.0) {
        throw ParameterError("direction length scale must be nonnegative");
      }
    }
  }

  [[nodiscard]] nlohmann::json to_json(DepthKind k) const {
    switch (k) {
      case DepthKind::h: return {{"h", h}};
      case DepthKind::rt:
        return {{"directions", directions},
                {"direction_seed", direction_seed},
                {"direction_kernel",
                 {{"type", "squared_exponential"},
                  {"variance", direction_variance},
                  {"length_scale", direction_length_scale}}}};
      case DepthKind::bd:
      case DepthKind::mbd: return {{"J", J}};
      default: return nlohmann::json::object();
    }
  }
};

inline double depth_upper_bound(DepthKind k, const DepthParams& p) {
  switch (k) {
    case DepthKind::h: return 1.0 / (p.h * std::sqrt(2.0 * std::numbers::pi));
    case DepthKind::bd:
    case DepthKind::mbd: return static_cast<double>(p.J - 1);
    default: return 1.0;
  }
}

struct DepthResult {
  DepthKind kind = DepthKind::h;
  double value = 0.0;
  DepthParams params;
  std::size_t n = 0;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"depth", std::string(depth_id(kind))},
            {"value", value},
            {"params", params.to_json(kind)},
            {"n", n}};
  }
};

/// min(Q(-inf, t], Q[t, inf)) with closed tails.
inline double halfspace_depth_1d(double t, std::span<const double> values,
                                 std::span<const double> weights) {
  if (values.empty()) throw DomainError("halfspace depth of an empty set");
  if (values.size() != weights.size()) throw DomainError("one weight per value required");
  CompensatedSum le, ge;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= t) le.add(weights[i]);
    if (values[i] >= t) ge.add(weights[i]);
  }
  return std::min(le.value(), ge.value());
}

inline double halfspace_depth_1d(double t, std::span<const double> values) {
  if (values.empty()) throw DomainError("halfspace depth of an empty set");
  std::size_t le = 0, ge = 0;
  for (double v : values) {
    le += v <= t;
    ge += v >= t;
  }
  return static_cast<double>(std::min(le, ge)) / static_cast<double>(values.size());
}

namespace detail {

inline double binom(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

inline std::uint64_t binom_u64(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw ResourceError("tuple count overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(r);
}

/// Per-grid-point sorted sample values with weight prefix sums.
struct SortedColumns {
  std::size_t n = 0, m = 0;
  std::vector<double> values;   // m columns of n sorted values
  std::vector<double> prefix;   // m columns of n+1 cumulative weights from below
  std::vector<double> suffix;   // m columns of n+1 cumulative weights from above
  bool uniform = true;

  explicit SortedColumns(const FunctionalSample& s) : n(s.size()), m(s.grid()->size()) {
    uniform = s.uniform();
    values.resize(n * m);
    if (!uniform) {
      prefix.resize((n + 1) * m);
      suffix.resize((n + 1) * m);
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t v = 0; v < m; ++v) {
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return s.curve(a)[v] < s.curve(b)[v];
      });
      double* col = &values[v * n];
      for (std::size_t i = 0; i < n; ++i) col[i] = s.curve(idx[i])[v];
      if (!uniform) {
        double* pre = &prefix[v * (n + 1)];
        double* suf = &suffix[v * (n + 1)];
        CompensatedSum a;
        pre[0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          a.add(s.weight(idx[i]));
          pre[i + 1] = a.value();
        }
        CompensatedSum b;
        suf[n] = 0.0;
        for (std::size_t i = n; i-- > 0;) {
          b.add(s.weight(idx[i]));
          suf[i] = b.value();
        }
      }
    }
  }

  [[nodiscard]] std::span<const double> column(std::size_t v) const {
    return {values.data() + v * n, n};
  }
  /// Number of values strictly below t at grid point v.
  [[nodiscard]] std::size_t below(std::size_t v, double t) const {
    auto c = column(v);
    return static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), t) - c.begin());
  }
  /// Number of values less than or equal to t at grid point v.
  [[nodiscard]] std::size_t at_most(std::size_t v, double t) const {
    auto c = column(v);
    return static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), t) - c.begin());
  }
};

}  // namespace detail

// h-depth

class HDepth {
 public:
  HDepth(FunctionalSample sample, double h) : sample_(std::move(sample)), h_(h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("bandwidth h must be positive");
  }
  double operator()(const Curve& x) const {
    require_same_grid(x, sample_.curve(0));
    const double norm = 1.0 / (h_ * std::sqrt(2.0 * std::numbers::pi));
    CompensatedSum s;
    for (std::size_t i = 0; i < sample_.size(); ++i) {
      const double d = l2_distance(x, sample_.curve(i));
      s.add(sample_.weight(i) * std::exp(-d * d / (2.0 * h_ * h_)));
    }
    return norm * s.value();
  }

 private:
  FunctionalSample sample_;
  double h_;
};

// Random Tukey depth

inline std::vector<Curve> tukey_directions(const GridPtr& grid, const DepthParams& p) {
  KernelSpec k;
  k.variance = p.direction_variance;
  k.length_scale = p.direction_length_scale > 0.0 ? p.direction_length_scale
                                                   : 0.2 * (grid->back() - grid->front());
  GPSpec spec{grid, std::nullopt, k};
  GaussianProcess gp(spec);
  std::mt19937_64 rng(p.direction_seed);
  std::vector<Curve> dirs;
  while (dirs.size() < static_cast<std::size_t>(p.directions)) {
    Curve u = gp.draw(rng);
    const double nrm = l2_norm(u);
    if (!(nrm > 0.0)) continue;
    dirs.push_back(scaled(u, 1.0 / nrm));
  }
  return dirs;
}

class RandomTukeyDepth {
 public:
  RandomTukeyDepth(const FunctionalSample& sample, const DepthParams& p)
      : RandomTukeyDepth(sample, tukey_directions(sample.grid(), p)) {}

  RandomTukeyDepth(FunctionalSample sample, std::vector<Curve> directions)
      : sample_(std::move(sample)), dirs_(std::move(directions)) {
    if (dirs_.empty()) throw ParameterError("random Tukey needs at least one direction");
    const std::size_t n = sample_.size();
    proj_.resize(dirs_.size());
    pre_.resize(dirs_.size());
    suf_.resize(dirs_.size());
    std::vector<std::pair<double, double>> pw(n);
    for (std::size_t d = 0; d < dirs_.size(); ++d) {
      for (std::size_t i = 0; i < n; ++i) {
        pw[i] = {inner_product(dirs_[d], sample_.curve(i)), sample_.weight(i)};
      }
      std::stable_sort(pw.begin(), pw.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      auto& pr = proj_[d];
      pr.resize(n);
      for (std::size_t i = 0; i < n; ++i) pr[i] = pw[i].first;
      if (!sample_.uniform()) {
        auto& a = pre_[d];
        auto& b = suf_[d];
        a.assign(n + 1, 0.0);
        b.assign(n + 1, 0.0);
        CompensatedSum ca, cb;
        for (std::size_t i = 0; i < n; ++i) {
          ca.add(pw[i].second);
          a[i + 1] = ca.value();
        }
        for (std::size_t i = n; i-- > 0;) {
          cb.add(pw[i].second);
          b[i] = cb.value();
        }
      }
    }
  }

  double operator()(const Curve& x) const {
    require_same_grid(x, sample_.curve(0));
    const std::size_t n = sample_.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < dirs_.size(); ++d) {
      const double t = inner_product(dirs_[d], x);
      const auto& pr = proj_[d];
      const auto le = static_cast<std::size_t>(std::upper_bound(pr.begin(), pr.end(), t) - pr.begin());
      const auto lt = static_cast<std::size_t>(std::lower_bound(pr.begin(), pr.end(), t) - pr.begin());
      double val;
      if (sample_.uniform()) {
        val = static_cast<double>(std::min(le, n - lt)) / static_cast<double>(n);
      } else {
        val = std::min(pre_[d][le], suf_[d][lt]);
      }
      best = std::min(best, val);
    }
    return best;
  }

  [[nodiscard]] const std::vector<Curve>& directions() const { return dirs_; }

 private:
  FunctionalSample sample_;
  std::vector<Curve> dirs_;
  std::vector<std::vector<double>> proj_, pre_, suf_;
};

// Band depth (sample, without replacement)

/// Counts j-subsets whose pointwise min-max band contains the query. Each
/// curve is summarized by bitmasks of grid points where it lies strictly
/// above / strictly below the query; a subset covers the query iff the AND of
/// its "above" masks and the AND of its "below" masks are both empty.
class BandDepth {
 public:
  BandDepth(FunctionalSample sample, int J) : sample_(std::move(sample)), J_(J) {
    if (J < 2) throw ParameterError("band order J must be at least 2");
    if (static_cast<std::size_t>(J) > sample_.size()) {
      throw ParameterError("band order J = " + std::to_string(J) + " exceeds sample size " +
                           std::to_string(sample_.size()));
    }
    if (!sample_.uniform()) {
      throw ParameterError("sample band depths require uniform weights; use the atomic variant");
    }
    for (int j = 2; j <= J_; ++j) detail::binom_u64(sample_.size(), static_cast<std::size_t>(j));
  }

  double operator()(const Curve& x) const {
    require_same_grid(x, sample_.curve(0));
    const std::size_t n = sample_.size();
    const std::size_t m = x.size();
    const std::size_t W = (m + 63) / 64;
    std::vector<std::uint64_t> above(n * W, 0), below(n * W, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = sample_.curve(i);
      for (std::size_t v = 0; v < m; ++v) {
        const std::uint64_t bit = std::uint64_t{1} << (v % 64);
        if (c[v] > x[v]) above[i * W + v / 64] |= bit;
        if (c[v] < x[v]) below[i * W + v / 64] |= bit;
      }
    }
    double total = 0.0;
    for (int j = 2; j <= J_; ++j) {
      const auto count = count_covering(above, below, n, W, static_cast<std::size_t>(j));
      total += static_cast<double>(count) / detail::binom(n, static_cast<std::size_t>(j));
    }
    return total;
  }

  static std::uint64_t count_covering(const std::vector<std::uint64_t>& above,
                                      const std::vector<std::uint64_t>& below, std::size_t n,
                                      std::size_t W, std::size_t j) {
    if (j == 2) {
      std::uint64_t count = 0;
      for (std::size_t a = 0; a < n; ++a) {
        const std::uint64_t* A = &above[a * W];
        const std::uint64_t* B = &below[a * W];
        bool self = true;
        for (std::size_t w = 0; w < W; ++w) self = self && A[w] == 0 && B[w] == 0;
        if (self) {
          count += n - 1 - a;
          continue;
        }
        for (std::size_t b = a + 1; b < n; ++b) {
          const std::uint64_t* A2 = &above[b * W];
          const std::uint64_t* B2 = &below[b * W];
          std::uint64_t acc = 0;
          for (std::size_t w = 0; w < W; ++w) acc |= (A[w] & A2[w]) | (B[w] & B2[w]);
          count += acc == 0;
        }
      }
      return count;
    }
    std::vector<std::uint64_t> stackA((j + 1) * W, ~std::uint64_t{0});
    std::vector<std::uint64_t> stackB((j + 1) * W, ~std::uint64_t{0});
    std::uint64_t count = 0;
    recurse(above, below, n, W, j, 0, 0, stackA, stackB, count);
    return count;
  }

 private:
  // depth s curves chosen so far; their accumulated masks live at level s.
  static void recurse(const std::vector<std::uint64_t>& above,
                      const std::vector<std::uint64_t>& below, std::size_t n, std::size_t W,
                      std::size_t j, std::size_t start, std::size_t s,
                      std::vector<std::uint64_t>& stackA, std::vector<std::uint64_t>& stackB,
                      std::uint64_t& count) {
    const std::uint64_t* accA = &stackA[s * W];
    const std::uint64_t* accB = &stackB[s * W];
    std::uint64_t* nextA = &stackA[(s + 1) * W];
    std::uint64_t* nextB = &stackB[(s + 1) * W];
    const std::size_t remaining = j - s - 1;
    for (std::size_t i = start; i + remaining < n; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t w = 0; w < W; ++w) {
        nextA[w] = accA[w] & above[i * W + w];
        nextB[w] = accB[w] & below[i * W + w];
        acc |= nextA[w] | nextB[w];
      }
      if (acc == 0) {
        count += detail::binom_u64(n - 1 - i, remaining);
      } else if (remaining > 0) {
        recurse(above, below, n, W, j, i + 1, s + 1, stackA, stackB, count);
      }
    }
  }

  FunctionalSample sample_;
  int J_;
};

// Modified band depth (sample, without replacement)

class ModifiedBandDepth {
 public:
  ModifiedBandDepth(FunctionalSample sample, int J)
      : sample_(std::move(sample)), J_(J), cols_(sample_) {
    if (J < 2) throw ParameterError("band order J must be at least 2");
    if (static_cast<std::size_t>(J) > sample_.size()) {
      throw ParameterError("band order J = " + std::to_string(J) + " exceeds sample size " +
                           std::to_string(sample_.size()));
    }
    if (!sample_.uniform()) {
      throw ParameterError("sample band depths require uniform weights; use the atomic variant");
    }
  }

  double operator()(const Curve& x) const {
    require_same_grid(x, sample_.curve(0));
    const std::size_t n = sample_.size();
    const auto& grid = *sample_.grid();
    const std::size_t m = grid.size();
    std::vector<std::size_t> nb(m), na(m);
    for (std::size_t v = 0; v < m; ++v) {
      nb[v] = cols_.below(v, x[v]);
      na[v] = n - cols_.at_most(v, x[v]);
    }
    double total = 0.0;
    for (int jj = 2; jj <= J_; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      const double cn = detail::binom(n, j);
      double s = 0.0;
      for (std::size_t v = 0; v < m; ++v) {
        const double cnt = cn - detail::binom(nb[v], j) - detail::binom(na[v], j);
        s += grid.weight(v) * cnt;
      }
      // the weighted count can round past the full length
      total += std::min(1.0, s / cn / grid.length());
    }
    return total;
  }

 private:
  FunctionalSample sample_;
  int J_;
  detail::SortedColumns cols_;
};

// Atomic (population) band depths: j-tuples with replacement, product weights

namespace detail {

inline void check_atomic_limits(const AtomicDistribution& d, int J) {
  if (J < 2) throw ParameterError("band order J must be at least 2");
  if (d.size() > 8) throw ResourceError("atomic band depth supports at most 8 atoms");
  if (J > 4) throw ResourceError("atomic band depth supports J <= 4");
}

/// Calls f(weight, lower, upper) for every j-tuple with replacement.
template <typename F>
void for_each_tuple(const AtomicDistribution& d, std::size_t j, F&& f) {
  const std::size_t k = d.size();
  const std::size_t m = d.grid()->size();
  std::vector<std::size_t> idx(j, 0);
  std::vector<double> lo(m), hi(m);
  for (;;) {
    double w = 1.0;
    for (std::size_t v = 0; v < m; ++v) {
      lo[v] = std::numeric_limits<double>::infinity();
      hi[v] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t t = 0; t < j; ++t) {
      w *= d.prob(idx[t]);
      const auto& a = d.atom(idx[t]);
      for (std::size_t v = 0; v < m; ++v) {
        lo[v] = std::min(lo[v], a[v]);
        hi[v] = std::max(hi[v], a[v]);
      }
    }
    f(w, lo, hi);
    std::size_t t = 0;
    while (t < j && ++idx[t] == k) idx[t++] = 0;
    if (t == j) break;
  }
}

}  // namespace detail

class AtomicBandDepth {
 public:
  AtomicBandDepth(AtomicDistribution dist, int J) : dist_(std::move(dist)), J_(J) {
    detail::check_atomic_limits(dist_, J_);
  }
  double operator()(const Curve& x) const {
    require_same_grid(x, dist_.atom(0));
    double total = 0.0;
    for (int j = 2; j <= J_; ++j) {
      CompensatedSum s;
      detail::for_each_tuple(dist_, static_cast<std::size_t>(j),
                             [&](double w, const auto& lo, const auto& hi) {
                               for (std::size_t v = 0; v < x.size(); ++v) {
                                 if (!(lo[v] <= x[v] && x[v] <= hi[v])) return;
                               }
                               s.add(w);
                             });
      total += s.value();
    }
    return total;
  }

 private:
  AtomicDistribution dist_;
  int J_;
};

class AtomicModifiedBandDepth {
 public:
  AtomicModifiedBandDepth(AtomicDistribution dist, int J) : dist_(std::move(dist)), J_(J) {
    detail::check_atomic_limits(dist_, J_);
  }
  double operator()(const Curve& x) const {
    require_same_grid(x, dist_.atom(0));
    const auto& grid = *dist_.grid();
    double total = 0.0;
    for (int j = 2; j <= J_; ++j) {
      CompensatedSum s;
      detail::for_each_tuple(dist_, static_cast<std::size_t>(j),
                             [&](double w, const auto& lo, const auto& hi) {
                               Mask mask(x.size());
                               for (std::size_t v = 0; v < x.size(); ++v) {
                                 mask[v] = lo[v] <= x[v] && x[v] <= hi[v];
                               }
                               s.add(w * lebesgue_fraction(mask, grid));
                             });
      total += s.value();
    }
    return total;
  }

 private:
  AtomicDistribution dist_;
  int J_;
};

// Half-region depths

class HalfRegionDepth {
 public:
  explicit HalfRegionDepth(FunctionalSample sample) : sample_(std::move(sample)) {}
  double operator()(const Curve& x) const {
    require_same_grid(x, sample_.curve(0));
    const std::size_t n = sample_.size();
    std::size_t cle = 0, cge = 0;
    CompensatedSum wle, wge;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = sample_.curve(i);
      bool le = true, ge = true;
      for (std::size_t v = 0; v < x.size() && (le || ge); ++v) {
        le = le && c[v] <= x[v];
        ge = ge && c[v] >= x[v];
      }
      if (le) {
        ++cle;
        wle.add(sample_.weight(i));
      }
      if (ge) {
        ++cge;
        wge.add(sample_.weight(i));
      }
    }
    if (sample_.uniform()) {
      return static_cast<double>(std::min(cle, cge)) / static_cast<double>(n);
    }
    return std::min(wle.value(), wge.value());
  }

 private:
  FunctionalSample sample_;
};

class ModifiedHalfRegionDepth {
 public:
  explicit ModifiedHalfRegionDepth(FunctionalSample sample)
      : sample_(std::move(sample)), cols_(sample_) {}

  double operator()(const Curve& x) const {
    require_same_grid(x, sample_.curve(0));
    const auto& grid = *sample_.grid();
    const std::size_t n = sample_.size();
    double le = 0.0, ge = 0.0;
    for (std::size_t v = 0; v < grid.size(); ++v) {
      const std::size_t at_most = cols_.at_most(v, x[v]);
      const std::size_t below = cols_.below(v, x[v]);
      if (sample_.uniform()) {
        le += grid.weight(v) * static_cast<double>(at_most);
        ge += grid.weight(v) * static_cast<double>(n - below);
      } else {
        le += grid.weight(v) * cols_.prefix[v * (n + 1) + at_most];
        ge += grid.weight(v) * cols_.suffix[v * (n + 1) + below];
      }
    }
    const double scale = sample_.uniform() ? static_cast<double>(n) * grid.length() : grid.length();
    return std::min(le, ge) / scale;
  }

 private:
  FunctionalSample sample_;
  detail::SortedColumns cols_;
};

// Type-erased evaluator and factories

class DepthEvaluator {
 public:
  DepthEvaluator(DepthKind kind, DepthParams params, std::size_t n,
                 std::function<double(const Curve&)> fn)
      : kind_(kind), params_(params), n_(n), fn_(std::move(fn)) {}

  double operator()(const Curve& x) const { return fn_(x); }
  [[nodiscard]] DepthResult result(const Curve& x) const { return {kind_, fn_(x), params_, n_}; }
  [[nodiscard]] std::vector<double> all(const std::vector<Curve>& xs) const {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(fn_(x));
    return out;
  }
  [[nodiscard]] DepthKind kind() const { return kind_; }
  [[nodiscard]] const DepthParams& params() const { return params_; }
  [[nodiscard]] std::size_t n() const { return n_; }

 private:
  DepthKind kind_;
  DepthParams params_;
  std::size_t n_;
  std::function<double(const Curve&)> fn_;
};

namespace detail {
template <typename E>
std::function<double(const Curve&)> share(E e) {
  auto p = std::make_shared<const E>(std::move(e));
  return [p](const Curve& x) { return (*p)(x); };
}
}  // namespace detail

inline DepthEvaluator make_depth(DepthKind kind, const FunctionalSample& sample,
                                 const DepthParams& p = {}) {
  p.validate(kind);
  const std::size_t n = sample.size();
  switch (kind) {
    case DepthKind::h: return {kind, p, n, detail::share(HDepth(sample, p.h))};
    case DepthKind::rt: return {kind, p, n, detail::share(RandomTukeyDepth(sample, p))};
    case DepthKind::bd: return {kind, p, n, detail::share(BandDepth(sample, p.J))};
    case DepthKind::mbd: return {kind, p, n, detail::share(ModifiedBandDepth(sample, p.J))};
    case DepthKind::hr: return {kind, p, n, detail::share(HalfRegionDepth(sample))};
    case DepthKind::mhr: return {kind, p, n, detail::share(ModifiedHalfRegionDepth(sample))};
  }
  throw ParameterError("unknown depth");
}

/// Population depth under a finitely supported law. Band depths use tuples
/// drawn with replacement; the others evaluate the weighted measure directly.
inline DepthEvaluator make_depth(DepthKind kind, const AtomicDistribution& dist,
                                 const DepthParams& p = {}) {
  p.validate(kind);
  const std::size_t n = dist.size();
  switch (kind) {
    case DepthKind::bd: return {kind, p, n, detail::share(AtomicBandDepth(dist, p.J))};
    case DepthKind::mbd: return {kind, p, n, detail::share(AtomicModifiedBandDepth(dist, p.J))};
    default: return make_depth(kind, dist.as_sample(), p);
  }
}

// Free-function forms

inline DepthResult h_depth(const Curve& x, const FunctionalSample& s, double h) {
  DepthParams p;
  p.h = h;
  return make_depth(DepthKind::h, s, p).result(x);
}

inline DepthResult random_tukey_depth(const Curve& x, const FunctionalSample& s,
                                      const DepthParams& p) {
  return make_depth(DepthKind::rt, s, p).result(x);
}

inline DepthResult band_depth(const Curve& x, const FunctionalSample& s, int J) {
  DepthParams p;
  p.J = J;
  return make_depth(DepthKind::bd, s, p).result(x);
}

inline DepthResult band_depth_atomic(const Curve& x, const AtomicDistribution& d, int J) {
  DepthParams p;
  p.J = J;
  return make_depth(DepthKind::bd, d, p).result(x);
}

inline DepthResult modified_band_depth(const Curve& x, const FunctionalSample& s, int J) {
  DepthParams p;
  p.J = J;
  return make_depth(DepthKind::mbd, s, p).result(x);
}

inline DepthResult modified_band_depth_atomic(const Curve& x, const AtomicDistribution& d, int J) {
  DepthParams p;
  p.J = J;
  return make_depth(DepthKind::mbd, d, p).result(x);
}

inline DepthResult half_region_depth(const Curve& x, const FunctionalSample& s) {
  return make_depth(DepthKind::hr, s).result(x);
}

inline DepthResult modified_half_region_depth(const Curve& x, const FunctionalSample& s) {
  return make_depth(DepthKind::mhr, s).result(x);
}

}  // namespace fdepth
