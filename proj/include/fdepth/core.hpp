#pragma once

// Numerical substrate: grids with trapezoidal quadrature, immutable curves,
// weighted functional samples, and the L2 / sup distances between curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fdepth {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::length_error {
  using std::length_error::length_error;
};

/// Neumaier compensated accumulator. Order-dependent like any sum, but the
/// error no longer grows with the number of terms.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Ordered abscissae v_1 < ... < v_m of a compact interval together with
/// trapezoidal quadrature weights.
class Grid {
 public:
  explicit Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw DomainError("grid needs at least two points");
    for (double p : points_) {
      if (!std::isfinite(p)) throw DomainError("grid points must be finite");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i] > points_[i - 1])) {
        throw DomainError("grid points must be strictly increasing");
      }
    }
    const std::size_t m = points_.size();
    weights_.resize(m);
    weights_[0] = 0.5 * (points_[1] - points_[0]);
    weights_[m - 1] = 0.5 * (points_[m - 1] - points_[m - 2]);
    for (std::size_t i = 1; i + 1 < m; ++i) {
      weights_[i] = 0.5 * (points_[i + 1] - points_[i - 1]);
    }
    for (double w : weights_) {
      if (!(w > 0.0)) throw DomainError("quadrature weights must be positive");
    }
    length_ = 0.0;
    for (double w : weights_) length_ += w;
    const double span = points_.back() - points_.front();
    if (std::abs(length_ - span) > 1e-12 * span) {
      throw NumericalError("quadrature weights do not integrate to the domain length");
    }
  }

  static std::shared_ptr<const Grid> uniform(double a, double b, std::size_t m) {
    if (m < 2 || !(b > a)) throw DomainError("uniform grid needs m >= 2 and b > a");
    std::vector<double> pts(m);
    for (std::size_t i = 0; i < m; ++i) {
      pts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
    }
    pts.back() = b;
    return std::make_shared<const Grid>(std::move(pts));
  }

  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] std::span<const double> points() const { return points_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] double point(std::size_t i) const { return points_[i]; }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
  /// lambda(V), computed as the sum of the quadrature weights so that a
  /// full mask has fraction exactly one.
  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] double front() const { return points_.front(); }
  [[nodiscard]] double back() const { return points_.back(); }

  friend bool operator==(const Grid& a, const Grid& b) { return a.points_ == b.points_; }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  double length_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

inline bool same_grid(const GridPtr& a, const GridPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// A function sampled on a grid. Immutable once built.
class Curve {
 public:
  Curve(GridPtr grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw DomainError("curve requires a grid");
    if (values_.size() != grid_->size()) {
      throw DomainError("curve length " + std::to_string(values_.size()) +
                        " does not match grid size " + std::to_string(grid_->size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw DataError("curve values must be finite");
    }
  }

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  /// New curve on the same grid.
  [[nodiscard]] Curve with_values(std::vector<double> values) const {
    return Curve(grid_, std::move(values));
  }

  friend bool operator==(const Curve& a, const Curve& b) {
    return same_grid(a.grid_, b.grid_) && a.values_ == b.values_;
  }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

inline void require_same_grid(const Curve& x, const Curve& y) {
  if (!same_grid(x.grid(), y.grid())) throw DomainError("curves live on different grids");
}

template <typename F>
Curve curve_from(const GridPtr& grid, F&& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->point(i));
  return Curve(grid, std::move(v));
}

inline Curve constant_curve(const GridPtr& grid, double c) {
  return Curve(grid, std::vector<double>(grid->size(), c));
}

inline Curve scaled(const Curve& x, double a) {
  std::vector<double> v(x.values().begin(), x.values().end());
  for (double& e : v) e *= a;
  return x.with_values(std::move(v));
}

/// a*x + b pointwise, b a curve on the same grid.
inline Curve affine(const Curve& x, double a, const Curve& b) {
  require_same_grid(x, b);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * x[i] + b[i];
  return x.with_values(std::move(v));
}

inline Curve add(const Curve& x, const Curve& y) { return affine(x, 1.0, y); }

inline Curve axpy(double a, const Curve& x, const Curve& y) { return affine(x, a, y); }

inline double inner_product(const Curve& x, const Curve& y) {
  require_same_grid(x, y);
  const auto w = x.grid()->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * y[i];
  return s;
}

inline double l2_norm(const Curve& x) { return std::sqrt(inner_product(x, x)); }

inline double l2_distance(const Curve& x, const Curve& y) {
  require_same_grid(x, y);
  const auto w = x.grid()->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += w[i] * d * d;
  }
  return std::sqrt(s);
}

inline double sup_distance(const Curve& x, const Curve& y) {
  require_same_grid(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s = std::max(s, std::abs(x[i] - y[i]));
  return s;
}

inline double sup_norm(const Curve& x) {
  double s = 0.0;
  for (double v : x.values()) s = std::max(s, std::abs(v));
  return s;
}

using Mask = std::vector<bool>;

/// Lebesgue measure of {v : mask(v)} relative to lambda(V).
inline double lebesgue_fraction(const Mask& mask, const Grid& grid) {
  if (mask.size() != grid.size()) throw DomainError("mask length does not match grid size");
  double s = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) s += grid.weight(i);
  }
  return s / grid.length();
}

/// Curves on a common grid carrying probability weights (uniform 1/n unless
/// given). Represents the empirical measure, or any finitely supported one.
class FunctionalSample {
 public:
  explicit FunctionalSample(std::vector<Curve> curves) : curves_(std::move(curves)) {
    check_curves();
    weights_.assign(curves_.size(), 1.0 / static_cast<double>(curves_.size()));
    uniform_ = true;
  }

  FunctionalSample(std::vector<Curve> curves, std::vector<double> weights)
      : curves_(std::move(curves)), weights_(std::move(weights)) {
    check_curves();
    if (weights_.size() != curves_.size()) throw DomainError("one weight per curve required");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("weights must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ParameterError("weights must sum to one");
    uniform_ = std::all_of(weights_.begin(), weights_.end(),
                           [&](double w) { return w == weights_.front(); });
  }

  [[nodiscard]] std::size_t size() const { return curves_.size(); }
  [[nodiscard]] const GridPtr& grid() const { return curves_.front().grid(); }
  [[nodiscard]] const Curve& curve(std::size_t i) const { return curves_[i]; }
  [[nodiscard]] const std::vector<Curve>& curves() const { return curves_; }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] bool uniform() const { return uniform_; }

  [[nodiscard]] Curve pointwise_mean() const {
    std::vector<double> v(grid()->size(), 0.0);
    for (std::size_t i = 0; i < curves_.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += weights_[i] * curves_[i][j];
    }
    return Curve(grid(), std::move(v));
  }

  /// Applies f to every curve, keeping the weights.
  template <typename F>
  [[nodiscard]] FunctionalSample transformed(F&& f) const {
    std::vector<Curve> out;
    out.reserve(curves_.size());
    for (const auto& c : curves_) out.push_back(f(c));
    if (uniform_) return FunctionalSample(std::move(out));
    return FunctionalSample(std::move(out), weights_);
  }

 private:
  void check_curves() const {
    if (curves_.empty()) throw DomainError("a sample needs at least one curve");
    for (const auto& c : curves_) {
      if (!same_grid(c.grid(), curves_.front().grid())) {
        throw DomainError("all curves of a sample must share the grid");
      }
    }
  }

  std::vector<Curve> curves_;
  std::vector<double> weights_;
  bool uniform_ = true;
};

}  // namespace fdepth
