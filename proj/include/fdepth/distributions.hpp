#pragma once

// Gaussian-process sampling, finitely supported distributions, and
// epsilon-contamination mixtures.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "fdepth/core.hpp"
#include "fdepth/csv.hpp"
#include "json.hpp"

namespace fdepth {

/// splitmix64 finalizer; turns (seed, stream) into an independent sub-seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct KernelSpec {
  std::string type = "squared_exponential";
  double variance = 1.0;
  double length_scale = 0.2;

  [[nodiscard]] double operator()(double t) const {
    return variance * std::exp(-t * t / (2.0 * length_scale * length_scale));
  }
  /// -R''(0) for the squared-exponential kernel.
  [[nodiscard]] double neg_second_derivative() const {
    return variance / (length_scale * length_scale);
  }
  void validate() const {
    if (type != "squared_exponential" && type != "se") {
      throw ParameterError("unsupported kernel type '" + type + "'");
    }
    if (!(variance > 0.0) || !std::isfinite(variance)) {
      throw ParameterError("kernel variance must be positive");
    }
    if (!(length_scale > 0.0) || !std::isfinite(length_scale)) {
      throw ParameterError("kernel length_scale must be positive");
    }
  }
};

struct GPSpec {
  GridPtr grid;
  std::optional<Curve> mean;  // zero when absent
  KernelSpec kernel;

  [[nodiscard]] Curve mean_curve() const { return mean ? *mean : constant_curve(grid, 0.0); }
};

inline Eigen::MatrixXd kernel_matrix(const Grid& grid, const KernelSpec& k) {
  const auto m = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    K(i, i) = k(0.0);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = k(std::abs(grid.point(static_cast<std::size_t>(i)) -
                                  grid.point(static_cast<std::size_t>(j))));
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

/// A GP on a grid with its Cholesky factor cached. Paths are drawn one at a
/// time from a single RNG stream, so the first n paths of a larger draw equal
/// an n-path draw with the same seed.
class GaussianProcess {
 public:
  explicit GaussianProcess(GPSpec spec) : spec_(std::move(spec)) {
    if (!spec_.grid) throw DomainError("GP spec requires a grid");
    spec_.kernel.validate();
    if (spec_.mean && !same_grid(spec_.mean->grid(), spec_.grid)) {
      throw DomainError("GP mean curve lives on a different grid");
    }
    const Curve mu = spec_.mean_curve();
    mean_.assign(mu.values().begin(), mu.values().end());
    const Eigen::MatrixXd K = kernel_matrix(*spec_.grid, spec_.kernel);
    const double s2 = spec_.kernel.variance;
    double jitter = 0.0;
    for (;;) {
      Eigen::MatrixXd A = K;
      if (jitter > 0.0) A.diagonal().array() += jitter;
      Eigen::LLT<Eigen::MatrixXd> llt(A);
      if (llt.info() == Eigen::Success) {
        chol_ = llt.matrixL();
        break;
      }
      jitter = jitter == 0.0 ? 1e-12 * s2 : 2.0 * jitter;
      if (jitter > 1e-6 * s2 * (1.0 + 1e-9)) {
        throw NumericalError("kernel matrix not positive definite after maximum jitter");
      }
    }
    jitter_ = jitter;
  }

  [[nodiscard]] const GPSpec& spec() const { return spec_; }
  [[nodiscard]] const GridPtr& grid() const { return spec_.grid; }
  [[nodiscard]] double jitter() const { return jitter_; }
  [[nodiscard]] const Eigen::MatrixXd& cholesky() const { return chol_; }

  template <typename Rng>
  [[nodiscard]] Curve draw(Rng& rng) const {
    const std::size_t m = spec_.grid->size();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(m);
    for (auto& e : z) e = normal(rng);
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        s += chol_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
      }
      v[i] = mean_[i] + s;
    }
    return Curve(spec_.grid, std::move(v));
  }

  [[nodiscard]] std::vector<Curve> draw_curves(std::size_t n, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<Curve> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw(rng));
    return out;
  }

  [[nodiscard]] FunctionalSample sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw ParameterError("sample size must be at least 1");
    return FunctionalSample(draw_curves(n, seed));
  }

 private:
  GPSpec spec_;
  std::vector<double> mean_;
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
};

inline FunctionalSample sample_gp(const GPSpec& spec, std::size_t n, std::uint64_t seed) {
  return GaussianProcess(spec).sample(n, seed);
}

/// Finitely supported distribution over curves.
class AtomicDistribution {
 public:
  AtomicDistribution(std::vector<Curve> atoms, std::vector<double> probs)
      : atoms_(std::move(atoms)), probs_(std::move(probs)) {
    if (atoms_.empty()) throw DomainError("an atomic distribution needs at least one atom");
    if (atoms_.size() != probs_.size()) throw DomainError("one probability per atom required");
    double total = 0.0;
    for (double p : probs_) {
      if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("atom probabilities must be positive");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ParameterError("atom probabilities must sum to one");
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!same_grid(atoms_[i].grid(), atoms_[0].grid())) {
        throw DomainError("atoms must share the grid");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (atoms_[i] == atoms_[j]) throw ParameterError("atoms must be pairwise distinct");
      }
    }
  }

  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] const Curve& atom(std::size_t i) const { return atoms_[i]; }
  [[nodiscard]] const std::vector<Curve>& atoms() const { return atoms_; }
  [[nodiscard]] double prob(std::size_t i) const { return probs_[i]; }
  [[nodiscard]] const std::vector<double>& probs() const { return probs_; }
  [[nodiscard]] const GridPtr& grid() const { return atoms_.front().grid(); }

  /// The same measure as a weighted sample.
  [[nodiscard]] FunctionalSample as_sample() const { return FunctionalSample(atoms_, probs_); }

  /// Image measure under a curve map.
  template <typename F>
  [[nodiscard]] AtomicDistribution pushforward(F&& f) const {
    std::vector<Curve> out;
    for (const auto& a : atoms_) out.push_back(f(a));
    return AtomicDistribution(std::move(out), probs_);
  }

  template <typename Rng>
  [[nodiscard]] Curve draw(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < atoms_.size(); ++i) {
      acc += probs_[i];
      if (r < acc) return atoms_[i];
    }
    return atoms_.back();
  }

 private:
  std::vector<Curve> atoms_;
  std::vector<double> probs_;
};

inline GridPtr default_unit_grid() { return Grid::uniform(0.0, 1.0, 101); }

inline AtomicDistribution counterexample_p3(GridPtr grid = default_unit_grid()) {
  return AtomicDistribution({constant_curve(grid, -1.0), constant_curve(grid, 1.0)}, {0.5, 0.5});
}

inline AtomicDistribution counterexample_p3_rt(GridPtr grid = default_unit_grid()) {
  return AtomicDistribution({constant_curve(grid, 2.0), constant_curve(grid, -1.0)}, {0.5, 0.5});
}

/// x1 = 1 + u/2 > 0, x2 = 0, x3 = -1 - u/2 < 0 with u the position rescaled
/// to [0, 1].
inline AtomicDistribution counterexample_p5(GridPtr grid = default_unit_grid()) {
  const double a = grid->front();
  const double len = grid->back() - a;
  auto x1 = curve_from(grid, [&](double v) { return 1.0 + 0.5 * (v - a) / len; });
  auto x3 = curve_from(grid, [&](double v) { return -1.0 - 0.5 * (v - a) / len; });
  const double third = 1.0 / 3.0;
  return AtomicDistribution({x1, constant_curve(grid, 0.0), x3}, {third, third, third});
}

using Distribution = std::variant<GaussianProcess, AtomicDistribution>;

template <typename Rng>
Curve draw(const Distribution& d, Rng& rng) {
  return std::visit([&](const auto& dist) { return dist.draw(rng); }, d);
}

inline const GridPtr& distribution_grid(const Distribution& d) {
  return std::visit([](const auto& dist) -> const GridPtr& { return dist.grid(); }, d);
}

inline FunctionalSample sample_from(const Distribution& d, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("sample size must be at least 1");
  if (const auto* gp = std::get_if<GaussianProcess>(&d)) return gp->sample(n, seed);
  std::mt19937_64 rng(seed);
  std::vector<Curve> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw(d, rng));
  return FunctionalSample(std::move(out));
}

struct ContaminationSpec {
  const Distribution* base = nullptr;
  const Distribution* outlier = nullptr;
  double epsilon = 0.0;
};

/// Replaces each curve of an existing base sample by an outlier draw with
/// probability epsilon. Selection and outlier draws use their own streams, so
/// epsilon = 0 returns the base sample unchanged.
inline FunctionalSample contaminate(const FunctionalSample& base, const Distribution& outlier,
                                    double epsilon, std::uint64_t seed,
                                    std::size_t* replaced = nullptr) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in [0, 1)");
  if (!same_grid(base.grid(), distribution_grid(outlier))) {
    throw DomainError("base and outlier distributions live on different grids");
  }
  std::mt19937_64 select(derive_seed(seed, 1));
  std::mt19937_64 out_rng(derive_seed(seed, 2));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Curve> curves = base.curves();
  std::size_t count = 0;
  for (auto& c : curves) {
    if (u(select) < epsilon) {
      c = draw(outlier, out_rng);
      ++count;
    }
  }
  if (replaced) *replaced = count;
  if (count == 0) return base;
  return FunctionalSample(std::move(curves));
}

inline FunctionalSample mix(const ContaminationSpec& spec, std::size_t n, std::uint64_t seed,
                            std::size_t* replaced = nullptr) {
  if (!spec.base || !spec.outlier) throw ParameterError("contamination spec is incomplete");
  if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in [0, 1)");
  }
  const auto base = sample_from(*spec.base, n, seed);
  return contaminate(base, *spec.outlier, spec.epsilon, seed, replaced);
}

// JSON / CSV serialization

inline nlohmann::json kernel_to_json(const KernelSpec& k) {
  return {{"type", k.type}, {"variance", k.variance}, {"length_scale", k.length_scale}};
}

/// {mean_csv?, kernel: {type, variance, length_scale}, grid?: {start, end, points}}.
/// Without a grid object the mean CSV supplies the grid; without either the
/// unit interval with 101 points is used. Relative mean_csv paths resolve
/// against base_dir.
inline GPSpec gp_spec_from_json(const nlohmann::json& j, const std::string& base_dir = "") {
  GPSpec spec;
  try {
    if (j.contains("kernel")) {
      const auto& k = j.at("kernel");
      spec.kernel.type = k.value("type", std::string("squared_exponential"));
      spec.kernel.variance = k.value("variance", 1.0);
      spec.kernel.length_scale = k.value("length_scale", 0.2);
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      spec.grid = Grid::uniform(g.value("start", 0.0), g.value("end", 1.0),
                                g.value("points", std::size_t{101}));
    }
    if (j.contains("mean_csv") && !j.at("mean_csv").is_null()) {
      std::string path = j.at("mean_csv").get<std::string>();
      if (!base_dir.empty() && !path.empty() && path.front() != '/') path = base_dir + "/" + path;
      std::ifstream f(path);
      if (!f) throw DataError("cannot open mean_csv " + path);
      const auto table = read_csv_table(f);
      if (table.rows.size() != 1) throw DataError("mean_csv must contain exactly one curve");
      if (spec.grid && !(*spec.grid == *table.grid)) {
        throw DomainError("mean_csv grid differs from the declared grid");
      }
      spec.grid = table.grid;
      spec.mean = Curve(table.grid, table.rows[0]);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("invalid GP spec: ") + e.what());
  }
  if (!spec.grid) spec.grid = default_unit_grid();
  spec.kernel.validate();
  return spec;
}

inline nlohmann::json gp_spec_to_json(const GPSpec& spec) {
  nlohmann::json j;
  j["kernel"] = kernel_to_json(spec.kernel);
  j["grid"] = {{"start", spec.grid->front()},
               {"end", spec.grid->back()},
               {"points", spec.grid->size()}};
  return j;
}

inline void write_atomic(std::ostream& curves_csv, std::ostream& weights_json,
                         const AtomicDistribution& d) {
  write_curves(curves_csv, *d.grid(), d.atoms());
  weights_json << nlohmann::json{{"weights", d.probs()}}.dump() << '\n';
}

inline AtomicDistribution read_atomic(std::istream& curves_csv, std::istream& weights_json) {
  const auto table = read_csv_table(curves_csv);
  nlohmann::json j;
  try {
    weights_json >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid weights JSON: ") + e.what());
  }
  std::vector<double> w;
  try {
    w = j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("weights JSON needs a numeric 'weights' array: ") + e.what());
  }
  std::vector<Curve> atoms;
  for (const auto& r : table.rows) atoms.emplace_back(table.grid, r);
  return AtomicDistribution(std::move(atoms), std::move(w));
}

}  // namespace fdepth
