#pragma once

// Command-line front end. run() is the whole program; tools/fdepth.cpp only
// forwards argv and the standard streams.
//
// Exit codes: 0 success, 2 input error, 3 parameter error, 4 audit mismatch.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdepth/audit.hpp"
#include "fdepth/csv.hpp"
#include "fdepth/depths.hpp"
#include "fdepth/distributions.hpp"
#include "fdepth/envelope.hpp"
#include "fdepth/ranking.hpp"
#include "fdepth/reconstruct.hpp"

namespace fdepth::cli {

inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kParameterError = 3;
inline constexpr int kAuditMismatch = 4;

enum class Format { json, csv, md };

struct DepthOptions {
  std::string input;
  std::string depth = "mhr";
  double h = 1.0;
  int J = 2;
  int directions = 20;
  std::uint64_t direction_seed = 20240501;

  [[nodiscard]] DepthKind kind() const { return parse_depth(depth); }
  [[nodiscard]] DepthParams params() const {
    DepthParams p;
    p.h = h;
    p.J = J;
    p.directions = directions;
    p.direction_seed = direction_seed;
    p.validate(kind());
    return p;
  }
};

inline void add_depth_options(CLI::App* sub, DepthOptions& o) {
  sub->add_option("-i,--input", o.input, "CSV file: grid row, then one curve per row")->required();
  sub->add_option("-d,--depth", o.depth, "h, rt, bd, mbd, hr or mhr")->capture_default_str();
  sub->add_option("--bandwidth", o.h, "bandwidth of the h-depth")->capture_default_str();
  sub->add_option("--J", o.J, "band order")->capture_default_str();
  sub->add_option("--directions", o.directions, "random Tukey directions")->capture_default_str();
  sub->add_option("--direction-seed", o.direction_seed, "seed of the random Tukey directions")
      ->capture_default_str();
}

// Markdown is for reading; CSV and JSON keep full precision.
inline std::string md_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string json_text(const json& j) { return j.dump(2) + "\n"; }

inline FunctionalSample load_sample(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open " + path);
  try {
    return read_sample(f);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  f << text;
}

inline int cmd_depth(const DepthOptions& o, const std::string& query, Format fmt, std::ostream& out) {
  const auto kind = o.kind();
  const auto params = o.params();
  const auto sample = load_sample(o.input);
  std::vector<Curve> queries;
  if (query == "self") {
    queries = sample.curves();  // each curve is evaluated against a sample that includes it
  } else {
    const auto q = load_sample(query);
    if (!(*q.grid() == *sample.grid())) throw DataError(query + ": grid differs from the input grid");
    for (const auto& c : q.curves()) queries.emplace_back(sample.grid(), std::vector<double>(c.values().begin(), c.values().end()));
  }
  const auto values = make_depth(kind, sample, params).all(queries);
  switch (fmt) {
    case Format::json:
      out << json_text({{"schema", 1}, {"depth", std::string(depth_id(kind))},
                        {"params", params.to_json(kind)}, {"n", sample.size()},
                        {"query", query == "self" ? "self" : "file"}, {"values", values}});
      break;
    case Format::csv:
      out << "index,depth\n";
      for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
      break;
    case Format::md:
      out << "| index | " << depth_label(kind) << " |\n|---|---|\n";
      for (std::size_t i = 0; i < values.size(); ++i) out << "| " << i << " | " << md_num(values[i]) << " |\n";
      break;
  }
  return kOk;
}

inline int cmd_rank(const DepthOptions& o, Format fmt, std::ostream& out) {
  const auto kind = o.kind();
  const auto params = o.params();
  const auto sample = load_sample(o.input);
  const auto r = rank_by_depth(self_depths(kind, sample, params));
  switch (fmt) {
    case Format::json:
      out << json_text({{"schema", 1}, {"depth", std::string(depth_id(kind))},
                        {"params", params.to_json(kind)}, {"n", sample.size()},
                        {"depths", r.depth}, {"ranks", r.rank}, {"order", r.order},
                        {"deepest", r.deepest}});
      break;
    case Format::csv:
      out << "index,depth,rank\n";
      for (std::size_t i = 0; i < r.depth.size(); ++i) {
        out << i << ',' << format_double(r.depth[i]) << ',' << r.rank[i] << '\n';
      }
      break;
    case Format::md:
      out << "| rank | index | " << depth_label(kind) << " |\n|---|---|---|\n";
      for (auto i : r.order) out << "| " << r.rank[i] << " | " << i << " | " << md_num(r.depth[i]) << " |\n";
      break;
  }
  return kOk;
}

inline int cmd_trim(const DepthOptions& o, double alpha, bool with_envelope, Format fmt, std::ostream& out) {
  const auto kind = o.kind();
  const auto params = o.params();
  const auto sample = load_sample(o.input);
  const auto t = trim(sample, self_depths(kind, sample, params), alpha);
  std::vector<Curve> kept;
  for (auto i : t.kept) kept.push_back(sample.curve(i));
  std::optional<Envelope> env;
  if (with_envelope) env = envelope_of(FunctionalSample(kept));
  switch (fmt) {
    case Format::json: {
      json j{{"schema", 1}, {"depth", std::string(depth_id(kind))}, {"params", params.to_json(kind)},
             {"alpha", alpha}, {"n", sample.size()}, {"kept", t.kept}, {"dropped", t.dropped},
             {"trimmed_mean", curve_json(t.trimmed_mean)}};
      if (env) j["envelope"] = {{"lower", curve_json(env->lower)}, {"upper", curve_json(env->upper)}};
      out << json_text(j);
      break;
    }
    case Format::csv:
      write_curves(out, *sample.grid(), kept);
      write_tagged(out, "mean", t.trimmed_mean);
      if (env) {
        write_tagged(out, "L", env->lower);
        write_tagged(out, "U", env->upper);
      }
      break;
    case Format::md:
      out << "Trimmed " << t.dropped.size() << " of " << sample.size() << " curves by " << depth_label(kind)
          << " (alpha = " << md_num(alpha) << ").\n\n| dropped index |\n|---|\n";
      for (auto i : t.dropped) out << "| " << i << " |\n";
      break;
  }
  return kOk;
}

inline int cmd_outliers(const DepthOptions& o, double q, Format fmt, std::ostream& out) {
  const auto kind = o.kind();
  const auto params = o.params();
  const auto sample = load_sample(o.input);
  const auto depth = self_depths(kind, sample, params);
  const auto r = flag_outliers(depth, q);
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i < r.flagged.size(); ++i) {
    if (r.flagged[i]) flagged.push_back(i);
  }
  switch (fmt) {
    case Format::json:
      out << json_text({{"schema", 1}, {"depth", std::string(depth_id(kind))},
                        {"params", params.to_json(kind)}, {"q", q}, {"threshold", r.threshold},
                        {"depths", depth}, {"flagged", flagged}});
      break;
    case Format::csv:
      out << "index,depth,flagged\n";
      for (std::size_t i = 0; i < depth.size(); ++i) {
        out << i << ',' << format_double(depth[i]) << ',' << (r.flagged[i] ? 1 : 0) << '\n';
      }
      break;
    case Format::md:
      out << "Depth threshold " << md_num(r.threshold) << " (q = " << md_num(q)
          << ").\n\n| flagged index | " << depth_label(kind) << " |\n|---|---|\n";
      for (auto i : flagged) out << "| " << i << " | " << md_num(depth[i]) << " |\n";
      break;
  }
  return kOk;
}

inline int cmd_audit(const std::string& config_path, const std::string& out_dir,
                     std::optional<std::uint64_t> seed, std::optional<unsigned> threads, Format fmt,
                     std::ostream& out, std::ostream& err) {
  AuditConfig cfg;
  if (!config_path.empty()) cfg = AuditConfig::from_json(load_json(config_path));
  if (seed) cfg.seed = *seed;
  if (threads) cfg.threads = *threads;
  const auto report = run_full_audit(cfg);
  std::filesystem::create_directories(out_dir);
  const auto j = report.to_json();
  const auto md = report.to_markdown();
  write_text_file((std::filesystem::path(out_dir) / "audit.json").string(), j.dump(2) + "\n");
  write_text_file((std::filesystem::path(out_dir) / "audit.md").string(), md);
  if (fmt == Format::json) {
    out << json_text({{"schema", 1}, {"matrix", j["matrix"]}, {"matches_golden", j["matches_golden"]},
                      {"mismatches", j["mismatches"]}, {"inapplicable", j["inapplicable"]}});
  } else {
    out << md;
  }
  const auto bad = report.inapplicable();
  if (!bad.empty()) {
    err << "inapplicable cells:";
    for (const auto& c : bad) err << ' ' << '[' << c << ']';
    err << '\n';
  }
  if (!report.matches_golden()) {
    for (const auto& m : report.mismatches()) err << "mismatch: " << m << '\n';
    return kAuditMismatch;
  }
  return kOk;
}

inline int cmd_simulate_gp(const std::string& spec_path, std::size_t n, std::uint64_t seed,
                           const std::string& out_path, std::ostream& out) {
  const auto base = std::filesystem::path(spec_path).parent_path().string();
  const auto spec = gp_spec_from_json(load_json(spec_path), base);
  if (n < 1) throw ParameterError("n must be at least 1");
  const auto sample = sample_gp(spec, n, seed);
  if (out_path.empty() || out_path == "-") {
    write_sample(out, sample);
  } else {
    std::ostringstream s;
    write_sample(s, sample);
    write_text_file(out_path, s.str());
  }
  return kOk;
}

inline int cmd_reconstruct(const std::string& input, const std::string& out_path, std::ostream& out) {
  std::ifstream f(input);
  if (!f) throw DataError("cannot open " + input);
  CsvTable table;
  try {
    table = read_csv_table(f, true);
  } catch (const DataError& e) {
    throw DataError(input + ": " + e.what());
  }
  if (table.rows.empty()) throw DataError(input + ": no curves");
  const auto sample = reconstruct_linear(sparse_from_table(table), table.grid);
  std::ostringstream s;
  write_sample(s, sample);
  if (out_path.empty() || out_path == "-") {
    out << s.str();
  } else {
    write_text_file(out_path, s.str());
  }
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Functional data depth toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  std::uint64_t seed = 20240501;
  unsigned threads = 1;
  std::string format = "json";
  auto* seed_opt = app.add_option("--seed", seed, "random seed")->capture_default_str();
  auto* threads_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv", "md"}))
      ->capture_default_str();

  DepthOptions dopt;
  std::string query = "self";
  auto* depth_cmd = app.add_subcommand("depth", "depth of query curves w.r.t. the input sample");
  add_depth_options(depth_cmd, dopt);
  depth_cmd->add_option("-q,--query", query, "'self' or a CSV of query curves on the same grid")
      ->capture_default_str();

  auto* rank_cmd = app.add_subcommand("rank", "centre-outward ranks of the input curves");
  add_depth_options(rank_cmd, dopt);

  double alpha = 0.1;
  bool with_envelope = false;
  auto* trim_cmd = app.add_subcommand("trim", "drop the least deep curves and average the rest");
  add_depth_options(trim_cmd, dopt);
  trim_cmd->add_option("-a,--alpha", alpha, "fraction to drop, in [0, 1)")->capture_default_str();
  trim_cmd->add_flag("--with-envelope", with_envelope, "also emit the envelope of retained curves");

  double q = 0.1;
  auto* out_cmd = app.add_subcommand("outliers", "flag curves at or below a depth quantile");
  add_depth_options(out_cmd, dopt);
  out_cmd->add_option("-q,--quantile", q, "quantile level in (0, 1)")->capture_default_str();

  std::string config, out_dir = ".";
  auto* audit_cmd = app.add_subcommand("audit", "run the property audit; writes audit.json and audit.md");
  audit_cmd->add_option("-c,--config", config, "audit configuration JSON");
  audit_cmd->add_option("-o,--out-dir", out_dir, "directory for audit.json and audit.md")->capture_default_str();

  std::string spec, out_path;
  std::size_t n = 100;
  auto* sim_cmd = app.add_subcommand("simulate-gp", "sample Gaussian-process curves to CSV");
  sim_cmd->add_option("-s,--spec", spec, "GP specification JSON")->required();
  sim_cmd->add_option("-n,--n", n, "number of curves")->capture_default_str();
  sim_cmd->add_option("-o,--out", out_path, "output CSV (default stdout)");

  std::string sparse_in;
  auto* rec_cmd = app.add_subcommand("reconstruct", "linear reconstruction of sparse curves (empty/NaN = unobserved)");
  rec_cmd->add_option("-i,--input", sparse_in, "sparse CSV")->required();
  rec_cmd->add_option("-o,--out", out_path, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  }
  const Format fmt = format == "csv" ? Format::csv : format == "md" ? Format::md : Format::json;

  try {
    if (*depth_cmd) return cmd_depth(dopt, query, fmt, out);
    if (*rank_cmd) return cmd_rank(dopt, fmt, out);
    if (*trim_cmd) return cmd_trim(dopt, alpha, with_envelope, fmt, out);
    if (*out_cmd) return cmd_outliers(dopt, q, fmt, out);
    if (*audit_cmd) {
      return cmd_audit(config, out_dir, seed_opt->count() ? std::optional(seed) : std::nullopt,
                       threads_opt->count() ? std::optional(threads) : std::nullopt, fmt, out, err);
    }
    if (*sim_cmd) return cmd_simulate_gp(spec, n, seed, out_path, out);
    if (*rec_cmd) return cmd_reconstruct(sparse_in, out_path, out);
  } catch (const DataError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterError;
  } catch (const ResourceError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterError;
  } catch (const NumericalError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
  return kParameterError;
}

}  // namespace fdepth::cli
