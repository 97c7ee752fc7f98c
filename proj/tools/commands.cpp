#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <variant>

#include <json.hpp>

#include "swad/dataset.hpp"
#include "swad/error.hpp"
#include "swad/eval.hpp"
#include "swad/filters.hpp"

namespace swad::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kSidecarSchema = 1;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

unsigned resolved_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

void require_path(const std::string& value, const char* flag) {
  if (value.empty()) throw InvalidArgument(std::string(flag) + " is required");
}

void require_writable_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw IoError("output directory does not exist: " + parent.string());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_sidecar(const std::string& output, const json& doc) {
  write_text(output + ".json", doc.dump(2) + "\n");
}

Method parse_method(const std::string& name) {
  if (name == "swad") return Method::SWAD;
  if (name == "sswad") return Method::SSWAD;
  if (name == "fead") return Method::FEAD;
  throw InvalidArgument("unknown method: " + name);
}

std::size_t resolved_votes(const Options& opts, std::size_t rows) {
  if (opts.n_votes_given || rows < 2 || opts.n_votes <= rows - 1) return opts.n_votes;
  std::cerr << "note: --n-votes defaults to " << opts.n_votes << " but the data has " << rows
            << " rows; using " << rows - 1 << "\n";
  return rows - 1;
}

// threshold_needed is false when a grid supplies the thresholds.
FilterParams resolve_params(const Options& opts, std::size_t rows, bool threshold_needed) {
  const Method method = parse_method(opts.method);
  const std::size_t votes = resolved_votes(opts, rows);
  if (method == Method::FEAD) {
    if (opts.epsilon) throw InvalidArgument("--epsilon does not apply to fead; use --eta");
    if (threshold_needed && !opts.eta) throw InvalidArgument("--method fead requires --eta");
    return FeadParams{.t = opts.t, .eta = opts.eta.value_or(0.0), .n_votes = votes, .p_threshold = opts.p,
                      .seed = opts.seed};
  }
  if (opts.eta) throw InvalidArgument("--eta applies to fead only; use --epsilon");
  if (threshold_needed && !opts.epsilon) throw InvalidArgument("--method " + opts.method + " requires --epsilon");
  const SwadParams base{.t = opts.t,
                        .epsilon = opts.epsilon.value_or(0.0),
                        .n_votes = votes,
                        .p_threshold = opts.p,
                        .n_projections = opts.projections,
                        .seed = opts.seed};
  if (method == Method::SWAD) return base;
  return SswadParams{.base = base, .k_clusters = opts.k, .s_splits = opts.s};
}

json params_json(const FilterParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SwadParams>) {
          return {{"method", "swad"},          {"t", p.t},
                  {"epsilon", p.epsilon},     {"n_votes", p.n_votes},
                  {"p_threshold", p.p_threshold}, {"n_projections", p.n_projections},
                  {"seed", p.seed}};
        } else if constexpr (std::is_same_v<P, FeadParams>) {
          return {{"method", "fead"},    {"t", p.t}, {"eta", p.eta}, {"n_votes", p.n_votes},
                  {"p_threshold", p.p_threshold}, {"seed", p.seed}};
        } else {
          return {{"method", "sswad"},
                  {"t", p.base.t},
                  {"epsilon", p.base.epsilon},
                  {"n_votes", p.base.n_votes},
                  {"p_threshold", p.base.p_threshold},
                  {"n_projections", p.base.n_projections},
                  {"k_clusters", p.k_clusters},
                  {"s_splits", p.s_splits},
                  {"seed", p.base.seed}};
        }
      },
      params);
}

json base_config(const Options& opts) {
  return {{"schema", kSidecarSchema},
          {"command", opts.command},
          {"output", opts.output},
          {"threads", {{"requested", opts.threads}, {"resolved", resolved_threads(opts.threads)}}},
          {"seed", opts.seed}};
}

json input_config(const Options& opts) {
  auto doc = base_config(opts);
  doc["input"] = opts.input;
  doc["header"] = !opts.no_header;
  doc["standardize"] = opts.standardize;
  return doc;
}

Dataset prepare(const Dataset& data, bool standardize_first) {
  if (!standardize_first) return data;
  return standardize(data).first;
}

std::string format_precision(const std::optional<double>& p) {
  if (!p) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *p);
  return buf;
}

std::string tag_name(ComponentTag tag) { return std::string(to_string(tag)); }

ComponentTag parse_tag(const std::string& name) {
  for (auto tag : {ComponentTag::Majority, ComponentTag::Minority, ComponentTag::Outlier}) {
    if (to_string(tag) == name) return tag;
  }
  throw InvalidArgument("unknown component tag: " + name);
}

MixtureSpec load_spec(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open spec: " + path);
  MixtureSpec spec;
  spec.seed = seed;
  try {
    const auto doc = json::parse(in);
    for (const auto& c : doc.at("components")) {
      spec.components.push_back(MixtureComponent{.count = c.at("count").get<std::size_t>(),
                                                 .mean = c.at("mean").get<std::vector<double>>(),
                                                 .variance = c.at("variance").get<std::vector<double>>(),
                                                 .tag = parse_tag(c.value("tag", std::string("majority")))});
    }
  } catch (const json::exception& e) {
    throw ParseError("bad mixture spec " + path + ": " + e.what(), 0, 0);
  }
  return spec;
}

json spec_json(const MixtureSpec& spec) {
  json components = json::array();
  for (const auto& c : spec.components) {
    components.push_back({{"count", c.count}, {"mean", c.mean}, {"variance", c.variance}, {"tag", tag_name(c.tag)}});
  }
  return {{"seed", spec.seed}, {"components", components}};
}

}  // namespace

int cmd_filter(const Options& opts) {
  require_path(opts.input, "--input");
  require_path(opts.output, "--output");
  require_writable_parent(opts.output);
  const auto start = Clock::now();

  const Dataset data = load_csv(opts.input, !opts.no_header);
  const FilterParams params = resolve_params(opts, data.rows(), true);
  const Dataset work = prepare(data, opts.standardize);
  const OutlierReport report = run_filter(work, params, {.threads = opts.threads});

  // Features are written as read, even when the filter saw standardized values.
  save_report(report, data, opts.output);
  const double wall = seconds_since(start);

  auto doc = input_config(opts);
  doc["params"] = params_json(params);
  doc["summary"] = {{"rows", data.rows()}, {"outliers", report.outlier_count()}, {"wall_time_s", wall}};
  doc["warnings"] = report.warnings;
  write_sidecar(opts.output, doc);

  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "method  rows  outliers  wall_s\n";
  std::printf("%-6s  %zu  %zu  %.3f\n", opts.method.c_str(), data.rows(), report.outlier_count(), wall);
  return kOk;
}

int cmd_bench(const Options& opts) {
  require_path(opts.input, "--input");
  if (!opts.output.empty()) require_writable_parent(opts.output);
  const auto start = Clock::now();

  const Dataset labeled = load_csv(opts.input, !opts.no_header);
  auto [features, labels] = labeled.split_column(opts.label_column);
  std::vector<bool> truth(labels.size());
  std::transform(labels.begin(), labels.end(), truth.begin(), [](double v) { return v != 0.0; });

  const bool use_grid = !opts.epsilon_grid.empty();
  const FilterParams params = resolve_params(opts, features.rows(), !use_grid);
  std::vector<double> grid = opts.epsilon_grid;
  if (!use_grid) {
    grid = {std::visit(
        [](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, FeadParams>) return p.eta;
          else if constexpr (std::is_same_v<P, SwadParams>) return p.epsilon;
          else return p.base.epsilon;
        },
        params)};
  }

  const Dataset work = prepare(features, opts.standardize);
  const auto rows = epsilon_sweep(work, truth, grid, params, {.threads = opts.threads});
  const double wall = seconds_since(start);
  const auto planted = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));

  std::string table = "threshold,flagged,accuracy,precision\n";
  std::cout << "method  threshold  flagged  accuracy  precision\n";
  for (const auto& r : rows) {
    std::printf("%-6s  %-9s  %7zu  %.6f  %s\n", opts.method.c_str(), shortest(r.threshold).c_str(), r.flagged,
                r.accuracy, format_precision(r.precision).c_str());
    table += shortest(r.threshold) + "," + std::to_string(r.flagged) + "," + shortest(r.accuracy) + "," +
             (r.precision ? shortest(*r.precision) : std::string()) + "\n";
  }
  std::printf("rows %zu  labeled_outliers %zu  runtime_s %.3f\n", features.rows(), planted, wall);

  if (!opts.output.empty()) {
    write_text(opts.output, table);
    auto doc = input_config(opts);
    doc["params"] = params_json(params);
    doc["label_column"] = opts.label_column;
    doc["grid"] = grid;
    doc["summary"] = {{"rows", features.rows()}, {"labeled_outliers", planted}, {"wall_time_s", wall}};
    write_sidecar(opts.output, doc);
  }
  return kOk;
}

int cmd_verify_bounds(const Options& opts) {
  if (!opts.output.empty()) require_writable_parent(opts.output);
  const auto start = Clock::now();
  const auto records = verify_bounds(opts.samples, opts.dim, opts.t_values, opts.pairs, opts.seed,
                                     {.threads = opts.threads});
  const double wall = seconds_since(start);

  std::cout << "t  records  satisfied  max_relative_width\n";
  std::size_t violated = 0;
  for (double t : opts.t_values) {
    std::size_t count = 0, ok = 0;
    double width = 0.0;
    for (const auto& r : records) {
      if (r.t != t) continue;
      ++count;
      ok += r.satisfied ? 1 : 0;
      if (r.upper > 0) width = std::max(width, (r.upper - r.lower) / r.upper);
    }
    violated += count - ok;
    std::printf("%-3s  %7zu  %9zu  %.3e\n", shortest(t).c_str(), count, ok, width);
  }
  std::printf("violations %zu  runtime_s %.3f\n", violated, wall);

  if (!opts.output.empty()) {
    std::string table = "k,l,t,lower,exact,upper,satisfied\n";
    for (const auto& r : records) {
      table += std::to_string(r.k) + "," + std::to_string(r.l) + "," + shortest(r.t) + "," + shortest(r.lower) +
               "," + shortest(r.exact) + "," + shortest(r.upper) + "," + (r.satisfied ? "1" : "0") + "\n";
    }
    write_text(opts.output, table);
    auto doc = base_config(opts);
    doc["samples"] = opts.samples;
    doc["dim"] = opts.dim;
    doc["t_values"] = opts.t_values;
    doc["pairs"] = opts.pairs;
    doc["summary"] = {{"records", records.size()}, {"violations", violated}, {"wall_time_s", wall}};
    write_sidecar(opts.output, doc);
  }
  if (violated > 0) {
    std::cerr << "error: " << violated << " records violate the single-sample bounds\n";
    return kNumeric;
  }
  return kOk;
}

int cmd_synth(const Options& opts) {
  require_path(opts.output, "--output");
  require_writable_parent(opts.output);
  const MixtureSpec spec = opts.spec.empty() ? default_mixture_spec(opts.seed) : load_spec(opts.spec, opts.seed);
  const LabeledDataset mixture = generate_mixture(spec);
  const Dataset& x = mixture.data;

  std::vector<double> values;
  values.reserve(x.rows() * (x.cols() + 1));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    values.insert(values.end(), row.begin(), row.end());
    values.push_back(mixture.tags[i] == ComponentTag::Outlier ? 1.0 : 0.0);
  }
  auto names = x.column_names();
  names.push_back(opts.label_column);
  save_csv(Dataset(std::move(values), x.cols() + 1, std::move(names)), opts.output);

  const auto outliers = static_cast<std::size_t>(
      std::count(mixture.tags.begin(), mixture.tags.end(), ComponentTag::Outlier));
  auto doc = base_config(opts);
  doc.erase("threads");
  doc["spec"] = spec_json(spec);
  doc["label_column"] = opts.label_column;
  doc["summary"] = {{"rows", x.rows()}, {"cols", x.cols()}, {"outliers", outliers}};
  write_sidecar(opts.output, doc);

  std::cout << "rows  cols  outliers\n";
  std::printf("%zu  %zu  %zu\n", x.rows(), x.cols(), outliers);
  return kOk;
}

}  // namespace swad::cli
