#include "swad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "parallel.hpp"
#include "swad/error.hpp"
#include "swad/ot.hpp"
#include "swad/random.hpp"

namespace swad {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ConfusionCounts confusion(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
  if (predicted.size() != truth.size()) {
    throw InvalidArgument("confusion: predicted has " + std::to_string(predicted.size()) + " labels, truth has " +
                          std::to_string(truth.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i]) {
      truth[i] ? ++c.tp : ++c.fp;
    } else {
      truth[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

double accuracy(const ConfusionCounts& c) {
  if (c.total() == 0) throw InvalidArgument("accuracy: empty confusion counts");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

std::optional<double> precision(const ConfusionCounts& c) {
  if (c.total() == 0) throw InvalidArgument("precision: empty confusion counts");
  if (c.tp + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

bool within_bounds(double lower, double exact, double upper) {
  auto tol = [](double ref) { return std::max(kBoundTolerance * std::fabs(ref), 1e-12); };
  return lower - tol(lower) <= exact && exact <= upper + tol(upper);
}

std::vector<BoundCheckRecord> verify_bounds(std::size_t n_samples, std::size_t dim, const std::vector<double>& t_values,
                                            std::size_t n_pairs, std::uint64_t seed, const RunOptions& options) {
  if (n_samples < 2) throw InvalidArgument("verify_bounds: need N >= 2");
  if (n_samples > kAssignmentLimit) {
    throw SizeLimitError("verify_bounds: N = " + std::to_string(n_samples) + " exceeds the oracle limit of " +
                         std::to_string(kAssignmentLimit));
  }
  if (dim == 0) throw InvalidArgument("verify_bounds: d must be >= 1");
  if (t_values.empty()) throw InvalidArgument("verify_bounds: no orders given");
  for (double t : t_values) detail::require_order(t);

  Rng rng(seed);
  std::vector<double> coords(n_samples * dim);
  for (auto& x : coords) x = rng.normal();
  const EmpiricalDistribution full(std::move(coords), dim);

  const std::size_t max_pairs = n_samples * (n_samples - 1) / 2;
  const std::size_t wanted = std::min(n_pairs, max_pairs);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (wanted == max_pairs) {
    for (std::size_t k = 0; k < n_samples; ++k) {
      for (std::size_t l = k + 1; l < n_samples; ++l) pairs.emplace_back(k, l);
    }
  } else {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (pairs.size() < wanted) {
      const auto k = static_cast<std::size_t>(rng.uniform_index(n_samples));
      const auto l = static_cast<std::size_t>(rng.uniform_index(n_samples));
      if (k == l) continue;
      if (seen.insert({std::min(k, l), std::max(k, l)}).second) pairs.emplace_back(k, l);
    }
  }

  std::vector<BoundCheckRecord> records(pairs.size() * t_values.size());
  detail::parallel_for(pairs.size(), options.threads, [&](std::size_t p) {
    const auto [k, l] = pairs[p];
    const auto without_k = full.without(k);
    const auto without_l = full.without(l);
    for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
      const double t = t_values[ti];
      const auto bounds = single_sample_bounds(full.atom(k), full.atom(l), n_samples, t, Norm::L2);
      const double exact = exact_wasserstein(without_k, without_l, t, Norm::L2);
      records[p * t_values.size() + ti] = {k, l, t, bounds.lower, exact, bounds.upper,
                                           within_bounds(bounds.lower, exact, bounds.upper)};
    }
  });
  return records;
}

double satisfied_fraction(const std::vector<BoundCheckRecord>& records) {
  if (records.empty()) return 1.0;
  const auto ok = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.satisfied; });
  return static_cast<double>(ok) / static_cast<double>(records.size());
}

OutlierReport run_filter(const Dataset& data, const FilterParams& params, const RunOptions& options) {
  return std::visit(Overloaded{
                        [&](const SwadParams& p) { return swad_filter(data, p, options); },
                        [&](const FeadParams& p) { return fead_filter(data, p, options); },
                        [&](const SswadParams& p) { return sswad_filter(data, p, options); },
                    },
                    params);
}

FilterParams with_threshold(FilterParams params, double threshold) {
  std::visit(Overloaded{
                 [&](SwadParams& p) { p.epsilon = threshold; },
                 [&](FeadParams& p) { p.eta = threshold; },
                 [&](SswadParams& p) { p.base.epsilon = threshold; },
             },
             params);
  return params;
}

std::vector<SweepRow> epsilon_sweep(const Dataset& data, const std::vector<bool>& truth,
                                    const std::vector<double>& grid, const FilterParams& params,
                                    const RunOptions& options) {
  if (grid.empty()) throw InvalidArgument("epsilon_sweep: empty grid");
  if (truth.size() != data.rows()) throw InvalidArgument("epsilon_sweep: truth labels do not match row count");
  for (double e : grid) {
    if (std::isnan(e) || e < 0.0) throw InvalidArgument("epsilon_sweep: grid values must be >= 0");
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double threshold : grid) {
    const auto report = run_filter(data, with_threshold(params, threshold), options);
    const auto counts = confusion(report.is_outlier, truth);
    rows.push_back({threshold, report.outlier_count(), accuracy(counts), precision(counts), report.is_outlier});
  }
  return rows;
}

}  // namespace swad
