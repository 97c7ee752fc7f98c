#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "swad/dataset.hpp"
#include "swad/filters.hpp"

namespace swad {

// Outlier is the positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(const std::vector<bool>& predicted, const std::vector<bool>& truth);

// (tp + tn) / total
double accuracy(const ConfusionCounts& c);
// tp / (tp + fp); nullopt when nothing was flagged.
std::optional<double> precision(const ConfusionCounts& c);

inline constexpr double kBoundTolerance = 1e-9;

struct BoundCheckRecord {
  std::size_t k = 0;
  std::size_t l = 0;
  double t = 1.0;
  double lower = 0.0;
  double exact = 0.0;
  double upper = 0.0;
  bool satisfied = false;
};

// lower - tol <= exact <= upper + tol with tol relative (absolute floor 1e-12).
bool within_bounds(double lower, double exact, double upper);

/// Draws n_samples standard-Gaussian points in R^dim, picks n_pairs distinct
/// random pairs k != l, and for every order t compares the single-sample
/// bounds against the exact Wasserstein distance between the two
/// leave-one-out distributions. Records are ordered by pair, then t.
/// n_pairs larger than N(N-1)/2 is capped at that count.
std::vector<BoundCheckRecord> verify_bounds(std::size_t n_samples, std::size_t dim, const std::vector<double>& t_values,
                                            std::size_t n_pairs, std::uint64_t seed, const RunOptions& options = {});

double satisfied_fraction(const std::vector<BoundCheckRecord>& records);

struct SweepRow {
  double threshold = 0.0;
  std::size_t flagged = 0;
  double accuracy = 0.0;
  std::optional<double> precision;
  std::vector<bool> is_outlier;
};

// One filter run per threshold with everything else fixed. For SWAD/sSWAD
// the grid sets epsilon; for FEAD it sets eta.
std::vector<SweepRow> epsilon_sweep(const Dataset& data, const std::vector<bool>& truth,
                                    const std::vector<double>& grid, const FilterParams& params,
                                    const RunOptions& options = {});

OutlierReport run_filter(const Dataset& data, const FilterParams& params, const RunOptions& options = {});
FilterParams with_threshold(FilterParams params, double threshold);

}  // namespace swad
