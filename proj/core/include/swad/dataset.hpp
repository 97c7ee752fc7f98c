#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swad/ot.hpp"
#include "swad/report.hpp"

namespace swad {

/// N x d matrix of finite values with column names and stable row ids.
///
/// Row ids default to 0..N-1 and survive row selection, so a row keeps its
/// identity (and its random substream in the filters) inside splits and
/// permutations.
class Dataset {
 public:
  Dataset(std::vector<double> values, std::size_t cols, std::vector<std::string> column_names = {},
          std::vector<std::uint64_t> row_ids = {});

  static Dataset from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return row_ids_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  double at(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<std::string>& column_names() const noexcept { return column_names_; }
  const std::vector<std::uint64_t>& row_ids() const noexcept { return row_ids_; }

  Dataset select_rows(std::span<const std::size_t> rows) const;
  // Drops the named column and returns it alongside the remaining dataset.
  std::pair<Dataset, std::vector<double>> split_column(std::string_view name) const;
  EmpiricalDistribution distribution() const;

 private:
  std::vector<double> values_;
  std::size_t cols_;
  std::vector<std::string> column_names_;
  std::vector<std::uint64_t> row_ids_;
};

struct ScalingState {
  std::vector<double> mean;
  std::vector<double> stddev;  // population standard deviation
  std::vector<bool> constant;  // stddev < kConstantColumnTolerance; passed through unchanged
};

inline constexpr double kConstantColumnTolerance = 1e-12;

std::pair<Dataset, ScalingState> standardize(const Dataset& data);
Dataset inverse_transform(const Dataset& data, const ScalingState& state);

enum class ComponentTag { Majority, Minority, Outlier };

std::string_view to_string(ComponentTag tag);

struct MixtureComponent {
  std::size_t count = 0;
  std::vector<double> mean;
  std::vector<double> variance;  // diagonal covariance
  ComponentTag tag = ComponentTag::Majority;
};

struct MixtureSpec {
  std::vector<MixtureComponent> components;
  std::uint64_t seed = 0;
};

/// Three planar Gaussians: 100 majority points at the origin with unit
/// variance, 20 minority points at (4, 4) with variance 0.5, and 5 outliers
/// at (12, -12) with unit variance.
MixtureSpec default_mixture_spec(std::uint64_t seed = 0);

struct LabeledDataset {
  Dataset data;
  std::vector<ComponentTag> tags;

  std::vector<bool> outlier_truth() const;
};

// Box-Muller draws per component, then a seeded Fisher-Yates shuffle of the rows.
LabeledDataset generate_mixture(const MixtureSpec& spec);

Dataset parse_csv(std::string_view text, bool has_header);
Dataset load_csv(const std::filesystem::path& path, bool has_header);

// Shortest round-trip decimal for every value; header always written.
std::string format_csv(const Dataset& data);
void save_csv(const Dataset& data, const std::filesystem::path& path);

// Columns: row_id, vote_fraction (9 decimals), is_outlier (0/1), then features.
std::string format_report(const OutlierReport& report, const Dataset& data);
void save_report(const OutlierReport& report, const Dataset& data, const std::filesystem::path& path);

}  // namespace swad
