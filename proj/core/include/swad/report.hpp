#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace swad {

enum class Method { SWAD, SSWAD, FEAD };

std::string_view to_string(Method method);

struct SwadParams {
  double t = 2.0;
  double epsilon = 0.0;
  std::size_t n_votes = 150;
  double p_threshold = 0.8;
  std::size_t n_projections = 40;
  std::uint64_t seed = 0;
};

struct FeadParams {
  double t = 2.0;
  double eta = 0.0;
  std::size_t n_votes = 150;
  double p_threshold = 0.8;
  std::uint64_t seed = 0;
};

// base.epsilon and base.n_votes refer to the whole dataset; each split
// scales them by its share of the rows.
struct SswadParams {
  SwadParams base;
  std::size_t k_clusters = 3;
  std::size_t s_splits = 2;
};

using FilterParams = std::variant<SwadParams, FeadParams, SswadParams>;

struct OutlierReport {
  Method method = Method::SWAD;
  FilterParams params;
  std::uint64_t seed = 0;
  std::vector<double> vote_fraction;
  std::vector<bool> is_outlier;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return vote_fraction.size(); }
  std::size_t outlier_count() const noexcept;
  std::vector<std::size_t> outlier_rows() const;
};

}  // namespace swad
