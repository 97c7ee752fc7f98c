#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace swad {

enum class Norm { L1, L2 };

// A sample z in R^d is viewed, never owned, by the transport code.
using Sample = std::span<const double>;

/// Equal-weight empirical distribution over |atoms| points in R^d.
///
/// Atoms are stored row-major. source_indices records where each atom came
/// from in the parent dataset (0..n-1 when built directly).
class EmpiricalDistribution {
 public:
  EmpiricalDistribution(std::vector<double> coords, std::size_t dim,
                        std::vector<std::size_t> source_indices = {});

  static EmpiricalDistribution from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return source_indices_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  Sample atom(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const std::size_t> source_indices() const noexcept { return source_indices_; }

  // The distribution with atom k removed; source indices are carried over.
  EmpiricalDistribution without(std::size_t k) const;

 private:
  std::vector<double> coords_;
  std::size_t dim_;
  std::vector<std::size_t> source_indices_;
};

/// L unit vectors on the sphere S^{d-1}.
class DirectionSet {
 public:
  // Explicit directions; each must have unit Euclidean norm within 1e-12.
  DirectionSet(std::vector<double> directions, std::size_t dim, std::uint64_t seed = 0);

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const double> direction(std::size_t l) const noexcept {
    return {directions_.data() + l * dim_, dim_};
  }
  std::span<const double> data() const noexcept { return directions_; }

 private:
  std::vector<double> directions_;
  std::size_t dim_;
  std::size_t count_;
  std::uint64_t seed_;
};

struct TransportBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline constexpr std::size_t kBruteForceLimit = 8;
inline constexpr std::size_t kBruteForceHardLimit = 10;
inline constexpr std::size_t kAssignmentLimit = 512;

namespace detail {

// |x|^t with exact fast paths for the common integer orders. Every transport
// cost in the library goes through this one function so that different
// evaluation routes agree bit-for-bit.
inline double abs_pow(double x, double t) noexcept {
  const double a = std::fabs(x);
  if (t == 1.0) return a;
  if (t == 2.0) return a * a;
  return std::pow(a, t);
}

inline double root(double x, double t) noexcept {
  if (t == 1.0) return x;
  if (t == 2.0) return std::sqrt(x);
  return std::pow(x, 1.0 / t);
}

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_order(double t);

}  // namespace detail

double norm_distance(Sample a, Sample b, Norm norm = Norm::L2);

// Standard-normal draws normalized to unit length; deterministic in seed.
DirectionSet sample_unit_directions(std::size_t dim, std::size_t count, std::uint64_t seed);

// Projections <z_i, direction> in ascending order.
std::vector<double> project(const EmpiricalDistribution& dist, std::span<const double> direction);

// (1/m) sum_i |u_(i) - v_(i)|^t for ascending u, v of equal length: the
// t-th power of the order-t 1-D Wasserstein distance.
double transport_cost_1d(std::span<const double> u, std::span<const double> v, double t);

double wasserstein_1d(std::span<const double> u, std::span<const double> v, double t);

/// Monte-Carlo sliced-Wasserstein distance of order t over a fixed direction
/// set: ((1/L) sum_l W_t(proj_l a, proj_l b)^t)^(1/t).
double sliced_wasserstein(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                          double t, const DirectionSet& dirs);

/// Exact order-t Wasserstein distance between equal-cardinality empirical
/// distributions. Enumerates permutations for m <= kBruteForceLimit and uses
/// the Hungarian method up to kAssignmentLimit; larger inputs throw
/// SizeLimitError.
double exact_wasserstein(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                         double t, Norm norm = Norm::L2);

// Exhaustive permutation search (with branch-and-bound pruning), m <= kBruteForceHardLimit.
double exact_wasserstein_bruteforce(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                                    double t, Norm norm = Norm::L2);

// Hungarian route regardless of size (m <= kAssignmentLimit).
double exact_wasserstein_assignment(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                                    double t, Norm norm = Norm::L2);

/// Bounds on W_t between the two leave-one-out distributions of an N-point
/// dataset that differ by z_k and z_l:
/// ||z_k - z_l|| / (N-1)  <=  W_t  <=  ||z_k - z_l|| / (N-1)^(1/t).
/// The upper bound is the cost of moving only the one differing atom.
TransportBounds single_sample_bounds(Sample z_k, Sample z_l, std::size_t n_total, double t,
                                     Norm norm = Norm::L2);

}  // namespace swad
