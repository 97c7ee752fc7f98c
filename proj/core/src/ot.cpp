#include "swad/ot.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "swad/assignment.hpp"
#include "swad/error.hpp"
#include "swad/random.hpp"

namespace swad {

namespace detail {

void require_order(double t) {
  if (!(t >= 1.0) || !std::isfinite(t)) {
    throw InvalidArgument("transport order t must be a finite real >= 1, got " + std::to_string(t));
  }
}

}  // namespace detail

namespace {

void require_finite(std::span<const double> values, std::size_t dim) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      const std::size_t row = dim == 0 ? 0 : i / dim;
      const std::size_t col = dim == 0 ? 0 : i % dim;
      throw NumericError("non-finite coordinate at atom " + std::to_string(row) + ", coordinate " +
                             std::to_string(col),
                         row, col);
    }
  }
}

void require_same_shape(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("distributions have different dimensions");
  if (a.size() != b.size()) throw InvalidArgument("distributions have different cardinalities");
}

// Row-major m x m matrix of ||a_i - b_j||^t.
std::vector<double> cost_matrix(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                                double t, Norm norm) {
  const std::size_t m = a.size();
  std::vector<double> cost(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      cost[i * m + j] = detail::abs_pow(norm_distance(a.atom(i), b.atom(j), norm), t);
    }
  }
  return cost;
}

// Solving with a canonical argument order makes the exact routes symmetric
// bit-for-bit, not just up to rounding.
bool canonical_order(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto ca = a.coords();
  const auto cb = b.coords();
  return !std::lexicographical_compare(cb.begin(), cb.end(), ca.begin(), ca.end());
}

class PermutationSearch {
 public:
  PermutationSearch(const std::vector<double>& cost, std::size_t m)
      : cost_(cost), m_(m), used_(m, 0) {}

  double run() {
    visit(0, 0.0);
    return best_;
  }

 private:
  void visit(std::size_t row, double partial) {
    if (row == m_) {
      best_ = std::min(best_, partial);
      return;
    }
    // Costs are nonnegative, so a partial sum already at the best cannot improve.
    if (partial >= best_) return;
    for (std::size_t col = 0; col < m_; ++col) {
      if (used_[col]) continue;
      used_[col] = 1;
      visit(row + 1, partial + cost_[row * m_ + col]);
      used_[col] = 0;
    }
  }

  const std::vector<double>& cost_;
  std::size_t m_;
  std::vector<char> used_;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> coords, std::size_t dim,
                                             std::vector<std::size_t> source_indices)
    : coords_(std::move(coords)), dim_(dim), source_indices_(std::move(source_indices)) {
  if (dim_ == 0) throw InvalidArgument("EmpiricalDistribution: dimension must be >= 1");
  if (coords_.empty() || coords_.size() % dim_ != 0) {
    throw InvalidArgument("EmpiricalDistribution: need at least one atom and a whole number of rows");
  }
  const std::size_t n = coords_.size() / dim_;
  if (source_indices_.empty()) {
    source_indices_.resize(n);
    for (std::size_t i = 0; i < n; ++i) source_indices_[i] = i;
  } else if (source_indices_.size() != n) {
    throw InvalidArgument("EmpiricalDistribution: source_indices length does not match atom count");
  }
  require_finite(coords_, dim_);
}

EmpiricalDistribution EmpiricalDistribution::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("EmpiricalDistribution: no atoms");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw InvalidArgument("EmpiricalDistribution: ragged atoms");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  return EmpiricalDistribution(std::move(coords), dim);
}

EmpiricalDistribution EmpiricalDistribution::without(std::size_t k) const {
  if (k >= size()) throw InvalidArgument("EmpiricalDistribution::without: index out of range");
  if (size() == 1) throw InvalidArgument("EmpiricalDistribution::without: would leave no atoms");
  std::vector<double> coords;
  coords.reserve(coords_.size() - dim_);
  std::vector<std::size_t> sources;
  sources.reserve(size() - 1);
  for (std::size_t i = 0; i < size(); ++i) {
    if (i == k) continue;
    const auto a = atom(i);
    coords.insert(coords.end(), a.begin(), a.end());
    sources.push_back(source_indices_[i]);
  }
  return EmpiricalDistribution(std::move(coords), dim_, std::move(sources));
}

DirectionSet::DirectionSet(std::vector<double> directions, std::size_t dim, std::uint64_t seed)
    : directions_(std::move(directions)), dim_(dim), count_(0), seed_(seed) {
  if (dim_ == 0) throw InvalidArgument("DirectionSet: dimension must be >= 1");
  if (directions_.empty() || directions_.size() % dim_ != 0) {
    throw InvalidArgument("DirectionSet: need at least one direction and a whole number of rows");
  }
  count_ = directions_.size() / dim_;
  for (std::size_t l = 0; l < count_; ++l) {
    const auto theta = direction(l);
    const double norm = std::sqrt(detail::dot(theta, theta));
    if (!(std::fabs(norm - 1.0) <= 1e-12)) {
      throw InvalidArgument("DirectionSet: direction " + std::to_string(l) + " is not unit length");
    }
  }
}

double norm_distance(Sample a, Sample b, Norm norm) {
  if (a.size() != b.size()) throw InvalidArgument("norm_distance: dimension mismatch");
  double s = 0.0;
  if (norm == Norm::L1) {
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

DirectionSet sample_unit_directions(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("sample_unit_directions: d must be >= 1");
  if (count == 0) throw InvalidArgument("sample_unit_directions: L must be >= 1");
  Rng rng(seed);
  std::vector<double> dirs(dim * count);
  std::vector<double> draw(dim);
  for (std::size_t l = 0; l < count; ++l) {
    double norm = 0.0;
    do {
      for (auto& x : draw) x = rng.normal();
      norm = std::sqrt(detail::dot(draw, draw));
    } while (!(norm > 1e-300));
    for (std::size_t k = 0; k < dim; ++k) dirs[l * dim + k] = draw[k] / norm;
  }
  return DirectionSet(std::move(dirs), dim, seed);
}

std::vector<double> project(const EmpiricalDistribution& dist, std::span<const double> direction) {
  if (direction.size() != dist.dim()) throw InvalidArgument("project: direction dimension mismatch");
  std::vector<double> out(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) out[i] = detail::dot(dist.atom(i), direction);
  std::sort(out.begin(), out.end());
  return out;
}

double transport_cost_1d(std::span<const double> u, std::span<const double> v, double t) {
  detail::require_order(t);
  if (u.size() != v.size()) throw InvalidArgument("wasserstein_1d: length mismatch");
  if (u.empty()) throw InvalidArgument("wasserstein_1d: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += detail::abs_pow(u[i] - v[i], t);
  return s / static_cast<double>(u.size());
}

double wasserstein_1d(std::span<const double> u, std::span<const double> v, double t) {
  return detail::root(transport_cost_1d(u, v, t), t);
}

double sliced_wasserstein(const EmpiricalDistribution& a, const EmpiricalDistribution& b, double t,
                          const DirectionSet& dirs) {
  detail::require_order(t);
  require_same_shape(a, b);
  if (dirs.dim() != a.dim()) throw InvalidArgument("sliced_wasserstein: direction dimension mismatch");
  double total = 0.0;
  for (std::size_t l = 0; l < dirs.size(); ++l) {
    const auto pa = project(a, dirs.direction(l));
    const auto pb = project(b, dirs.direction(l));
    total += transport_cost_1d(pa, pb, t);
  }
  return detail::root(total / static_cast<double>(dirs.size()), t);
}

double exact_wasserstein_bruteforce(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                                    double t, Norm norm) {
  detail::require_order(t);
  require_same_shape(a, b);
  if (a.size() > kBruteForceHardLimit) {
    throw SizeLimitError("exact_wasserstein_bruteforce: m = " + std::to_string(a.size()) +
                         " exceeds the enumeration limit of " + std::to_string(kBruteForceHardLimit));
  }
  const bool keep = canonical_order(a, b);
  const auto cost = keep ? cost_matrix(a, b, t, norm) : cost_matrix(b, a, t, norm);
  const double best = PermutationSearch(cost, a.size()).run();
  return detail::root(best / static_cast<double>(a.size()), t);
}

double exact_wasserstein_assignment(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                                    double t, Norm norm) {
  detail::require_order(t);
  require_same_shape(a, b);
  if (a.size() > kAssignmentLimit) {
    throw SizeLimitError("exact_wasserstein: m = " + std::to_string(a.size()) +
                         " exceeds the oracle limit of " + std::to_string(kAssignmentLimit));
  }
  const bool keep = canonical_order(a, b);
  const auto cost = keep ? cost_matrix(a, b, t, norm) : cost_matrix(b, a, t, norm);
  const auto matching = solve_assignment(cost, a.size());
  return detail::root(matching.cost / static_cast<double>(a.size()), t);
}

double exact_wasserstein(const EmpiricalDistribution& a, const EmpiricalDistribution& b, double t,
                         Norm norm) {
  if (a.size() == b.size() && a.size() <= kBruteForceLimit) {
    return exact_wasserstein_bruteforce(a, b, t, norm);
  }
  return exact_wasserstein_assignment(a, b, t, norm);
}

TransportBounds single_sample_bounds(Sample z_k, Sample z_l, std::size_t n_total, double t, Norm norm) {
  detail::require_order(t);
  if (n_total < 2) throw InvalidArgument("single_sample_bounds: N must be >= 2");
  const double dist = norm_distance(z_k, z_l, norm);
  const double m = static_cast<double>(n_total - 1);
  return {dist / m, dist / detail::root(m, t)};
}

}  // namespace swad
