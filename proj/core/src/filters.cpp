#include "swad/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "parallel.hpp"
#include "swad/error.hpp"
#include "swad/ot.hpp"
#include "swad/random.hpp"

namespace swad {

namespace {

constexpr std::uint64_t kKmeansStream = 0x6B6D65616E73ULL;
constexpr std::uint64_t kSplitStream = 0x73706C6974ULL;

void validate_common(const Dataset& data, double t, double threshold, std::size_t n_votes, double p) {
  detail::require_order(t);
  if (std::isnan(threshold) || threshold < 0.0) throw InvalidArgument("distance threshold must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("voting threshold p must lie in [0, 1]");
  if (data.rows() < 2) throw InvalidArgument("filtering needs at least two rows");
  if (n_votes == 0) throw InvalidArgument("n_votes must be >= 1");
  if (n_votes > data.rows() - 1) {
    throw InvalidArgument("n_votes = " + std::to_string(n_votes) + " exceeds N - 1 = " +
                          std::to_string(data.rows() - 1));
  }
}

// Rows ordered by stable id. Votes are drawn over ranks in this order, so a
// row permutation of the input permutes the votes with it.
struct CanonicalOrder {
  std::vector<std::size_t> position_of_rank;
  std::vector<std::size_t> rank_of_position;

  explicit CanonicalOrder(const Dataset& data) : position_of_rank(data.rows()), rank_of_position(data.rows()) {
    std::iota(position_of_rank.begin(), position_of_rank.end(), std::size_t{0});
    const auto& ids = data.row_ids();
    std::sort(position_of_rank.begin(), position_of_rank.end(),
              [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    for (std::size_t r = 0; r < position_of_rank.size(); ++r) rank_of_position[position_of_rank[r]] = r;
  }
};

template <typename Predicate>
VoteMatrix collect_votes(const Dataset& data, std::size_t n_votes, std::uint64_t seed, unsigned threads,
                         Predicate&& positive) {
  const std::size_t n = data.rows();
  const CanonicalOrder order(data);
  VoteMatrix votes;
  votes.rows = n;
  votes.n_votes = n_votes;
  votes.partner.resize(n * n_votes);
  votes.positive.resize(n * n_votes);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    const auto ranks = vote_indices(order.rank_of_position[i], n, n_votes, seed, data.row_ids()[i]);
    for (std::size_t v = 0; v < n_votes; ++v) {
      const std::size_t j = order.position_of_rank[ranks[v]];
      votes.partner[i * n_votes + v] = j;
      votes.positive[i * n_votes + v] = positive(i, j) ? 1 : 0;
    }
  });
  return votes;
}

OutlierReport report_from_votes(const VoteMatrix& votes, double p, Method method, FilterParams params,
                                std::uint64_t seed) {
  OutlierReport report;
  report.method = method;
  report.params = std::move(params);
  report.seed = seed;
  report.vote_fraction.resize(votes.rows);
  report.is_outlier.resize(votes.rows);
  for (std::size_t i = 0; i < votes.rows; ++i) {
    report.vote_fraction[i] = votes.fraction(i);
    report.is_outlier[i] = report.vote_fraction[i] >= p;
  }
  return report;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

}  // namespace

LeaveOneOutProjections::LeaveOneOutProjections(const Dataset& data, const DirectionSet& dirs, double t,
                                               unsigned threads)
    : n_(data.rows()), directions_(dirs.size()), t_(t) {
  detail::require_order(t);
  if (n_ < 2) throw InvalidArgument("LeaveOneOutProjections: need at least two rows");
  if (dirs.dim() != data.cols()) throw InvalidArgument("LeaveOneOutProjections: direction dimension mismatch");
  if (n_ > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("LeaveOneOutProjections: too many rows");
  gap_cost_.resize(directions_ * (n_ - 1));
  rank_.resize(directions_ * n_);
  detail::parallel_for(directions_, threads, [&](std::size_t l) {
    const auto theta = dirs.direction(l);
    std::vector<std::pair<double, std::size_t>> proj(n_);
    for (std::size_t i = 0; i < n_; ++i) proj[i] = {detail::dot(data.row(i), theta), i};
    std::sort(proj.begin(), proj.end());
    for (std::size_t k = 0; k < n_; ++k) rank_[l * n_ + proj[k].second] = static_cast<std::uint32_t>(k);
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      gap_cost_[l * (n_ - 1) + k] = detail::abs_pow(proj[k + 1].first - proj[k].first, t);
    }
  });
}

double LeaveOneOutProjections::distance(std::size_t i, std::size_t j) const {
  const double m = static_cast<double>(n_ - 1);
  double total = 0.0;
  for (std::size_t l = 0; l < directions_; ++l) {
    std::size_t a = rank_[l * n_ + i];
    std::size_t b = rank_[l * n_ + j];
    if (a > b) std::swap(a, b);
    const double* gaps = gap_cost_.data() + l * (n_ - 1);
    // Zero terms outside [a, b) are skipped; adding them would not change the sum.
    double s = 0.0;
    for (std::size_t k = a; k < b; ++k) s += gaps[k];
    total += s / m;
  }
  return detail::root(total / static_cast<double>(directions_), t_);
}

double VoteMatrix::fraction(std::size_t i) const {
  std::size_t count = 0;
  for (std::size_t v = 0; v < n_votes; ++v) count += positive[i * n_votes + v] ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(n_votes);
}

std::vector<std::size_t> vote_indices(std::size_t i, std::size_t n, std::size_t n_votes, std::uint64_t seed,
                                      std::uint64_t key) {
  if (i >= n) throw InvalidArgument("vote_indices: i out of range");
  if (n_votes > n - 1) {
    throw InvalidArgument("vote_indices: n_votes = " + std::to_string(n_votes) + " exceeds N - 1 = " +
                          std::to_string(n - 1));
  }
  Rng rng(mix_seed(seed, key));
  const std::size_t candidates = n - 1;
  std::vector<std::size_t> picked;
  picked.reserve(n_votes);
  std::unordered_set<std::size_t> seen;
  seen.reserve(n_votes * 2);
  // Floyd's sampling: one draw per slot, uniform over all n_votes-subsets.
  for (std::size_t j = candidates - n_votes; j < candidates; ++j) {
    const auto r = static_cast<std::size_t>(rng.uniform_index(j + 1));
    const std::size_t chosen = seen.insert(r).second ? r : j;
    if (chosen == j) seen.insert(j);
    picked.push_back(chosen);
  }
  for (auto& x : picked) x = x < i ? x : x + 1;
  return picked;
}

VoteMatrix swad_votes(const Dataset& data, const SwadParams& params, const RunOptions& options) {
  validate_common(data, params.t, params.epsilon, params.n_votes, params.p_threshold);
  if (params.n_projections == 0) throw InvalidArgument("n_projections must be >= 1");
  const auto dirs = sample_unit_directions(data.cols(), params.n_projections, params.seed);
  const LeaveOneOutProjections projections(data, dirs, params.t, options.threads);
  return collect_votes(data, params.n_votes, params.seed, options.threads, [&](std::size_t i, std::size_t j) {
    return projections.distance(i, j) >= params.epsilon;
  });
}

VoteMatrix fead_votes(const Dataset& data, const FeadParams& params, const RunOptions& options) {
  validate_common(data, params.t, params.eta, params.n_votes, params.p_threshold);
  const double scale = detail::root(static_cast<double>(data.rows() - 1), params.t);
  return collect_votes(data, params.n_votes, params.seed, options.threads, [&](std::size_t i, std::size_t j) {
    return norm_distance(data.row(i), data.row(j), Norm::L2) / scale >= params.eta;
  });
}

OutlierReport swad_filter(const Dataset& data, const SwadParams& params, const RunOptions& options) {
  const auto votes = swad_votes(data, params, options);
  return report_from_votes(votes, params.p_threshold, Method::SWAD, params, params.seed);
}

OutlierReport fead_filter(const Dataset& data, const FeadParams& params, const RunOptions& options) {
  const auto votes = fead_votes(data, params, options);
  return report_from_votes(votes, params.p_threshold, Method::FEAD, params, params.seed);
}

ClusterAssignment kmeans(const Dataset& data, std::size_t k, std::uint64_t seed, std::size_t max_iters) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (k == 0) throw InvalidArgument("kmeans: K must be >= 1");
  if (k > n) throw InvalidArgument("kmeans: K = " + std::to_string(k) + " exceeds N = " + std::to_string(n));

  Rng rng(seed);
  ClusterAssignment result;
  result.k = k;
  result.centroids.resize(k * d);
  auto centroid = [&](std::size_t c) { return std::span<double>(result.centroids.data() + c * d, d); };
  auto set_centroid = [&](std::size_t c, std::span<const double> point) {
    std::copy(point.begin(), point.end(), centroid(c).begin());
  };

  // k-means++ seeding.
  set_centroid(0, data.row(rng.uniform_index(n)));
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(data.row(i), centroid(0));
  for (std::size_t c = 1; c < k; ++c) {
    const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += nearest[i];
        if (nearest[i] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      // Rounding can leave target past the last increment; take the last candidate.
      if (!(nearest[pick] > 0.0)) {
        for (std::size_t i = n; i-- > 0;) {
          if (nearest[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.uniform_index(n));
    }
    set_centroid(c, data.row(pick));
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], squared_distance(data.row(i), centroid(c)));
  }

  auto assign = [&](std::vector<std::size_t>& labels) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_dist = squared_distance(data.row(i), centroid(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double dist = squared_distance(data.row(i), centroid(c));
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      if (labels[i] != best) changed = true;
      labels[i] = best;
    }
    return changed;
  };

  result.labels.assign(n, k);  // sentinel: nothing assigned yet
  assign(result.labels);
  std::vector<double> sums(k * d);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = result.labels[i];
      ++counts[c];
      const auto row = data.row(i);
      for (std::size_t j = 0; j < d; ++j) sums[c * d + j] += row[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) result.centroids[c * d + j] = sums[c * d + j] / static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t farthest = 0;
      double far_dist = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dist = squared_distance(data.row(i), centroid(result.labels[i]));
        if (dist > far_dist) {
          far_dist = dist;
          farthest = i;
        }
      }
      set_centroid(c, data.row(farthest));
      result.labels[farthest] = c;
    }
    result.iterations_run = iter + 1;
    if (!assign(result.labels)) break;
  }

  result.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) result.inertia += squared_distance(data.row(i), centroid(result.labels[i]));
  return result;
}

std::vector<std::vector<std::size_t>> smart_split_rows(const ClusterAssignment& assignment, std::size_t s,
                                                       std::uint64_t seed) {
  const std::size_t n = assignment.labels.size();
  if (s == 0) throw InvalidArgument("smart_split: S must be >= 1");
  if (s > n) throw InvalidArgument("smart_split: S = " + std::to_string(s) + " exceeds N = " + std::to_string(n));
  std::vector<std::vector<std::size_t>> members(assignment.k);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = assignment.labels[i];
    if (c >= assignment.k) throw InvalidArgument("smart_split: cluster label out of range");
    members[c].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> splits(s);
  std::size_t dealer = 0;
  for (auto& cluster : members) {
    for (std::size_t i = cluster.size(); i > 1; --i) std::swap(cluster[i - 1], cluster[rng.uniform_index(i)]);
    for (std::size_t row : cluster) {
      splits[dealer].push_back(row);
      dealer = (dealer + 1) % s;
    }
  }
  for (auto& split : splits) std::sort(split.begin(), split.end());
  return splits;
}

std::vector<Dataset> smart_split(const Dataset& data, const ClusterAssignment& assignment, std::size_t s,
                                 std::uint64_t seed) {
  if (assignment.labels.size() != data.rows()) throw InvalidArgument("smart_split: assignment size mismatch");
  std::vector<Dataset> out;
  for (const auto& rows : smart_split_rows(assignment, s, seed)) out.push_back(data.select_rows(rows));
  return out;
}

SwadParams scale_for_split(const SwadParams& base, std::size_t split_rows, std::size_t total_rows) {
  if (total_rows == 0) throw InvalidArgument("scale_for_split: empty dataset");
  SwadParams scaled = base;
  // round-half-up of n * |D_s| / N in exact integer arithmetic
  const std::uint64_t num = 2 * static_cast<std::uint64_t>(base.n_votes) * split_rows + total_rows;
  scaled.n_votes = std::max<std::size_t>(1, static_cast<std::size_t>(num / (2 * static_cast<std::uint64_t>(total_rows))));
  scaled.epsilon = base.epsilon * (static_cast<double>(split_rows) / static_cast<double>(total_rows));
  return scaled;
}

std::uint64_t kmeans_seed(std::uint64_t seed) { return mix_seed(seed, kKmeansStream); }
std::uint64_t split_seed(std::uint64_t seed) { return mix_seed(seed, kSplitStream); }

OutlierReport sswad_filter(const Dataset& data, const SswadParams& params, const RunOptions& options) {
  const auto& base = params.base;
  validate_common(data, base.t, base.epsilon, base.n_votes, base.p_threshold);
  if (base.n_projections == 0) throw InvalidArgument("n_projections must be >= 1");
  if (params.k_clusters == 0 || params.k_clusters > data.rows()) {
    throw InvalidArgument("sswad: K must lie in [1, N]");
  }

  const auto clusters = kmeans(data, params.k_clusters, kmeans_seed(base.seed));
  const auto splits = smart_split_rows(clusters, params.s_splits, split_seed(base.seed));

  OutlierReport report;
  report.method = Method::SSWAD;
  report.params = params;
  report.seed = base.seed;
  report.vote_fraction.assign(data.rows(), 0.0);
  report.is_outlier.assign(data.rows(), false);

  std::vector<OutlierReport> partial(splits.size());
  std::vector<std::string> split_warnings(splits.size());
  // Splits run one after another; each split's vote loop is itself parallel.
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const auto& rows = splits[s];
    if (rows.size() <= 1) {
      split_warnings[s] = "split " + std::to_string(s) + " has " + std::to_string(rows.size()) +
                          " row(s); it contributes no outliers";
      continue;
    }
    auto scaled = scale_for_split(base, rows.size(), data.rows());
    if (scaled.n_votes > rows.size() - 1) {
      split_warnings[s] = "split " + std::to_string(s) + ": n_s clamped from " + std::to_string(scaled.n_votes) +
                          " to " + std::to_string(rows.size() - 1);
      scaled.n_votes = rows.size() - 1;
    }
    partial[s] = swad_filter(data.select_rows(rows), scaled, options);
  }

  for (std::size_t s = 0; s < splits.size(); ++s) {
    if (!split_warnings[s].empty()) report.warnings.push_back(split_warnings[s]);
    if (partial[s].size() == 0) continue;
    const auto& rows = splits[s];
    for (std::size_t k = 0; k < rows.size(); ++k) {
      report.vote_fraction[rows[k]] = partial[s].vote_fraction[k];
      report.is_outlier[rows[k]] = partial[s].is_outlier[k];
    }
  }
  return report;
}

}  // namespace swad
