#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "swad/dataset.hpp"
#include "swad/report.hpp"

namespace swad {

struct RunOptions {
  unsigned threads = 1;  // 0 = hardware concurrency; never changes results
};

/// n_votes distinct indices drawn uniformly without replacement from
/// [0, n) \ {i}. The draw uses Floyd's algorithm on the substream
/// mix_seed(seed, key), so it does not depend on evaluation order.
std::vector<std::size_t> vote_indices(std::size_t i, std::size_t n, std::size_t n_votes,
                                      std::uint64_t seed, std::uint64_t key);

// Substream keyed by the index itself.
inline std::vector<std::size_t> vote_indices(std::size_t i, std::size_t n, std::size_t n_votes,
                                             std::uint64_t seed) {
  return vote_indices(i, n, n_votes, seed, i);
}

/// Sliced-Wasserstein distances between leave-one-out versions of one
/// dataset over a fixed direction set.
///
/// Per direction the full dataset is projected and sorted once. Dropping row
/// i and row j from the sorted projection leaves two arrays that agree
/// outside the index range between the two removal positions and are offset
/// by one inside it, so each 1-D cost is a sum of consecutive gaps over that
/// range. distance(i, j) matches sliced_wasserstein() on the explicit
/// leave-one-out distributions bit for bit.
class LeaveOneOutProjections {
 public:
  LeaveOneOutProjections(const Dataset& data, const DirectionSet& dirs, double t, unsigned threads = 1);

  // SW_t between the dataset without row i and the dataset without row j.
  double distance(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_;
  std::size_t directions_;
  double t_;
  std::vector<double> gap_cost_;     // L x (N-1): |s[k+1] - s[k]|^t
  std::vector<std::uint32_t> rank_;  // L x N: sorted position of each row
};

// Row-major N x n_votes: partner row and whether the vote was positive.
struct VoteMatrix {
  std::size_t rows = 0;
  std::size_t n_votes = 0;
  std::vector<std::size_t> partner;
  std::vector<char> positive;

  double fraction(std::size_t i) const;
};

/// Votes of the sliced-Wasserstein filter. A vote (i, j) is positive when
/// SW_t between the dataset without row i and the dataset without row j is
/// at least epsilon. All votes share one direction set,
/// sample_unit_directions(d, L, seed).
VoteMatrix swad_votes(const Dataset& data, const SwadParams& params, const RunOptions& options = {});

// Votes with the closed-form predicate ||z_i - z_j||_2 / (N-1)^(1/t) >= eta.
VoteMatrix fead_votes(const Dataset& data, const FeadParams& params, const RunOptions& options = {});

OutlierReport swad_filter(const Dataset& data, const SwadParams& params, const RunOptions& options = {});
OutlierReport fead_filter(const Dataset& data, const FeadParams& params, const RunOptions& options = {});

struct ClusterAssignment {
  std::vector<std::size_t> labels;
  std::vector<double> centroids;  // K x d, row-major
  std::size_t k = 0;
  std::size_t iterations_run = 0;
  double inertia = 0.0;  // sum of squared distances to assigned centroids
};

// Lloyd iterations from k-means++ seeding. An empty cluster is re-seeded at
// the point farthest from its own centroid.
ClusterAssignment kmeans(const Dataset& data, std::size_t k, std::uint64_t seed, std::size_t max_iters = 100);

/// Shuffles each cluster's members and deals them round-robin into s parts;
/// the dealer position carries over between clusters so split sizes differ
/// by at most one. Each split lists row positions in ascending order.
std::vector<std::vector<std::size_t>> smart_split_rows(const ClusterAssignment& assignment, std::size_t s,
                                                       std::uint64_t seed);

std::vector<Dataset> smart_split(const Dataset& data, const ClusterAssignment& assignment, std::size_t s,
                                 std::uint64_t seed);

// Per-split vote parameters: n_s = max(1, round(n |D_s| / N)), eps_s = eps |D_s| / N.
SwadParams scale_for_split(const SwadParams& base, std::size_t split_rows, std::size_t total_rows);

/// SWAD run independently on each smart split; the outlier set is the union
/// of the per-split outlier sets and each row reports its own split's vote
/// fraction. Splits with one row contribute nothing and add a warning.
OutlierReport sswad_filter(const Dataset& data, const SswadParams& params, const RunOptions& options = {});

// Seeds for the clustering and splitting stages of sSWAD.
std::uint64_t kmeans_seed(std::uint64_t seed);
std::uint64_t split_seed(std::uint64_t seed);

}  // namespace swad
