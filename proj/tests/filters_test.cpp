#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "swad/error.hpp"
#include "swad/filters.hpp"

namespace swad {
namespace {

Dataset gaussian_dataset(std::size_t n, std::size_t d, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 gen(seed);
  return Dataset::from_rows(oracle::gaussian_points(n, d, gen, sigma));
}

// 60 points from N(0, 0.1 I) in the plane plus one point at (10, 10), last row.
Dataset planted_dataset() {
  std::mt19937_64 gen(2024);
  auto pts = oracle::gaussian_points(60, 2, gen, std::sqrt(0.1));
  pts.push_back({10.0, 10.0});
  return Dataset::from_rows(pts);
}

std::set<std::size_t> flagged(const OutlierReport& r) {
  const auto rows = r.outlier_rows();
  return {rows.begin(), rows.end()};
}

TEST(VoteIndices, ExhaustionAndExclusion) {
  auto v = vote_indices(0, 3, 2, 12345);
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<std::size_t>{1, 2}));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto picks = vote_indices(4, 20, 10, seed);
    std::set<std::size_t> unique(picks.begin(), picks.end());
    EXPECT_EQ(unique.size(), 10u);
    EXPECT_EQ(unique.count(4), 0u);
    EXPECT_LT(*unique.rbegin(), 20u);
  }
}

TEST(VoteIndices, Deterministic) {
  EXPECT_EQ(vote_indices(5, 100, 10, 9), vote_indices(5, 100, 10, 9));
}

TEST(VoteIndices, UniformFrequencies) {
  std::map<std::size_t, int> counts;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) ++counts[vote_indices(3, 10, 1, seed)[0]];
  EXPECT_EQ(counts.count(3), 0u);
  EXPECT_EQ(counts.size(), 9u);
  for (const auto& [j, c] : counts) EXPECT_NEAR(c / 10000.0, 1.0 / 9.0, 0.01) << "j=" << j;
}

TEST(VoteIndices, RejectsTooManyVotes) {
  EXPECT_THROW(vote_indices(0, 5, 5, 1), InvalidArgument);
}

TEST(LeaveOneOut, FastPathMatchesReferenceBitForBit) {
  const auto data = gaussian_dataset(25, 3, 7);
  const auto full = data.distribution();
  for (double t : {1.0, 2.0, 1.5}) {
    const auto dirs = sample_unit_directions(3, 12, 99);
    const LeaveOneOutProjections fast(data, dirs, t);
    for (std::size_t i = 0; i < data.rows(); i += 3) {
      for (std::size_t j = 0; j < data.rows(); j += 2) {
        if (i == j) continue;
        const double ref = sliced_wasserstein(full.without(i), full.without(j), t, dirs);
        EXPECT_EQ(fast.distance(i, j), ref) << "i=" << i << " j=" << j << " t=" << t;
      }
    }
  }
}

TEST(Swad, IdenticalAtomsFlagNothing) {
  const Dataset data = Dataset::from_rows(std::vector<std::vector<double>>(20, {1.0, -2.0}));
  const auto report = swad_filter(data, {.t = 2, .epsilon = 0.5, .n_votes = 10, .p_threshold = 0.5,
                                         .n_projections = 8, .seed = 1});
  EXPECT_EQ(report.outlier_count(), 0u);
}

TEST(Swad, ZeroEpsilonFlagsEverything) {
  const auto data = gaussian_dataset(30, 2, 3);
  const auto report = swad_filter(data, {.t = 2, .epsilon = 0.0, .n_votes = 5, .p_threshold = 1.0,
                                         .n_projections = 4, .seed = 2});
  EXPECT_EQ(report.outlier_count(), 30u);
  for (double f : report.vote_fraction) EXPECT_EQ(f, 1.0);
}

TEST(Swad, PlantedOutlierIsTheOnlyFlag) {
  const auto data = planted_dataset();
  const std::size_t planted = 60;
  const double t = 2.0;
  const std::size_t projections = 40;
  const std::uint64_t seed = 5;
  // Reference distances on explicit leave-one-out distributions.
  const auto dirs = sample_unit_directions(2, projections, seed);
  const auto full = data.distribution();
  std::vector<EmpiricalDistribution> loo;
  for (std::size_t i = 0; i < data.rows(); ++i) loo.push_back(full.without(i));
  double inlier_max = 0.0, planted_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = i + 1; j < data.rows(); ++j) {
      const double sw = sliced_wasserstein(loo[i], loo[j], t, dirs);
      if (i == planted || j == planted) {
        planted_min = std::min(planted_min, sw);
      } else {
        inlier_max = std::max(inlier_max, sw);
      }
    }
  }
  ASSERT_LT(inlier_max, planted_min);
  const double epsilon = 0.5 * (inlier_max + planted_min);

  const auto report = swad_filter(data, {.t = t, .epsilon = epsilon, .n_votes = 30, .p_threshold = 0.7,
                                         .n_projections = projections, .seed = seed});
  EXPECT_EQ(flagged(report), std::set<std::size_t>{planted});
  EXPECT_EQ(report.vote_fraction[planted], 1.0);
}

TEST(Swad, RejectsBadParameters) {
  const auto data = gaussian_dataset(10, 2, 1);
  SwadParams p{.t = 2, .epsilon = 1, .n_votes = 10, .p_threshold = 0.5, .n_projections = 4, .seed = 0};
  EXPECT_THROW(swad_filter(data, p), InvalidArgument);
  p.n_votes = 3;
  p.p_threshold = 1.5;
  EXPECT_THROW(swad_filter(data, p), InvalidArgument);
  p.p_threshold = 0.5;
  p.t = 0.9;
  EXPECT_THROW(swad_filter(data, p), InvalidArgument);
  p.t = 2;
  p.n_projections = 0;
  EXPECT_THROW(swad_filter(data, p), InvalidArgument);
  const Dataset one = Dataset::from_rows({{1.0}});
  EXPECT_THROW(swad_filter(one, {.n_votes = 1}), InvalidArgument);
}

TEST(Fead, ThresholdExtremes) {
  const auto data = gaussian_dataset(40, 3, 9);
  EXPECT_EQ(fead_filter(data, {.t = 2, .eta = 0, .n_votes = 10, .p_threshold = 1.0, .seed = 1}).outlier_count(), 40u);
  EXPECT_EQ(fead_filter(data, {.t = 2, .eta = 1e12, .n_votes = 10, .p_threshold = 0.0 + 1e-9, .seed = 1})
                .outlier_count(),
            0u);
}

TEST(Fead, FarPointFromUnitCluster) {
  // 99 points inside the unit disc and one at distance 100 from the origin.
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586), radius(0.0, 1.0);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 99; ++i) {
    const double a = angle(gen), r = radius(gen);
    pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  pts.push_back({100.0, 0.0});
  const Dataset data = Dataset::from_rows(pts);
  const std::size_t n = pts.size();
  // Every vote for the far point is at distance >= 99 > 50; inlier pairs are <= 2 apart.
  const auto report = fead_filter(data, {.t = 1, .eta = 50.0 / (n - 1), .n_votes = 20, .p_threshold = 0.9, .seed = 4});
  EXPECT_EQ(flagged(report), std::set<std::size_t>{99});
}

TEST(FilterProperties, ThresholdMonotonicity) {
  const auto data = gaussian_dataset(80, 2, 17);
  std::set<std::size_t> previous;
  bool first = true;
  for (double eps : {0.0, 0.005, 0.01, 0.02, 0.03, 0.05, 0.08, 0.2}) {
    const auto now = flagged(swad_filter(data, {.t = 2, .epsilon = eps, .n_votes = 25, .p_threshold = 0.6,
                                                .n_projections = 10, .seed = 3}));
    if (!first) EXPECT_TRUE(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
    previous = now;
    first = false;
  }
  first = true;
  for (double eta : {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0}) {
    const auto now = flagged(fead_filter(data, {.t = 2, .eta = eta, .n_votes = 25, .p_threshold = 0.6, .seed = 3}));
    if (!first) EXPECT_TRUE(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
    previous = now;
    first = false;
  }
}

TEST(FilterProperties, VotingThresholdMonotonicity) {
  const auto data = gaussian_dataset(80, 2, 19);
  std::set<std::size_t> previous;
  bool first = true;
  for (double p : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const auto now = flagged(swad_filter(data, {.t = 2, .epsilon = 0.02, .n_votes = 25, .p_threshold = p,
                                                .n_projections = 10, .seed = 3}));
    if (!first) EXPECT_TRUE(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
    previous = now;
    first = false;
  }
}

TEST(FilterProperties, PermutationEquivariance) {
  const auto data = gaussian_dataset(40, 3, 23);
  std::vector<std::size_t> perm(data.rows());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  const Dataset permuted = data.select_rows(perm);  // row ids travel with the rows

  const SwadParams sp{.t = 2, .epsilon = 0.03, .n_votes = 15, .p_threshold = 0.5, .n_projections = 12, .seed = 8};
  const FeadParams fp{.t = 2, .eta = 0.2, .n_votes = 15, .p_threshold = 0.5, .seed = 8};
  const auto base_s = swad_filter(data, sp), perm_s = swad_filter(permuted, sp);
  const auto base_f = fead_filter(data, fp), perm_f = fead_filter(permuted, fp);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    EXPECT_EQ(perm_s.vote_fraction[k], base_s.vote_fraction[perm[k]]);
    EXPECT_EQ(perm_f.vote_fraction[k], base_f.vote_fraction[perm[k]]);
  }
}

TEST(FilterProperties, ThreadCountDoesNotChangeResults) {
  const auto data = gaussian_dataset(120, 4, 29);
  const SwadParams sp{.t = 2, .epsilon = 0.01, .n_votes = 30, .p_threshold = 0.5, .n_projections = 16, .seed = 1};
  const auto one = swad_votes(data, sp, {.threads = 1});
  for (unsigned threads : {2u, 4u, 8u}) {
    const auto many = swad_votes(data, sp, {.threads = threads});
    EXPECT_EQ(one.partner, many.partner);
    EXPECT_EQ(one.positive, many.positive);
  }
  const FeadParams fp{.t = 2, .eta = 0.1, .n_votes = 30, .p_threshold = 0.5, .seed = 1};
  EXPECT_EQ(fead_votes(data, fp, {.threads = 1}).positive, fead_votes(data, fp, {.threads = 8}).positive);
}

TEST(FilterProperties, FeadEqualsSwadAtOrderOneInOneDimension) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = gaussian_dataset(50, 1, 100 + seed);
    for (double threshold : {0.005, 0.01, 0.02, 0.04}) {
      const auto sw = swad_votes(data, {.t = 1, .epsilon = threshold, .n_votes = 20, .p_threshold = 0.5,
                                        .n_projections = 6, .seed = seed});
      const auto fe = fead_votes(data, {.t = 1, .eta = threshold, .n_votes = 20, .p_threshold = 0.5, .seed = seed});
      EXPECT_EQ(sw.partner, fe.partner);
      EXPECT_EQ(sw.positive, fe.positive);
    }
  }
}

TEST(Kmeans, SingleSample) {
  const Dataset data = Dataset::from_rows({{2.5, -1.0}});
  const auto a = kmeans(data, 1, 0);
  EXPECT_EQ(a.labels, std::vector<std::size_t>{0});
  EXPECT_EQ(a.centroids, (std::vector<double>{2.5, -1.0}));
}

TEST(Kmeans, SeparatesTwoBlobs) {
  std::mt19937_64 gen(3);
  auto pts = oracle::gaussian_points(50, 2, gen);
  auto far = oracle::gaussian_points(50, 2, gen);
  for (auto& p : far) {
    p[0] += 100;
    p[1] += 100;
  }
  pts.insert(pts.end(), far.begin(), far.end());
  const auto a = kmeans(Dataset::from_rows(pts), 2, 11);
  for (std::size_t i = 1; i < 50; ++i) EXPECT_EQ(a.labels[i], a.labels[0]);
  for (std::size_t i = 51; i < 100; ++i) EXPECT_EQ(a.labels[i], a.labels[50]);
  EXPECT_NE(a.labels[0], a.labels[50]);
}

TEST(Kmeans, KEqualsNGivesSingletons) {
  const auto data = gaussian_dataset(15, 3, 41);
  const auto a = kmeans(data, 15, 2);
  EXPECT_EQ(a.inertia, 0.0);
  std::set<std::size_t> labels(a.labels.begin(), a.labels.end());
  EXPECT_EQ(labels.size(), 15u);
}

TEST(Kmeans, DeterministicAndValidated) {
  const auto data = gaussian_dataset(60, 2, 43);
  const auto a = kmeans(data, 4, 9), b = kmeans(data, 4, 9);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.centroids, b.centroids);
  for (auto l : a.labels) EXPECT_LT(l, 4u);
  EXPECT_THROW(kmeans(data, 61, 0), InvalidArgument);
  EXPECT_THROW(kmeans(data, 0, 0), InvalidArgument);
}

TEST(Kmeans, DuplicatePointsStillAssignEveryCluster) {
  std::vector<std::vector<double>> pts(10, {1.0, 1.0});
  pts.push_back({5.0, 5.0});
  const auto a = kmeans(Dataset::from_rows(pts), 3, 1);
  for (auto l : a.labels) EXPECT_LT(l, 3u);
  EXPECT_EQ(a.labels.size(), 11u);
}

TEST(SmartSplit, SingleSplitIsWholeDataset) {
  const auto data = gaussian_dataset(17, 2, 1);
  const auto a = kmeans(data, 3, 1);
  const auto splits = smart_split(data, a, 1, 5);
  ASSERT_EQ(splits.size(), 1u);
  EXPECT_TRUE(std::equal(splits[0].values().begin(), splits[0].values().end(), data.values().begin()));
  EXPECT_EQ(splits[0].row_ids(), data.row_ids());
}

TEST(SmartSplit, RoundRobinBalancesClusters) {
  ClusterAssignment a;
  a.k = 3;
  a.labels = {0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2};
  const auto splits = smart_split_rows(a, 2, 77);
  ASSERT_EQ(splits.size(), 2u);
  for (const auto& s : splits) {
    EXPECT_EQ(s.size(), 6u);
    std::map<std::size_t, int> per_cluster;
    for (auto r : s) ++per_cluster[a.labels[r]];
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(per_cluster[c], 2);
  }
}

TEST(SmartSplit, PartitionInvariant) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 10 + seed * 7;
    const auto data = gaussian_dataset(n, 2, seed);
    const auto a = kmeans(data, 1 + seed % 4, seed);
    const auto splits = smart_split_rows(a, 1 + seed % 5, seed);
    std::vector<std::size_t> all;
    for (const auto& s : splits) all.insert(all.end(), s.begin(), s.end());
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(all[i], i);
  }
}

TEST(SmartSplit, ScaledParameters) {
  const SwadParams base{.t = 2, .epsilon = 0.3, .n_votes = 150, .p_threshold = 0.8, .n_projections = 40, .seed = 0};
  const auto half = scale_for_split(base, 50, 100);
  EXPECT_EQ(half.n_votes, 75u);
  EXPECT_DOUBLE_EQ(half.epsilon, 0.15);
  // 150 * 1 / 300 = 0.5 rounds half up to 1; 3 * 1 / 1000 floors at 1.
  EXPECT_EQ(scale_for_split(base, 1, 300).n_votes, 1u);
  EXPECT_EQ(scale_for_split({.n_votes = 3}, 1, 1000).n_votes, 1u);
  EXPECT_EQ(scale_for_split(base, 100, 100).epsilon, 0.3);
}

TEST(Sswad, OneClusterOneSplitEqualsSwad) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = gaussian_dataset(45, 3, 300 + seed);
    const SwadParams base{.t = 2, .epsilon = 0.012, .n_votes = 20, .p_threshold = 0.5, .n_projections = 10,
                          .seed = seed};
    const auto full = swad_filter(data, base);
    const auto split = sswad_filter(data, {.base = base, .k_clusters = 1, .s_splits = 1});
    EXPECT_EQ(split.is_outlier, full.is_outlier);
    EXPECT_EQ(split.vote_fraction, full.vote_fraction);
  }
}

TEST(Sswad, PlantedOutlierSurvivesSplitting) {
  const auto data = planted_dataset();
  const SwadParams base{.t = 2, .epsilon = 0.0, .n_votes = 30, .p_threshold = 0.7, .n_projections = 40, .seed = 5};
  // Same epsilon construction as the full-dataset test.
  const auto dirs = sample_unit_directions(2, 40, 5);
  const LeaveOneOutProjections proj(data, dirs, 2.0);
  double inlier_max = 0, planted_min = 1e300;
  for (std::size_t i = 0; i < 61; ++i) {
    for (std::size_t j = i + 1; j < 61; ++j) {
      const double sw = proj.distance(i, j);
      if (j == 60) planted_min = std::min(planted_min, sw); else inlier_max = std::max(inlier_max, sw);
    }
  }
  SwadParams tuned = base;
  tuned.epsilon = 0.5 * (inlier_max + planted_min);
  const auto full = swad_filter(data, tuned);
  ASSERT_TRUE(full.is_outlier[60]);
  const auto split = sswad_filter(data, {.base = tuned, .k_clusters = 2, .s_splits = 2});
  EXPECT_TRUE(split.is_outlier[60]);
}

TEST(Sswad, UnionOfPerSplitDecisions) {
  const auto data = gaussian_dataset(90, 2, 55);
  const SswadParams params{.base = {.t = 2, .epsilon = 0.02, .n_votes = 30, .p_threshold = 0.5, .n_projections = 8,
                                    .seed = 3},
                           .k_clusters = 3,
                           .s_splits = 3};
  const auto report = sswad_filter(data, params);
  const auto clusters = kmeans(data, 3, kmeans_seed(3));
  const auto splits = smart_split_rows(clusters, 3, split_seed(3));
  std::size_t total = 0;
  for (const auto& rows : splits) {
    total += rows.size();
    const auto local = swad_filter(data.select_rows(rows), scale_for_split(params.base, rows.size(), 90));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      EXPECT_EQ(report.is_outlier[rows[k]], local.is_outlier[k]);
      EXPECT_EQ(report.vote_fraction[rows[k]], local.vote_fraction[k]);
    }
  }
  EXPECT_EQ(total, 90u);
}

TEST(Sswad, TinySplitsWarnAndClamp) {
  const auto data = gaussian_dataset(5, 2, 1);
  const SswadParams params{.base = {.t = 2, .epsilon = 0.0, .n_votes = 4, .p_threshold = 0.5, .n_projections = 4,
                                    .seed = 0},
                           .k_clusters = 1,
                           .s_splits = 5};
  const auto report = sswad_filter(data, params);
  EXPECT_EQ(report.outlier_count(), 0u);
  EXPECT_EQ(report.warnings.size(), 5u);

  const SswadParams two{.base = params.base, .k_clusters = 1, .s_splits = 2};
  const auto clamped = sswad_filter(data, two);
  EXPECT_EQ(clamped.outlier_count(), 5u);  // epsilon 0 flags every row of every split
}

}  // namespace
}  // namespace swad
