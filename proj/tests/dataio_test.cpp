#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "oracles.hpp"
#include "swad/dataset.hpp"
#include "swad/error.hpp"
#include "swad/filters.hpp"

namespace swad {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("swad_dataio_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& contents) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

TEST(Csv, ParsesWithoutHeader) {
  const auto d = parse_csv("1,2\n3,4\n5,6", false);
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.cols(), 2u);
  EXPECT_EQ(d.column_names(), (std::vector<std::string>{"c0", "c1"}));
  EXPECT_EQ(d.at(2, 1), 6.0);
  EXPECT_EQ(d.row_ids(), (std::vector<std::uint64_t>{0, 1, 2}));
}

TEST(Csv, ParsesHeaderQuotesAndCrlf) {
  const auto d = parse_csv("a,\"b, c\"\r\n1,+2.5e1\r\n", true);
  EXPECT_EQ(d.column_names(), (std::vector<std::string>{"a", "b, c"}));
  EXPECT_EQ(d.rows(), 1u);
  EXPECT_EQ(d.at(0, 1), 25.0);
}

TEST(Csv, NonFiniteCellNamesLocation) {
  try {
    parse_csv("1,NaN", false);
    FAIL() << "expected NonFiniteCell";
  } catch (const NonFiniteCell& e) {
    EXPECT_EQ(e.row(), 0u);
    EXPECT_EQ(e.column(), 1u);
  }
  EXPECT_THROW(parse_csv("x,y\n1,2\n3,inf\n", true), NonFiniteCell);
}

TEST(Csv, MalformedInputs) {
  EXPECT_THROW(parse_csv("", false), ParseError);
  EXPECT_THROW(parse_csv("a,b\n", true), ParseError);
  try {
    parse_csv("1,2\n3\n", false);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 1u);
  }
  try {
    parse_csv("1,2\n3,abc\n", false);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.column(), 1u);
  }
  EXPECT_THROW(parse_csv("1,\"2\n", false), ParseError);
  EXPECT_THROW(load_csv("/nonexistent/definitely/missing.csv", false), IoError);
}

TEST(Standardize, TwoPointColumnAndConstantColumn) {
  const Dataset d = Dataset::from_rows({{0.0, 5.0}, {2.0, 5.0}});
  const auto [z, state] = standardize(d);
  EXPECT_EQ(z.at(0, 0), -1.0);
  EXPECT_EQ(z.at(1, 0), 1.0);
  EXPECT_EQ(z.at(0, 1), 5.0);
  EXPECT_FALSE(state.constant[0]);
  EXPECT_TRUE(state.constant[1]);
  EXPECT_THROW(standardize(Dataset::from_rows({{1.0}})), InvalidArgument);
}

TEST(Standardize, InverseRoundTrip) {
  std::mt19937_64 gen(4);
  auto pts = oracle::gaussian_points(50, 4, gen, 3.0);
  for (auto& p : pts) p[3] = 7.25;
  const Dataset d = Dataset::from_rows(pts);
  const auto [z, state] = standardize(d);
  const auto back = inverse_transform(z, state);
  for (std::size_t k = 0; k < d.values().size(); ++k) EXPECT_NEAR(back.values()[k], d.values()[k], 1e-12);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0, sq = 0;
    for (std::size_t i = 0; i < z.rows(); ++i) mean += z.at(i, j);
    mean /= z.rows();
    for (std::size_t i = 0; i < z.rows(); ++i) sq += (z.at(i, j) - mean) * (z.at(i, j) - mean);
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(std::sqrt(sq / z.rows()), 1.0, 1e-12);
  }
}

TEST(Mixture, DefaultScenarioCounts) {
  const auto m = generate_mixture(default_mixture_spec(3));
  EXPECT_EQ(m.data.rows(), 125u);
  EXPECT_EQ(m.data.cols(), 2u);
  const auto truth = m.outlier_truth();
  EXPECT_EQ(std::count(truth.begin(), truth.end(), true), 5);
  EXPECT_EQ(std::count(m.tags.begin(), m.tags.end(), ComponentTag::Minority), 20);
}

TEST(Mixture, DeterministicInSeed) {
  const auto a = generate_mixture(default_mixture_spec(8));
  const auto b = generate_mixture(default_mixture_spec(8));
  EXPECT_TRUE(std::equal(a.data.values().begin(), a.data.values().end(), b.data.values().begin()));
  EXPECT_EQ(a.tags, b.tags);
  const auto c = generate_mixture(default_mixture_spec(9));
  EXPECT_FALSE(std::equal(a.data.values().begin(), a.data.values().end(), c.data.values().begin()));
}

TEST(Mixture, MajorityMeanNearOrigin) {
  // 3 sigma / sqrt(100) = 0.3 per coordinate, comfortably inside 0.5.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = generate_mixture(default_mixture_spec(seed));
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < m.data.rows(); ++i) {
      if (m.tags[i] != ComponentTag::Majority) continue;
      mx += m.data.at(i, 0);
      my += m.data.at(i, 1);
    }
    EXPECT_LT(std::hypot(mx / 100, my / 100), 0.5);
  }
}

TEST(Mixture, RejectsInvalidSpec) {
  MixtureSpec spec = default_mixture_spec();
  spec.components[1].variance[0] = 0.0;
  EXPECT_THROW(generate_mixture(spec), InvalidArgument);
  spec = default_mixture_spec();
  spec.components[0].count = 0;
  EXPECT_THROW(generate_mixture(spec), InvalidArgument);
}

TEST_F(TempDir, ReportFormatAndRoundTrip) {
  const Dataset d(std::vector<double>{0.1, -2.0, 1e-17, 123456.789}, 2, {"alpha", "beta"});
  OutlierReport r;
  r.vote_fraction = {2.0 / 3.0, 0.0};
  r.is_outlier = {true, false};
  const auto path = dir_ / "report.csv";
  save_report(r, d, path);
  const auto text = slurp(path);
  EXPECT_EQ(text,
            "row_id,vote_fraction,is_outlier,alpha,beta\n"
            "0,0.666666667,1,0.1,-2\n"
            "1,0.000000000,0,1e-17,123456.789\n");
  const auto back = load_csv(path, true);
  EXPECT_EQ(back.rows(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.at(i, 3), d.at(i, 0));
    EXPECT_EQ(back.at(i, 4), d.at(i, 1));
  }
  OutlierReport wrong;
  wrong.vote_fraction = {1.0};
  wrong.is_outlier = {true};
  EXPECT_THROW(save_report(wrong, d, dir_ / "x.csv"), InvalidArgument);
  EXPECT_THROW(save_report(r, d, dir_ / "missing_dir" / "x.csv"), IoError);
}

TEST_F(TempDir, CsvRoundTripIsExact) {
  std::mt19937_64 gen(12);
  const Dataset d = Dataset::from_rows(oracle::gaussian_points(40, 5, gen, 1e3));
  const auto path = dir_ / "data.csv";
  save_csv(d, path);
  const auto back = load_csv(path, true);
  EXPECT_EQ(back.column_names(), d.column_names());
  EXPECT_TRUE(std::equal(d.values().begin(), d.values().end(), back.values().begin()));
}

TEST_F(TempDir, StandardizeThenFilterMatchesFilteringStoredStandardizedData) {
  const auto mixture = generate_mixture(default_mixture_spec(1));
  const auto [z, state] = standardize(mixture.data);
  const auto path = dir_ / "standardized.csv";
  save_csv(z, path);
  const auto reloaded = load_csv(path, true);
  const SwadParams p{.t = 2, .epsilon = 0.02, .n_votes = 50, .p_threshold = 0.8, .n_projections = 20, .seed = 2};
  EXPECT_EQ(format_report(swad_filter(z, p), z), format_report(swad_filter(reloaded, p), reloaded));
}

TEST(DatasetModel, ValidatesShapeAndIds) {
  EXPECT_THROW(Dataset(std::vector<double>{1, 2, 3}, 2), InvalidArgument);
  EXPECT_THROW(Dataset(std::vector<double>{1, 2}, 1, {}, {4, 4}), InvalidArgument);
  EXPECT_THROW(Dataset(std::vector<double>{1, std::nan("")}, 1), NumericError);
  const Dataset d(std::vector<double>{1, 2, 3, 4, 5, 6}, 3, {"a", "label", "c"});
  const auto [rest, label] = d.split_column("label");
  EXPECT_EQ(rest.column_names(), (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(label, (std::vector<double>{2, 5}));
  EXPECT_EQ(rest.at(1, 1), 6.0);
  EXPECT_THROW(d.split_column("nope"), InvalidArgument);
}

}  // namespace
}  // namespace swad
