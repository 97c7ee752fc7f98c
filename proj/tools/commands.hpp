#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swad::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kNumeric = 4,
};

// Every flag of every subcommand; each command reads the fields it needs.
struct Options {
  std::string command;

  std::string method = "swad";
  double t = 2.0;
  std::optional<double> epsilon;
  std::optional<double> eta;
  std::size_t n_votes = 150;
  bool n_votes_given = false;
  double p = 0.8;
  std::size_t projections = 40;
  std::size_t k = 3;
  std::size_t s = 2;
  std::uint64_t seed = 0;
  bool standardize = false;
  unsigned threads = 0;

  std::string input;
  std::string output;
  bool no_header = false;

  // bench
  std::string label_column = "label";
  std::vector<double> epsilon_grid;

  // verify-bounds
  std::size_t samples = 100;
  std::size_t dim = 2;
  std::vector<double> t_values{1.0, 2.0};
  std::size_t pairs = 200;

  // synth
  std::string spec;
};

int cmd_filter(const Options& opts);
int cmd_bench(const Options& opts);
int cmd_verify_bounds(const Options& opts);
int cmd_synth(const Options& opts);

}  // namespace swad::cli
