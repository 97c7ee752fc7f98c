// swad: sliced-Wasserstein anomaly filters from the command line.
//
//   swad filter --method swad --epsilon 0.05 --input data.csv --output report.csv
//   swad bench --method fead --input labeled.csv --epsilon-grid 0.1,0.2,0.4
//   swad verify-bounds --samples 100 --t-values 1,2 --output bounds.csv
//   swad synth --seed 3 --output mixture.csv

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "swad/error.hpp"

namespace {

using swad::cli::Options;

void add_filter_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--method", o.method, "swad, sswad or fead")
      ->check(CLI::IsMember({"swad", "sswad", "fead"}))
      ->capture_default_str();
  cmd.add_option("--t", o.t, "Wasserstein order (>= 1)")->capture_default_str();
  cmd.add_option("--epsilon", o.epsilon, "SW threshold for swad/sswad");
  cmd.add_option("--eta", o.eta, "Euclidean threshold for fead");
  cmd.add_option("--n-votes", o.n_votes, "votes per row; defaults to min(150, N-1)")
      ->each([&o](const std::string&) { o.n_votes_given = true; });
  cmd.add_option("--p", o.p, "fraction of positive votes needed to flag a row")->capture_default_str();
  cmd.add_option("--projections", o.projections, "random directions L (swad/sswad)")->capture_default_str();
  cmd.add_option("--k", o.k, "k-means clusters (sswad)")->capture_default_str();
  cmd.add_option("--s", o.s, "smart splits (sswad)")->capture_default_str();
  cmd.add_flag("--standardize", o.standardize, "z-score each column before filtering");
}

void add_common_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--seed", o.seed)->capture_default_str();
  cmd.add_option("--threads", o.threads, "worker threads, 0 = all cores; never changes results")
      ->capture_default_str();
}

void add_input_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--input", o.input, "input CSV")->required();
  cmd.add_flag("--no-header", o.no_header, "input CSV has no header row");
}

int exit_code(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const swad::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swad::cli::kUsage;
  } catch (const swad::NonFiniteCell& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swad::cli::kNumeric;
  } catch (const swad::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swad::cli::kIo;
  } catch (const swad::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swad::cli::kIo;
  } catch (const swad::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swad::cli::kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return swad::cli::kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliced-Wasserstein anomaly filters (SWAD, sSWAD, FEAD)", "swad"};
  app.require_subcommand(1);
  Options o;

  auto* filter = app.add_subcommand("filter", "flag anomalous rows of a CSV and write a report");
  add_input_flags(*filter, o);
  filter->add_option("--output", o.output, "report CSV; a JSON sidecar is written next to it")->required();
  add_filter_flags(*filter, o);
  add_common_flags(*filter, o);

  auto* bench = app.add_subcommand("bench", "score a filter against a label column");
  add_input_flags(*bench, o);
  bench->add_option("--output", o.output, "optional CSV of the summary rows");
  bench->add_option("--label-column", o.label_column, "nonzero marks an outlier")->capture_default_str();
  bench->add_option("--epsilon-grid", o.epsilon_grid, "thresholds to sweep (eta for fead)")->delimiter(',');
  add_filter_flags(*bench, o);
  add_common_flags(*bench, o);

  auto* verify = app.add_subcommand("verify-bounds", "check single-sample bounds against exact transport");
  verify->add_option("--samples", o.samples, "Gaussian points N (at most 512)")->capture_default_str();
  verify->add_option("--dim", o.dim)->capture_default_str();
  verify->add_option("--t-values", o.t_values)->delimiter(',')->capture_default_str();
  verify->add_option("--pairs", o.pairs)->capture_default_str();
  verify->add_option("--output", o.output, "optional CSV of every record");
  add_common_flags(*verify, o);

  auto* synth = app.add_subcommand("synth", "write a labeled Gaussian-mixture dataset");
  synth->add_option("--output", o.output)->required();
  synth->add_option("--spec", o.spec, "JSON mixture spec; default is the three-component scenario");
  synth->add_option("--label-column", o.label_column)->capture_default_str();
  synth->add_option("--seed", o.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? swad::cli::kOk : swad::cli::kUsage;
  }

  try {
    o.command = app.get_subcommands().front()->get_name();
    if (*filter) return swad::cli::cmd_filter(o);
    if (*bench) return swad::cli::cmd_bench(o);
    if (*verify) return swad::cli::cmd_verify_bounds(o);
    return swad::cli::cmd_synth(o);
  } catch (...) {
    return exit_code(std::current_exception());
  }
}
