#pragma once

#include "msgc/gc.hpp"
#include "msgc/monte_carlo.hpp"
#include "msgc/rescale.hpp"
#include "msgc/surrogate.hpp"
#include "msgc/var_model.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace msgc {

struct AnalysisConfig {
  std::filesystem::path input;           // CSV; unused in exact mode
  bool time_column = false;              // first CSV column is the time axis
  std::vector<std::string> channels;     // labels or 1-based indices; empty = all
  std::optional<Generator> generator;    // model for exact mode
  std::vector<int> scales;
  int filter_order = kDefaultFilterOrder;
  int p_max = 20;
  Mode mode = Mode::ss_estimated;
  SurrogateConfig surrogates;
  bool use_surrogates = false;
  bool detrend = false;
  std::optional<double> detrend_lambda;  // nullopt: 10 N
  std::optional<double> resample_dt;     // needs a time column
  bool normalize = false;
  std::filesystem::path out_dir;         // empty: nothing written
  std::uint64_t seed = 0;
  Execution execution = Execution::parallel;

  void validate() const;
};

struct RunReport {
  std::vector<std::pair<std::string, std::string>> config;  // resolved settings
  std::vector<std::string> preprocessing;                   // steps as applied
  std::vector<std::string> labels;
  Index samples = 0;
  std::optional<double> dt;
  MultiscaleGcResult result;
  std::optional<double> spectral_radius;  // companion matrix of the model analyzed
  std::optional<SignificanceBands> bands;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timings;  // seconds
};

/// Preprocessing (detrend, resample, normalize, in that order), the chosen GC mode
/// and optional surrogate bands on data already in memory.
RunReport analyze(TimeSeriesSet data, std::optional<std::vector<double>> times, const AnalysisConfig& config);

/// Exact-mode analysis of a benchmark generator.
RunReport analyze_exact(Generator generator, const AnalysisConfig& config);

/// Ingestion, analysis, then gc.csv and report.txt under config.out_dir.
RunReport run(const AnalysisConfig& config);

/// tau,source,target,gc,lambda_full,lambda_restricted[,surr_pXX...,significant].
/// Absent scales are written as rows of nan so every scale appears.
void write_gc_csv(std::ostream& out, const RunReport& report);
void write_report(std::ostream& out, const RunReport& report);

/// "surr_p05" style column name for a percentile.
std::string percentile_column(double p);

struct FigureSetup {
  Generator generator = Generator::uni;
  Index samples = 500;
  std::vector<int> scales;
  int p_max = 10;
};

/// fig2: uni, fig3: bi (N = 500, tau 1..10); fig4: mix (N = 1000, tau 1..15).
FigureSetup figure_setup(const std::string& figure);

struct ReproduceConfig {
  std::string figure;
  int realizations = 100;
  int filter_order = kDefaultFilterOrder;
  std::optional<int> p_max;
  std::optional<std::vector<int>> scales;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  Execution execution = Execution::parallel;
};

struct ReproduceReport {
  ReproduceConfig config;
  FigureSetup setup;
  MultiscaleGcResult exact;
  std::optional<MonteCarloResult> monte_carlo;  // absent when the benchmark cannot be simulated
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

/// Exact curve plus the realization table and its summary. Writes exact.csv,
/// estimates.csv, summary.csv and report.txt when out_dir is set.
ReproduceReport reproduce(const ReproduceConfig& config);

/// Writers for the reproduce outputs.
void write_exact_csv(std::ostream& out, const MultiscaleGcResult& exact, const std::vector<std::string>& labels);
void write_estimates_csv(std::ostream& out, const MonteCarloResult& mc, const std::vector<std::string>& labels);
void write_summary_csv(std::ostream& out, const MonteCarloResult& mc, const std::vector<std::string>& labels);

/// tau,lag,coefficient for each scale's Hamming filter.
void write_filter_csv(std::ostream& out, int q, const std::vector<int>& scales);

/// Parses "1:10", "1,2,4" or "1:2:20" (inclusive ranges, optional middle step).
std::vector<int> parse_scales(const std::string& text);

}  // namespace msgc
