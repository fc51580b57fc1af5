// msgc: multiscale Granger causality from the command line.

#include "msgc/csv_io.hpp"
#include "msgc/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonOptions {
  std::string scales = "1:10";
  int filter_order = msgc::kDefaultFilterOrder;
  int p_max = 20;
  std::uint64_t seed = 0;
  std::string out;
  bool serial = false;
};

void add_sweep_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scales", o.scales, "Scales: 1:10, 1,2,4 or 1:2:20")->capture_default_str();
  cmd->add_option("--filter-order", o.filter_order, "Hamming FIR order q")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  cmd->add_option("--pmax", o.p_max, "Largest VAR order tried by BIC")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Base random seed")->capture_default_str();
  cmd->add_flag("--serial", o.serial, "Run the serial reference path");
}

struct AnalyzeOptions {
  CommonOptions common;
  std::string input;
  bool time_column = false;
  std::vector<std::string> channels;
  std::string mode = "ss-estimated";
  std::string generator;
  msgc::Index samples = 0;
  int surrogates = 0;
  int iaaft_iterations = 1000;
  std::string detrend_lambda;
  double resample_dt = 0.0;
  bool normalize = false;
};

void add_analyze_flags(CLI::App* cmd, AnalyzeOptions& o, bool surrogate_test) {
  add_sweep_flags(cmd, o.common);
  cmd->add_option("-i,--input", o.input, "Input CSV with a header row");
  cmd->add_flag("--time-column", o.time_column, "First CSV column is the time axis");
  cmd->add_option("--channels", o.channels, "Channels to analyze (labels or 1-based indices)")->delimiter(',');
  if (!surrogate_test) {
    cmd->add_option("--mode", o.mode, "exact | ss-estimated | naive")->capture_default_str();
  }
  cmd->add_option("--generator", o.generator,
                  surrogate_test ? "Simulate this benchmark (uni|bi|mix) instead of reading --input"
                                 : "Benchmark model for exact mode (uni|bi|mix)");
  if (surrogate_test) cmd->add_option("--samples", o.samples, "Samples simulated with --generator");
  o.surrogates = surrogate_test ? 100 : 0;
  cmd->add_option("--surrogates", o.surrogates, "IAAFT surrogates for significance bands (0: none)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--iaaft-iterations", o.iaaft_iterations, "IAAFT iteration cap")->capture_default_str();
  cmd->add_option("--detrend-lambda", o.detrend_lambda,
                  "l1 detrending strength; 'auto' uses 10 N (no detrending when absent)");
  cmd->add_option("--resample-dt", o.resample_dt, "Resample onto a uniform grid (needs --time-column)");
  cmd->add_flag("--normalize", o.normalize, "Zero mean, unit variance per channel");
  cmd->add_option("--out", o.common.out, "Output directory for gc.csv and report.txt");
}

msgc::AnalysisConfig to_config(const AnalyzeOptions& o) {
  msgc::AnalysisConfig c;
  c.input = o.input;
  c.time_column = o.time_column;
  c.channels = o.channels;
  c.scales = msgc::parse_scales(o.common.scales);
  c.filter_order = o.common.filter_order;
  c.p_max = o.common.p_max;
  c.mode = msgc::parse_mode(o.mode);
  if (!o.generator.empty()) c.generator = msgc::parse_generator(o.generator);
  c.use_surrogates = o.surrogates > 0;
  if (c.use_surrogates) c.surrogates.n_surrogates = o.surrogates;
  c.surrogates.max_iterations = o.iaaft_iterations;
  if (!o.detrend_lambda.empty()) {
    c.detrend = true;
    if (o.detrend_lambda != "auto") {
      try {
        c.detrend_lambda = std::stod(o.detrend_lambda);
      } catch (const std::exception&) {
        throw msgc::Error("--detrend-lambda expects a positive number or 'auto'");
      }
    }
  }
  if (o.resample_dt != 0.0) c.resample_dt = o.resample_dt;
  c.normalize = o.normalize;
  c.out_dir = o.common.out;
  c.seed = o.common.seed;
  c.execution = o.common.serial ? msgc::Execution::serial : msgc::Execution::parallel;
  return c;
}

void finish(const msgc::RunReport& report, const msgc::AnalysisConfig& config) {
  msgc::write_report(std::cout, report);
  if (!config.out_dir.empty()) {
    std::cout << "\nwrote " << (config.out_dir / "gc.csv").string() << " and "
              << (config.out_dir / "report.txt").string() << '\n';
  }
}

int run_surrogate_test(const AnalyzeOptions& o) {
  msgc::AnalysisConfig config = to_config(o);
  config.mode = msgc::Mode::ss_estimated;
  if (!config.use_surrogates) throw msgc::Error("surrogate-test needs --surrogates > 0");
  if (!o.input.empty()) {
    finish(msgc::run(config), config);
    return 0;
  }
  if (o.generator.empty()) throw msgc::Error("surrogate-test needs --input or --generator");
  msgc::SimulationConfig sim = msgc::benchmark_config(msgc::parse_generator(o.generator));
  if (o.samples > 0) sim.samples = o.samples;
  sim.seed = config.seed;
  config.input = "<simulated " + o.generator + ">";
  msgc::RunReport report = msgc::analyze(msgc::simulate_benchmark(sim), std::nullopt, config);
  report.config.insert(report.config.begin(), {"input", config.input.string()});
  if (!config.out_dir.empty()) {
    {
      auto out = msgc::open_output(config.out_dir / "gc.csv");
      msgc::write_gc_csv(out, report);
    }
    auto out = msgc::open_output(config.out_dir / "report.txt");
    msgc::write_report(out, report);
  }
  finish(report, config);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale Granger causality via state-space models"};
  app.require_subcommand(1);

  AnalyzeOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "GC sweep over scales on a CSV (or an exact benchmark model)");
  add_analyze_flags(analyze, analyze_opts, false);

  AnalyzeOptions surr_opts;
  auto* surrogate = app.add_subcommand("surrogate-test", "ss-estimated sweep with IAAFT significance bands");
  add_analyze_flags(surrogate, surr_opts, true);

  std::string sim_generator = "uni";
  msgc::Index sim_samples = 0;
  msgc::Index sim_burn_in = 1000;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Write a benchmark realization as CSV");
  simulate->add_option("--generator", sim_generator, "uni | bi | mix")->capture_default_str();
  simulate->add_option("--samples", sim_samples, "Samples (default 500, mix 1000)");
  simulate->add_option("--burn-in", sim_burn_in, "Discarded initial samples")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output CSV (stdout when absent)");

  int filt_q = msgc::kDefaultFilterOrder;
  std::string filt_scales = "1:10";
  std::string filt_out;
  auto* design = app.add_subcommand("design-filter", "Write the Hamming FIR coefficients per scale");
  design->add_option("--filter-order", filt_q, "FIR order q")->capture_default_str()->check(CLI::NonNegativeNumber);
  design->add_option("--scales", filt_scales, "Scales")->capture_default_str();
  design->add_option("--out", filt_out, "Output CSV, e.g. filter.csv (stdout when absent)");

  std::string figure;
  CommonOptions rep_opts;
  int realizations = 100;
  std::optional<int> rep_pmax;
  std::string rep_scales;
  auto* repro = app.add_subcommand("reproduce", "Exact curve and realization study of a benchmark figure");
  repro->add_option("figure", figure, "fig2 | fig3 | fig4")->required()->check(
      CLI::IsMember({"fig2", "fig3", "fig4"}));
  repro->add_option("--realizations", realizations, "Number of realizations")->capture_default_str()->check(
      CLI::PositiveNumber);
  repro->add_option("--filter-order", rep_opts.filter_order, "Hamming FIR order q")->capture_default_str();
  repro->add_option("--pmax", rep_pmax, "Largest VAR order tried by BIC (default 10, fig4 15)");
  repro->add_option("--scales", rep_scales, "Scales (default 1:10, fig4 1:15)");
  repro->add_option("--seed", rep_opts.seed, "Base seed; realization i uses seed + i")->capture_default_str();
  repro->add_option("--out", rep_opts.out, "Output directory");
  repro->add_flag("--serial", rep_opts.serial, "Run the serial reference path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const msgc::AnalysisConfig config = to_config(analyze_opts);
      finish(msgc::run(config), config);
    } else if (*surrogate) {
      return run_surrogate_test(surr_opts);
    } else if (*simulate) {
      msgc::SimulationConfig sim = msgc::benchmark_config(msgc::parse_generator(sim_generator));
      if (sim_samples > 0) sim.samples = sim_samples;
      sim.burn_in = sim_burn_in;
      sim.seed = sim_seed;
      const msgc::TimeSeriesSet data = msgc::simulate_benchmark(sim);
      if (sim_out.empty()) {
        msgc::write_series_csv(std::cout, data);
      } else {
        auto out = msgc::open_output(sim_out);
        msgc::write_series_csv(out, data);
      }
    } else if (*design) {
      const auto scales = msgc::parse_scales(filt_scales);
      if (filt_out.empty()) {
        msgc::write_filter_csv(std::cout, filt_q, scales);
      } else {
        auto out = msgc::open_output(filt_out);
        msgc::write_filter_csv(out, filt_q, scales);
      }
    } else if (*repro) {
      msgc::ReproduceConfig config;
      config.figure = figure;
      config.realizations = realizations;
      config.filter_order = rep_opts.filter_order;
      config.p_max = rep_pmax;
      if (!rep_scales.empty()) config.scales = msgc::parse_scales(rep_scales);
      config.seed = rep_opts.seed;
      config.out_dir = rep_opts.out;
      config.execution = rep_opts.serial ? msgc::Execution::serial : msgc::Execution::parallel;
      const msgc::ReproduceReport report = msgc::reproduce(config);
      std::cout << figure << ": " << report.exact.scales.size() << " scales, "
                << (report.monte_carlo ? std::to_string(config.realizations) + " realizations"
                                       : std::string("exact curve only"))
                << ", " << report.seconds << " s\n";
      for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
      if (!config.out_dir.empty()) std::cout << "wrote results to " << config.out_dir.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "msgc: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
