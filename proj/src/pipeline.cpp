#include "msgc/pipeline.hpp"

#include "msgc/csv_io.hpp"
#include "msgc/preprocess.hpp"
#include "msgc/rescale.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace msgc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string join_scales(const std::vector<int>& scales) {
  std::ostringstream s;
  for (std::size_t i = 0; i < scales.size(); ++i) s << (i ? "," : "") << scales[i];
  return s.str();
}

std::vector<int> resolve_channels(const std::vector<std::string>& wanted, const std::vector<std::string>& labels) {
  std::vector<int> keep;
  for (const auto& w : wanted) {
    const auto it = std::find(labels.begin(), labels.end(), w);
    int index = -1;
    if (it != labels.end()) {
      index = static_cast<int>(it - labels.begin());
    } else {
      try {
        std::size_t used = 0;
        const int one_based = std::stoi(w, &used);
        if (used == w.size() && one_based >= 1 && one_based <= static_cast<int>(labels.size())) index = one_based - 1;
      } catch (const std::exception&) {
      }
    }
    if (index < 0) throw Error("unknown channel '" + w + "'");
    if (std::find(keep.begin(), keep.end(), index) != keep.end()) throw Error("channel '" + w + "' selected twice");
    keep.push_back(index);
  }
  return keep;
}

std::vector<std::string> default_labels(Index m) {
  std::vector<std::string> labels;
  for (Index c = 0; c < m; ++c) labels.push_back("y" + std::to_string(c + 1));
  return labels;
}

void echo_common(RunReport& report, const AnalysisConfig& config) {
  auto& e = report.config;
  e.emplace_back("mode", std::string(to_string(config.mode)));
  e.emplace_back("scales", join_scales(config.scales));
  e.emplace_back("filter order", std::to_string(config.filter_order));
  if (config.mode != Mode::exact) e.emplace_back("p_max", std::to_string(config.p_max));
  if (config.use_surrogates) {
    e.emplace_back("surrogates", std::to_string(config.surrogates.n_surrogates));
    e.emplace_back("IAAFT iteration cap", std::to_string(config.surrogates.max_iterations));
  }
  e.emplace_back("seed", std::to_string(config.seed));
  e.emplace_back("execution", config.execution == Execution::serial ? "serial" : "parallel");
}

std::string label_of(const std::vector<std::string>& labels, int c) {
  return c >= 0 && c < static_cast<int>(labels.size()) ? labels[static_cast<std::size_t>(c)] : std::to_string(c + 1);
}

}  // namespace

void AnalysisConfig::validate() const {
  validate_scales(scales);
  if (filter_order < 0) throw Error("filter order must be nonnegative");
  if (p_max < 1) throw Error("p_max must be at least 1");
  if (mode == Mode::exact) {
    if (!generator) throw Error("exact mode analyzes a known model; choose a benchmark generator");
    if (use_surrogates) throw Error("surrogate bands need data; they are not available in exact mode");
  } else if (input.empty()) {
    throw Error("an input CSV is required in " + std::string(to_string(mode)) + " mode");
  }
  if (use_surrogates) {
    surrogates.validate();
    if (mode != Mode::ss_estimated) throw Error("surrogate bands are computed for the ss-estimated mode only");
  }
  if (detrend_lambda && !(*detrend_lambda > 0.0)) throw Error("detrending lambda must be positive");
  if (resample_dt) {
    if (!(*resample_dt > 0.0)) throw Error("resampling interval must be positive");
    if (!time_column) throw Error("resampling needs a time column");
  }
}

RunReport analyze(TimeSeriesSet data, std::optional<std::vector<double>> times, const AnalysisConfig& config) {
  config.validate();
  const auto start = Clock::now();
  RunReport report;
  echo_common(report, config);

  if (!config.channels.empty()) data = select_channels(data, resolve_channels(config.channels, data.labels));
  data.validate();

  auto t0 = Clock::now();
  if (config.detrend) {
    const double lambda = config.detrend_lambda.value_or(default_detrend_lambda(data.samples()));
    for (Index c = 0; c < data.channels(); ++c) {
      try {
        data.values.col(c) = detrend_l1(data.values.col(c), lambda);
      } catch (const Error& e) {
        throw Error("detrending channel '" + data.labels[static_cast<std::size_t>(c)] + "': " + e.what());
      }
    }
    std::ostringstream s;
    s << "detrend (l1 trend filter, lambda=" << format_double(lambda)
      << (config.detrend_lambda ? "" : " = 10 N") << ")";
    report.preprocessing.push_back(s.str());
  }
  if (config.resample_dt) {
    if (!times) throw Error("resampling needs a time column");
    const std::size_t before = times->size();
    data = resample_uniform(*times, data, *config.resample_dt);
    std::ostringstream s;
    s << "resample (linear, dt=" << format_double(*config.resample_dt) << ", " << before << " -> "
      << data.samples() << " samples)";
    report.preprocessing.push_back(s.str());
  } else if (times && times->size() >= 2) {
    // Uniform time columns give the scale a physical unit.
    const double step = ((*times)[1] - (*times)[0]);
    bool uniform = step != 0.0;
    for (std::size_t i = 2; uniform && i < times->size(); ++i) {
      uniform = std::abs(((*times)[i] - (*times)[i - 1]) - step) <= 1e-9 * std::abs(step);
    }
    if (uniform) data.dt = std::abs(step);
  }
  if (config.normalize) {
    data = normalize(data);
    report.preprocessing.push_back("normalize (zero mean, unit variance, N-1)");
  }
  if (!report.preprocessing.empty()) report.timings.emplace_back("preprocessing", seconds_since(t0));

  report.labels = data.labels;
  report.samples = data.samples();
  report.dt = data.dt;

  MultiscaleOptions options;
  options.execution = config.execution;
  t0 = Clock::now();
  try {
    report.result = config.mode == Mode::naive
                        ? multiscale_gc_naive(data, config.filter_order, config.scales, config.p_max, options)
                        : multiscale_gc_estimated(data, config.filter_order, config.scales, config.p_max, options);
  } catch (const Error& e) {
    throw Error(std::string(to_string(config.mode)) + " analysis: " + e.what());
  }
  report.timings.emplace_back("gc sweep", seconds_since(t0));
  if (report.result.fitted) report.spectral_radius = check_stability(*report.result.fitted);
  report.warnings = report.result.warnings;

  if (config.use_surrogates) {
    t0 = Clock::now();
    SurrogateConfig sc = config.surrogates;
    sc.seed = config.seed;
    try {
      report.bands = significance_bands(data, config.filter_order, config.scales, config.p_max, sc, options);
    } catch (const Error& e) {
      throw Error(std::string("surrogate bands: ") + e.what());
    }
    for (const auto& w : report.bands->warnings) report.warnings.push_back(w);
    report.timings.emplace_back("surrogates", seconds_since(t0));
  }
  report.timings.emplace_back("total", seconds_since(start));
  return report;
}

RunReport analyze_exact(Generator generator, const AnalysisConfig& config) {
  AnalysisConfig c = config;
  c.mode = Mode::exact;
  c.generator = generator;
  c.validate();
  const auto start = Clock::now();
  RunReport report;
  echo_common(report, c);
  report.config.emplace_back("generator", std::string(to_string(generator)));

  const SimulationConfig sim = benchmark_config(generator);
  const VarModel model = build_benchmark(sim);
  const MatrixXd observation = observation_matrix(sim);
  MultiscaleOptions options;
  options.execution = c.execution;
  report.result = multiscale_gc_exact(model, c.filter_order, c.scales, options, observation);
  report.spectral_radius = check_stability(model);
  report.labels = default_labels(report.result.channels);
  report.warnings = report.result.warnings;
  report.timings.emplace_back("total", seconds_since(start));
  return report;
}

RunReport run(const AnalysisConfig& config) {
  config.validate();
  RunReport report;
  if (config.mode == Mode::exact) {
    report = analyze_exact(*config.generator, config);
  } else {
    const auto t0 = Clock::now();
    CsvTable table = load_csv(config.input, config.time_column);
    const double load_seconds = seconds_since(t0);
    report = analyze(std::move(table.data), std::move(table.times), config);
    report.config.insert(report.config.begin(), {"input", config.input.string()});
    report.timings.insert(report.timings.begin(), {"load", load_seconds});
  }
  if (!config.out_dir.empty()) {
    {
      auto out = open_output(config.out_dir / "gc.csv");
      write_gc_csv(out, report);
    }
    auto out = open_output(config.out_dir / "report.txt");
    write_report(out, report);
  }
  return report;
}

std::string percentile_column(double p) {
  std::ostringstream s;
  if (p == std::floor(p)) {
    s << "surr_p" << std::setw(2) << std::setfill('0') << static_cast<int>(p);
  } else {
    std::string v = format_double(p);
    std::replace(v.begin(), v.end(), '.', '_');
    s << "surr_p" << v;
  }
  return s.str();
}

void write_gc_csv(std::ostream& out, const RunReport& report) {
  const auto& res = report.result;
  const SignificanceBands* bands = report.bands ? &*report.bands : nullptr;
  out << "tau,source,target,gc,lambda_full,lambda_restricted";
  if (bands) {
    for (double p : bands->percentiles) out << ',' << percentile_column(p);
    out << ",significant";
  }
  out << '\n';
  const int m = static_cast<int>(res.channels);
  for (const auto& scale : res.scales) {
    for (int s = 0; s < m; ++s) {
      for (int t = 0; t < m; ++t) {
        if (s == t) continue;
        out << scale.tau << ',' << label_of(report.labels, s) << ',' << label_of(report.labels, t);
        const GcValue* v = scale.find(s, t);
        if (v) {
          out << ',' << format_double(v->f) << ',' << format_double(v->lambda_full) << ','
              << format_double(v->lambda_restricted);
        } else {
          out << ",nan,nan,nan";
        }
        if (bands) {
          const BandCell* cell = bands->find(scale.tau, s, t);
          for (std::size_t i = 0; i < bands->percentiles.size(); ++i) {
            out << ',' << (cell ? format_double(cell->band[i]) : "nan");
          }
          out << ',' << (cell && cell->significant ? 1 : 0);
        }
        out << '\n';
      }
    }
  }
}

void write_report(std::ostream& out, const RunReport& report) {
  const auto& res = report.result;
  out << "msgc run report\n\nsettings\n";
  for (const auto& [k, v] : report.config) out << "  " << k << ": " << v << '\n';

  out << "\npreprocessing: ";
  if (report.preprocessing.empty()) {
    out << "none\n";
  } else {
    for (std::size_t i = 0; i < report.preprocessing.size(); ++i) {
      out << (i ? " -> " : "") << report.preprocessing[i];
    }
    out << '\n';
  }

  out << "\ndata\n";
  if (res.mode == Mode::exact) {
    out << "  channels: " << res.channels << " (exact model, no samples)\n";
  } else {
    out << "  samples: " << report.samples << "\n  channels: " << res.channels << " (";
    for (std::size_t i = 0; i < report.labels.size(); ++i) out << (i ? ", " : "") << report.labels[i];
    out << ")\n";
  }
  if (report.dt) out << "  sampling interval: " << format_double(*report.dt) << '\n';

  out << "\nmodel\n";
  if (res.mode == Mode::naive) {
    out << "  order: selected by BIC per scale (see table)\n";
  } else {
    out << "  VAR order: " << res.model_order << (res.mode == Mode::ss_estimated ? " (BIC)" : "") << '\n';
  }
  if (report.spectral_radius) {
    out << "  companion spectral radius: " << std::setprecision(6) << *report.spectral_radius
        << (*report.spectral_radius < 1.0 ? " (stable)" : " (NOT stable)") << '\n';
  }

  const SignificanceBands* bands = report.bands ? &*report.bands : nullptr;
  out << "\ngranger causality (nats)\n  tau";
  if (report.dt) out << "  time";
  out << "  source -> target  gc";
  if (res.mode == Mode::naive) out << "  order";
  if (bands) {
    for (double p : bands->percentiles) out << "  p" << format_double(p);
    out << "  significant";
  }
  out << '\n';
  out << std::setprecision(6);
  const int m = static_cast<int>(res.channels);
  for (const auto& scale : res.scales) {
    if (!scale.present) {
      out << "  " << scale.tau << "  skipped: " << scale.diagnostic << '\n';
      continue;
    }
    for (int s = 0; s < m; ++s) {
      for (int t = 0; t < m; ++t) {
        if (s == t) continue;
        out << "  " << scale.tau;
        if (report.dt) out << "  " << format_double(scale.tau * *report.dt);
        out << "  " << label_of(report.labels, s) << " -> " << label_of(report.labels, t) << "  ";
        const GcValue* v = scale.find(s, t);
        if (v) {
          out << v->f;
        } else {
          out << "nan";
        }
        if (res.mode == Mode::naive) out << "  " << scale.model_order;
        if (bands) {
          const BandCell* cell = bands->find(scale.tau, s, t);
          for (std::size_t i = 0; i < bands->percentiles.size(); ++i) {
            out << "  ";
            if (cell) {
              out << cell->band[i];
            } else {
              out << "nan";
            }
          }
          out << "  " << (cell && cell->significant ? "yes" : "no");
        }
        out << '\n';
      }
    }
  }
  if (bands) {
    out << "\nsurrogates: " << bands->surrogates_used << " used, " << bands->surrogates_skipped << " skipped\n";
  }

  out << "\nwarnings\n";
  if (report.warnings.empty()) out << "  none\n";
  for (const auto& w : report.warnings) out << "  " << w << '\n';

  out << "\ntimings (s)\n" << std::fixed << std::setprecision(3);
  for (const auto& [k, v] : report.timings) out << "  " << k << ": " << v << '\n';
  out << std::defaultfloat;
}

FigureSetup figure_setup(const std::string& figure) {
  FigureSetup f;
  if (figure == "fig2" || figure == "fig3") {
    f.generator = figure == "fig2" ? Generator::uni : Generator::bi;
    f.samples = 500;
    f.p_max = 10;
    for (int t = 1; t <= 10; ++t) f.scales.push_back(t);
  } else if (figure == "fig4") {
    f.generator = Generator::mix;
    f.samples = 1000;
    f.p_max = 15;
    for (int t = 1; t <= 15; ++t) f.scales.push_back(t);
  } else {
    throw Error("unknown figure '" + figure + "' (expected fig2, fig3 or fig4)");
  }
  return f;
}

void write_exact_csv(std::ostream& out, const MultiscaleGcResult& exact, const std::vector<std::string>& labels) {
  out << "tau,source,target,gc,lambda_full,lambda_restricted\n";
  for (const auto& scale : exact.scales) {
    for (const auto& v : scale.values) {
      out << scale.tau << ',' << label_of(labels, v.source) << ',' << label_of(labels, v.target) << ','
          << format_double(v.f) << ',' << format_double(v.lambda_full) << ','
          << format_double(v.lambda_restricted) << '\n';
    }
  }
}

void write_estimates_csv(std::ostream& out, const MonteCarloResult& mc, const std::vector<std::string>& labels) {
  out << "realization,mode,tau,source,target,gc\n";
  auto emit = [&](Mode mode, const std::vector<std::optional<MultiscaleGcResult>>& runs) {
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (const auto& scale : mc.exact.scales) {
        for (const auto& v : scale.values) {
          const double g = runs[r] ? runs[r]->gc(scale.tau, v.source, v.target) : std::nan("");
          out << r << ',' << to_string(mode) << ',' << scale.tau << ',' << label_of(labels, v.source) << ','
              << label_of(labels, v.target) << ',' << format_double(g) << '\n';
        }
      }
    }
  };
  emit(Mode::ss_estimated, mc.estimated);
  emit(Mode::naive, mc.naive);
}

void write_summary_csv(std::ostream& out, const MonteCarloResult& mc, const std::vector<std::string>& labels) {
  out << "mode,tau,source,target,exact,median,q25,q75,median_abs_error,count\n";
  for (const auto& r : mc.summary) {
    out << to_string(r.mode) << ',' << r.tau << ',' << label_of(labels, r.source) << ','
        << label_of(labels, r.target) << ',' << format_double(r.exact) << ',' << format_double(r.median) << ','
        << format_double(r.q25) << ',' << format_double(r.q75) << ',' << format_double(r.median_abs_error) << ','
        << r.count << '\n';
  }
}

namespace {

void write_reproduce_report(std::ostream& out, const ReproduceReport& rep, const std::vector<std::string>& labels) {
  const auto& s = rep.setup;
  out << "msgc reproduce " << rep.config.figure << "\n\nsettings\n"
      << "  generator: " << to_string(s.generator) << "\n  samples per realization: " << s.samples
      << "\n  realizations: " << rep.config.realizations << "\n  filter order: " << rep.config.filter_order
      << "\n  scales: " << join_scales(s.scales) << "\n  p_max: " << s.p_max << "\n  seed: " << rep.config.seed
      << "\n\nexact curve (nats)\n";
  out << std::setprecision(6);
  for (const auto& scale : rep.exact.scales) {
    for (const auto& v : scale.values) {
      out << "  " << scale.tau << "  " << label_of(labels, v.source) << " -> " << label_of(labels, v.target)
          << "  " << v.f << '\n';
    }
  }
  if (rep.monte_carlo) {
    out << "\nrealizations: median [q25, q75] and median absolute error vs exact\n";
    for (const auto& r : rep.monte_carlo->summary) {
      out << "  " << to_string(r.mode) << "  " << r.tau << "  " << label_of(labels, r.source) << " -> "
          << label_of(labels, r.target) << "  " << r.median << " [" << r.q25 << ", " << r.q75 << "]  "
          << r.median_abs_error << "  n=" << r.count << '\n';
    }
  } else {
    out << "\nrealizations: not run\n";
  }
  out << "\nwarnings\n";
  if (rep.warnings.empty()) out << "  none\n";
  for (const auto& w : rep.warnings) out << "  " << w << '\n';
  out << "\ntimings (s)\n" << std::fixed << std::setprecision(3) << "  total: " << rep.seconds << '\n'
      << std::defaultfloat;
}

}  // namespace

ReproduceReport reproduce(const ReproduceConfig& config) {
  const auto start = Clock::now();
  ReproduceReport rep;
  rep.config = config;
  rep.setup = figure_setup(config.figure);
  if (config.p_max) rep.setup.p_max = *config.p_max;
  if (config.scales) rep.setup.scales = *config.scales;

  MonteCarloConfig mc;
  mc.simulation = benchmark_config(rep.setup.generator);
  mc.simulation.samples = rep.setup.samples;
  mc.simulation.seed = config.seed;
  mc.realizations = config.realizations;
  mc.filter_order = config.filter_order;
  mc.scales = rep.setup.scales;
  mc.p_max = rep.setup.p_max;
  mc.validate();

  MultiscaleOptions options;
  options.execution = config.execution;
  const VarModel model = build_benchmark(mc.simulation);
  if (is_stable(model)) {
    rep.monte_carlo = run_monte_carlo(mc, options);
    rep.exact = rep.monte_carlo->exact;
    rep.warnings = rep.monte_carlo->warnings;
  } else {
    rep.exact = multiscale_gc_exact(model, mc.filter_order, mc.scales, options, observation_matrix(mc.simulation));
    rep.warnings = rep.exact.warnings;
    std::ostringstream msg;
    msg << "realizations skipped: the '" << to_string(rep.setup.generator)
        << "' VAR is not stable (spectral radius " << check_stability(model)
        << "), so it has no stationary realizations";
    rep.warnings.push_back(msg.str());
  }
  rep.seconds = seconds_since(start);

  if (!config.out_dir.empty()) {
    const auto labels = default_labels(rep.exact.channels);
    {
      auto out = open_output(config.out_dir / "exact.csv");
      write_exact_csv(out, rep.exact, labels);
    }
    if (rep.monte_carlo) {
      {
        auto out = open_output(config.out_dir / "estimates.csv");
        write_estimates_csv(out, *rep.monte_carlo, labels);
      }
      auto out = open_output(config.out_dir / "summary.csv");
      write_summary_csv(out, *rep.monte_carlo, labels);
    }
    auto out = open_output(config.out_dir / "report.txt");
    write_reproduce_report(out, rep, labels);
  }
  return rep;
}

void write_filter_csv(std::ostream& out, int q, const std::vector<int>& scales) {
  validate_scales(scales);
  out << "tau,lag,coefficient\n";
  for (int tau : scales) {
    const FirFilter f = design_fir_hamming(q, tau);
    for (std::size_t l = 0; l < f.b.size(); ++l) out << tau << ',' << l << ',' << format_double(f.b[l]) << '\n';
  }
}

std::vector<int> parse_scales(const std::string& text) {
  std::vector<int> scales;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error("invalid scale '" + s + "' in '" + text + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string p;
    while (std::getline(is, p, ':')) parts.push_back(p);
    if (parts.size() == 1) {
      scales.push_back(to_int(parts[0]));
    } else if (parts.size() == 2 || parts.size() == 3) {
      const int lo = to_int(parts[0]);
      const int hi = to_int(parts.back());
      const int step = parts.size() == 3 ? to_int(parts[1]) : 1;
      if (step < 1 || hi < lo) throw Error("invalid scale range '" + item + "'");
      for (int v = lo; v <= hi; v += step) scales.push_back(v);
    } else {
      throw Error("invalid scale range '" + item + "'");
    }
  }
  validate_scales(scales);
  return scales;
}

}  // namespace msgc
