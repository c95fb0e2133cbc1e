#include "anticip/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "anticip/error.hpp"
#include "anticip/format.hpp"
#include "anticip/frequency_bound.hpp"
#include "anticip/model_states.hpp"
#include "anticip/sampling.hpp"
#include "anticip/verification.hpp"

namespace anticip {

namespace {

using Json = nlohmann::ordered_json;

// A table cell: number, text or missing.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string cell_text(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
  if (std::holds_alternative<long long>(cell)) return std::to_string(std::get<long long>(cell));
  if (std::holds_alternative<std::string>(cell)) return csv_field(std::get<std::string>(cell));
  return "";
}

Json cell_json(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) {
    const double v = std::get<double>(cell);
    if (std::isfinite(v)) return v;
    return format_double(v);
  }
  if (std::holds_alternative<long long>(cell)) return std::get<long long>(cell);
  if (std::holds_alternative<std::string>(cell)) return std::get<std::string>(cell);
  return nullptr;
}

Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

struct Output {
  std::string format = "csv";
  std::string path;
};

void write_table(std::ostream& out, const Table& table, const Json& config, const Output& o) {
  if (o.format == "json") {
    Json results = Json::array();
    for (const auto& row : table.rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < table.columns.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
      results.push_back(std::move(obj));
    }
    Json doc = Json::object();
    doc["config"] = config;
    doc["results"] = std::move(results);
    out << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

// Writes to --out when given, else to the result stream.
void emit(std::ostream& out, const Table& table, const Json& config, const Output& o) {
  if (o.path.empty()) {
    write_table(out, table, config, o);
    return;
  }
  std::ofstream file(o.path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file " + o.path);
  write_table(file, table, config, o);
}

void add_output_flags(CLI::App* cmd, Output& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.path, "Write results to this file instead of stdout");
}

// ---------------------------------------------------------------------------

struct ModelArgs {
  std::string kind;
  std::optional<std::size_t> period;
  std::optional<std::size_t> cells;
  double y = 1.0;
  std::optional<long long> n_min;
  std::optional<long long> n_max;
  Output output;
};

constexpr std::size_t kDefaultModelCells = 16;

int cmd_model(const ModelArgs& a, std::ostream& out, std::ostream& err) {
  ModelSpec spec;
  spec.kind = parse_model_kind(a.kind);
  spec.y = a.y;
  const bool periodic = is_periodic(spec.kind);
  if (periodic) {
    if (a.cells) throw std::invalid_argument("--cells applies to continuous kinds; use --period");
    if (!a.period) throw std::invalid_argument("--period is required for periodic kinds");
    spec.size = *a.period;
  } else {
    if (a.period) throw std::invalid_argument("--period applies to periodic kinds; use --cells");
    spec.size = a.cells.value_or(kDefaultModelCells);
  }
  const auto sd = make_model(spec);

  Json config = Json::object();
  config["command"] = "model";
  config["kind"] = std::string(to_string(spec.kind));
  config[periodic ? "period" : "cells"] = spec.size;
  config["y"] = spec.y;

  AmplitudeSeries amps;
  if (periodic) {
    amps = amplitudes(std::get<PeriodicSpectralDifference>(sd));
    const long long lo = a.n_min.value_or(1);
    const long long hi = a.n_max.value_or(static_cast<long long>(spec.size));
    if (lo > hi) throw std::invalid_argument("empty index window");
    AmplitudeSeries window{lo, {}, std::nullopt};
    for (long long n = lo; n <= hi; ++n) window.amplitudes.push_back(amps.at(n));
    amps = std::move(window);
  } else {
    const auto& cont = std::get<ContinuousSpectralDifference>(sd);
    long long hi = 0;
    if (a.n_max) {
      hi = *a.n_max;
    } else {
      hi = default_truncation(cont).n_max;
    }
    const long long lo = a.n_min.value_or(1 - hi);
    if (lo > hi) throw std::invalid_argument("empty index window");
    amps = amplitudes(cont, lo, hi);
    if (lo <= 0 && hi >= 1) {
      const double bound = truncation_tail_bound(cont, lo, hi);
      config["tail_bound"] = bound;
      err << "window " << lo << ".." << hi << ", tail bound " << format_double(bound) << '\n';
    }
  }
  config["n_min"] = amps.first_index;
  config["n_max"] = amps.last_index();

  Table table{{"n", "tilde_n", "re_alpha", "im_alpha", "p_n", "closed_form_p_n", "abs_err"}, {}};
  double worst = 0.0;
  for (long long n = amps.first_index; n <= amps.last_index(); ++n) {
    const Complex alpha = amps.at(n);
    const double pn = std::norm(alpha);
    const double closed = closed_form_pn(spec, n);
    const double diff = std::fabs(pn - closed);
    worst = std::max(worst, diff);
    const auto tilde = tilde_index(n, periodic ? std::optional<std::size_t>(spec.size) : std::nullopt);
    table.rows.push_back({n, static_cast<long long>(tilde), alpha.real(), alpha.imag(), pn, closed, diff});
  }
  config["max_abs_err"] = worst;
  emit(out, table, config, a.output);
  if (worst > 1e-10) {
    err << "oracle mismatch: max abs_err " << format_double(worst) << " > 1e-10\n";
    return kExitFailure;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::optional<std::size_t> period;
  std::optional<std::size_t> cells;
  std::vector<std::size_t> periods;  // sweep only
  std::string dist = "uniform";
  std::uint64_t trials = 10000;
  std::uint64_t seed = 42;
  std::vector<long long> n_list;
  std::vector<long long> N_list;
  std::vector<double> r_list;
  std::optional<double> epsilon;
  unsigned threads = 0;
  Output output;
};

constexpr double kZLimit = 5.0;

MonteCarloConfig make_config(const SampleArgs& a, Geometry geometry, std::size_t size) {
  MonteCarloConfig c;
  c.geometry = geometry;
  c.size = size;
  c.distribution = SamplingDistribution::parse(a.dist);
  c.trials = a.trials;
  c.seed = a.seed;
  c.n_list.assign(a.n_list.begin(), a.n_list.end());
  c.N_list.assign(a.N_list.begin(), a.N_list.end());
  c.r_list = a.r_list;
  c.epsilon = a.epsilon;
  c.threads = a.threads;
  c.validate();
  return c;
}

Json config_json(const SampleArgs& a, const MonteCarloConfig& c, const std::string& command) {
  Json j = Json::object();
  j["command"] = command;
  j["geometry"] = c.geometry == Geometry::kPeriodic ? "periodic" : "continuous";
  j["dist"] = c.distribution.name();
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["n"] = a.n_list;
  j["N"] = a.N_list;
  j["r"] = a.r_list;
  if (a.epsilon) j["epsilon"] = *a.epsilon;
  const auto& m = c.distribution.moments();
  j["moments"] = {m.m1, m.m2, m.m3, m.m4};
  return j;
}

const std::vector<std::string> kSampleColumns = {
    "statistic", "parameter", "trials", "mean", "variance", "se_mean", "se_variance",
    "expected_mean", "expected_variance", "z_mean", "z_variance"};

std::vector<Cell> estimate_row(const Estimate& e) {
  return {e.statistic,
          e.parameter,
          static_cast<long long>(e.acc.count()),
          e.acc.mean(),
          e.acc.variance(),
          e.acc.standard_error(),
          e.acc.variance_standard_error(),
          optional_cell(e.expected_mean),
          optional_cell(e.expected_variance),
          optional_cell(e.z_mean()),
          optional_cell(e.z_variance())};
}

std::pair<Geometry, std::size_t> geometry_of(const SampleArgs& a) {
  if (a.period && a.cells) throw std::invalid_argument("give either --period or --cells, not both");
  if (a.period) return {Geometry::kPeriodic, *a.period};
  if (a.cells) return {Geometry::kContinuous, *a.cells};
  throw std::invalid_argument("one of --period or --cells is required");
}

int report_z(double worst, std::ostream& err) {
  if (worst > kZLimit) {
    err << "z-score breach: max |z| = " << format_double(worst) << " > " << kZLimit << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  const auto [geometry, size] = geometry_of(a);
  const auto config = make_config(a, geometry, size);
  const auto report = run_monte_carlo(config);
  Json cfg = config_json(a, config, "sample");
  cfg[geometry == Geometry::kPeriodic ? "period" : "cells"] = size;
  Table table{kSampleColumns, {}};
  for (const auto& e : report.estimates) table.rows.push_back(estimate_row(e));
  emit(out, table, cfg, a.output);
  return report_z(report.max_abs_z(), err);
}

int cmd_sweep(const SampleArgs& a, bool continuous, std::ostream& out, std::ostream& err) {
  if (a.periods.empty()) throw std::invalid_argument("--periods needs at least one size");
  const Geometry geometry = continuous ? Geometry::kContinuous : Geometry::kPeriodic;
  std::vector<MonteCarloConfig> configs;
  for (std::size_t size : a.periods) configs.push_back(make_config(a, geometry, size));

  Json cfg = config_json(a, configs.front(), "sweep");
  cfg[continuous ? "cells" : "periods"] = a.periods;
  std::vector<std::string> columns = {"size"};
  columns.insert(columns.end(), kSampleColumns.begin(), kSampleColumns.end());
  Table table{columns, {}};
  double worst = 0.0;
  for (const auto& c : configs) {
    const auto report = run_monte_carlo(c);
    worst = std::max(worst, report.max_abs_z());
    for (const auto& e : report.estimates) {
      auto row = estimate_row(e);
      row.insert(row.begin(), static_cast<long long>(c.size));
      table.rows.push_back(std::move(row));
    }
  }
  emit(out, table, cfg, a.output);
  return report_z(worst, err);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::vector<int> only;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  Output output;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const VerifyOptions options{a.seed, a.threads};
  std::vector<CriterionResult> results;
  if (!a.only.empty()) {
    for (int id : a.only) results.push_back(run_criterion(id, options));
  } else {
    results = run_suite(parse_suite(a.suite), options);
  }
  Json cfg = Json::object();
  cfg["command"] = "verify";
  cfg["suite"] = a.only.empty() ? a.suite : "custom";
  cfg["seed"] = a.seed;
  Table table{{"id", "name", "result", "measured", "expected", "seconds", "detail"}, {}};
  bool all_passed = true;
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    table.rows.push_back({r.id, r.name, std::string(r.passed ? "PASS" : "FAIL"), r.measured,
                          r.expected, r.seconds, r.detail});
    if (!r.passed) err << "criterion " << r.id << " failed: measured " << r.measured << ", expected " << r.expected << '\n';
  }
  emit(out, table, cfg, a.output);
  return all_passed ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  std::size_t period = 2;
  std::size_t measures = 100;
  std::uint64_t seed = 42;
  int max_offset = 2;
  int spread = 2;
  std::vector<double> points;
  std::vector<double> weights;
  Output output;
};

int cmd_bound(const BoundArgs& a, std::ostream& out, std::ostream& err) {
  Table table{{"measure", "period", "median", "min_abs_moment", "autocorrelation_slack",
               "frequency_slack", "orthogonality_error", "holds"},
              {}};
  bool all_hold = true;
  auto add = [&](const std::string& label, const DiscreteMeasure& m) {
    const auto r = check_bounds(m, a.period);
    const bool holds = r.autocorrelation_holds() && r.frequency_bound_holds();
    all_hold = all_hold && holds;
    table.rows.push_back({label, static_cast<long long>(a.period), r.median, r.min_abs_moment,
                          std::min(r.autocorrelation_slack_median, r.autocorrelation_slack_origin),
                          r.frequency_slack, r.orthogonality_error, std::string(holds ? "yes" : "no")});
    if (!holds) {
      err << "bound violated by measure " << label << ": points";
      for (double x : m.points()) err << ' ' << format_double(x);
      err << " weights";
      for (double w : m.weights()) err << ' ' << format_double(w);
      err << '\n';
    }
  };

  Json cfg = Json::object();
  cfg["command"] = "bound";
  cfg["period"] = a.period;
  cfg["seed"] = a.seed;
  if (!a.points.empty() || !a.weights.empty()) {
    cfg["points"] = a.points;
    cfg["weights"] = a.weights;
    add("input", DiscreteMeasure(a.points, a.weights));
  } else {
    cfg["measures"] = a.measures;
    cfg["max_offset"] = a.max_offset;
    cfg["spread"] = a.spread;
    add("even", evenly_spread_measure(a.period));
    for (std::size_t s = 0; s < a.measures; ++s) {
      CounterRng rng(a.seed, s);
      add("random-" + std::to_string(s), build_orthogonal_measure(a.period, {a.max_offset, a.spread}, rng));
    }
  }
  emit(out, table, cfg, a.output);
  return all_hold ? kExitOk : kExitFailure;
}

void add_sample_flags(CLI::App* cmd, SampleArgs& a) {
  cmd->add_option("--dist", a.dist, "uniform | two-point:<y0> | table:<path>");
  cmd->add_option("--trials", a.trials, "Number of Monte Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--n", a.n_list, "Indices n for p_n")->delimiter(',');
  cmd->add_option("--N", a.N_list, "Cuts N for p_N")->delimiter(',');
  cmd->add_option("--r", a.r_list, "Moment orders r (periodic only)")->delimiter(',');
  cmd->add_option("--epsilon", a.epsilon, "Near-zero threshold");
  cmd->add_option("--threads", a.threads, "Worker threads (default: ANTICIP_THREADS or all cores)");
  add_output_flags(cmd, a.output);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anticipation statistics of orthogonally evolving states"};
  app.name("anticip");
  app.require_subcommand(1);

  ModelArgs model;
  auto* model_cmd = app.add_subcommand("model", "Evaluate a model state against its closed form");
  model_cmd->add_option("--kind", model.kind, "const-periodic | alt-periodic | const-continuous | alt-continuous")
      ->required();
  model_cmd->add_option("--period", model.period, "Period p");
  model_cmd->add_option("--cells", model.cells, "Number of cells M (default 16)");
  model_cmd->add_option("--y", model.y, "Amplitude y in [-1, 1]");
  model_cmd->add_option("--n-min", model.n_min, "First index");
  model_cmd->add_option("--n-max", model.n_max, "Last index");
  add_output_flags(model_cmd, model.output);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo estimates with closed-form pairings");
  sample_cmd->add_option("--period", sample.period, "Period p");
  sample_cmd->add_option("--cells", sample.cells, "Number of cells M");
  add_sample_flags(sample_cmd, sample);

  SampleArgs sweep;
  bool sweep_continuous = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Repeat sample over a list of sizes");
  sweep_cmd->add_option("--periods", sweep.periods, "Sizes to run")->delimiter(',')->required();
  sweep_cmd->add_flag("--continuous", sweep_continuous, "Treat sizes as cell counts");
  add_sample_flags(sweep_cmd, sweep);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance checks");
  verify_cmd->add_option("--suite", verify.suite, "all | identities | statistics | bounds");
  verify_cmd->add_option("--only", verify.only, "Run only these criterion ids")->delimiter(',');
  verify_cmd->add_option("--seed", verify.seed, "RNG seed");
  verify_cmd->add_option("--threads", verify.threads, "Worker threads");
  add_output_flags(verify_cmd, verify.output);

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Frequency-bound checks on orthogonal measures");
  bound_cmd->add_option("--period", bound.period, "Period p")->required();
  bound_cmd->add_option("--measures", bound.measures, "Number of random measures");
  bound_cmd->add_option("--seed", bound.seed, "RNG seed");
  bound_cmd->add_option("--max-offset", bound.max_offset, "Largest base shift of a class");
  bound_cmd->add_option("--spread", bound.spread, "Consecutive shifts per class");
  bound_cmd->add_option("--points", bound.points, "Check this measure instead")->delimiter(',');
  bound_cmd->add_option("--weights", bound.weights, "Weights of --points")->delimiter(',');
  add_output_flags(bound_cmd, bound.output);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives as a ParseError with exit code 0.
    if (e.get_exit_code() == 0) {
      for (auto* sub : app.get_subcommands()) out << sub->help();
      if (app.get_subcommands().empty()) out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (model_cmd->parsed()) return cmd_model(model, out, err);
    if (sample_cmd->parsed()) return cmd_sample(sample, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, sweep_continuous, out, err);
    if (verify_cmd->parsed()) return cmd_verify(verify, out, err);
    if (bound_cmd->parsed()) return cmd_bound(bound, out, err);
  } catch (const ConstraintViolation& e) {
    err << "error: " << e.what() << " (residue " << e.worst_residue() << ", deviation "
        << format_double(e.deviation()) << ")\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace anticip
