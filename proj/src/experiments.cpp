#include "shs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shs/estimators.hpp"
#include "shs/noise.hpp"
#include "shs/report_io.hpp"
#include "shs/smoothing.hpp"

namespace shs {
namespace {

using json = nlohmann::json;

constexpr std::uint32_t kPilotStream = 1;
constexpr int kMaxSimulatedLevel = 24;

std::string join_lines(const std::vector<std::string>& items) {
  std::string out = "invalid configuration";
  for (const auto& s : items) out += "\n  " + s;
  return out;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Reads typed fields from one JSON object, remembering which keys were used so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& object, std::string path, std::vector<std::string>& problems)
      : object_(object), path_(std::move(path)), problems_(problems) {}

  bool has(const std::string& key) const { return object_.contains(key); }

  const json* get(const std::string& key) {
    used_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void problem(const std::string& key, const std::string& what) {
    problems_.push_back(field(key) + ": " + what);
  }

  void number(const std::string& key, double& out) {
    const json* v = get(key);
    if (!v) return;
    if (auto d = to_number(*v)) {
      if (std::isfinite(*d)) {
        out = *d;
      } else {
        problem(key, "must be finite");
      }
    } else {
      problem(key, "expected a number");
    }
  }

  // Accepts numbers and the strings "inf" / "-inf".
  void extended_number(const std::string& key, double& out) {
    const json* v = get(key);
    if (!v) return;
    if (auto d = to_number(*v)) {
      out = *d;
    } else {
      problem(key, "expected a number, \"inf\" or \"-inf\"");
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    const json* v = get(key);
    if (!v) return;
    if (auto i = to_integer<Int>(*v)) {
      out = *i;
    } else {
      problem(key, "expected an integer in range");
    }
  }

  void text(const std::string& key, std::string& out) {
    const json* v = get(key);
    if (!v) return;
    if (v->is_string()) {
      out = v->get<std::string>();
    } else {
      problem(key, "expected a string");
    }
  }

  void finish() {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!used_.count(it.key())) problems_.push_back(field(it.key()) + ": unknown field");
    }
  }

  static std::optional<double> to_number(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
    }
    return std::nullopt;
  }

  template <class Int>
  static std::optional<Int> to_integer(const json& v) {
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u <= static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
        return static_cast<Int>(u);
      }
      return std::nullopt;
    }
    if (v.is_number_integer()) {
      const auto i = v.get<std::int64_t>();
      if constexpr (std::is_signed_v<Int>) {
        if (i >= std::numeric_limits<Int>::min() && i <= std::numeric_limits<Int>::max()) {
          return static_cast<Int>(i);
        }
      }
      return std::nullopt;
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) &&
          d >= static_cast<double>(std::numeric_limits<Int>::min()) &&
          d <= static_cast<double>(std::numeric_limits<Int>::max())) {
        return static_cast<Int>(d);
      }
    }
    return std::nullopt;
  }

 private:
  const json& object_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> used_;
};

std::optional<RunMode> parse_mode(const std::string& s) {
  if (s == "adaptive") return RunMode::kAdaptive;
  if (s == "fixed-mlmc") return RunMode::kFixedMlmc;
  if (s == "smc") return RunMode::kSmc;
  if (s == "decay-diagnostics") return RunMode::kDecayDiagnostics;
  if (s == "cost-comparison") return RunMode::kCostComparison;
  return std::nullopt;
}

void read_model(const json& node, ModelSpec& spec, std::vector<std::string>& problems) {
  if (node.is_string()) {
    spec.name = node.get<std::string>();
    if (spec.name != "tcl" && spec.name != "brownian") {
      problems.push_back("model: unknown model \"" + spec.name + "\" (expected tcl or brownian)");
    }
    return;
  }
  if (!node.is_object()) {
    problems.push_back("model: expected a model name or an object");
    return;
  }
  Section s(node, "model", problems);
  s.text("name", spec.name);
  if (spec.name == "tcl") {
    auto& p = spec.tcl;
    s.number("set_point", p.set_point);
    s.number("dead_band", p.dead_band);
    s.number("ambient", p.ambient);
    s.number("power", p.power);
    s.number("resistance", p.resistance);
    s.number("capacitance", p.capacitance);
    s.number("sigma_off", p.sigma_off);
    s.number("sigma_on", p.sigma_on);
    s.integer("initial_mode", p.initial_mode);
    s.number("initial_temperature", p.initial_temperature);
    std::string update;
    s.text("mode_update", update);
    if (update == "boundary_projection") {
      spec.mode_update = ModeUpdate::kBoundaryProjection;
    } else if (update == "digital_controller" || update.empty()) {
      spec.mode_update = ModeUpdate::kDigitalController;
    } else {
      s.problem("mode_update", "expected digital_controller or boundary_projection");
    }
    for (const auto& v : p.violations()) problems.push_back("model: " + v);
  } else if (spec.name == "brownian") {
    s.number("mu", spec.mu);
    s.number("sigma", spec.sigma);
    s.extended_number("barrier", spec.barrier);
    if (!(spec.sigma > 0.0)) s.problem("sigma", "must be > 0");
    if (std::isnan(spec.barrier) || spec.barrier <= 0.0) s.problem("barrier", "must be > 0");
  } else {
    s.problem("name", "unknown model \"" + spec.name + "\" (expected tcl or brownian)");
  }
  s.finish();
}

void read_box(const json& node, const std::string& path, std::vector<BoxInvariant>& out,
              std::vector<std::string>& problems) {
  if (!node.is_object()) {
    problems.push_back(path + ": expected an object with lower and upper");
    return;
  }
  Section s(node, path, problems);
  std::vector<double> bounds[2];
  const char* keys[2] = {"lower", "upper"};
  bool ok = true;
  for (int b = 0; b < 2; ++b) {
    const json* v = s.get(keys[b]);
    if (!v || !v->is_array()) {
      s.problem(keys[b], "expected an array of numbers");
      ok = false;
      continue;
    }
    for (const auto& x : *v) {
      if (auto d = Section::to_number(x)) {
        bounds[b].push_back(*d);
      } else {
        s.problem(keys[b], "expected numbers, \"inf\" or \"-inf\"");
        ok = false;
      }
    }
  }
  s.finish();
  if (!ok) return;
  try {
    out.emplace_back(bounds[0], bounds[1]);
  } catch (const std::exception& e) {
    problems.push_back(path + ": " + e.what());
  }
}

void read_functional(const json& node, FunctionalSpec& spec, std::vector<std::string>& problems) {
  if (!node.is_object()) {
    problems.push_back("functional: expected an object");
    return;
  }
  Section s(node, "functional", problems);
  s.text("variant", spec.variant);
  s.integer("coordinate", spec.coordinate);
  s.number("horizon", spec.horizon);
  s.number("threshold", spec.threshold);
  if (const json* boxes = s.get("safe_set")) {
    if (!boxes->is_array()) {
      s.problem("safe_set", "expected an array of boxes, one per mode");
    } else {
      for (std::size_t i = 0; i < boxes->size(); ++i) {
        read_box((*boxes)[i], "functional.safe_set[" + std::to_string(i) + "]", spec.safe_set,
                 problems);
      }
    }
  }
  s.finish();
}

template <class T>
void read_list(Section& s, const std::string& key, std::vector<T>& out) {
  const json* v = s.get(key);
  if (!v) return;
  if (!v->is_array()) {
    s.problem(key, "expected an array");
    return;
  }
  out.clear();
  for (const auto& x : *v) {
    std::optional<T> item;
    if constexpr (std::is_floating_point_v<T>) {
      if (x.is_number()) item = x.get<double>();
    } else {
      item = Section::to_integer<T>(x);
    }
    if (!item || (std::is_floating_point_v<T> && !std::isfinite(static_cast<double>(*item)))) {
      s.problem(key, "entries must be finite numbers of the right kind");
      return;
    }
    out.push_back(*item);
  }
}

void read_run(const json& node, const std::string& path, ExperimentConfig& c,
              std::vector<std::string>& problems) {
  Section s(node, path, problems);
  std::string mode;
  if (!s.has("mode")) {
    s.problem("mode", "required field missing");
  } else {
    s.text("mode", mode);
    if (auto m = parse_mode(mode)) {
      c.mode = *m;
    } else if (!mode.empty()) {
      s.problem("mode", "unknown mode \"" + mode +
                            "\" (expected adaptive, fixed-mlmc, smc, decay-diagnostics or "
                            "cost-comparison)");
    }
  }
  if (!s.has("seed")) {
    s.problem("seed", "required field missing");
  } else {
    s.integer("seed", c.seed);
  }

  if (s.has("epsilon") && s.has("epsilons")) s.problem("epsilon", "give epsilon or epsilons");
  if (s.has("epsilon")) {
    double e = 0.0;
    s.number("epsilon", e);
    c.epsilons = {e};
  }
  read_list(s, "epsilons", c.epsilons);
  for (double e : c.epsilons) {
    if (!(e > 0.0)) s.problem(s.has("epsilon") ? "epsilon" : "epsilons", "must be > 0");
  }

  if (const json* a = s.get("a")) {
    if (!a->is_array() || a->size() != 3 || !std::all_of(a->begin(), a->end(), [](const json& x) {
          return x.is_number() && std::isfinite(x.get<double>()) && x.get<double>() > 0.0;
        })) {
      s.problem("a", "expected three positive numbers [a1, a2, a3]");
    } else {
      c.a1 = (*a)[0].get<double>();
      c.a2 = (*a)[1].get<double>();
      c.a3 = (*a)[2].get<double>();
    }
  }
  s.integer("kappa", c.kappa);
  s.text("output_dir", c.output_dir);
  s.text("payoff", c.payoff);
  s.integer("smoothing_index", c.smoothing_index);
  s.integer("level", c.level);
  s.integer("samples", c.samples);
  read_list(s, "replications", c.replications);
  s.integer("max_level", c.max_level);
  s.integer("samples_per_level", c.samples_per_level);
  read_list(s, "smoothing_indices", c.smoothing_indices);
  s.integer("pilot_max_level", c.pilot_max_level);
  s.integer("pilot_samples", c.pilot_samples);
  s.integer("level_cap", c.level_cap);
  s.integer("smoothing_cap", c.smoothing_cap);
  s.integer("cost_cap", c.cost_cap);
  s.finish();

  if (c.kappa < 1) s.problem("kappa", "must be >= 1");
  if (c.payoff != "smoothed" && c.payoff != "indicator") {
    s.problem("payoff", "expected smoothed or indicator");
  }
  switch (c.mode) {
    case RunMode::kAdaptive:
      if (c.epsilons.size() != 1) s.problem("epsilon", "adaptive mode needs one epsilon");
      if (c.level_cap < 2 || c.level_cap > kMaxSimulatedLevel) {
        s.problem("level_cap", "must be in [2, 24]");
      }
      if (c.smoothing_cap < 3) s.problem("smoothing_cap", "must be >= 3");
      break;
    case RunMode::kCostComparison:
      if (c.epsilons.empty()) s.problem("epsilons", "cost-comparison needs at least one epsilon");
      if (c.pilot_max_level < 2 || c.pilot_max_level > kMaxSimulatedLevel) {
        s.problem("pilot_max_level", "must be in [2, 24]");
      }
      if (c.pilot_samples < 1) s.problem("pilot_samples", "must be >= 1");
      if (c.level_cap < 2 || c.level_cap > kMaxSimulatedLevel) {
        s.problem("level_cap", "must be in [2, 24]");
      }
      if (c.smoothing_cap < 3) s.problem("smoothing_cap", "must be >= 3");
      break;
    case RunMode::kFixedMlmc:
      if (c.replications.empty()) s.problem("replications", "required for fixed-mlmc");
      if (c.replications.size() > kMaxSimulatedLevel + 1) s.problem("replications", "too many levels");
      if (std::any_of(c.replications.begin(), c.replications.end(),
                      [](std::size_t n) { return n == 0; })) {
        s.problem("replications", "entries must be >= 1");
      }
      if (c.payoff == "smoothed" && c.smoothing_index < 1) {
        s.problem("smoothing_index", "must be >= 1");
      }
      break;
    case RunMode::kSmc:
      if (c.level < 0 || c.level > kMaxSimulatedLevel) s.problem("level", "must be in [0, 24]");
      if (c.samples < 2) s.problem("samples", "must be >= 2");
      if (c.payoff == "smoothed" && c.smoothing_index < 1) {
        s.problem("smoothing_index", "must be >= 1");
      }
      break;
    case RunMode::kDecayDiagnostics:
      if (c.max_level < 1 || c.max_level > kMaxSimulatedLevel) {
        s.problem("max_level", "must be in [1, 24]");
      }
      if (c.samples_per_level < 1) s.problem("samples_per_level", "must be >= 1");
      for (int m : c.smoothing_indices) {
        if (m < 1) s.problem("smoothing_indices", "entries must be >= 1");
      }
      break;
  }
}

// Problem defaults: running maximum over one time unit, threshold 20.3 C for
// the thermostat and 1 for Brownian motion.
void apply_model_defaults(ExperimentConfig& c) {
  c.functional.variant = "running_max";
  c.functional.horizon = 1.0;
  c.functional.threshold = c.model.name == "tcl" ? 20.3 : 1.0;
}

void check_functional(const ExperimentConfig& c, std::vector<std::string>& problems) {
  const auto& f = c.functional;
  if (!(f.horizon > 0.0)) problems.push_back("functional.horizon: must be > 0");
  if (f.variant == "running_max" || f.variant == "terminal_value") {
    const std::size_t dim = c.model.name == "tcl" || c.model.name == "brownian" ? 1 : 0;
    if (f.coordinate >= dim) problems.push_back("functional.coordinate: out of range");
    if (!f.safe_set.empty()) {
      problems.push_back("functional.safe_set: only used by first_exit_time");
    }
  } else if (f.variant == "first_exit_time") {
    const std::size_t modes = c.model.name == "tcl" ? 2 : 1;
    if (f.safe_set.size() != modes) {
      problems.push_back("functional.safe_set: expected one box per mode (" +
                         std::to_string(modes) + ")");
    }
    for (const auto& box : f.safe_set) {
      if (box.dim() != 1) problems.push_back("functional.safe_set: boxes must have dimension 1");
    }
  } else {
    problems.push_back("functional.variant: unknown variant \"" + f.variant +
                       "\" (expected running_max, terminal_value or first_exit_time)");
  }
}

double run_horizon(const ExperimentConfig& c, const PathFunctional& f, bool smoothed) {
  double h = functional_horizon(f);
  if (std::holds_alternative<FirstExitTime>(f)) {
    h = std::max(h, simulation_horizon(f, c.functional.threshold));
    if (smoothed) {
      h = std::max(h, c.functional.threshold + std::ldexp(1.0, -c.smoothing_index));
    }
  }
  return h;
}

Payoff run_payoff(const ExperimentConfig& c) {
  if (c.payoff == "indicator") return indicator_payoff(c.functional.threshold);
  return smoothed_payoff(c.smoothing_index, c.functional.threshold);
}

void write_report(const EstimateReport& report, const std::filesystem::path& dir) {
  write_text_file(dir / "report.json", report_to_json(report).dump(2) + "\n");
  write_text_file(dir / "levels.csv", levels_csv(report.levels));
}

EstimateReport fixed_report(const ExperimentConfig& c, const MlmcEstimate& est, double horizon,
                            const std::string& status) {
  EstimateReport r;
  r.estimate = est.estimate;
  r.smoothing_index = c.payoff == "indicator" ? 0 : c.smoothing_index;
  r.max_level = est.max_level();
  r.a1 = c.a1;
  r.a2 = c.a2;
  r.a3 = c.a3;
  r.threshold = c.functional.threshold;
  r.horizon = horizon;
  r.variance_bound = est.variance_bound;
  r.total_cost = est.cost();
  r.seed = c.seed;
  r.converged = true;
  r.status = status;
  for (const auto& l : est.levels) {
    r.levels.push_back(LevelRow{l.level, l.samples, l.mean, l.variance, l.cost, 0.0});
  }
  return r;
}

std::optional<RateFit> try_fit(const std::vector<DecayRow>& rows, bool variance) {
  std::vector<int> levels;
  std::vector<double> values;
  for (const auto& r : rows) {
    levels.push_back(r.level);
    values.push_back(variance ? r.variance : std::abs(r.mean));
  }
  try {
    return fit_decay_rate(levels, values);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::string decay_csv(const DecayTable& table) {
  std::vector<LevelRow> rows;
  for (const auto& r : table.rows) {
    rows.push_back(LevelRow{r.level, r.samples, r.mean, r.variance, r.cost, 0.0});
  }
  return levels_csv(rows);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kAdaptive: return "adaptive";
    case RunMode::kFixedMlmc: return "fixed-mlmc";
    case RunMode::kSmc: return "smc";
    case RunMode::kDecayDiagnostics: return "decay-diagnostics";
    case RunMode::kCostComparison: return "cost-comparison";
  }
  return "unknown";
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": syntax error: " << e.what();
    throw ConfigError({msg.str()});
  }
  if (!root.is_object()) throw ConfigError({source + ": top level must be an object"});

  std::vector<std::string> problems;
  ExperimentConfig c;

  if (root.contains("model")) {
    read_model(root["model"], c.model, problems);
  }
  apply_model_defaults(c);
  if (root.contains("functional")) read_functional(root["functional"], c.functional, problems);

  // Run fields may sit in a "run" section or at the top level, not both.
  json run = json::object();
  if (root.contains("run")) {
    if (!root["run"].is_object()) {
      problems.push_back("run: expected an object");
    } else {
      run = root["run"];
    }
  }
  for (auto it = root.begin(); it != root.end(); ++it) {
    const auto& key = it.key();
    if (key == "model" || key == "functional" || key == "run") continue;
    if (run.contains(key)) {
      problems.push_back(key + ": given both at top level and in run");
      continue;
    }
    run[key] = it.value();
  }
  read_run(run, root.contains("run") ? "run" : "", c, problems);
  check_functional(c, problems);

  if (problems.empty()) {
    try {
      (void)build_model(c.model);
    } catch (const std::exception& e) {
      problems.push_back(std::string("model: ") + e.what());
    }
  }
  if (!problems.empty()) {
    for (auto& p : problems) p = source + ": " + p;
    throw ConfigError(std::move(problems));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

ShsModel build_model(const ModelSpec& spec) {
  if (spec.name == "tcl") return tcl_model(spec.tcl, spec.mode_update);
  if (spec.name == "brownian") return brownian_barrier_model(spec.mu, spec.sigma, spec.barrier);
  throw std::invalid_argument("unknown model \"" + spec.name + "\"");
}

PathFunctional build_functional(const FunctionalSpec& spec) {
  if (spec.variant == "running_max") return RunningMax{spec.coordinate, spec.horizon};
  if (spec.variant == "terminal_value") return TerminalValue{spec.coordinate, spec.horizon};
  if (spec.variant == "first_exit_time") return FirstExitTime{spec.safe_set, spec.horizon};
  throw std::invalid_argument("unknown functional variant \"" + spec.variant + "\"");
}

AdaptiveConfig adaptive_config(const ExperimentConfig& c, double epsilon, const Execution& exec) {
  AdaptiveConfig a;
  a.budget = ErrorBudget{epsilon, c.a1, c.a2, c.a3};
  a.kappa = c.kappa;
  a.seed = c.seed;
  a.max_level = c.level_cap;
  a.max_smoothing_index = c.smoothing_cap;
  a.max_cost = c.cost_cap;
  a.exec = exec;
  return a;
}

EstimateReport run_estimate(const ExperimentConfig& c, const Execution& exec,
                            const std::optional<std::filesystem::path>& out_dir) {
  const ShsModel model = build_model(c.model);
  const PathFunctional functional = build_functional(c.functional);
  const NoiseStream noise(c.seed);
  const bool smoothed = c.payoff == "smoothed";
  EstimateReport report;

  switch (c.mode) {
    case RunMode::kAdaptive:
      report = adaptive_mlmc(model, functional, c.functional.threshold,
                             adaptive_config(c, c.epsilons.front(), exec));
      break;
    case RunMode::kFixedMlmc: {
      const double horizon = run_horizon(c, functional, smoothed);
      const auto est = mlmc_estimate(model, with_horizon(functional, horizon), run_payoff(c),
                                     c.replications, c.kappa, horizon, noise, exec);
      report = fixed_report(c, est, horizon, "fixed");
      break;
    }
    case RunMode::kSmc: {
      const double horizon = run_horizon(c, functional, smoothed);
      const LevelParams params(c.kappa, c.level, horizon);
      const auto smc = smc_estimate(model, with_horizon(functional, horizon), run_payoff(c),
                                    params, c.samples, noise, exec);
      MlmcEstimate est;
      est.estimate = smc.estimate;
      est.variance_bound = smc.variance / static_cast<double>(smc.samples);
      est.levels.push_back(LevelStats{c.level, smc.samples, smc.estimate, smc.variance, smc.cost});
      report = fixed_report(c, est, horizon, "smc");
      report.max_level = c.level;
      report.total_cost = smc.cost;
      break;
    }
    default:
      throw ConfigError({"run.mode: " + to_string(c.mode) +
                         " is not an estimate mode (adaptive, fixed-mlmc or smc)"});
  }
  if (out_dir) write_report(report, *out_dir);
  return report;
}

std::vector<DecayTable> run_decay_diagnostics(const ExperimentConfig& c, const Execution& exec,
                                              const std::optional<std::filesystem::path>& out_dir) {
  const ShsModel model = build_model(c.model);
  const PathFunctional functional = build_functional(c.functional);
  const NoiseStream noise(c.seed);

  std::vector<DecayTable> tables;
  std::vector<Payoff> payoffs;
  tables.push_back(DecayTable{"indicator", {}, 0.0, 0.0, false, false});
  payoffs.push_back(indicator_payoff(c.functional.threshold));
  int finest_index = 1;
  for (int m : c.smoothing_indices) {
    tables.push_back(DecayTable{"m" + std::to_string(m), {}, 0.0, 0.0, false, false});
    payoffs.push_back(smoothed_payoff(m, c.functional.threshold));
    finest_index = std::max(finest_index, m);
  }
  double horizon = functional_horizon(functional);
  if (std::holds_alternative<FirstExitTime>(functional)) {
    horizon = std::max(horizon, c.functional.threshold +
                                    std::ldexp(1.0, -std::min(finest_index, 2)));
  }
  const PathFunctional f = with_horizon(functional, horizon);

  for (int l = 1; l <= c.max_level; ++l) {
    LevelSamples samples;
    samples.level = l;
    extend_level_samples(samples, c.samples_per_level, model, f, c.kappa, horizon, noise, exec);
    for (std::size_t p = 0; p < payoffs.size(); ++p) {
      const auto s = summarize(level_payoffs(samples, payoffs[p]), l, samples.cost);
      tables[p].rows.push_back(DecayRow{l, s.samples, s.mean, s.variance, s.cost});
    }
  }

  nlohmann::ordered_json summary;
  summary["seed"] = c.seed;
  summary["kappa"] = c.kappa;
  summary["samples_per_level"] = c.samples_per_level;
  summary["max_level"] = c.max_level;
  summary["threshold"] = c.functional.threshold;
  summary["horizon"] = horizon;
  auto list = nlohmann::ordered_json::array();
  for (auto& t : tables) {
    if (auto fit = try_fit(t.rows, false)) {
      t.alpha_hat = fit->alpha;
      t.alpha_fitted = true;
    }
    if (auto fit = try_fit(t.rows, true)) {
      t.beta_hat = fit->alpha;
      t.beta_fitted = true;
    }
    nlohmann::ordered_json j;
    j["payoff"] = t.payoff;
    j["file"] = "decay_" + t.payoff + ".csv";
    j["alpha_hat"] = t.alpha_fitted ? json(t.alpha_hat) : json(nullptr);
    j["beta_hat"] = t.beta_fitted ? json(t.beta_hat) : json(nullptr);
    list.push_back(std::move(j));
  }
  summary["payoffs"] = std::move(list);

  if (out_dir) {
    for (const auto& t : tables) {
      write_text_file(*out_dir / ("decay_" + t.payoff + ".csv"), decay_csv(t));
    }
    write_text_file(*out_dir / "decay_summary.json", summary.dump(2) + "\n");
  }
  return tables;
}

CostComparison run_cost_comparison(const ExperimentConfig& c, const Execution& exec,
                                   const std::optional<std::filesystem::path>& out_dir) {
  const ShsModel model = build_model(c.model);
  const PathFunctional functional = build_functional(c.functional);

  // Pilot: level corrections of the plain indicator, whose decay rate sets
  // the single-level cost model.
  const NoiseStream pilot_noise(c.seed, kPilotStream);
  const double pilot_horizon = run_horizon(c, functional, false);
  const PathFunctional pilot_f = with_horizon(functional, pilot_horizon);
  const Payoff indicator = indicator_payoff(c.functional.threshold);
  std::vector<int> levels;
  std::vector<double> abs_means;
  for (int l = 1; l <= c.pilot_max_level; ++l) {
    const auto s = level_correction_stats(model, pilot_f, indicator, l, c.kappa, pilot_horizon,
                                          c.pilot_samples, pilot_noise, exec);
    levels.push_back(l);
    abs_means.push_back(std::abs(s.mean));
  }
  CostComparison out;
  try {
    out.alpha_bar = fit_decay_rate(levels, abs_means).alpha;
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("cost comparison pilot: ") + e.what());
  }
  if (!(out.alpha_bar > 0.0)) {
    throw std::runtime_error("cost comparison pilot: fitted rate is not positive");
  }

  for (double eps : c.epsilons) {
    auto report = adaptive_mlmc(model, functional, c.functional.threshold,
                                adaptive_config(c, eps, exec));
    CostRow row;
    row.epsilon = eps;
    row.smc_cost_model = std::pow(eps, -2.0 - 1.0 / out.alpha_bar);
    row.mlmc_cost = static_cast<double>(report.total_cost);
    row.gain = row.smc_cost_model / row.mlmc_cost;
    row.converged = report.converged;
    out.rows.push_back(row);
    out.reports.push_back(std::move(report));
  }

  if (out_dir) {
    std::string csv = "epsilon,smc_cost_model,mlmc_cost,gain,converged\n";
    for (const auto& r : out.rows) {
      csv += format_double(r.epsilon) + ',' + format_double(r.smc_cost_model) + ',' +
             format_double(r.mlmc_cost) + ',' + format_double(r.gain) + ',' +
             (r.converged ? "true" : "false") + '\n';
    }
    write_text_file(*out_dir / "cost_comparison.csv", csv);

    nlohmann::ordered_json j;
    j["alpha_bar"] = out.alpha_bar;
    j["pilot_max_level"] = c.pilot_max_level;
    j["pilot_samples"] = c.pilot_samples;
    j["seed"] = c.seed;
    auto runs = nlohmann::ordered_json::array();
    for (const auto& r : out.reports) runs.push_back(report_to_json(r));
    j["runs"] = std::move(runs);
    write_text_file(*out_dir / "cost_comparison.json", j.dump(2) + "\n");
  }
  return out;
}

}  // namespace shs
