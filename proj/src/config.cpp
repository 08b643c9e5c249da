#include "linewalk/config.hpp"

#include "linewalk/presets.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace linewalk {

namespace {

const std::vector<std::pair<Experiment, std::string>>& experiment_names() {
  static const std::vector<std::pair<Experiment, std::string>> names = {
      {Experiment::recurrence, "recurrence"},   {Experiment::oscillation, "oscillation"},
      {Experiment::stationary, "stationary"},   {Experiment::uniqueness, "uniqueness"},
      {Experiment::contraction, "contraction"}, {Experiment::derriennic, "derriennic"},
      {Experiment::full_pipeline, "full-pipeline"},
  };
  return names;
}

// Reads one object of the document, fills defaults into its echo and
// rejects keys it was never asked about.
class Section {
 public:
  Section(const Json& parent, const std::string& parent_path, const std::string& key)
      : path_(join_path(parent_path, key)) {
    const auto it = parent.find(key);
    if (it != parent.end()) {
      if (!it->is_object()) throw ConfigError(path_, "expected an object");
      src_ = &*it;
    }
  }
  explicit Section(const Json& root) : src_(&root) {
    if (!root.is_object()) throw ConfigError("", "the scenario file must hold a JSON object");
  }

  const Json* find(const std::string& key) {
    used_.insert(key);
    if (!src_) return nullptr;
    const auto it = src_->find(key);
    return it == src_->end() ? nullptr : &*it;
  }
  std::string at(const std::string& key) const { return join_path(path_, key); }

  double number(const std::string& key, double fallback) {
    double v = fallback;
    if (const Json* j = find(key)) v = double_from_json(*j, at(key));
    if (!std::isfinite(v)) throw ConfigError(at(key), "expected a finite number");
    echo[key] = v;
    return v;
  }
  double positive(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v > 0)) throw ConfigError(at(key), "must be positive");
    return v;
  }
  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 1) {
    std::size_t v = fallback;
    if (const Json* j = find(key)) v = to_count(*j, at(key));
    if (v < min) throw ConfigError(at(key), "must be at least " + std::to_string(min));
    echo[key] = v;
    return v;
  }
  bool flag(const std::string& key, bool fallback) {
    bool v = fallback;
    if (const Json* j = find(key)) {
      if (!j->is_boolean()) throw ConfigError(at(key), "expected true or false");
      v = j->get<bool>();
    }
    echo[key] = v;
    return v;
  }
  std::vector<std::size_t> counts(const std::string& key, std::vector<std::size_t> fallback) {
    if (const Json* j = find(key)) {
      if (!j->is_array() || j->empty()) throw ConfigError(at(key), "expected a nonempty array");
      fallback.clear();
      for (std::size_t i = 0; i < j->size(); ++i) fallback.push_back(to_count((*j)[i], index_path(at(key), i)));
    }
    for (std::size_t i = 0; i < fallback.size(); ++i) {
      if (fallback[i] == 0) throw ConfigError(index_path(at(key), i), "must be positive");
      if (i > 0 && fallback[i] <= fallback[i - 1]) throw ConfigError(index_path(at(key), i), "must be increasing");
    }
    echo[key] = fallback;
    return fallback;
  }
  Interval<double> interval(const std::string& key, Interval<double> fallback) {
    if (const Json* j = find(key)) {
      if (!j->is_array() || j->size() != 2) throw ConfigError(at(key), "expected [lo, hi]");
      fallback = {double_from_json((*j)[0], index_path(at(key), 0)), double_from_json((*j)[1], index_path(at(key), 1))};
      if (!(fallback.lo < fallback.hi)) throw ConfigError(at(key), "needs lo < hi");
    }
    echo[key] = {fallback.lo, fallback.hi};
    return fallback;
  }
  TestFunction function(const std::string& key, const Json& fallback) {
    const Json* j = find(key);
    const Json spec = j ? *j : fallback;
    auto f = test_function_from_json(spec, at(key));
    echo[key] = spec;
    return f;
  }
  std::vector<TestFunction> functions(const std::string& key, const Json& fallback) {
    const Json* j = find(key);
    const Json spec = j ? *j : fallback;
    if (!spec.is_array() || spec.empty()) throw ConfigError(at(key), "expected a nonempty array");
    std::vector<TestFunction> out;
    for (std::size_t i = 0; i < spec.size(); ++i) out.push_back(test_function_from_json(spec[i], index_path(at(key), i)));
    echo[key] = spec;
    return out;
  }

  void finish() const {
    if (!src_) return;
    for (const auto& [k, v] : src_->items())
      if (!used_.count(k)) throw ConfigError(at(k), "unknown field");
  }

  Json echo = Json::object();

 private:
  static std::size_t to_count(const Json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    // documents built in code hold signed integers even when nonnegative
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::size_t>(j.get<std::int64_t>());
    if (j.is_number_float()) {
      const double d = j.get<double>();
      if (d >= 0 && d == std::floor(d) && d < 0x1p63) return static_cast<std::size_t>(d);
    }
    throw ConfigError(path, "expected a nonnegative integer");
  }

  const Json* src_ = nullptr;
  std::string path_;
  std::set<std::string> used_;
};

Json hat(double c, double w) { return {{"type", "hat"}, {"center", c}, {"half_width", w}}; }
Json trapezoid(double a, double b, double r) { return {{"type", "trapezoid"}, {"a", a}, {"b", b}, {"ramp", r}}; }

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : experiment_names())
    if (k == e) return name;
  return "unknown";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (const auto& [k, n] : experiment_names())
    if (n == name) return k;
  return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all = [] {
    std::vector<Experiment> v;
    for (const auto& [k, n] : experiment_names()) v.push_back(k);
    return v;
  }();
  return all;
}

ScenarioConfig parse_config(const Json& document) {
  ScenarioConfig c;
  Section root(document);

  const Json* preset_name = root.find("preset");
  const Json* inline_system = root.find("system");
  if (preset_name && inline_system) throw ConfigError("system", "give either preset or system, not both");
  if (preset_name) {
    if (!preset_name->is_string()) throw ConfigError("preset", "expected a preset name");
    c.preset = preset_name->get<std::string>();
    try {
      c.system = preset(*c.preset).system;
    } catch (const std::out_of_range&) {
      throw ConfigError("preset", "unknown preset '" + *c.preset + "' (see `linewalk presets`)");
    }
    root.echo["preset"] = *c.preset;
  } else if (inline_system) {
    c.system = system_from_json<Rational>(*inline_system, "system");
    root.echo["system"] = system_to_json(c.system);
  } else {
    throw ConfigError("preset", "missing field (or give an inline system)");
  }
  const auto report = validate(c.system);
  if (!report.passed()) throw ConfigError(preset_name ? "preset" : "system", "invalid system: " + report.summary());

  const Json* experiment = root.find("experiment");
  if (!experiment) throw ConfigError("experiment", "missing field");
  const auto kind = experiment->is_string() ? parse_experiment(experiment->get<std::string>()) : std::nullopt;
  if (!kind) {
    std::string options;
    for (auto e : all_experiments()) options += (options.empty() ? "" : " | ") + to_string(e);
    throw ConfigError("experiment", "expected one of " + options);
  }
  c.experiment = *kind;
  root.echo["experiment"] = to_string(c.experiment);

  if (const Json* seed = root.find("seed")) {
    const bool signed_ok = seed->is_number_integer() && seed->get<std::int64_t>() >= 0;
    if (!seed->is_number_unsigned() && !signed_ok) throw ConfigError("seed", "expected a nonnegative integer");
    c.seed = seed->is_number_unsigned() ? seed->get<std::uint64_t>() : static_cast<std::uint64_t>(seed->get<std::int64_t>());
  }
  root.echo["seed"] = c.seed;

  if (const Json* a = root.find("recurrence_a")) c.recurrence_a = rational_from_json(*a, "recurrence_a");
  root.echo["recurrence_a"] = scalar_to_json(c.recurrence_a);
  try {
    c.k = recurrence_interval(c.system, c.recurrence_a);
  } catch (const std::exception& e) {
    throw ConfigError("recurrence_a", e.what());
  }
  const double lo = to_double(c.k.lo), hi = to_double(c.k.hi), mid = (lo + hi) / 2;

  if (const Json* out = root.find("output_dir")) {
    if (!out->is_string()) throw ConfigError("output_dir", "expected a path");
    c.output_dir = out->get<std::string>();
  }

  {
    Section s(document, "", "recurrence");
    c.recurrence.start = s.number("start", mid);
    c.recurrence.checkpoints = s.counts("checkpoints", {100000, 200000});
    c.recurrence.trials = s.count("trials", 100);
    s.finish();
    root.echo["recurrence"] = s.echo;
  }
  {
    Section s(document, "", "oscillation");
    c.oscillation.start = s.number("start", mid);
    c.oscillation.n = s.count("n", 10000);
    c.oscillation.trials = s.count("trials", 10000);
    c.oscillation.upper = s.number("upper", c.oscillation.start + (hi - lo));
    s.finish();
    root.echo["oscillation"] = s.echo;
  }
  {
    Section s(document, "", "stationary");
    auto& p = c.stationary;
    p.iterations = s.count("iterations", 500);
    p.chains = s.count("chains", 40, 2);
    p.samples_per_start = s.count("samples_per_start", 1);
    p.window = s.positive("window", 4096);
    p.cap = s.count("cap", 10'000'000);
    p.max_truncated_fraction = s.number("max_truncated_fraction", 0.01);
    if (p.max_truncated_fraction < 0 || p.max_truncated_fraction > 1)
      throw ConfigError(s.at("max_truncated_fraction"), "must lie in [0, 1]");
    p.resamples = s.count("resamples", 1000, 2);
    p.probes = s.functions("probes", Json::array({hat(lo + 0.5, 0.5), hat(lo - 1, 1), hat(lo + 2, 1.5),
                                                  trapezoid(lo, lo + 1, 0.5), hat(lo + 0.2, 0.3)}));
    p.corruption = s.positive("corruption", 2.0);
    s.finish();
    root.echo["stationary"] = s.echo;
  }
  {
    Section s(document, "", "uniqueness");
    auto& p = c.uniqueness;
    p.first_start = s.number("first_start", lo);
    p.second_start = s.number("second_start", lo + 7.3);
    if (p.first_start == p.second_start) throw ConfigError(s.at("second_start"), "must differ from first_start");
    p.psi = s.function("psi", trapezoid(lo, lo + 1, 0.01));
    p.phi = s.function("phi", trapezoid(lo, lo + 2, 0.01));
    if (!p.phi.nonnegative()) throw ConfigError(s.at("phi"), "must be nonnegative");
    p.n = s.count("n", 1'000'000);
    p.trials = s.count("trials", 9);
    p.tolerance = s.positive("tolerance", 0.1);
    s.finish();
    root.echo["uniqueness"] = s.echo;
  }
  {
    Section s(document, "", "contraction");
    auto& p = c.contraction;
    p.x = s.number("x", lo + 0.2);
    p.y = s.number("y", lo + 0.8);
    if (!(p.x < p.y)) throw ConfigError(s.at("y"), "needs x < y");
    p.j = s.interval("j", {lo - 10, lo + 10});
    p.n = s.count("n", 100000);
    p.trials = s.count("trials", 2000);
    std::vector<std::size_t> quarters;
    for (std::size_t q : {p.n / 4, p.n / 2, p.n})
      if (q > 0 && (quarters.empty() || q > quarters.back())) quarters.push_back(q);
    p.checkpoints = s.counts("checkpoints", quarters);
    if (p.checkpoints.back() > p.n) throw ConfigError(s.at("checkpoints"), "must not exceed n");
    p.contract_below = s.positive("contract_below", 0.1);
    p.target_ratio = s.positive("target_ratio", 0.2);
    p.nu_gap = s.flag("nu_gap", false);
    s.finish();
    root.echo["contraction"] = s.echo;
  }
  {
    Section s(document, "", "martingale");
    auto& p = c.martingale;
    p.x = s.number("x", lo + 0.2);
    p.y = s.number("y", lo + 0.8);
    if (!(p.x < p.y)) throw ConfigError(s.at("y"), "needs x < y");
    p.n = s.count("n", 200);
    p.trials = s.count("trials", 10000, 2);
    p.window = s.positive("window", 0x1p40);
    p.z_threshold = s.positive("z_threshold", 3.0);
    s.finish();
    root.echo["martingale"] = s.echo;
  }
  {
    Section s(document, "", "derriennic");
    auto& p = c.derriennic;
    p.nodes = s.count("nodes", 512, 3);
    p.grid_points = s.count("grid_points", 11, 2);
    p.resamples = s.count("resamples", 1000, 2);
    p.tolerance = s.number("tolerance", 0.1);
    if (p.tolerance < 0) throw ConfigError(s.at("tolerance"), "must be nonnegative");
    p.z_threshold = s.positive("z_threshold", 3.0);
    s.finish();
    root.echo["derriennic"] = s.echo;
  }
  {
    Section s(document, "", "classifier");
    auto& p = c.classifier;
    p.gap_lower_bound = s.positive("gap_lower_bound", p.gap_lower_bound);
    p.contraction_factor = s.positive("contraction_factor", p.contraction_factor);
    p.unit = s.positive("unit", p.unit);
    p.horizon = s.count("horizon", p.horizon);
    p.trials = s.count("trials", p.trials);
    c.classifier_samples = s.count("samples", 100000, 2);
    s.finish();
    root.echo["classifier"] = s.echo;
  }
  for (const char* section : {"recurrence", "oscillation", "stationary", "uniqueness", "contraction", "martingale",
                              "derriennic", "classifier"})
    root.find(section);
  root.finish();
  c.echo = std::move(root.echo);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot read " + file.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", file.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::string canonical_echo(const ScenarioConfig& config) { return config.echo.dump(); }

std::string git_blob_sha1(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &length, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string config_hash(const ScenarioConfig& config) { return git_blob_sha1(canonical_echo(config)); }

std::filesystem::path resolve_output_dir(const ScenarioConfig& config,
                                         const std::optional<std::filesystem::path>& override_dir) {
  if (override_dir) return *override_dir;
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv(output_dir_env); env && *env) return env;
  return "linewalk-out";
}

}  // namespace linewalk
