#include "linewalk/scenario.hpp"

#include "linewalk/csv.hpp"
#include "linewalk/derriennic.hpp"
#include "linewalk/stationary.hpp"
#include "linewalk/summary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace linewalk {

namespace {

namespace fs = std::filesystem;

// Sub-experiment tags for MonteCarlo::child; fixed so that adding an
// experiment never shifts the streams of another.
enum Tag : std::uint64_t {
  tag_recurrence = 1,
  tag_oscillation,
  tag_krylov,
  tag_pool,
  tag_stationarity,
  tag_control,
  tag_uniqueness,
  tag_contraction,
  tag_martingale,
  tag_martingale_pool,
  tag_drift_noise,
  tag_classifier,
};

class Artifacts {
 public:
  Artifacts(const ScenarioConfig& config, fs::path dir)
      : dir_(std::move(dir)), hash_(config_hash(config)), echo_(canonical_echo(config)), config_(config.echo) {
    fs::create_directories(dir_);
  }

  template <typename Body>
  void csv(const std::string& name, Body&& body) {
    std::ostringstream out;
    out << "# linewalk config_sha1=" << hash_ << "\n# config=" << echo_ << "\n";
    body(out);
    write(name, out.str());
  }

  void json(const std::string& name, Json body) {
    body["config"] = config_;
    body["config_sha1"] = hash_;
    write(name, body.dump(2) + "\n");
  }

  void script(const std::string& name, const std::string& text) {
    write(name, "# linewalk config_sha1=" + hash_ + "\n# config=" + echo_ + "\n" + text);
  }

  const std::vector<fs::path>& files() const { return files_; }
  const std::string& hash() const { return hash_; }

 private:
  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + path.string());
    files_.push_back(path);
  }

  fs::path dir_;
  std::string hash_, echo_;
  Json config_;
  std::vector<fs::path> files_;
};

struct Context {
  Context(const ScenarioConfig& c, const RunOptions& o, Artifacts& a)
      : config(c), options(o), out(a), system(c.system.cast<double>()), k{to_double(c.k.lo), to_double(c.k.hi)},
        mc{c.seed, o.threads} {}

  const ScenarioConfig& config;
  const RunOptions& options;
  Artifacts& out;
  Walk system;
  Interval<double> k;
  MonteCarlo mc;
  Json results = Json::object();
  std::vector<Verdict> verdicts;
  std::optional<KrylovBogolyubovResult> kb;
  bool nu_written = false;

  void log(const std::string& line) const {
    if (options.log) *options.log << line << '\n' << std::flush;
  }
  void verdict(std::string name, bool passed, std::string detail) {
    verdicts.push_back({std::move(name), passed, std::move(detail)});
  }
};

// verdict details only; results keep full precision
std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

PoolOptions pool_options(const StationaryParams& p) {
  PoolOptions po;
  po.stop.cap = p.cap;
  po.max_truncated_fraction = p.max_truncated_fraction;
  return po;
}

const KrylovBogolyubovResult& krylov(Context& x) {
  if (!x.kb) {
    const auto& p = x.config.stationary;
    x.log("krylov-bogolyubov: " + std::to_string(p.chains) + " chains x " + std::to_string(p.iterations) + " runs");
    x.kb = krylov_bogolyubov(x.system, BumpProfile::around(x.k), p.iterations, p.chains, x.mc.child(tag_krylov),
                             pool_options(p));
  }
  return *x.kb;
}

StationaryEstimate estimate(Context& x, double window, Tag tag) {
  const auto& p = x.config.stationary;
  const auto& kb = krylov(x);
  StationaryOptions so;
  so.pool = pool_options(p);
  so.pool.stop.retain = Interval<double>{-window, window};
  x.log("occupation pool: window +-" + fmt(window));
  return build_stationary(x.system, kb, BumpProfile::around(x.k), p.samples_per_start, x.mc.child(tag), so);
}

Json pool_json(const StationaryEstimate& est) {
  return {{"samples", est.nu.size()},
          {"raw_k_mass", est.raw_k_mass},
          {"runs", est.stats.runs},
          {"truncated", est.stats.truncated},
          {"steps", est.stats.steps}};
}

void write_nu(Context& x, const StationaryEstimate& est) {
  if (x.nu_written) return;
  x.out.csv("nu.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"position", "weight"});
    const auto pos = est.nu.positions();
    const auto wt = est.nu.weights();
    for (std::size_t i = 0; i < pos.size(); ++i) w.field(pos[i]).field(wt[i]).end_row();
  });
  x.nu_written = true;
}

void run_recurrence(Context& x) {
  const auto& p = x.config.recurrence;
  x.log("recurrence: " + std::to_string(p.trials) + " trajectories from " + fmt(p.start));
  const auto table = visit_count_table(x.system, p.start, x.k, p.checkpoints, p.trials, x.mc.child(tag_recurrence));
  x.out.csv("visits.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"trial", "steps", "visits"});
    for (Eigen::Index t = 0; t < table.rows(); ++t)
      for (Eigen::Index j = 0; j < table.cols(); ++j)
        w.field(static_cast<std::size_t>(t)).field(p.checkpoints[static_cast<std::size_t>(j)]).field(static_cast<long long>(table(t, j))).end_row();
  });
  std::vector<double> medians;
  for (Eigen::Index j = 0; j < table.cols(); ++j) {
    std::vector<double> col(static_cast<std::size_t>(table.rows()));
    for (Eigen::Index t = 0; t < table.rows(); ++t) col[static_cast<std::size_t>(t)] = static_cast<double>(table(t, j));
    medians.push_back(median(col));
  }
  std::size_t growing = 0;
  for (Eigen::Index t = 0; t < table.rows(); ++t) {
    bool up = true;
    for (Eigen::Index j = 1; j < table.cols(); ++j) up = up && table(t, j) > table(t, j - 1);
    growing += up;
  }
  const double growing_fraction = static_cast<double>(growing) / static_cast<double>(p.trials);
  x.results["recurrence"] = {{"k", {x.k.lo, x.k.hi}}, {"median_visits", medians}, {"growing_fraction", growing_fraction}};
  x.verdict("median visits at the first checkpoint >= 50", medians.front() >= 50, "median " + fmt(medians.front()));
  if (p.checkpoints.size() > 1)
    x.verdict("visits grow across checkpoints in >= 90% of trials", growing_fraction >= 0.9,
              "fraction " + fmt(growing_fraction));
}

void run_oscillation(Context& x) {
  const auto& p = x.config.oscillation;
  x.log("oscillation: " + std::to_string(p.trials) + " trials of " + std::to_string(p.n) + " steps");
  const auto s = oscillation_stats(x.system, p.start, p.n, p.trials, p.upper, x.mc.child(tag_oscillation));
  const double sigma = s.sigma(0.5);
  x.out.csv("oscillation.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"step", "fraction_at_or_above_start", "sigma"});
    for (Eigen::Index k = 0; k < s.frac_stay_above_start.size(); ++k) {
      const double f = s.frac_stay_above_start[k];
      w.field(static_cast<std::size_t>(k)).field(f).field(s.sigma(f)).end_row();
    }
  });
  const double lowest = s.frac_stay_above_start.minCoeff();
  x.results["oscillation"] = {{"upper", s.upper},
                              {"lower", s.lower},
                              {"fraction_exceed_upper", s.frac_exceed_up},
                              {"fraction_exceed_lower", s.frac_exceed_down},
                              {"min_fraction_at_or_above_start", lowest},
                              {"sigma_at_half", sigma}};
  x.verdict("P(X_k >= start) >= 1/2 - 3 sigma for every k", lowest >= 0.5 - 3 * sigma,
            "min " + fmt(lowest) + ", floor " + fmt(0.5 - 3 * sigma));
}

void run_stationary(Context& x, const StationaryEstimate& est) {
  const auto& p = x.config.stationary;
  x.log("stationarity check: " + std::to_string(p.probes.size()) + " probes");
  const auto report = stationarity_check(x.system, est, p.probes, p.resamples, x.mc.child(tag_stationarity));
  const auto bad_est = est.with_interval_scaled(x.k.lo, x.k.midpoint(), p.corruption);
  const auto control = stationarity_check(x.system, bad_est, p.probes, p.resamples, x.mc.child(tag_control));
  write_nu(x, est);
  x.out.csv("residuals.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"probe", "measure", "residual", "sigma", "z"});
    for (const auto* r : {&report, &control})
      for (std::size_t i = 0; i < r->probes.size(); ++i)
        w.field(i).field(r == &report ? "estimate" : "corrupted").field(r->probes[i].residual).field(r->probes[i].sigma).field(r->probes[i].z()).end_row();
  });
  x.results["stationary"] = {
      {"pool", pool_json(est)}, {"max_z", report.max_z()}, {"control_max_z", control.max_z()},
      {"max_abs_residual", report.max_abs_residual()}};
  x.verdict("stationarity residual within 3 sigma on every probe", report.passed(3.0), "max z " + fmt(report.max_z()));
  x.verdict("corrupted measure exceeds the noise floor", control.max_z() > 3.0, "max z " + fmt(control.max_z()));
}

bool all_translations(const Walk& system) {
  return std::all_of(system.generators().begin(), system.generators().end(),
                     [](const auto& g) { return g.map.is_translation(); });
}

void run_uniqueness(Context& x) {
  const auto& p = x.config.uniqueness;
  x.log("uniqueness: " + std::to_string(p.trials) + " runs of " + std::to_string(p.n) + " steps from each start");
  const auto r = uniqueness_cross_check(x.system, p.first_start, p.second_start, p.psi, p.phi, p.n, p.trials,
                                        x.mc.child(tag_uniqueness));
  x.out.csv("ratios.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"start", "run", "ratio"});
    for (std::size_t i = 0; i < r.ratios_first.size(); ++i) w.field(p.first_start).field(i).field(r.ratios_first[i]).end_row();
    for (std::size_t i = 0; i < r.ratios_second.size(); ++i) w.field(p.second_start).field(i).field(r.ratios_second[i]).end_row();
  });
  Json res = {{"median_first", r.median_first},
              {"median_second", r.median_second},
              {"relative_gap", r.relative_gap()},
              {"not_recurrent", r.not_recurrent}};
  x.verdict("medians from the two starts agree within tolerance", r.relative_gap() <= p.tolerance,
            "relative gap " + fmt(r.relative_gap()));
  if (all_translations(x.system)) {
    // Lebesgue measure is invariant under translations
    const double reference = p.psi.lebesgue_integral() / p.phi.lebesgue_integral();
    res["lebesgue_reference"] = reference;
    for (double m : {r.median_first, r.median_second})
      x.verdict("median within tolerance of the Lebesgue ratio", std::abs(m - reference) <= p.tolerance * std::abs(reference),
                "median " + fmt(m) + ", reference " + fmt(reference));
  }
  x.results["uniqueness"] = res;
}

void run_contraction(Context& x) {
  const auto& p = x.config.contraction;
  ContractionOptions opts;
  opts.checkpoints = p.checkpoints;
  opts.contract_below = p.contract_below;
  opts.keep_records = true;
  std::optional<StationaryEstimate> est;
  if (p.nu_gap) {
    est = estimate(x, x.config.martingale.window, tag_martingale_pool);
    opts.nu = &est->nu;
  }
  x.log("contraction: " + std::to_string(p.trials) + " coupled pairs, " + std::to_string(p.n) + " steps");
  const auto r = contraction_experiment(x.system, p.x, p.y, p.j, p.n, p.trials, x.mc.child(tag_contraction), opts);
  x.out.csv("gaps.csv", [&](std::ostream& os) { write_gap_csv(os, r.records); });
  x.out.csv("checkpoints.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"step", "gated", "median", "q90", "contracting", "contracting_lo", "contracting_hi"});
    for (const auto& c : r.checkpoints)
      w.field(c.step).field(c.gated).field(c.median).field(c.q90).field(c.contracting).field(c.contracting_ci.lo).field(c.contracting_ci.hi).end_row();
  });
  const auto& last = r.checkpoints.back();
  const double ratio = last.median / r.initial_gap;
  x.results["contraction"] = {{"initial_gap", r.initial_gap},
                              {"median_ratio_at_n", std::isfinite(ratio) ? Json(ratio) : Json()},
                              {"max_gap_change", r.max_gap_change},
                              {"median_decreasing", r.median_decreasing()}};
  x.verdict("median gated gap at n <= target ratio x initial", ratio <= p.target_ratio,
            last.gated == 0 ? "no gated trial" : "ratio " + fmt(ratio));
  x.verdict("contracting fraction has a 95% interval excluding 0", last.contracting_ci.lo > 0,
            std::to_string(last.contracting) + "/" + std::to_string(r.trials) + ", interval [" +
                fmt(last.contracting_ci.lo) + ", " + fmt(last.contracting_ci.hi) + "]");
  x.verdict("gap exactly constant", r.max_gap_change == 0, "max change " + fmt(r.max_gap_change));
}

void run_martingale(Context& x) {
  const auto& p = x.config.martingale;
  const auto est = estimate(x, p.window, tag_martingale_pool);
  x.log("martingale: " + std::to_string(p.trials) + " coupled pairs, " + std::to_string(p.n) + " steps");
  const auto r = martingale_check(x.system, est, p.x, p.y, p.n, p.trials, x.mc.child(tag_martingale));
  x.out.csv("martingale.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"step", "mean", "sigma", "z"});
    for (std::size_t k = 0; k < r.mean.size(); ++k) w.field(k).field(r.mean[k]).field(r.sigma[k]).field(r.z(k)).end_row();
  });
  x.results["martingale"] = {{"initial", r.initial}, {"max_z", r.max_z()}, {"pool", pool_json(est)}};
  x.verdict("mean nu-distance within z threshold of d(x, y) at every step", r.passed(p.z_threshold),
            "max z " + fmt(r.max_z()));
}

void run_derriennic(Context& x, const StationaryEstimate& est) {
  const auto& p = x.config.derriennic;
  x.log("chart and conjugation");
  const auto chart = build_chart(est.nu, x.k.midpoint());
  const auto grid = chart_grid(chart, x.k, p.grid_points);
  ConjugateOptions co;
  co.nodes = p.nodes;
  co.extra_nodes = grid;
  const auto conj = conjugate(x.system, chart, co);
  const auto profile = drift_profile(conj.system, grid);
  x.log("drift bootstrap: " + std::to_string(p.resamples) + " replicas");
  const auto noise = drift_bootstrap(x.system, est, chart, grid, p.resamples, x.mc.child(tag_drift_noise));
  const auto lip = lipschitz_check(conj.system, p.tolerance, conj.grid_tolerance);
  const auto disp = displacement_check(conj.system, grid, p.tolerance);

  write_nu(x, est);
  x.out.csv("chart.csv", [&](std::ostream& os) { write_chart_csv(os, chart); });
  double max_z = 0;
  x.out.csv("drift.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"u", "x", "drift", "sigma", "z", "raw_drift"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double pre = chart.inverse(grid[i]);
      const double z = noise.sigma[i] > 0 ? std::abs(profile.drift[i]) / noise.sigma[i] : INFINITY;
      max_z = std::max(max_z, z);
      w.field(grid[i]).field(pre).field(profile.drift[i]).field(noise.sigma[i]).field(z).field(drift_at(x.system, pre)).end_row();
    }
  });
  x.out.csv("bounds.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"check", "generator", "value", "bound", "passed"});
    for (const auto& [name, report] : {std::pair<const char*, const BoundReport*>{"lipschitz", &lip},
                                       std::pair<const char*, const BoundReport*>{"displacement", &disp}})
      for (const auto& g : report->generators) w.field(name).field(g.name).field(g.value).field(g.bound).field(g.passed).end_row();
  });
  x.out.json("conjugated.json", {{"system", system_to_json(conj.system)},
                                 {"grid_tolerance", conj.grid_tolerance},
                                 {"pairing_gap", conj.pairing_gap}});
  x.results["derriennic"] = {{"max_drift_z", max_z},
                             {"max_abs_drift", profile.max_abs},
                             {"phi_max", disp.phi_max},
                             {"grid_tolerance", conj.grid_tolerance},
                             {"pairing_gap", conj.pairing_gap},
                             {"chart_nodes", chart.nodes().size()}};
  x.verdict("post-chart drift within z threshold at every grid point", max_z <= p.z_threshold, "max z " + fmt(max_z));
  std::string lip_detail, disp_detail;
  for (const auto& g : lip.generators) lip_detail += g.name + " " + fmt(g.value) + "/" + fmt(g.bound) + " ";
  for (const auto& g : disp.generators) disp_detail += g.name + " " + fmt(g.value) + "/" + fmt(g.bound) + " ";
  x.verdict("conjugated slopes <= (1 + tolerance) / weight", lip.passed(), lip_detail);
  x.verdict("displacement <= (1 + tolerance) sqrt(2 Phi) / weight", disp.passed(), disp_detail);
}

void run_full_pipeline(Context& x) {
  const auto report = validate(x.system);
  Json checks = Json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  x.results["validation"] = checks;
  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.passed;
  x.verdict("system validates", report.passed(), std::to_string(passed) + "/" + std::to_string(report.checks.size()) + " checks");

  x.log("structure classification");
  const auto v = classify_structure(x.system, x.config.classifier_samples, x.mc.child(tag_classifier), x.config.classifier);
  x.results["structure"] = {{"kind", to_string(v.kind)}, {"reason", v.reason}, {"min_orbit_gap", v.min_orbit_gap}};

  const auto est = estimate(x, x.config.stationary.window, tag_pool);
  run_stationary(x, est);
  run_derriennic(x, est);
  run_martingale(x);
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read " + file.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ScenarioConfig from_stamped(const std::string& hash, const std::string& echo_text, const fs::path& file) {
  Json echo;
  try {
    echo = Json::parse(echo_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config", "echo in " + file.string() + " is not valid JSON: " + e.what());
  }
  if (git_blob_sha1(echo.dump()) != hash)
    throw ConfigError("config_sha1", "does not match the echoed config in " + file.string());
  return parse_config(echo);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  Artifacts out(config, options.output_dir);
  Context x(config, options, out);
  switch (config.experiment) {
    case Experiment::recurrence: run_recurrence(x); break;
    case Experiment::oscillation: run_oscillation(x); break;
    case Experiment::stationary: run_stationary(x, estimate(x, config.stationary.window, tag_pool)); break;
    case Experiment::uniqueness: run_uniqueness(x); break;
    case Experiment::contraction: run_contraction(x); break;
    case Experiment::derriennic: run_derriennic(x, estimate(x, config.stationary.window, tag_pool)); break;
    case Experiment::full_pipeline: run_full_pipeline(x); break;
  }
  out.script("plot.py", plot_script());

  Json verdicts = Json::array();
  for (const auto& v : x.verdicts) verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
  Json summary = {{"experiment", to_string(config.experiment)}, {"results", x.results}, {"verdicts", verdicts}};
  out.json("summary.json", summary);
  return {out.files(), std::move(x.verdicts), std::move(summary)};
}

ScenarioConfig load_scenario(const fs::path& file) {
  const std::string text = read_file(file);
  if (text.rfind("# linewalk config_sha1=", 0) == 0) {
    std::istringstream in(text);
    std::string first, second;
    std::getline(in, first);
    std::getline(in, second);
    const std::string prefix = "# config=";
    if (second.rfind(prefix, 0) != 0) throw ConfigError("config", "missing echo line in " + file.string());
    return from_stamped(first.substr(first.find('=') + 1), second.substr(prefix.size()), file);
  }
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", file.string() + " is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("config_sha1") && doc.contains("config")) {
    if (!doc["config_sha1"].is_string()) throw ConfigError("config_sha1", "expected a string");
    return from_stamped(doc["config_sha1"].get<std::string>(), doc["config"].dump(), file);
  }
  return parse_config(doc);
}

std::string plot_script() {
  return R"PY(# Plots every table of this directory that it recognizes; figures are
# written next to the CSVs. Needs pandas and matplotlib.
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

here = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent)


def table(name):
    path = here / name
    return pd.read_csv(path, comment="#") if path.exists() else None


def save(fig, name):
    fig.tight_layout()
    fig.savefig(here / name, dpi=120)
    plt.close(fig)


visits = table("visits.csv")
if visits is not None:
    fig, ax = plt.subplots()
    for steps, group in visits.groupby("steps"):
        ax.hist(group["visits"], bins=30, alpha=0.6, label=f"n = {steps}")
    ax.set_xlabel("visits to K")
    ax.legend()
    save(fig, "visits.png")

osc = table("oscillation.csv")
if osc is not None:
    fig, ax = plt.subplots()
    ax.plot(osc["step"], osc["fraction_at_or_above_start"])
    ax.axhline(0.5, color="grey", lw=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("P(X_k >= start)")
    save(fig, "oscillation.png")

res = table("residuals.csv")
if res is not None:
    fig, ax = plt.subplots()
    for measure, group in res.groupby("measure"):
        ax.plot(group["probe"], group["z"], "o", label=measure)
    ax.axhline(3, color="grey", lw=0.8)
    ax.set_xlabel("probe")
    ax.set_ylabel("|residual| / sigma")
    ax.legend()
    save(fig, "residuals.png")

ratios = table("ratios.csv")
if ratios is not None:
    fig, ax = plt.subplots()
    for start, group in ratios.groupby("start"):
        ax.plot(group["run"], group["ratio"], "o", label=f"start {start}")
    ax.set_ylabel("S psi / S phi")
    ax.legend()
    save(fig, "ratios.png")

checkpoints = table("checkpoints.csv")
if checkpoints is not None:
    fig, ax = plt.subplots()
    ax.semilogy(checkpoints["step"], checkpoints["median"], "o-", label="median")
    ax.semilogy(checkpoints["step"], checkpoints["q90"], "s--", label="0.9 quantile")
    ax.set_xlabel("step")
    ax.set_ylabel("gated gap")
    ax.legend()
    save(fig, "contraction.png")

chart = table("chart.csv")
if chart is not None:
    fig, ax = plt.subplots()
    ax.plot(chart["x"], chart["D"])
    ax.set_xscale("symlog")
    ax.set_xlabel("x")
    ax.set_ylabel("D(x)")
    save(fig, "chart.png")

drift = table("drift.csv")
if drift is not None:
    fig, ax = plt.subplots()
    ax.errorbar(drift["u"], drift["drift"], yerr=3 * drift["sigma"], fmt="o", capsize=3, label="after chart")
    ax.plot(drift["u"], drift["raw_drift"], "x", label="before chart")
    ax.axhline(0, color="grey", lw=0.8)
    ax.set_xlabel("u")
    ax.legend()
    save(fig, "drift.png")

mart = table("martingale.csv")
if mart is not None:
    fig, ax = plt.subplots()
    ax.plot(mart["step"], mart["mean"])
    ax.fill_between(mart["step"], mart["mean"][0] - 3 * mart["sigma"], mart["mean"][0] + 3 * mart["sigma"], alpha=0.3)
    ax.set_xlabel("k")
    ax.set_ylabel("mean d(X_k^x, X_k^y)")
    save(fig, "martingale.png")
)PY";
}

}  // namespace linewalk
