#pragma once

// Scenario files: a JSON document naming a generator system, an experiment
// and its knobs. Parsing fills every default explicitly; the filled document
// is the echo written next to each output and hashed for provenance.

#include "linewalk/chain.hpp"
#include "linewalk/geometry.hpp"
#include "linewalk/measure.hpp"
#include "linewalk/serialize.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace linewalk {

enum class Experiment { recurrence, oscillation, stationary, uniqueness, contraction, derriennic, full_pipeline };

std::string to_string(Experiment e);
std::optional<Experiment> parse_experiment(const std::string& name);
const std::vector<Experiment>& all_experiments();

struct RecurrenceParams {
  double start = 0;
  std::vector<std::size_t> checkpoints;
  std::size_t trials = 0;
};

struct OscillationParams {
  double start = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double upper = 0;
};

struct StationaryParams {
  std::size_t iterations = 0;  // Krylov-Bogolyubov stopped runs per chain
  std::size_t chains = 0;
  std::size_t samples_per_start = 0;
  double window = 0;           // occupation samples are kept on [-window, window]
  std::size_t cap = 0;         // step cap per stopped run
  double max_truncated_fraction = 0;
  std::size_t resamples = 0;
  std::vector<TestFunction> probes;
  double corruption = 0;       // negative control: nu scaled by this on the lower half of K
};

struct UniquenessParams {
  double first_start = 0, second_start = 0;
  TestFunction psi, phi;
  std::size_t n = 0;
  std::size_t trials = 0;
  double tolerance = 0;
};

struct ContractionParams {
  double x = 0, y = 0;
  Interval<double> j;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::vector<std::size_t> checkpoints;
  double contract_below = 0;
  double target_ratio = 0;  // median gated gap at n against target_ratio * initial gap
  bool nu_gap = false;      // also report the nu-gap, from a stationary estimate
};

struct MartingaleParams {
  double x = 0, y = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double window = 0;
  double z_threshold = 0;
};

struct DerriennicParams {
  std::size_t nodes = 0;
  std::size_t grid_points = 0;
  std::size_t resamples = 0;
  double tolerance = 0;
  double z_threshold = 0;
};

struct ScenarioConfig {
  std::optional<std::string> preset;  // either a preset name,
  GeneratorSystem<Rational> system;   // or this system, given inline
  Experiment experiment = Experiment::recurrence;
  std::uint64_t seed = 0;
  Rational recurrence_a = 0;
  Interval<Rational> k;  // recurrence interval derived from the system

  RecurrenceParams recurrence;
  OscillationParams oscillation;
  StationaryParams stationary;
  UniquenessParams uniqueness;
  ContractionParams contraction;
  MartingaleParams martingale;
  DerriennicParams derriennic;
  ClassifierOptions classifier;
  std::size_t classifier_samples = 0;

  /// Where outputs go when neither the command line nor the environment says;
  /// not part of the echo, so moving a run does not change its hash.
  std::optional<std::filesystem::path> output_dir;

  Json echo;  // the filled document, output_dir excluded
};

/// Throws ConfigError with the field path of the first problem found,
/// including a system that fails validation.
ScenarioConfig parse_config(const Json& document);
ScenarioConfig load_config(const std::filesystem::path& file);

/// Canonical text of the echo: compact JSON with sorted keys.
std::string canonical_echo(const ScenarioConfig& config);

/// Git blob hash of the canonical echo: sha1("blob <size>\0" + text).
std::string config_hash(const ScenarioConfig& config);
std::string git_blob_sha1(const std::string& content);

/// Environment variable naming the default output directory.
inline constexpr const char* output_dir_env = "LINEWALK_OUTPUT_DIR";

/// Command-line value, else the config's output_dir, else the environment
/// variable, else "linewalk-out".
std::filesystem::path resolve_output_dir(const ScenarioConfig& config,
                                         const std::optional<std::filesystem::path>& override_dir);

}  // namespace linewalk
