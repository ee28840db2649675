#pragma once

// Experiment configuration and the pipelines behind the `recon` tool.
//
// A configuration is a JSON document; every field is optional and falls back
// to the defaults below. Unknown keys are rejected so typos surface as errors.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ritv/simulation.hpp"
#include "ritv/solvers.hpp"

namespace ritv {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,        // output could not be written, or an internal error
  kExitInvalidConfig = 2,  // unreadable or invalid configuration or input
  kExitSolverAbort = 3,    // non-finite iterate or exhausted linesearch
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { MalitskyPock, Gadmm };

struct InputSpec {
  std::size_t phantom_size = 128;  // used when image is empty
  std::filesystem::path image;     // PGM or grid file
};

struct BenchmarkSpec {
  std::vector<MPMode> mp_modes{MPMode::Full};
  std::vector<double> gadmm_mu{1e2, 1e4, 1e6};
  double ritv_only_beta = 0.0;  // > 0 replaces solver.mp.beta for the ritv_only mode
};

struct ExperimentConfig {
  std::string name = "experiment";
  InputSpec input;
  MaskSpec mask;
  double noise_sigma = 0.0;
  Algorithm algorithm = Algorithm::MalitskyPock;
  MPConfig mp;
  GADMMConfig gadmm;
  BenchmarkSpec benchmark;
  int quarter_turns = 1;  // isotropy: rotation applied to image and mask
  bool ritv_values = true;  // isotropy: also report TV/RITV of the reference pair
  bool reconstruct = true;  // isotropy: run the solver on both acquisitions
  MetricLevel metrics = MetricLevel::All;
  std::filesystem::path output = "out";
  std::uint64_t seed = 0;  // mask uses seed, noise uses seed + 1

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical JSON text of the configuration.
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iters;
  std::optional<std::filesystem::path> out;
};

void apply_overrides(ExperimentConfig& cfg, const Overrides& o);

/// Reference image, mask, measured data and zero-filled estimate.
struct ProblemData {
  RealImage reference;
  SamplingMask mask;
  ComplexImage kspace;
  RealImage zero_filled;
};

ProblemData prepare_problem(const ExperimentConfig& cfg);

/// Reads a PGM or grid file, chosen by the grid magic.
RealImage read_image(const std::filesystem::path& path);

/// Parses "radial:n=128,spokes=12" style mask descriptions. Keys: n, rate,
/// spokes, seed, sym (0/1).
std::pair<std::size_t, MaskSpec> parse_mask_description(const std::string& text);

// Commands. Each writes its artifacts under cfg.output, prints a summary to
// `log` and returns an ExitCode.
int cmd_reconstruct(const ExperimentConfig& cfg, std::ostream& log);
int cmd_isotropy(const ExperimentConfig& cfg, std::ostream& log);
int cmd_benchmark(const ExperimentConfig& cfg, std::ostream& log);
int cmd_mask(const std::string& description, const std::filesystem::path& out, std::ostream& log);
int cmd_metrics(const std::filesystem::path& image, const std::filesystem::path& reference, std::ostream& log);

/// Loads a configuration file, applies overrides and dispatches; maps
/// exceptions to exit codes.
int run_config_command(const std::string& command, const std::filesystem::path& config_path,
                       const Overrides& overrides, std::ostream& log, std::ostream& err);

}  // namespace ritv
