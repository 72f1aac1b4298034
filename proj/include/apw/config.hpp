#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apw/deform.hpp"
#include "apw/errors.hpp"
#include "apw/frames.hpp"
#include "apw/pointsets.hpp"

namespace apw {

/// Configuration error tied to a dotted key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(Errc::config_error, key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ModelConfig {
  std::string kind = "lattice";  // lattice | continuum
  std::string generator = "periodic-square";
  int dim = 2;
  int size = 24;
  double flux = 1.0 / 3.0;
  std::string hopping = "nearest";
  double t = 1.0;
  double t_stack = 1.0;
  double decay = 0.25;
  double cut = 1.6;
  double range = 1.9;
  std::vector<double> stripe;
  std::string boundary = "periodic";
  double spacing = 1.0;
  double jitter = 0.0;
  double hardcore_r = 0.25;
  double hardcore_R = 0.75;
  double extent = 4.0;
  double pitch = 0.1;
  double depth = 10.0;
  double width = 0.2;
  double support = 0.45;
  bool operator==(const ModelConfig&) const = default;
};

struct SpectralConfig {
  double min_gap = 0.5;
  int gap = 0;                   // delta below gap `gap` ...
  std::vector<double> interval;  // ... unless an explicit [lo, hi] is given
  std::string backend = "eigensum";
  int degree = 0;
  bool operator==(const SpectralConfig&) const = default;
};

struct FramesConfig {
  double seed_width = 0.8;
  double seed_cutoff = 3.0;
  int seeds_per_cell = 1;
  std::vector<int> stride{3, 1};
  std::vector<int> offset{0, 0};
  std::vector<int> windows{12, 24};
  double loewdin_eps = 1e-10;
  int probes = 100;
  bool dump_vectors = false;
  bool operator==(const FramesConfig&) const = default;
};

struct ChernConfig {
  std::vector<double> fractions{0.3, 0.4, 0.5};
  double tolerance = 0.05;
  bool operator==(const ChernConfig&) const = default;
};

struct DeformConfig {
  std::string path = "lattice";  // lattice | field
  int samples = 11;
  double jitter = 0.05;
  std::uint64_t jitter_seed = 42;
  double flux_step = 1.0 / 576.0;
  int flux_steps = 12;
  double tolerance = 0.05;
  bool operator==(const DeformConfig&) const = default;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  ModelConfig model;
  SpectralConfig spectral;
  FramesConfig frames;
  ChernConfig chern;
  DeformConfig deform;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses TOML text, applies `key=value` overrides (dotted paths, TOML
/// values; bare words are taken as strings) and validates. Unknown keys and
/// type errors raise ConfigError naming the key path.
ExperimentConfig parse_config(const std::string& toml_text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
std::string to_toml(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

LatticeModel lattice_model(const ExperimentConfig& cfg);
ContinuumModel continuum_model(const ExperimentConfig& cfg);
GeneratorParams generator_params(const ExperimentConfig& cfg);
ChernOptions chern_options(const ExperimentConfig& cfg);
DichotomyOptions dichotomy_options(const ExperimentConfig& cfg);
DeformOptions deform_options(const ExperimentConfig& cfg);

}  // namespace apw
