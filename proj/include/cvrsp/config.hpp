#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvrsp/homodyne.hpp"
#include "cvrsp/rsp.hpp"
#include "cvrsp/states.hpp"
#include "cvrsp/tomography.hpp"

namespace cvrsp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanSpec {
  std::vector<double> q_grid;
  std::vector<double> eta_grid;
  std::vector<double> delta_grid;
};

struct TomoRunSpec {
  TargetSpec target = TargetSpec::cat_minus(0.7);
  int n_samples = 50000;
  double eta_detection = 0.85;
  TomoConfig reconstruction;
};

struct WignerSpec {
  double x_min = -6.0;
  double x_max = 6.0;
  double p_min = -6.0;
  double p_max = 6.0;
  double step = 0.05;
};

/// Everything a command needs. Keys in the JSON form carry unit suffixes
/// (_rad, _snu, _db, _hz); eta values are dimensionless.
struct RunConfig {
  int dim = kDefaultDim;
  int dim_a = 2;
  ResourceParams resource;
  Conditioning conditioning;
  std::vector<TargetSpec> targets;
  ScanSpec scan;
  TomoRunSpec tomo;
  WignerSpec wigner;
  double bloch_alpha = 0.7;
  double base_rate_hz = kHeraldingRateHz;
  std::optional<int> preset;
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

RunConfig default_config();

nlohmann::json to_json(const RunConfig& cfg);
/// Strict: unknown keys and wrong types are ConfigErrors. Missing keys
/// keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace cvrsp
