#pragma once

// Campaign configuration and its key = value file format.
//
//   # comment
//   alpha0 = 3 0                 (real and imaginary part)
//   gauge = mu:1                 (positive_p | mu:<value>)
//   n_traj = 10000
//   dt = 0.001
//   t_max = 0.5
//   n_record = 50
//   master_seed = 1
//   guard_cos_threshold = 1e-06
//   discard_policy = freeze_and_flag      (| drop_and_renormalize)
//   observables = Y_quadrature,X_quadrature
//   with_oracle = true
//
// Keys not present keep their defaults; unknown keys are an error.

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "kerrgauge/gauge.hpp"
#include "kerrgauge/integrator.hpp"
#include "kerrgauge/phase_core.hpp"

namespace kerrgauge {

struct SimConfig {
  cplx alpha0{3.0, 0.0};
  GaugeSpec gauge = GaugeSpec::positive_p();
  std::uint64_t n_traj = 10000;
  double dt = 1e-3;
  double t_max = 8.0;
  std::uint64_t n_record = 800;
  std::uint64_t master_seed = 1;
  double guard_cos_threshold = kDefaultGuardCos;
  DiscardPolicy discard_policy = DiscardPolicy::FreezeAndFlag;
  std::vector<ObservableKind> observables{ObservableKind::YQuadrature};
  bool with_oracle = false;

  /// Throws ConfigError on inconsistent values.
  void validate() const;

  [[nodiscard]] RunSpec to_run_spec(unsigned threads = 1) const;
};

std::string_view to_string(DiscardPolicy policy);
DiscardPolicy parse_discard_policy(std::string_view text);

/// Parses the key = value format. Throws ConfigError with the line number.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

/// Renders every key; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const SimConfig& config);

nlohmann::json config_to_json(const SimConfig& config);
SimConfig config_from_json(const nlohmann::json& j);

}  // namespace kerrgauge
