#pragma once

#include <optional>
#include <string>

#include "delaycert/cdds.hpp"
#include "delaycert/gram.hpp"
#include "delaycert/inequality.hpp"

namespace delaycert {

/// Config parse/validation failure with file and line context.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& file, int line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
        line_number(line) {}

  int line_number;
};

struct SystemConfig {
  int n = 0;
  int nu = 0;
  Matrix A1, A2, A3, A4, A5;  // row-major lists in the file
};

struct BasisConfig {
  std::string family = "trig_block";
  int d = 3;
  double omega = 0.0;
  std::optional<double> a, b;  // fixed domain for standalone commands
};

struct WeightConfig {
  std::string kind = "constant_one";
  int p = 0;
};

struct SignalConfig {
  int n = 1;
  Matrix poly;      // n x (degree+1), coefficient of tau^k in column k
  Vector sin_amp;   // optional trig part, per component
  Vector cos_amp;
  double sin_omega = 0.0;
  double cos_omega = 0.0;
};

struct SweepConfig {
  double start = 0.001;
  double step = 0.001;
  double stop = 2.5;
  std::string condition = "a";  // a = (P,S,U) form, b = free-matrix form
  int jobs = 1;
};

struct SimulateConfig {
  double r = 0.1;
  double t_end = 1.0;
  int steps_per_delay = 64;
  std::string ic = "random";  // zero | constant | random
  unsigned seed = 1;
};

struct RunConfig {
  std::optional<SystemConfig> system;
  BasisConfig basis;
  WeightConfig weight;
  QuadratureConfig quadrature;
  double solver_eps_scale = 1e-7;
  std::optional<SignalConfig> signal;
  SweepConfig sweep;
  SimulateConfig simulate;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& name);
std::string dump_config(const RunConfig& cfg);

/// Basis from the config on an explicit domain.
BasisSet basis_from_config(const BasisConfig& bc, const Interval& domain);

/// Weight from the config.
WeightFn weight_from_config(const WeightConfig& wc);

/// CDDS model at delay r; requires the system section.
CddsModel model_from_config(const RunConfig& cfg, double r);

/// Test signal from the signal section.
TestSignal signal_from_config(const SignalConfig& sc);

}  // namespace delaycert
