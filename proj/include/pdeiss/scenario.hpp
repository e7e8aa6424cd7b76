#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdeiss/expr.hpp"

namespace pdeiss {

/// Scenario files are line oriented: `[section]` headers, `key = value`
/// pairs, `#` comments. Expression values are double-quoted strings;
/// numbers are plain.
struct ProblemSection {
  expr::Expr p, r, q;
  double g0 = 0.0, v0 = 0.0, g1 = 0.0, v1 = 0.0;
  int grid_n = 1000;
};

struct SimulationSection {
  int n = 0;
  double lambda_fraction = 0.5;
  double t_final = 0.0;
  int record_every = 1;
};

struct InputsSection {
  expr::Expr d0, d1, u, x0;
};

struct EtaSection {
  bool auto_mode = true;
  expr::Expr eta;  // explicit weight when auto_mode is false
  double sigma = 0.0;
};

struct ThermoSection {
  expr::Expr g0_kernel, g1_kernel;
};

struct CertifySection {
  std::vector<std::string> estimates;  // empty = every applicable estimate
  std::optional<double> tolerance;
  std::vector<double> eps_omega = {0.1, 0.5, 1.0, 2.0, 10.0};
  double theta = 0.78539816339744831;  // pi/4
};

struct Scenario {
  std::string path;
  std::optional<ProblemSection> problem;
  std::optional<SimulationSection> simulation;
  std::optional<InputsSection> inputs;
  std::optional<EtaSection> eta;
  std::optional<ThermoSection> thermo;
  std::optional<CertifySection> certify;
};

Scenario load_scenario(const std::string& path);

/// Same grammar, from an in-memory buffer (used by the tests).
Scenario parse_scenario(const std::string& text, const std::string& path);

}  // namespace pdeiss
