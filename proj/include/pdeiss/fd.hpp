#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdeiss/norms.hpp"
#include "pdeiss/spectral.hpp"

namespace pdeiss {

/// Inputs of a simulation run: the problem, boundary disturbances d0(t),
/// d1(t), distributed input u(t,z), initial profile x0(z), grid, the
/// fraction of the CFL bound to use, and the horizon.
struct SimulationConfig {
  Problem prob;
  Grid grid;
  double lambda_fraction = 0.5;  // lambda = fraction * cfl_lambda_max
  double t_final = 1.0;
  expr::Expr d0, d1, u, x0;
  int record_every = 1;
};

struct Trajectory {
  Grid grid;
  double delta = 0.0;  // base time step lambda*h^2
  std::vector<double> times;
  std::vector<Eigen::VectorXd> profiles;
  std::optional<SimulationConfig> config;
  std::vector<std::string> warnings;

  Profile profile_at(int j) const { return Profile{grid, profiles[j]}; }
};

/// CFL bound 1/(1 + 2*max a + max|c|) with a = p/r, c = -q/r sampled on
/// the grid.
double cfl_lambda_max(const Problem& prob, const Grid& grid);

struct BoundaryValues {
  double x0 = 0.0, xN = 0.0;
};

/// Second-order boundary elimination: solves the discretized boundary
/// conditions for the end nodes given the current interior values.
/// Dirichlet ends (v = 0) short-circuit to d/g.
BoundaryValues apply_boundary(const Eigen::VectorXd& state, double d0, double d1,
                              const Problem& prob, double h);

/// One explicit step of size delta = lambda*h^2 starting from a state
/// whose boundary values are consistent at time t; boundary values of
/// the result are consistent at t + delta.
Profile step(const Profile& state, double t, const SimulationConfig& config);

/// Marches ceil(T/delta) steps (the final step is shortened to land on
/// t_final exactly) and records every `record_every`-th profile plus the
/// final one.
Trajectory simulate(const SimulationConfig& config);

/// Marches until the profile stalls: every `chunk` time units the sup
/// distance to the previous checkpoint is compared against `stall_tol`.
/// Returns the settled profile; throws NumericalError past `budget`.
Profile simulate_to_steady_state(const SimulationConfig& config, double stall_tol = 1e-8,
                                 double chunk = 0.05, double budget = 60.0);

/// CSV rows `t,z0,...,zN`; `comment` becomes the leading `# ...` line.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& comment);

}  // namespace pdeiss
