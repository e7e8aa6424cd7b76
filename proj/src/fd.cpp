#include "pdeiss/fd.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace pdeiss {

namespace {

struct Coefficients {
  Eigen::VectorXd a, b, c;  // a = p/r, b = p'/r, c = -q/r at the nodes
};

Coefficients sample_coefficients(const Problem& prob, const Grid& grid) {
  Coefficients co;
  const int n = grid.node_count;
  co.a.resize(n);
  co.b.resize(n);
  co.c.resize(n);
  for (int i = 0; i < n; ++i) {
    const double z = grid.z(i);
    const double r = prob.rz(z);
    co.a[i] = prob.pz(z) / r;
    co.b[i] = expr::evaluate(prob.p_prime, expr::Bindings::at_z(z)) / r;
    co.c[i] = -prob.qz(z) / r;
  }
  return co;
}

struct StepWorkspace {
  Eigen::VectorXd center, east, west;  // interior update weights, nodes 1..N-1
  double h = 0.0;
  double lambda = 0.0;

  void build(const Coefficients& co, const Problem& prob, const Grid& grid, double lam) {
    const int N = grid.segments();
    h = grid.h;
    lambda = lam;
    center.resize(N + 1);
    east.resize(N + 1);
    west.resize(N + 1);
    for (int i = 1; i < N; ++i) {
      center[i] = 1.0 - 2.0 * lam * co.a[i] + lam * h * h * co.c[i];
      east[i] = lam * (co.a[i] + 0.5 * h * co.b[i]);
      west[i] = lam * (co.a[i] - 0.5 * h * co.b[i]);
    }
    check_positivity(prob, grid);
  }

  // coefficient positivity of the interior update and the two
  // boundary-folded rows; violated only when lambda is too large or the
  // grid too coarse for the first-derivative term
  void check_positivity(const Problem& prob, const Grid& grid) const {
    const int N = grid.segments();
    for (int i = 1; i < N; ++i) {
      if (center[i] <= 0.0)
        throw ConfigError("CFL violation: interior update coefficient nonpositive at node " +
                          std::to_string(i));
      if (east[i] < 0.0 || west[i] < 0.0)
        throw ConfigError("grid too coarse: |b|h/2 exceeds a at node " + std::to_string(i));
    }
    if (!prob.dirichlet_left()) {
      const double den = 3.0 * prob.v0 - 2.0 * h * prob.g0;
      if (den <= 0.0) throw ConfigError("grid too coarse for the left boundary constants");
      if (center[1] + west[1] * 4.0 * prob.v0 / den <= 0.0)
        throw ConfigError("CFL violation in the left boundary-folded row");
    }
    if (!prob.dirichlet_right()) {
      const double den = 3.0 * prob.v1 + 2.0 * h * prob.g1;
      if (den <= 0.0) throw ConfigError("grid too coarse for the right boundary constants");
      if (center[N - 1] + east[N - 1] * 4.0 * prob.v1 / den <= 0.0)
        throw ConfigError("CFL violation in the right boundary-folded row");
    }
  }
};

void format_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

double cfl_lambda_max(const Problem& prob, const Grid& grid) {
  double a_max = 0.0, c_max = 0.0;
  for (int i = 0; i < grid.node_count; ++i) {
    const double z = grid.z(i);
    const double r = prob.rz(z);
    a_max = std::max(a_max, prob.pz(z) / r);
    c_max = std::max(c_max, std::abs(prob.qz(z) / r));
  }
  return 1.0 / (1.0 + 2.0 * a_max + c_max);
}

BoundaryValues apply_boundary(const Eigen::VectorXd& state, double d0, double d1,
                              const Problem& prob, double h) {
  const int N = static_cast<int>(state.size()) - 1;
  BoundaryValues bv;
  if (prob.dirichlet_left()) {
    if (prob.g0 == 0.0) throw ConfigError("left boundary has g0 = v0 = 0");
    bv.x0 = d0 / prob.g0;
  } else {
    const double den = 3.0 * prob.v0 - 2.0 * h * prob.g0;
    if (den <= 0.0) throw ConfigError("grid too coarse for the left boundary constants");
    bv.x0 = (-2.0 * h * d0 + 4.0 * prob.v0 * state[1] - prob.v0 * state[2]) / den;
  }
  if (prob.dirichlet_right()) {
    if (prob.g1 == 0.0) throw ConfigError("right boundary has g1 = v1 = 0");
    bv.xN = d1 / prob.g1;
  } else {
    const double den = 3.0 * prob.v1 + 2.0 * h * prob.g1;
    if (den <= 0.0) throw ConfigError("grid too coarse for the right boundary constants");
    bv.xN = (2.0 * h * d1 + 4.0 * prob.v1 * state[N - 1] - prob.v1 * state[N - 2]) / den;
  }
  return bv;
}

namespace {

// interior update (explicit Euler with the three-point stencil), then
// boundary elimination at the new time level
void step_into(const Eigen::VectorXd& cur, double t, double delta, const StepWorkspace& ws,
               const SimulationConfig& cfg, const Eigen::VectorXd* u_static,
               Eigen::VectorXd& next) {
  const int N = cur.size() - 1;
  const double lam_h2 = ws.lambda * ws.h * ws.h;
  for (int i = 1; i < N; ++i) {
    double ui;
    if (u_static)
      ui = (*u_static)[i];
    else
      ui = expr::evaluate(cfg.u, expr::Bindings::at(i * ws.h, t));
    next[i] = ws.center[i] * cur[i] + ws.east[i] * cur[i + 1] + ws.west[i] * cur[i - 1] +
              lam_h2 * ui;
  }
  const double tn = t + delta;
  const double d0 = expr::evaluate(cfg.d0, expr::Bindings::at_t(tn));
  const double d1 = expr::evaluate(cfg.d1, expr::Bindings::at_t(tn));
  const BoundaryValues bv = apply_boundary(next, d0, d1, cfg.prob, ws.h);
  next[0] = bv.x0;
  next[N] = bv.xN;
}

}  // namespace

Profile step(const Profile& state, double t, const SimulationConfig& config) {
  const Coefficients co = sample_coefficients(config.prob, config.grid);
  const double lambda = config.lambda_fraction * cfl_lambda_max(config.prob, config.grid);
  StepWorkspace ws;
  ws.build(co, config.prob, config.grid, lambda);
  const double delta = lambda * config.grid.h * config.grid.h;

  Profile out;
  out.grid = state.grid;
  out.values.resize(state.values.size());
  const bool u_time_free = !expr::depends_on(config.u, expr::Var::T);
  Eigen::VectorXd u_static;
  if (u_time_free) u_static = sample(config.grid, config.u).values;
  step_into(state.values, t, delta, ws, config, u_time_free ? &u_static : nullptr, out.values);
  if (!out.values.allFinite()) throw NumericalError("step produced non-finite values");
  return out;
}

Trajectory simulate(const SimulationConfig& config) {
  if (config.lambda_fraction <= 0.0 || config.lambda_fraction >= 1.0)
    throw ConfigError("lambda_fraction must lie strictly inside (0,1)");
  if (config.t_final <= 0.0) throw ConfigError("t_final must be positive");
  if (config.record_every < 1) throw ConfigError("record_every must be at least 1");

  const Grid& grid = config.grid;
  const int N = grid.segments();
  const double lambda = config.lambda_fraction * cfl_lambda_max(config.prob, grid);
  const double delta = lambda * grid.h * grid.h;

  const Coefficients co = sample_coefficients(config.prob, grid);
  StepWorkspace ws;
  ws.build(co, config.prob, grid, lambda);

  Trajectory traj;
  traj.grid = grid;
  traj.delta = delta;
  traj.config = config;

  // initial profile and compatibility of x0 with the boundary data at t=0
  Eigen::VectorXd cur = sample(grid, config.x0).values;
  {
    const double d0 = expr::evaluate(config.d0, expr::Bindings::at_t(0.0));
    const double d1 = expr::evaluate(config.d1, expr::Bindings::at_t(0.0));
    const expr::Expr dx0 = expr::differentiate(config.x0, expr::Var::Z);
    const double left = config.prob.g0 * cur[0] +
                        config.prob.v0 * expr::evaluate(dx0, expr::Bindings::at_z(0.0));
    const double right = config.prob.g1 * cur[N] +
                         config.prob.v1 * expr::evaluate(dx0, expr::Bindings::at_z(1.0));
    const double scale = 1.0 + cur.cwiseAbs().maxCoeff();
    if (std::abs(left - d0) > 1e-6 * scale)
      traj.warnings.push_back("x0 incompatible with d0 at t=0 (mismatch " +
                              std::to_string(left - d0) + ")");
    if (std::abs(right - d1) > 1e-6 * scale)
      traj.warnings.push_back("x0 incompatible with d1 at t=0 (mismatch " +
                              std::to_string(right - d1) + ")");
    const BoundaryValues bv = apply_boundary(cur, d0, d1, config.prob, grid.h);
    cur[0] = bv.x0;
    cur[N] = bv.xN;
  }

  const bool u_time_free = !expr::depends_on(config.u, expr::Var::T);
  Eigen::VectorXd u_static;
  if (u_time_free) u_static = sample(grid, config.u).values;
  const Eigen::VectorXd* u_ptr = u_time_free ? &u_static : nullptr;

  const long long steps = static_cast<long long>(std::ceil(config.t_final / delta - 1e-12));
  traj.times.reserve(steps / config.record_every + 2);
  traj.profiles.reserve(steps / config.record_every + 2);
  traj.times.push_back(0.0);
  traj.profiles.push_back(cur);

  Eigen::VectorXd next(N + 1);
  StepWorkspace ws_short;  // rebuilt if the last step is shortened
  double t = 0.0;
  long long j = 0;
  while (t < config.t_final) {
    const double remaining = config.t_final - t;
    const StepWorkspace* w = &ws;
    double dt = delta;
    bool last = false;
    if (remaining <= delta) {  // land on t_final exactly
      dt = remaining;
      last = true;
      if (remaining != delta) {
        ws_short.build(co, config.prob, grid, dt / (grid.h * grid.h));
        w = &ws_short;
      }
    }
    step_into(cur, t, dt, *w, config, u_ptr, next);
    if (!next.allFinite())
      throw NumericalError("simulation diverged at step " + std::to_string(j));
    cur.swap(next);
    ++j;
    t = last ? config.t_final : j * delta;
    if (j % config.record_every == 0 || last) {
      traj.times.push_back(t);
      traj.profiles.push_back(cur);
    }
  }
  return traj;
}

Profile simulate_to_steady_state(const SimulationConfig& config, double stall_tol, double chunk,
                                 double budget) {
  const Grid& grid = config.grid;
  const int N = grid.segments();
  const double lambda = config.lambda_fraction * cfl_lambda_max(config.prob, grid);
  const double delta = lambda * grid.h * grid.h;
  const Coefficients co = sample_coefficients(config.prob, grid);
  StepWorkspace ws;
  ws.build(co, config.prob, grid, lambda);

  Eigen::VectorXd cur = sample(grid, config.x0).values;
  {
    const double d0 = expr::evaluate(config.d0, expr::Bindings::at_t(0.0));
    const double d1 = expr::evaluate(config.d1, expr::Bindings::at_t(0.0));
    const BoundaryValues bv = apply_boundary(cur, d0, d1, config.prob, grid.h);
    cur[0] = bv.x0;
    cur[N] = bv.xN;
  }
  const bool u_time_free = !expr::depends_on(config.u, expr::Var::T);
  Eigen::VectorXd u_static;
  if (u_time_free) u_static = sample(grid, config.u).values;
  const Eigen::VectorXd* u_ptr = u_time_free ? &u_static : nullptr;

  const long long steps_per_chunk = std::max<long long>(1, std::llround(chunk / delta));
  Eigen::VectorXd next(N + 1), checkpoint = cur;
  double t = 0.0;
  while (t < budget) {
    for (long long s = 0; s < steps_per_chunk; ++s) {
      step_into(cur, t, delta, ws, config, u_ptr, next);
      cur.swap(next);
      t += delta;
    }
    if (!cur.allFinite()) throw NumericalError("steady-state march diverged");
    if ((cur - checkpoint).cwiseAbs().maxCoeff() <= stall_tol) return Profile{grid, cur};
    checkpoint = cur;
  }
  throw NumericalError("no steady state within the step budget");
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& comment) {
  std::string line = "# " + comment + "\n";
  os << line;
  line = "t";
  for (int i = 0; i < traj.grid.node_count; ++i) {
    line += ",z";
    line += std::to_string(i);
  }
  os << line << "\n";
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    line.clear();
    format_double(line, traj.times[j]);
    for (int i = 0; i < traj.grid.node_count; ++i) {
      line += ',';
      format_double(line, traj.profiles[j][i]);
    }
    line += '\n';
    os << line;
  }
}

}  // namespace pdeiss
