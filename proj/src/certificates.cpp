#include "pdeiss/certificates.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace pdeiss {

namespace {

constexpr double kPi = 3.14159265358979323846;

const SimulationConfig& config_of(const Trajectory& traj) {
  if (!traj.config)
    throw ConfigError("certificates need a trajectory that carries its simulation config");
  return *traj.config;
}

void finalize(CertificateReport& rep, double h) {
  rep.margin.resize(rep.times.size());
  double worst = std::numeric_limits<double>::max();
  double scale = 0.0;
  for (std::size_t j = 0; j < rep.times.size(); ++j) {
    rep.margin[j] = rep.rhs[j] - rep.lhs[j];
    worst = std::min(worst, rep.margin[j]);
    scale = std::max(scale, std::abs(rep.lhs[j]));
  }
  rep.worst_margin = worst;
  rep.tol = 1e-9 + 10.0 * h * scale;
  rep.pass = rep.worst_margin >= -rep.tol;
}

// running max of |d(s)| over the recorded sample times
class RunningMax {
 public:
  double update(double v) { return cur_ = std::max(cur_, std::abs(v)); }
  double value() const { return cur_; }

 private:
  double cur_ = 0.0;
};

double weighted_sup(const Eigen::VectorXd& values, const Eigen::VectorXd& weight) {
  return (values.array().abs() / weight.array()).maxCoeff();
}

void format_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

const char* estimate_name(EstimateId id) {
  switch (id) {
    case EstimateId::InfEta: return "INF_ETA";
    case EstimateId::L2R: return "L2_R";
    case EstimateId::L1W: return "L1_W";
    case EstimateId::HeatL1: return "HEAT_L1";
    case EstimateId::HeatL2: return "HEAT_L2";
    case EstimateId::HeatMaxPrinciple: return "HEAT_MAXPRINCIPLE";
  }
  return "?";
}

CertificateReport certify_linf(const Trajectory& traj, const EtaFunction& eta,
                               const LinfGains& gains) {
  const SimulationConfig& cfg = config_of(traj);
  if (!eta.eta.grid.same_as(traj.grid)) throw ConfigError("eta is sampled on a different grid");

  CertificateReport rep;
  rep.id = EstimateId::InfEta;
  rep.max_form = true;

  const Eigen::VectorXd& w = eta.eta.values;
  const double initial = weighted_sup(traj.profiles[0], w);

  RunningMax d0max, d1max, umax;
  const bool u_time_free = !expr::depends_on(cfg.u, expr::Var::T);
  Eigen::VectorXd u_static;
  if (u_time_free) u_static = sample(traj.grid, cfg.u).values;

  rep.times = traj.times;
  rep.lhs.resize(traj.times.size());
  rep.rhs.resize(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    d0max.update(expr::evaluate(cfg.d0, expr::Bindings::at_t(t)));
    d1max.update(expr::evaluate(cfg.d1, expr::Bindings::at_t(t)));
    if (u_time_free) {
      if (j == 0) umax.update(weighted_sup(u_static, w));
    } else {
      umax.update(weighted_sup(sample_at_time(traj.grid, cfg.u, t).values, w));
    }
    rep.lhs[j] = weighted_sup(traj.profiles[j], w);
    rep.rhs[j] = std::max({std::exp(-eta.sigma * t) * initial, gains.gamma0 * d0max.value(),
                           gains.gamma1 * d1max.value()}) +
                 gains.gamma_u * umax.value();
  }
  finalize(rep, traj.grid.h);
  return rep;
}

CertificateReport certify_l2(const Trajectory& traj, const GainSet& gains,
                             const std::vector<std::pair<double, double>>& eps_omega_grid) {
  const SimulationConfig& cfg = config_of(traj);
  if (eps_omega_grid.empty()) throw ConfigError("empty (eps, omega) grid");
  if (!(gains.lambda1 > 0.0)) throw HypothesisError("L2 certificate needs lambda1 > 0");

  CertificateReport rep;
  rep.id = EstimateId::L2R;
  rep.max_form = false;

  Profile rw = sample(traj.grid, cfg.prob.r);
  const double initial = norm_l2_weighted(traj.profile_at(0), rw);

  RunningMax d0max, d1max, umax;
  const bool u_time_free = !expr::depends_on(cfg.u, expr::Var::T);
  double u_static_sup = 0.0;
  if (u_time_free) u_static_sup = sample(traj.grid, cfg.u).values.cwiseAbs().maxCoeff();

  rep.times = traj.times;
  rep.lhs.resize(traj.times.size());
  rep.rhs.resize(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    d0max.update(expr::evaluate(cfg.d0, expr::Bindings::at_t(t)));
    d1max.update(expr::evaluate(cfg.d1, expr::Bindings::at_t(t)));
    if (u_time_free)
      umax.update(u_static_sup);
    else
      umax.update(sample_at_time(traj.grid, cfg.u, t).values.cwiseAbs().maxCoeff());

    const double e = std::exp(-gains.lambda1 * t);
    const double head = std::sqrt(e / (2.0 - e)) * initial;
    double best = std::numeric_limits<double>::max();
    for (const auto& [eps, om] : eps_omega_grid) {
      const double rhs = head +
                         gains.c0 * std::sqrt((1.0 + 1.0 / eps) * (1.0 + om)) * d0max.value() +
                         gains.c1 * std::sqrt((1.0 + eps) * (1.0 + om)) * d1max.value() +
                         gains.c_tilde * std::sqrt(1.0 + 1.0 / om) * umax.value();
      best = std::min(best, rhs);
    }
    rep.lhs[j] = norm_l2_weighted(traj.profile_at(j), rw);
    rep.rhs[j] = best;
  }
  finalize(rep, traj.grid.h);
  return rep;
}

CertificateReport certify_l1(const Trajectory& traj, double a, double b, double k) {
  const SimulationConfig& cfg = config_of(traj);
  if (!cfg.prob.dirichlet_left() || !cfg.prob.dirichlet_right())
    throw ConfigError("the weighted-L1 estimate applies to Dirichlet scenarios only");
  const L1Gains g = gains_l1(a, b, k);

  CertificateReport rep;
  rep.id = EstimateId::L1W;
  rep.max_form = false;

  Profile w;
  w.grid = traj.grid;
  w.values.resize(traj.grid.node_count);
  for (int i = 0; i < traj.grid.node_count; ++i) {
    const double z = traj.grid.z(i);
    w.values[i] = std::exp(b * z / (2.0 * a)) * std::sin(kPi * z);
  }
  const double initial = norm_l1_weighted(traj.profile_at(0), w);

  RunningMax d0max, d1max, umax;
  const bool u_time_free = !expr::depends_on(cfg.u, expr::Var::T);
  double u_static_sup = 0.0;
  if (u_time_free) {
    const Eigen::VectorXd uv = sample(traj.grid, cfg.u).values;
    u_static_sup = (uv.array().abs() * w.values.array()).maxCoeff();
  }

  rep.times = traj.times;
  rep.lhs.resize(traj.times.size());
  rep.rhs.resize(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    // boundary disturbances in the Dirichlet sense x(t,0)=d0, x(t,1)=d1
    d0max.update(expr::evaluate(cfg.d0, expr::Bindings::at_t(t)) / cfg.prob.g0);
    d1max.update(expr::evaluate(cfg.d1, expr::Bindings::at_t(t)) / cfg.prob.g1);
    if (u_time_free) {
      umax.update(u_static_sup);
    } else {
      const Eigen::VectorXd uv = sample_at_time(traj.grid, cfg.u, t).values;
      umax.update((uv.array().abs() * w.values.array()).maxCoeff());
    }
    rep.lhs[j] = norm_l1_weighted(traj.profile_at(j), w);
    rep.rhs[j] = std::exp(-g.rate * t) * initial + g.boundary0 * d0max.value() +
                 g.boundary1 * d1max.value() + g.distributed * umax.value();
  }
  finalize(rep, traj.grid.h);
  return rep;
}

namespace {

CertificateReport heat_l1(const Trajectory& traj, double a) {
  CertificateReport rep = certify_l1(traj, a, 0.0, 0.0);
  rep.id = EstimateId::HeatL1;
  return rep;
}

CertificateReport heat_l2(const Trajectory& traj, double a) {
  const SimulationConfig& cfg = config_of(traj);
  CertificateReport rep;
  rep.id = EstimateId::HeatL2;
  rep.max_form = false;

  Profile ones;
  ones.grid = traj.grid;
  ones.values = Eigen::VectorXd::Ones(traj.grid.node_count);
  const double initial = norm_l2_weighted(traj.profile_at(0), ones);

  RunningMax d0max, d1max;
  rep.times = traj.times;
  rep.lhs.resize(traj.times.size());
  rep.rhs.resize(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    d0max.update(expr::evaluate(cfg.d0, expr::Bindings::at_t(t)) / cfg.prob.g0);
    d1max.update(expr::evaluate(cfg.d1, expr::Bindings::at_t(t)) / cfg.prob.g1);
    const double e = std::exp(-a * kPi * kPi * t);
    rep.lhs[j] = norm_l2_weighted(traj.profile_at(j), ones);
    rep.rhs[j] = std::sqrt(e / (2.0 - e)) * initial +
                 (d0max.value() + d1max.value()) / std::sqrt(3.0);
  }
  finalize(rep, traj.grid.h);
  return rep;
}

// the weighted maximum principle at a given theta; theta = pi/2 is the
// classical bound (weight 1, zero rate)
CertificateReport heat_maxprinciple(const Trajectory& traj, double a, double theta) {
  const SimulationConfig& cfg = config_of(traj);
  CertificateReport rep;
  rep.id = EstimateId::HeatMaxPrinciple;
  rep.max_form = true;
  {
    std::string d = "theta=";
    format_double(d, theta);
    rep.detail = d;
  }

  const double phi = kPi - 2.0 * theta;
  const double rate = a * phi * phi;
  Eigen::VectorXd w(traj.grid.node_count);
  for (int i = 0; i < traj.grid.node_count; ++i)
    w[i] = std::sin(theta + traj.grid.z(i) * phi);
  const double initial = weighted_sup(traj.profiles[0], w);
  const double sin_theta = std::sin(theta);

  RunningMax d0max, d1max;
  rep.times = traj.times;
  rep.lhs.resize(traj.times.size());
  rep.rhs.resize(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    d0max.update(expr::evaluate(cfg.d0, expr::Bindings::at_t(t)) / cfg.prob.g0);
    d1max.update(expr::evaluate(cfg.d1, expr::Bindings::at_t(t)) / cfg.prob.g1);
    rep.lhs[j] = weighted_sup(traj.profiles[j], w);
    rep.rhs[j] = std::max({std::exp(-rate * t) * initial, d0max.value() / sin_theta,
                           d1max.value() / sin_theta});
  }
  finalize(rep, traj.grid.h);
  return rep;
}

// the sqrt(2) specialization of the weighted maximum principle
CertificateReport heat_sqrt2(const Trajectory& traj, double a) {
  const SimulationConfig& cfg = config_of(traj);
  CertificateReport rep;
  rep.id = EstimateId::HeatMaxPrinciple;
  rep.detail = "sqrt2";
  rep.max_form = true;

  const double rate = a * kPi * kPi / 4.0;
  const double initial = traj.profiles[0].cwiseAbs().maxCoeff();

  RunningMax d0max, d1max;
  rep.times = traj.times;
  rep.lhs.resize(traj.times.size());
  rep.rhs.resize(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    d0max.update(expr::evaluate(cfg.d0, expr::Bindings::at_t(t)) / cfg.prob.g0);
    d1max.update(expr::evaluate(cfg.d1, expr::Bindings::at_t(t)) / cfg.prob.g1);
    rep.lhs[j] = traj.profiles[j].cwiseAbs().maxCoeff();
    rep.rhs[j] = std::sqrt(2.0) * std::max({std::exp(-rate * t) * initial, d0max.value(),
                                            d1max.value()});
  }
  finalize(rep, traj.grid.h);
  return rep;
}

}  // namespace

std::vector<CertificateReport> certify_heat_suite(const Trajectory& traj, double a, double theta) {
  const SimulationConfig& cfg = config_of(traj);
  if (!(theta > 0.0) || !(theta < kPi / 2.0))
    throw ConfigError("heat suite needs theta strictly inside (0, pi/2)");
  if (!cfg.prob.dirichlet_left() || !cfg.prob.dirichlet_right())
    throw ConfigError("heat suite applies to Dirichlet scenarios only");

  std::vector<CertificateReport> out;
  out.push_back(heat_l1(traj, a));
  out.push_back(heat_l2(traj, a));
  out.push_back(heat_maxprinciple(traj, a, theta));
  out.push_back(heat_sqrt2(traj, a));
  // theta -> pi/2 limit: classical maximum principle, weight 1, zero rate
  CertificateReport classical = heat_maxprinciple(traj, a, kPi / 2.0);
  classical.detail = "classical";
  out.push_back(std::move(classical));
  return out;
}

double sharpness_gap(const Problem& prob, SharpNorm kind, double magnitude,
                     const std::optional<EtaFunction>& eta, int grid_n) {
  SimulationConfig cfg;
  cfg.prob = prob;
  cfg.prob.grid_n = grid_n;
  cfg.grid = Grid::uniform(grid_n);
  cfg.lambda_fraction = 0.9;
  cfg.d0 = expr::number(magnitude);
  cfg.d1 = expr::number(0.0);
  cfg.u = expr::number(0.0);
  cfg.x0 = expr::number(0.0);

  cfg.t_final = 1.0;  // unused by the steady-state march
  Profile sp = simulate_to_steady_state(cfg);
  switch (kind) {
    case SharpNorm::L1W: {
      // heat-family weight; requires the constant-coefficient form
      const double a = prob.pz(0.0) / prob.rz(0.0);
      const L1Gains g = gains_l1(a, 0.0, 0.0);
      Profile w;
      w.grid = cfg.grid;
      w.values.resize(cfg.grid.node_count);
      for (int i = 0; i < cfg.grid.node_count; ++i)
        w.values[i] = std::sin(kPi * cfg.grid.z(i));
      return g.boundary0 - norm_l1_weighted(sp, w);
    }
    case SharpNorm::L2R: {
      const L2BvpGains g = gains_l2_bvp(prob);
      Profile rw = sample(cfg.grid, prob.r);
      return g.c0 - norm_l2_weighted(sp, rw);
    }
    case SharpNorm::InfEta: {
      if (!eta) throw ConfigError("sup-norm sharpness needs an eta function");
      if (!eta->eta.grid.same_as(cfg.grid))
        throw ConfigError("eta grid does not match the sharpness grid");
      const LinfGains g = gains_linf(*eta, prob);
      return g.gamma0 - norm_inf_weighted(sp, eta->eta);
    }
  }
  throw ConfigError("unknown norm kind");
}

void write_certificate_csv(std::ostream& os, const CertificateReport& rep,
                           const std::string& comment) {
  os << "# " << comment << "\n";
  os << "t,lhs,rhs,margin\n";
  std::string line;
  for (std::size_t j = 0; j < rep.times.size(); ++j) {
    line.clear();
    format_double(line, rep.times[j]);
    line += ',';
    format_double(line, rep.lhs[j]);
    line += ',';
    format_double(line, rep.rhs[j]);
    line += ',';
    format_double(line, rep.margin[j]);
    line += '\n';
    os << line;
  }
  os << "# worst_margin=" << rep.worst_margin << " tol=" << rep.tol
     << " verdict=" << (rep.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace pdeiss
