#include "pdeiss/thermo.hpp"

#include <cmath>
#include <limits>

namespace pdeiss {

namespace {

constexpr double kPi = 3.14159265358979323846;

double trapezoid_values(const Eigen::VectorXd& v, double h) {
  const int n = static_cast<int>(v.size());
  return h * (0.5 * (v[0] + v[n - 1]) + v.segment(1, n - 2).sum());
}

}  // namespace

const char* condition_name(SmallGainCondition c) {
  switch (c) {
    case SmallGainCondition::Sup32: return "SUP_32";
    case SmallGainCondition::L2_34: return "L2_34";
    case SmallGainCondition::L1w36: return "L1W_36";
    case SmallGainCondition::Day38: return "DAY_38";
  }
  return "?";
}

NonlocalKernel NonlocalKernel::make(expr::Expr g0, expr::Expr g1, const Grid& grid) {
  NonlocalKernel k;
  k.g0 = std::move(g0);
  k.g1 = std::move(g1);
  k.g0_profile = sample(grid, k.g0);
  k.g1_profile = sample(grid, k.g1);
  return k;
}

SmallGainVerdict check_smallgain_sup(const NonlocalKernel& kernel) {
  const Grid& grid = kernel.g0_profile.grid;
  const int n = grid.node_count;

  // sin(theta + z*phi) = sin(theta) cos(z*phi) + cos(theta) sin(z*phi),
  // so each phi needs only four kernel moments and the theta sweep is
  // O(1) per lattice point.
  const Eigen::ArrayXd a0 = kernel.g0_profile.values.array().abs();
  const Eigen::ArrayXd a1 = kernel.g1_profile.values.array().abs();
  Eigen::ArrayXd zs(n);
  for (int i = 0; i < n; ++i) zs[i] = grid.z(i);

  constexpr int kLattice = 200;
  constexpr double kBorder = 1e-3;

  auto joint_margin = [&](double theta, double phi) {
    const Eigen::ArrayXd c = (zs * phi).cos();
    const Eigen::ArrayXd s = (zs * phi).sin();
    const double i0c = trapezoid_values((a0 * c).matrix(), grid.h);
    const double i0s = trapezoid_values((a0 * s).matrix(), grid.h);
    const double i1c = trapezoid_values((a1 * c).matrix(), grid.h);
    const double i1s = trapezoid_values((a1 * s).matrix(), grid.h);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double m0 = st - (st * i0c + ct * i0s);
    const double m1 = std::sin(theta + phi) - (st * i1c + ct * i1s);
    return std::min(m0, m1);
  };

  double best = -std::numeric_limits<double>::max();
  double best_theta = 0.0, best_phi = 0.0;
  for (int j = 0; j < kLattice; ++j) {
    const double phi = kBorder + (kPi - 2.0 * kBorder) * j / (kLattice - 1);
    const Eigen::ArrayXd c = (zs * phi).cos();
    const Eigen::ArrayXd s = (zs * phi).sin();
    const double i0c = trapezoid_values((a0 * c).matrix(), grid.h);
    const double i0s = trapezoid_values((a0 * s).matrix(), grid.h);
    const double i1c = trapezoid_values((a1 * c).matrix(), grid.h);
    const double i1s = trapezoid_values((a1 * s).matrix(), grid.h);
    for (int i = 0; i < kLattice; ++i) {
      const double theta = kBorder + (kPi - phi - 2.0 * kBorder) * i / (kLattice - 1);
      if (theta >= kPi - phi) break;
      const double st = std::sin(theta), ct = std::cos(theta);
      const double m0 = st - (st * i0c + ct * i0s);
      const double m1 = std::sin(theta + phi) - (st * i1c + ct * i1s);
      const double m = std::min(m0, m1);
      if (m > best) {
        best = m;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  // one local refinement around the best cell
  const double dphi = (kPi - 2.0 * kBorder) / (kLattice - 1);
  const double dtheta = (kPi - best_phi) / (kLattice - 1);
  for (int j = -10; j <= 10; ++j) {
    const double phi = best_phi + j * dphi / 10.0;
    if (phi <= 0.0 || phi >= kPi) continue;
    for (int i = -10; i <= 10; ++i) {
      const double theta = best_theta + i * dtheta / 10.0;
      if (theta <= 0.0 || theta >= kPi - phi) continue;
      const double m = joint_margin(theta, phi);
      if (m > best) {
        best = m;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  SmallGainVerdict v;
  v.condition = SmallGainCondition::Sup32;
  v.margin = best;
  v.holds = best > 0.0;
  v.witness = std::make_pair(best_theta, best_phi);
  return v;
}

SmallGainVerdict check_smallgain_l2(const NonlocalKernel& kernel) {
  const double h = kernel.g0_profile.grid.h;
  const double n0 =
      std::sqrt(trapezoid_values(kernel.g0_profile.values.array().square().matrix(), h));
  const double n1 =
      std::sqrt(trapezoid_values(kernel.g1_profile.values.array().square().matrix(), h));
  SmallGainVerdict v;
  v.condition = SmallGainCondition::L2_34;
  v.margin = std::sqrt(3.0) - (n0 + n1);
  v.holds = v.margin > 0.0;
  return v;
}

SmallGainVerdict check_smallgain_l1w(const NonlocalKernel& kernel) {
  const Grid& grid = kernel.g0_profile.grid;
  const int N = grid.segments();
  const auto endpoint = [&](const Profile& p) {
    return std::max(std::abs(p.values[0]), std::abs(p.values[N]));
  };
  if (endpoint(kernel.g0_profile) > 1e-12 || endpoint(kernel.g1_profile) > 1e-12)
    throw ConfigError("condition (sup |g|/sin) needs kernels vanishing at both endpoints");

  auto sup_ratio = [&](const Profile& p, const expr::Expr& g) {
    double sup = 0.0;
    for (int i = 1; i < N; ++i)
      sup = std::max(sup, std::abs(p.values[i]) / std::sin(kPi * grid.z(i)));
    const expr::Expr dg = expr::differentiate(g, expr::Var::Z);
    sup = std::max(sup, std::abs(expr::evaluate(dg, expr::Bindings::at_z(0.0))) / kPi);
    sup = std::max(sup, std::abs(expr::evaluate(dg, expr::Bindings::at_z(1.0))) / kPi);
    return sup;
  };

  SmallGainVerdict v;
  v.condition = SmallGainCondition::L1w36;
  v.margin = kPi - (sup_ratio(kernel.g0_profile, kernel.g0) +
                    sup_ratio(kernel.g1_profile, kernel.g1));
  v.holds = v.margin > 0.0;
  return v;
}

SmallGainVerdict check_day(const NonlocalKernel& kernel) {
  const double h = kernel.g0_profile.grid.h;
  const double i0 = trapezoid_values(kernel.g0_profile.values.cwiseAbs(), h);
  const double i1 = trapezoid_values(kernel.g1_profile.values.cwiseAbs(), h);
  SmallGainVerdict v;
  v.condition = SmallGainCondition::Day38;
  v.margin = 1.0 - std::max(i0, i1);
  v.holds = v.margin > 0.0;
  return v;
}

Trajectory simulate_nonlocal(const NonlocalKernel& kernel, double a, const expr::Expr& x0,
                             const Grid& grid, double lambda_fraction, double t_final,
                             int record_every) {
  if (a <= 0.0) throw ConfigError("diffusion coefficient a must be positive");
  if (lambda_fraction <= 0.0 || lambda_fraction >= 1.0)
    throw ConfigError("lambda_fraction must lie strictly inside (0,1)");
  if (!kernel.g0_profile.grid.same_as(grid))
    throw ConfigError("kernel profiles live on a different grid");

  const int N = grid.segments();
  const double h = grid.h;
  const double lambda = lambda_fraction / (1.0 + 2.0 * a);
  const double delta = lambda * h * h;

  const Eigen::VectorXd& g0 = kernel.g0_profile.values;
  const Eigen::VectorXd& g1 = kernel.g1_profile.values;
  const double w = 0.5 * h;  // trapezoid endpoint weight

  // x0 = Q0 + w (g0(0) x0 + g0(1) xN),  xN = Q1 + w (g1(0) x0 + g1(1) xN)
  const double m00 = 1.0 - w * g0[0], m01 = -w * g0[N];
  const double m10 = -w * g1[0], m11 = 1.0 - w * g1[N];
  const double det = m00 * m11 - m01 * m10;
  if (std::abs(det) < 1e-12)
    throw NumericalError("nonlocal closure: singular 2x2 endpoint system (kernel endpoint mass "
                         "too large for the grid)");

  auto close_boundary = [&](Eigen::VectorXd& x) {
    double q0 = 0.0, q1 = 0.0;
    for (int i = 1; i < N; ++i) {
      q0 += g0[i] * x[i];
      q1 += g1[i] * x[i];
    }
    q0 *= h;
    q1 *= h;
    x[0] = (m11 * q0 - m01 * q1) / det;
    x[N] = (m00 * q1 - m10 * q0) / det;
  };

  Trajectory traj;
  traj.grid = grid;
  traj.delta = delta;

  Eigen::VectorXd cur = sample(grid, x0).values;
  {
    const double i0 = trapezoid_values(g0.cwiseProduct(cur), h);
    const double i1 = trapezoid_values(g1.cwiseProduct(cur), h);
    const double scale = 1.0 + cur.cwiseAbs().maxCoeff();
    if (std::abs(cur[0] - i0) > 1e-6 * scale || std::abs(cur[N] - i1) > 1e-6 * scale) {
      // shift by alpha + beta z to restore both constraints
      Eigen::VectorXd zs(N + 1);
      for (int i = 0; i <= N; ++i) zs[i] = grid.z(i);
      const double I0 = trapezoid_values(g0, h), J0 = trapezoid_values(g0.cwiseProduct(zs), h);
      const double I1 = trapezoid_values(g1, h), J1 = trapezoid_values(g1.cwiseProduct(zs), h);
      const double a00 = 1.0 - I0, a01 = -J0;
      const double a10 = 1.0 - I1, a11 = 1.0 - J1;
      const double d = a00 * a11 - a01 * a10;
      if (std::abs(d) < 1e-12) {
        traj.warnings.push_back("x0 incompatible with the nonlocal constraints; affine "
                                "projection is singular, data left as-is");
      } else {
        const double r0 = i0 - cur[0];
        const double r1 = i1 - cur[N];
        const double alpha = (r0 * a11 - a01 * r1) / d;
        const double beta = (a00 * r1 - r0 * a10) / d;
        cur += alpha * Eigen::VectorXd::Ones(N + 1) + beta * zs;
        traj.warnings.push_back("x0 projected onto the compatibility set (affine shift alpha=" +
                                std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
      }
    }
    close_boundary(cur);
  }

  traj.times.push_back(0.0);
  traj.profiles.push_back(cur);

  const double center = 1.0 - 2.0 * lambda * a;
  const double side = lambda * a;
  Eigen::VectorXd next(N + 1);
  double t = 0.0;
  long long j = 0;
  while (t < t_final) {
    const double remaining = t_final - t;
    double c = center, s = side;
    bool last = false;
    if (remaining <= delta) {  // land on t_final exactly
      last = true;
      const double lam = remaining / (h * h);
      c = 1.0 - 2.0 * lam * a;
      s = lam * a;
    }
    for (int i = 1; i < N; ++i) next[i] = c * cur[i] + s * (cur[i + 1] + cur[i - 1]);
    close_boundary(next);
    if (!next.allFinite())
      throw NumericalError("nonlocal simulation diverged at step " + std::to_string(j));
    cur.swap(next);
    ++j;
    t = last ? t_final : j * delta;
    if (j % record_every == 0 || last) {
      traj.times.push_back(t);
      traj.profiles.push_back(cur);
    }
  }
  return traj;
}

DecayFit fit_decay(const Trajectory& traj, TrajNorm norm) {
  const Grid& grid = traj.grid;
  Profile weight;
  weight.grid = grid;
  weight.values.resize(grid.node_count);
  if (norm == TrajNorm::L1w)
    for (int i = 0; i < grid.node_count; ++i) weight.values[i] = std::sin(kPi * grid.z(i));
  else
    weight.values.setOnes();

  auto norm_of = [&](const Eigen::VectorXd& v) {
    switch (norm) {
      case TrajNorm::Inf: return v.cwiseAbs().maxCoeff();
      case TrajNorm::L2: return norm_l2_weighted(Profile{grid, v}, weight);
      case TrajNorm::L1w: return norm_l1_weighted(Profile{grid, v}, weight);
    }
    return 0.0;
  };

  const std::size_t count = traj.times.size();
  std::vector<double> norms(count);
  for (std::size_t j = 0; j < count; ++j) norms[j] = norm_of(traj.profiles[j]);
  if (!(norms[0] > 0.0)) throw ConfigError("decay fit needs a nonzero initial norm");

  const double t_mid = traj.times.back() / 2.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long long m = 0;
  DecayFit fit;
  for (std::size_t j = 0; j < count; ++j) {
    if (traj.times[j] < t_mid) continue;
    if (norms[j] == 0.0) {
      fit.hit_zero = true;
      fit.delta = std::numeric_limits<double>::infinity();
      fit.M = 1.0;
      return fit;
    }
    const double x = traj.times[j], y = std::log(norms[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw ConfigError("decay fit needs at least two samples in the fit window");
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw NumericalError("decay fit: degenerate time samples");
  const double slope = (m * sxy - sx * sy) / denom;
  fit.delta = -slope;

  double big = 0.0;
  for (std::size_t j = 0; j < count; ++j)
    big = std::max(big, norms[j] * std::exp(fit.delta * traj.times[j]));
  fit.M = big / norms[0];
  return fit;
}

}  // namespace pdeiss
