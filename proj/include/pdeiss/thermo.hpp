#pragma once

#include <optional>
#include <utility>

#include "pdeiss/fd.hpp"

namespace pdeiss {

/// Nonlocal boundary kernels of x(t,0) = int g0 x and x(t,1) = int g1 x.
struct NonlocalKernel {
  expr::Expr g0, g1;
  Profile g0_profile, g1_profile;

  static NonlocalKernel make(expr::Expr g0, expr::Expr g1, const Grid& grid);
};

enum class SmallGainCondition { Sup32, L2_34, L1w36, Day38 };

const char* condition_name(SmallGainCondition c);

struct SmallGainVerdict {
  SmallGainCondition condition = SmallGainCondition::Day38;
  bool holds = false;
  double margin = 0.0;
  std::optional<std::pair<double, double>> witness;  // (theta, phi) for Sup32
};

/// Grid search of theta in (0, pi - phi), phi in (0, pi) on a 200x200
/// lattice (1e-3 border), one local refinement around the best joint
/// margin; holds iff a lattice point certifies both inequalities.
SmallGainVerdict check_smallgain_sup(const NonlocalKernel& kernel);

/// ||g0||_2 + ||g1||_2 < sqrt(3).
SmallGainVerdict check_smallgain_l2(const NonlocalKernel& kernel);

/// sup |g0|/sin(pi z) + sup |g1|/sin(pi z) < pi, with the endpoint limits
/// |g'(0)|/pi and |g'(1)|/pi supplied by symbolic differentiation.
/// Requires the kernels to vanish at both endpoints.
SmallGainVerdict check_smallgain_l1w(const NonlocalKernel& kernel);

/// Day's conditions int |g0| < 1 and int |g1| < 1.
SmallGainVerdict check_day(const NonlocalKernel& kernel);

/// Explicit heat stepper under the nonlocal boundary conditions; each
/// step closes the boundary with a trapezoid quadrature and a 2x2 solve
/// for the two end values (they appear inside their own integrals).
/// Initial data violating the constraints is shifted by the affine
/// function fixing both endpoints, with a warning.
Trajectory simulate_nonlocal(const NonlocalKernel& kernel, double a, const expr::Expr& x0,
                             const Grid& grid, double lambda_fraction, double t_final,
                             int record_every = 1);

enum class TrajNorm { Inf, L2, L1w };

struct DecayFit {
  double M = 0.0;
  double delta = 0.0;
  bool hit_zero = false;  // norm reached exactly zero; delta is a +inf sentinel
};

/// Log-linear least squares of the chosen norm over the second half of
/// the horizon: slope -> -delta, M = max_t ||x[t]|| e^{delta t} / ||x[0]||.
DecayFit fit_decay(const Trajectory& traj, TrajNorm norm);

}  // namespace pdeiss
