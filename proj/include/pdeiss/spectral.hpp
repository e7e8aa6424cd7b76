#pragma once

#include <string>
#include <vector>

#include "pdeiss/expr.hpp"
#include "pdeiss/norms.hpp"

namespace pdeiss {

/// Sturm-Liouville setup on [0,1]: coefficients p, r, q and the separated
/// boundary constants of  g0*f(0) + v0*f'(0) = 0,  g1*f(1) + v1*f'(1) = 0.
struct Problem {
  expr::Expr p, r, q;
  expr::Expr p_prime;  // symbolic derivative of p
  double g0 = -1.0, v0 = 0.0, g1 = 1.0, v1 = 0.0;
  int grid_n = 1000;

  /// Validates p > 0 and r > 0 at the sampled nodes and derives p'.
  static Problem make(expr::Expr p, expr::Expr r, expr::Expr q, double g0, double v0, double g1,
                      double v1, int grid_n = 1000);

  bool dirichlet_left() const { return v0 == 0.0; }
  bool dirichlet_right() const { return v1 == 0.0; }
  double pz(double z) const { return expr::evaluate(p, expr::Bindings::at_z(z)); }
  double rz(double z) const { return expr::evaluate(r, expr::Bindings::at_z(z)); }
  double qz(double z) const { return expr::evaluate(q, expr::Bindings::at_z(z)); }
};

/// Eigenpair of -(1/r)((p f')' - q f), normalized so that the trapezoid
/// integral of r*phi^2 over [0,1] equals 1.
struct EigenPair {
  int index = 0;  // 1-based
  double lambda = 0.0;
  Profile phi;
  double phi0 = 0.0, dphi0 = 0.0;  // phi(0), phi'(0)
  double phi1 = 0.0, dphi1 = 0.0;  // phi(1), phi'(1)
};

struct HypothesisReport {
  bool h1 = false, h2 = false;
  double lambda1 = 0.0;
  bool h3_lambda1_positive = false;
  std::vector<double> h3_partial_sums;  // partial sums of sum lambda_n^-1 max|phi_n|
  int truncation = 0;
  bool increments_shrinking = false;
  std::string notes;
};

/// Positive decay weight: (p eta')' - q eta = -sigma r eta with eta > 0
/// and strictly positive boundary margins
///   margin0 = -(g0 eta(0) + v0 eta'(0)),  margin1 = g1 eta(1) + v1 eta'(1).
struct EtaFunction {
  double sigma = 0.0;
  Profile eta;
  double deta0 = 0.0, deta1 = 0.0;
  double margin0 = 0.0, margin1 = 0.0;
};

HypothesisReport check_hypotheses(const Problem& prob, int n_eigs);

/// The `count` smallest eigenpairs via a symmetric finite-volume
/// discretization and bisection on Sturm sequences; requires
/// grid_n >= 20*count.
std::vector<EigenPair> compute_eigenpairs(const Problem& prob, int count);

/// Integrates the eta equation from z=0 with eta(0)=1 over a scan of
/// 2001 initial slopes in [-10,10], golden-section refined around the
/// best feasibility margin. Throws HypothesisError when no positive
/// solution with strict margins exists at this sigma.
EtaFunction find_eta(const Problem& prob, double sigma);

/// Unique solution of (p x')' - q x = 0 with boundary data
/// g0 x(0) + v0 x'(0) = mu0 and g1 x(1) + v1 x'(1) = mu1.
Profile solve_equilibrium_bvp(const Problem& prob, double mu0, double mu1);

}  // namespace pdeiss
