#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdeiss/fd.hpp"
#include "pdeiss/gains.hpp"

namespace pdeiss {

enum class EstimateId { InfEta, L2R, L1W, HeatL1, HeatL2, HeatMaxPrinciple };

const char* estimate_name(EstimateId id);

/// Both sides of one ISS estimate evaluated along a trajectory.
/// pass <=> worst_margin >= -tol with tol = 1e-9 + 10*h*scale(lhs).
struct CertificateReport {
  EstimateId id = EstimateId::L2R;
  std::string detail;  // e.g. "theta=0.7853981633974483"
  bool max_form = false;  // max-composed rhs (sup-norm estimate) vs summed rhs
  std::vector<double> times, lhs, rhs, margin;
  double worst_margin = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Sup-norm estimate: lhs = |x|/eta at the nodes; rhs max-composes the
/// decayed initial norm with the boundary gains and adds sigma^-1 times
/// the running weighted sup of the distributed input.
CertificateReport certify_linf(const Trajectory& traj, const EtaFunction& eta,
                               const LinfGains& gains);

/// Weighted-L2 estimate with the free (eps, omega) pair minimized over a
/// finite grid at every recorded time.
CertificateReport certify_l2(const Trajectory& traj, const GainSet& gains,
                             const std::vector<std::pair<double, double>>& eps_omega_grid);

/// Weighted-L1 estimate for the constant-coefficient Dirichlet family;
/// weight w(z) = exp(bz/2a) sin(pi z).
CertificateReport certify_l1(const Trajectory& traj, double a, double b, double k);

/// Heat-equation suite: the sine-weighted L1 bound, the plain L2 bound,
/// the weighted maximum principle at the supplied theta, its sqrt(2)
/// specialization at theta = pi/4, and the classical maximum principle
/// (theta = pi/2).
std::vector<CertificateReport> certify_heat_suite(const Trajectory& traj, double a, double theta);

enum class SharpNorm { L1W, L2R, InfEta };

/// Simulates the constant boundary disturbance d0 = magnitude to a
/// near-steady state and returns gain - steady norm. At the default unit
/// magnitude the gap is O(h) for sharp norms; at magnitude zero it is
/// the whole gain constant.
double sharpness_gap(const Problem& prob, SharpNorm kind, double magnitude = 1.0,
                     const std::optional<EtaFunction>& eta = std::nullopt, int grid_n = 200);

/// Report CSV `t,lhs,rhs,margin` plus a summary block.
void write_certificate_csv(std::ostream& os, const CertificateReport& rep,
                           const std::string& comment);

}  // namespace pdeiss
