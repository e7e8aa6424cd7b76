#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdeiss/spectral.hpp"

namespace pdeiss {

/// L2 boundary/distributed gains summed over the eigen series; the last
/// increments expose the truncation error.
struct L2SeriesGains {
  double c0 = 0.0, c1 = 0.0, c_tilde = 0.0;
  int terms = 0;
  double last_increment_c0 = 0.0, last_increment_c1 = 0.0, last_increment_c_tilde = 0.0;
};

struct L2BvpGains {
  double c0 = 0.0, c1 = 0.0;
};

struct LinfGains {
  double gamma0 = 0.0, gamma1 = 0.0, gamma_u = 0.0;  // 1/margin0, 1/margin1, 1/sigma
};

/// Closed-form constants of the weighted-L1 estimate for the
/// constant-coefficient Dirichlet equation x_t = a x_zz + b x_z + k x + v.
struct L1Gains {
  double rate = 0.0;         // a*pi^2 - k + b^2/(4a)
  double boundary0 = 0.0;    // 4 a^2 pi / (4 a^2 pi^2 + b^2 - 4 a k)
  double boundary1 = 0.0;    // boundary0 * exp(b/(2a))
  double distributed = 0.0;  // 4 a / (4 a^2 pi^2 + b^2 - 4 a k)
};

/// Everything the certificates need, collected per problem.
struct GainSet {
  double lambda1 = 0.0;
  double c0 = 0.0, c1 = 0.0, c_tilde = 0.0;
  std::optional<LinfGains> linf;
  double sigma = 0.0;  // rate paired with the linf gains
  std::optional<L1Gains> l1;
};

L2SeriesGains gains_l2_series(const std::vector<EigenPair>& eigs, const Problem& prob);

L2BvpGains gains_l2_bvp(const Problem& prob);

LinfGains gains_linf(const EtaFunction& eta, const Problem& prob);

L1Gains gains_l1(double a, double b, double k);

/// Flat `key = value` text block for reports.
std::string to_text(const GainSet& g);

}  // namespace pdeiss
