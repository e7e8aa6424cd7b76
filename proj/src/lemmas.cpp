#include "pdeiss/lemmas.hpp"

#include <algorithm>
#include <cmath>

namespace pdeiss {

double lemma41_bound(std::span<const double> y, double phi0, double K, double a, double beta,
                     double g, int j) {
  if (!(K > 0.0) || !(g > 0.0) || !(beta > 0.0)) throw ConfigError("lemma 4.1 needs K, g, beta > 0");
  if (!(a > 0.0) || !(a < 1.0)) throw ConfigError("lemma 4.1 needs a in (0,1)");
  if (j < 0 || static_cast<std::size_t>(j) >= y.size())
    throw ConfigError("lemma 4.1 index j out of range");
  double ymax = 0.0;
  for (int s = 0; s <= j; ++s) ymax = std::max(ymax, y[s]);
  return std::max(std::max(1.0 / K, beta) * ymax, std::pow(a, j) * phi0) + g / (1.0 - a);
}

FadingMemoryConstants lemma42_constants(double sigma, double M, double eps) {
  if (!(sigma > 0.0) || !(M >= 1.0) || !(eps > 0.0))
    throw ConfigError("lemma 4.2 needs sigma > 0, M >= 1, eps > 0");
  FadingMemoryConstants c;
  c.sigma = sigma;
  c.M = M;
  c.eps = eps;
  c.mu_choice = std::sqrt(1.0 + eps);
  c.lambda_choice = 1.0 / c.mu_choice - 1.0 / (1.0 + eps);
  c.T = std::log(M / c.lambda_choice) / sigma;
  c.omega = sigma - std::log(M) / c.T;
  c.delta = std::log(c.mu_choice) / c.T;
  return c;
}

FadingMemoryConstants lemma43_constants(double sigma, double M, double eps, double lambda) {
  if (!(sigma > 0.0) || !(M >= 1.0) || !(eps > 0.0))
    throw ConfigError("lemma 4.3 needs sigma > 0, M >= 1, eps > 0");
  if (!(lambda > 0.0) || !(lambda < 1.0)) throw ConfigError("lemma 4.3 needs lambda in (0,1)");
  FadingMemoryConstants c;
  c.sigma = sigma;
  c.M = M;
  c.eps = eps;
  c.lambda_choice = lambda;
  c.mu_choice = 1.0 + eps;
  c.T = std::log(M / lambda) / sigma;
  c.omega = sigma - std::log(M) / c.T;
  c.delta = std::min(std::log(1.0 + eps) / c.T, c.omega);
  return c;
}

}  // namespace pdeiss
