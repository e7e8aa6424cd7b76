#pragma once

#include <span>

#include "pdeiss/errors.hpp"

namespace pdeiss {

/// Constants constructed by the fading-memory lemmas from (sigma, M, eps).
struct FadingMemoryConstants {
  double sigma = 0.0, M = 0.0, eps = 0.0;  // inputs
  double T = 0.0, omega = 0.0, delta = 0.0;
  double lambda_choice = 0.0, mu_choice = 0.0;
};

/// Bound max(max(K^-1, beta) * max_{s<=j} y(s), a^j * phi0) + g/(1-a)
/// for sequences obeying the two conditional-decay properties.
double lemma41_bound(std::span<const double> y, double phi0, double K, double a, double beta,
                     double g, int j);

/// Sum-form fading memory: mu = sqrt(1+eps), lambda = 1/mu - 1/(1+eps)
/// makes mu/(1 - lambda*mu) = 1+eps exactly; then T = ln(M/lambda)/sigma,
/// omega = sigma - ln(M)/T, delta = ln(mu)/T. delta lies in (0, sigma).
FadingMemoryConstants lemma42_constants(double sigma, double M, double eps);

/// Max-form fading memory with the free lambda in (0,1) (default 1/2):
/// T = ln(M/lambda)/sigma, omega = sigma - ln(M)/T,
/// delta = min(ln(1+eps)/T, omega). delta lies in (0, sigma].
FadingMemoryConstants lemma43_constants(double sigma, double M, double eps, double lambda = 0.5);

}  // namespace pdeiss
