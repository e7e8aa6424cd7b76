#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pdeiss/expr.hpp"
#include "pdeiss/norms.hpp"
#include "pdeiss/spectral.hpp"

namespace testutil {

constexpr double kPi = 3.14159265358979323846;

inline pdeiss::Problem heat_dirichlet(int grid_n = 1000) {
  using pdeiss::expr::parse;
  return pdeiss::Problem::make(parse("1"), parse("1"), parse("0"), -1.0, 0.0, 1.0, 0.0, grid_n);
}

inline pdeiss::Profile sampled(const pdeiss::Grid& g, double (*f)(double)) {
  pdeiss::Profile p;
  p.grid = g;
  p.values.resize(g.node_count);
  for (int i = 0; i < g.node_count; ++i) p.values[i] = f(g.z(i));
  return p;
}

// dense-grid maximization oracle for sup_z |num(z)| / den(z)
template <class F, class G>
double dense_sup_ratio(F num, G den, int samples = 2000001) {
  double best = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double z = static_cast<double>(i) / samples;
    best = std::max(best, std::abs(num(z)) / den(z));
  }
  return best;
}

// composite-trapezoid quadrature oracle on a dense grid, independent of
// the library's Profile machinery
template <class F>
double dense_trapezoid(F f, int n = 1000000) {
  double s = 0.5 * (f(0.0) + f(1.0));
  for (int i = 1; i < n; ++i) s += f(static_cast<double>(i) / n);
  return s / n;
}

}  // namespace testutil
