#pragma once

#include <Eigen/Core>

#include "pdeiss/errors.hpp"
#include "pdeiss/expr.hpp"

namespace pdeiss {

/// Uniform grid on [0,1] with N intervals, h = 1/N, nodes z_i = i*h.
struct Grid {
  int node_count = 0;  // N + 1
  double h = 0.0;

  static Grid uniform(int intervals);
  int segments() const { return node_count - 1; }
  double z(int i) const { return i * h; }
  bool same_as(const Grid& other) const { return node_count == other.node_count; }
};

/// A function sampled at the grid nodes.
struct Profile {
  Grid grid;
  Eigen::VectorXd values;

  double operator[](int i) const { return values[i]; }
};

/// Samples an expression of z on the grid; throws on non-finite values.
Profile sample(const Grid& grid, const expr::Expr& e);

/// Samples an expression of (t,z) at fixed t.
Profile sample_at_time(const Grid& grid, const expr::Expr& e, double t);

/// Composite trapezoid of the sampled values over [0,1].
double trapezoid(const Profile& f);

/// max_i |x_i| / eta_i with eta > 0 everywhere.
double norm_inf_weighted(const Profile& x, const Profile& eta);

/// sqrt of the trapezoid integral of rw * x^2, rw >= 0.
double norm_l2_weighted(const Profile& x, const Profile& rw);

/// Trapezoid integral of w * |x|, w >= 0.
double norm_l1_weighted(const Profile& x, const Profile& w);

}  // namespace pdeiss
