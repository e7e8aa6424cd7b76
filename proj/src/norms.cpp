#include "pdeiss/norms.hpp"

#include <cmath>

namespace pdeiss {

Grid Grid::uniform(int intervals) {
  if (intervals < 4) throw ConfigError("grid must have at least 4 intervals");
  Grid g;
  g.node_count = intervals + 1;
  g.h = 1.0 / intervals;
  return g;
}

Profile sample(const Grid& grid, const expr::Expr& e) {
  Profile p;
  p.grid = grid;
  p.values.resize(grid.node_count);
  for (int i = 0; i < grid.node_count; ++i)
    p.values[i] = expr::evaluate(e, expr::Bindings::at_z(grid.z(i)));
  if (!p.values.allFinite()) throw NumericalError("sampled profile contains non-finite values");
  return p;
}

Profile sample_at_time(const Grid& grid, const expr::Expr& e, double t) {
  Profile p;
  p.grid = grid;
  p.values.resize(grid.node_count);
  for (int i = 0; i < grid.node_count; ++i)
    p.values[i] = expr::evaluate(e, expr::Bindings::at(grid.z(i), t));
  if (!p.values.allFinite()) throw NumericalError("sampled profile contains non-finite values");
  return p;
}

namespace {

void require_same_grid(const Profile& a, const Profile& b) {
  if (!a.grid.same_as(b.grid)) throw ConfigError("profiles live on different grids");
}

}  // namespace

double trapezoid(const Profile& f) {
  const int n = f.grid.node_count;
  double s = 0.5 * (f.values[0] + f.values[n - 1]);
  s += f.values.segment(1, n - 2).sum();
  return s * f.grid.h;
}

double norm_inf_weighted(const Profile& x, const Profile& eta) {
  require_same_grid(x, eta);
  if ((eta.values.array() <= 0.0).any())
    throw ConfigError("weighted sup norm requires a strictly positive weight");
  return (x.values.array().abs() / eta.values.array()).maxCoeff();
}

double norm_l2_weighted(const Profile& x, const Profile& rw) {
  require_same_grid(x, rw);
  const int n = x.grid.node_count;
  Eigen::ArrayXd integrand = rw.values.array() * x.values.array().square();
  double s = 0.5 * (integrand[0] + integrand[n - 1]) + integrand.segment(1, n - 2).sum();
  return std::sqrt(s * x.grid.h);
}

double norm_l1_weighted(const Profile& x, const Profile& w) {
  require_same_grid(x, w);
  const int n = x.grid.node_count;
  Eigen::ArrayXd integrand = w.values.array() * x.values.array().abs();
  double s = 0.5 * (integrand[0] + integrand[n - 1]) + integrand.segment(1, n - 2).sum();
  return s * x.grid.h;
}

}  // namespace pdeiss
