#include "pdeiss/spectral.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pdeiss {

namespace {

// ------------------------------------------------------------ assembly
//
// Symmetric finite-volume discretization of -(p f')' + q f = lambda r f.
// Interior nodes use the flux form with p at half nodes; a Robin end
// keeps its node as an unknown via the half-cell balance, a Dirichlet
// end is eliminated. The result is A f = lambda B f with A symmetric
// tridiagonal and B diagonal positive (B carries the trapezoid weights,
// so B-orthonormality equals trapezoid orthonormality of r*phi^2).

struct Discretization {
  int N = 0;           // intervals
  double h = 0.0;
  int first = 0;       // first retained node index
  int size = 0;        // number of unknowns
  Eigen::VectorXd diag, off, mass;  // off[i] couples unknown i and i+1
};

Discretization assemble(const Problem& prob, int N) {
  Discretization d;
  d.N = N;
  d.h = 1.0 / N;
  const double h = d.h;
  d.first = prob.dirichlet_left() ? 1 : 0;
  const int last = prob.dirichlet_right() ? N - 1 : N;
  d.size = last - d.first + 1;
  if (d.size < 3) throw ConfigError("grid too coarse for the boundary configuration");

  Eigen::VectorXd ph(N);  // p at half nodes
  for (int i = 0; i < N; ++i) ph[i] = prob.pz((i + 0.5) * h);

  d.diag.resize(d.size);
  d.off.resize(d.size - 1);
  d.mass.resize(d.size);

  for (int k = 0; k < d.size; ++k) {
    const int i = d.first + k;
    const double z = i * h;
    const double qi = prob.qz(z);
    const double ri = prob.rz(z);
    if (i == 0) {
      d.diag[k] = ph[0] / h - prob.pz(0.0) * prob.g0 / prob.v0 + 0.5 * h * qi;
      d.mass[k] = 0.5 * h * ri;
    } else if (i == N) {
      d.diag[k] = ph[N - 1] / h + prob.pz(1.0) * prob.g1 / prob.v1 + 0.5 * h * qi;
      d.mass[k] = 0.5 * h * ri;
    } else {
      d.diag[k] = (ph[i - 1] + ph[i]) / h + h * qi;
      d.mass[k] = h * ri;
    }
    if (k + 1 < d.size) d.off[k] = -ph[i] / h;
  }
  return d;
}

// Number of eigenvalues of (A,B) strictly below mu, by the Sturm
// sequence of A - mu*B.
int sturm_count(const Discretization& d, double mu) {
  int count = 0;
  double q = d.diag[0] - mu * d.mass[0];
  if (q < 0.0) ++count;
  for (int i = 1; i < d.size; ++i) {
    if (q == 0.0) q = -1e-300;
    q = (d.diag[i] - mu * d.mass[i]) - d.off[i - 1] * d.off[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin_bounds(const Discretization& d) {
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (int i = 0; i < d.size; ++i) {
    const double center = d.diag[i] / d.mass[i];
    double radius = 0.0;
    if (i > 0) radius += std::abs(d.off[i - 1]) / std::sqrt(d.mass[i] * d.mass[i - 1]);
    if (i + 1 < d.size) radius += std::abs(d.off[i]) / std::sqrt(d.mass[i] * d.mass[i + 1]);
    lo = std::min(lo, center - radius);
    hi = std::max(hi, center + radius);
  }
  return {lo, hi};
}

double bisect_eigenvalue(const Discretization& d, int k, double lo, double hi) {
  // smallest mu with sturm_count(mu) >= k
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(d, mid) >= k)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

// Tridiagonal LU with partial pivoting (fill-in of one extra
// superdiagonal), then one solve. Returns false on a hard zero pivot.
struct TriLU {
  Eigen::VectorXd dl, dg, du, du2;
  std::vector<int> piv;
  int n = 0;

  bool factor(const Eigen::VectorXd& lower, const Eigen::VectorXd& diag,
              const Eigen::VectorXd& upper) {
    n = static_cast<int>(diag.size());
    dl = lower;
    dg = diag;
    du = upper;
    du2 = Eigen::VectorXd::Zero(std::max(0, n - 2));
    piv.assign(n, 0);
    for (int i = 0; i < n - 1; ++i) {
      if (std::abs(dg[i]) >= std::abs(dl[i])) {
        piv[i] = 0;
        if (dg[i] == 0.0) return false;
        const double m = dl[i] / dg[i];
        dl[i] = m;
        dg[i + 1] -= m * du[i];
        if (i + 2 < n) du2[i] = 0.0;
      } else {
        piv[i] = 1;
        const double m = dg[i] / dl[i];
        dg[i] = dl[i];
        dl[i] = m;
        const double tmp = du[i];
        du[i] = dg[i + 1];
        dg[i + 1] = tmp - m * dg[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -m * du[i + 1];
        }
      }
    }
    return dg[n - 1] != 0.0;
  }

  void solve(Eigen::VectorXd& b) const {
    for (int i = 0; i < n - 1; ++i) {
      if (piv[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= dg[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dg[n - 2];
    for (int i = n - 3; i >= 0; --i)
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dg[i];
  }
};

Eigen::VectorXd inverse_iteration(const Discretization& d, double lambda, int index) {
  const int m = d.size;
  Eigen::VectorXd lower(m - 1), diag(m), upper(m - 1);
  double shift = lambda;
  TriLU lu;
  for (int attempt = 0; attempt < 4; ++attempt) {
    for (int i = 0; i < m; ++i) diag[i] = d.diag[i] - shift * d.mass[i];
    lower = d.off;
    upper = d.off;
    if (lu.factor(lower, diag, upper)) break;
    shift += (std::abs(lambda) + 1.0) * 1e-12 * (attempt + 1);
    if (attempt == 3) throw NumericalError("eigen-solver failure: singular shifted system");
  }

  // deterministic pseudo-random start, seeded by the eigenvalue index
  Eigen::VectorXd v(m);
  std::uint64_t state = 0x9e3779b97f4a7c15ull + 0x100000001b3ull * static_cast<std::uint64_t>(index);
  for (int i = 0; i < m; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = 0.5 + static_cast<double>(state >> 11) / 9007199254740992.0;
  }

  double norm = 0.0;
  for (int it = 0; it < 5; ++it) {
    Eigen::VectorXd b = d.mass.cwiseProduct(v);
    lu.solve(b);
    if (!b.allFinite()) throw NumericalError("eigen-solver failure: inverse iteration diverged");
    norm = std::sqrt(b.cwiseProduct(b).dot(d.mass));
    if (norm == 0.0) throw NumericalError("eigen-solver failure: zero iterate");
    v = b / norm;
    if (it >= 1 && norm > 1e10) break;  // already aligned to machine precision
  }
  return v;
}

double one_sided_left(const Eigen::VectorXd& f, double h) {
  return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
}

double one_sided_right(const Eigen::VectorXd& f, double h) {
  const int N = static_cast<int>(f.size()) - 1;
  return (3.0 * f[N] - 4.0 * f[N - 1] + f[N - 2]) / (2.0 * h);
}

}  // namespace

Problem Problem::make(expr::Expr p, expr::Expr r, expr::Expr q, double g0, double v0, double g1,
                      double v1, int grid_n) {
  Problem prob;
  prob.p = std::move(p);
  prob.r = std::move(r);
  prob.q = std::move(q);
  prob.p_prime = expr::differentiate(prob.p, expr::Var::Z);
  prob.g0 = g0;
  prob.v0 = v0;
  prob.g1 = g1;
  prob.v1 = v1;
  prob.grid_n = grid_n;
  if (grid_n < 4) throw ConfigError("problem grid_n must be at least 4");
  if (v0 < 0.0 || v1 < 0.0)
    throw ConfigError("boundary constants v0, v1 must be nonnegative (normalize signs first)");
  const Grid g = Grid::uniform(grid_n);
  for (int i = 0; i < g.node_count; ++i) {
    const double z = g.z(i);
    if (prob.pz(z) <= 0.0) throw ConfigError("coefficient p must be positive on [0,1]");
    if (prob.rz(z) <= 0.0) throw ConfigError("coefficient r must be positive on [0,1]");
  }
  return prob;
}

std::vector<EigenPair> compute_eigenpairs(const Problem& prob, int count) {
  if (count < 1) throw ConfigError("eigenpair count must be positive");
  if (prob.grid_n < 20 * count)
    throw ConfigError("degenerate discretization: grid_n must be at least 20*count");

  const int N = prob.grid_n;
  const Discretization d = assemble(prob, N);
  auto [lo, hi] = gershgorin_bounds(d);
  lo -= 1.0;
  hi += 1.0;

  std::vector<EigenPair> out;
  out.reserve(count);
  double prev = lo;
  for (int k = 1; k <= count; ++k) {
    const double lambda = bisect_eigenvalue(d, k, prev, hi);
    Eigen::VectorXd v = inverse_iteration(d, lambda, k);

    {
      // residual guard: A v - lambda B v must vanish to solver precision
      double res = 0.0, scale = 0.0;
      for (int i = 0; i < d.size; ++i) {
        double av = d.diag[i] * v[i];
        if (i > 0) av += d.off[i - 1] * v[i - 1];
        if (i + 1 < d.size) av += d.off[i] * v[i + 1];
        const double bv = d.mass[i] * v[i];
        res = std::max(res, std::abs(av - lambda * bv));
        scale = std::max(scale, std::abs(av) + std::abs(lambda * bv));
      }
      if (res > 1e-7 * scale)
        throw NumericalError("eigen-solver failure: inverse iteration residual " +
                             std::to_string(res / scale) + " for eigenvalue " +
                             std::to_string(k));
    }

    EigenPair ep;
    ep.index = k;
    ep.lambda = lambda;
    ep.phi.grid = Grid::uniform(N);
    ep.phi.values = Eigen::VectorXd::Zero(N + 1);
    ep.phi.values.segment(d.first, d.size) = v;

    // deterministic sign: first significant node positive
    const double scale = ep.phi.values.cwiseAbs().maxCoeff();
    for (int i = 0; i <= N; ++i) {
      if (std::abs(ep.phi.values[i]) > 1e-8 * scale) {
        if (ep.phi.values[i] < 0.0) ep.phi.values = -ep.phi.values;
        break;
      }
    }

    ep.phi0 = ep.phi.values[0];
    ep.phi1 = ep.phi.values[N];
    ep.dphi0 = prob.dirichlet_left() ? one_sided_left(ep.phi.values, d.h)
                                     : -(prob.g0 / prob.v0) * ep.phi0;
    ep.dphi1 = prob.dirichlet_right() ? one_sided_right(ep.phi.values, d.h)
                                      : -(prob.g1 / prob.v1) * ep.phi1;
    if (!out.empty() && lambda <= out.back().lambda)
      throw NumericalError("eigen-solver failure: eigenvalues not strictly increasing");
    out.push_back(std::move(ep));
    prev = lambda;  // next eigenvalue lies above
  }
  return out;
}

HypothesisReport check_hypotheses(const Problem& prob, int n_eigs) {
  if (n_eigs < 10) throw ConfigError("hypothesis check needs at least 10 eigenpairs");
  HypothesisReport rep;
  rep.h1 = (prob.v0 > 0.0) || (prob.v0 == 0.0 && prob.g0 < 0.0);
  rep.h2 = (prob.v1 > 0.0) || (prob.v1 == 0.0 && prob.g1 > 0.0);

  std::vector<EigenPair> eigs;
  try {
    eigs = compute_eigenpairs(prob, n_eigs);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("hypothesis check: ") + e.what());
  }
  rep.lambda1 = eigs.front().lambda;
  rep.h3_lambda1_positive = rep.lambda1 > 0.0;

  double sum = 0.0;
  rep.h3_partial_sums.reserve(n_eigs);
  for (const EigenPair& ep : eigs) {
    sum += ep.phi.values.cwiseAbs().maxCoeff() / ep.lambda;
    rep.h3_partial_sums.push_back(sum);
  }
  rep.truncation = n_eigs;

  if (rep.h3_lambda1_positive) {
    // increments should decay roughly like lambda_n^-1 ~ n^-2
    bool shrinking = true;
    const int half = n_eigs / 2;
    double prev_inc = rep.h3_partial_sums[half] - rep.h3_partial_sums[half - 1];
    for (int i = half + 1; i < n_eigs; ++i) {
      const double inc = rep.h3_partial_sums[i] - rep.h3_partial_sums[i - 1];
      if (!(inc > 0.0) || inc > prev_inc * 1.0000001) {
        shrinking = false;
        break;
      }
      prev_inc = inc;
    }
    const double inc_half = rep.h3_partial_sums[half] - rep.h3_partial_sums[half - 1];
    const double inc_last = rep.h3_partial_sums[n_eigs - 1] - rep.h3_partial_sums[n_eigs - 2];
    shrinking = shrinking && inc_last < 0.6 * inc_half;
    rep.increments_shrinking = shrinking;
  } else {
    rep.notes = "lambda1 <= 0: the series of (H3) is reported but not meaningful";
  }
  return rep;
}

EtaFunction find_eta(const Problem& prob, double sigma) {
  if (sigma <= 0.0) throw ConfigError("find_eta requires sigma > 0");
  const int N = prob.grid_n;
  const double h = 1.0 / N;

  // coefficient tables at half steps for the RK4 sweep
  Eigen::VectorXd pv(2 * N + 1), qv(2 * N + 1), rv(2 * N + 1);
  for (int i = 0; i <= 2 * N; ++i) {
    const double z = 0.5 * i * h;
    pv[i] = prob.pz(z);
    qv[i] = prob.qz(z);
    rv[i] = prob.rz(z);
  }

  // state (eta, w = p*eta'); eta' = w/p, w' = (q - sigma*r)*eta
  struct Sweep {
    Eigen::VectorXd eta;
    double w_end = 0.0;
    double min_eta = 0.0;
    bool finite = true;
  };
  auto integrate = [&](double slope) {
    Sweep s;
    s.eta.resize(N + 1);
    double eta = 1.0;
    double w = pv[0] * slope;
    s.eta[0] = eta;
    s.min_eta = eta;
    for (int i = 0; i < N; ++i) {
      const int m = 2 * i;
      const double k1e = w / pv[m];
      const double k1w = (qv[m] - sigma * rv[m]) * eta;
      const double k2e = (w + 0.5 * h * k1w) / pv[m + 1];
      const double k2w = (qv[m + 1] - sigma * rv[m + 1]) * (eta + 0.5 * h * k1e);
      const double k3e = (w + 0.5 * h * k2w) / pv[m + 1];
      const double k3w = (qv[m + 1] - sigma * rv[m + 1]) * (eta + 0.5 * h * k2e);
      const double k4e = (w + h * k3w) / pv[m + 2];
      const double k4w = (qv[m + 2] - sigma * rv[m + 2]) * (eta + h * k3e);
      eta += h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
      w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
      if (!std::isfinite(eta) || !std::isfinite(w) || std::abs(eta) > 1e12) {
        s.finite = false;
        return s;
      }
      s.eta[i + 1] = eta;
      s.min_eta = std::min(s.min_eta, eta);
    }
    s.w_end = w;
    return s;
  };

  auto merit = [&](double slope) {
    const Sweep s = integrate(slope);
    if (!s.finite) return std::numeric_limits<double>::lowest();
    const double margin0 = -(prob.g0 * 1.0 + prob.v0 * slope);
    const double margin1 = prob.g1 * s.eta[N] + prob.v1 * s.w_end / pv[2 * N];
    return std::min({s.min_eta, margin0, margin1});
  };

  const double lo = -10.0, hi = 10.0;
  const int scan = 2001;
  double best_slope = lo;
  double best = std::numeric_limits<double>::lowest();
  for (int i = 0; i < scan; ++i) {
    const double s = lo + (hi - lo) * i / (scan - 1);
    const double m = merit(s);
    if (m > best) {
      best = m;
      best_slope = s;
    }
  }

  if (best > std::numeric_limits<double>::lowest()) {
    // one golden-section refinement around the best lattice point
    const double ds = (hi - lo) / (scan - 1);
    double a = best_slope - ds, b = best_slope + ds;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = merit(x1), f2 = merit(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = merit(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = merit(x1);
      }
    }
    if (f1 > best) {
      best = f1;
      best_slope = x1;
    }
    if (f2 > best) {
      best = f2;
      best_slope = x2;
    }
  }

  if (best == std::numeric_limits<double>::lowest())
    throw NumericalError("find_eta: ODE integration blew up for every slope in [-10,10]");
  if (best <= 0.0)
    throw HypothesisError(
        "find_eta: no positive solution with strict boundary margins over slopes in [-10,10] at "
        "sigma=" +
        std::to_string(sigma));

  const Sweep s = integrate(best_slope);
  EtaFunction ef;
  ef.sigma = sigma;
  ef.eta.grid = Grid::uniform(N);
  ef.eta.values = s.eta;
  ef.deta0 = best_slope;
  ef.deta1 = s.w_end / pv[2 * N];
  ef.margin0 = -(prob.g0 * s.eta[0] + prob.v0 * ef.deta0);
  ef.margin1 = prob.g1 * s.eta[N] + prob.v1 * ef.deta1;
  return ef;
}

Profile solve_equilibrium_bvp(const Problem& prob, double mu0, double mu1) {
  const int N = prob.grid_n;
  const double h = 1.0 / N;
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> trip;
  trip.reserve(3 * (N + 1));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);

  if (prob.dirichlet_left()) {
    trip.emplace_back(0, 0, prob.g0);
  } else {
    trip.emplace_back(0, 0, prob.g0 - 1.5 * prob.v0 / h);
    trip.emplace_back(0, 1, 2.0 * prob.v0 / h);
    trip.emplace_back(0, 2, -0.5 * prob.v0 / h);
  }
  rhs[0] = mu0;

  for (int i = 1; i < N; ++i) {
    const double pm = prob.pz((i - 0.5) * h);
    const double pp = prob.pz((i + 0.5) * h);
    const double qi = prob.qz(i * h);
    trip.emplace_back(i, i - 1, -pm / (h * h));
    trip.emplace_back(i, i, (pm + pp) / (h * h) + qi);
    trip.emplace_back(i, i + 1, -pp / (h * h));
  }

  if (prob.dirichlet_right()) {
    trip.emplace_back(N, N, prob.g1);
  } else {
    trip.emplace_back(N, N, prob.g1 + 1.5 * prob.v1 / h);
    trip.emplace_back(N, N - 1, -2.0 * prob.v1 / h);
    trip.emplace_back(N, N - 2, 0.5 * prob.v1 / h);
  }
  rhs[N] = mu1;

  Eigen::SparseMatrix<double> A(N + 1, N + 1);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw NumericalError("equilibrium BVP: singular linear system (zero-eigenvalue resonance?)");
  Eigen::VectorXd x = lu.solve(rhs);
  const double data_scale = std::max({1.0, std::abs(mu0), std::abs(mu1)});
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e8 * data_scale)
    throw NumericalError("equilibrium BVP: singular linear system (zero-eigenvalue resonance?)");

  Profile out;
  out.grid = Grid::uniform(N);
  out.values = std::move(x);
  return out;
}

}  // namespace pdeiss
