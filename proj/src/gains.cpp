#include "pdeiss/gains.hpp"

#include <cmath>
#include <sstream>

namespace pdeiss {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

L2SeriesGains gains_l2_series(const std::vector<EigenPair>& eigs, const Problem& prob) {
  if (eigs.size() < 50) throw ConfigError("the L2 gain series needs at least 50 eigenpairs");
  const double p0 = prob.pz(0.0);
  const double p1 = prob.pz(1.0);
  const double w0 = prob.g0 * prob.g0 + prob.v0 * prob.v0;
  const double w1 = prob.g1 * prob.g1 + prob.v1 * prob.v1;

  Profile rw = sample(Grid::uniform(prob.grid_n), prob.r);

  double s0 = 0.0, s1 = 0.0, su = 0.0;
  double inc0 = 0.0, inc1 = 0.0, incu = 0.0;
  for (const EigenPair& ep : eigs) {
    if (ep.lambda <= 0.0)
      throw HypothesisError("L2 gain series requires all eigenvalues positive (H3)");
    const double il2 = 1.0 / (ep.lambda * ep.lambda);
    const double t0 = il2 * std::pow(prob.g0 * ep.dphi0 - prob.v0 * ep.phi0, 2);
    const double t1 = il2 * std::pow(prob.v1 * ep.phi1 - prob.g1 * ep.dphi1, 2);
    const double l1 = norm_l1_weighted(ep.phi, rw);  // int r |phi|
    const double tu = il2 * l1 * l1;
    s0 += t0;
    s1 += t1;
    su += tu;
    inc0 = t0;
    inc1 = t1;
    incu = tu;
  }

  L2SeriesGains out;
  out.terms = static_cast<int>(eigs.size());
  out.c0 = p0 / w0 * std::sqrt(s0);
  out.c1 = p1 / w1 * std::sqrt(s1);
  out.c_tilde = std::sqrt(su);
  out.last_increment_c0 = p0 / w0 * std::sqrt(inc0);
  out.last_increment_c1 = p1 / w1 * std::sqrt(inc1);
  out.last_increment_c_tilde = std::sqrt(incu);
  return out;
}

L2BvpGains gains_l2_bvp(const Problem& prob) {
  const double w0 = std::sqrt(prob.g0 * prob.g0 + prob.v0 * prob.v0);
  const double w1 = std::sqrt(prob.g1 * prob.g1 + prob.v1 * prob.v1);
  Profile rw = sample(Grid::uniform(prob.grid_n), prob.r);
  const Profile x_tilde = solve_equilibrium_bvp(prob, w0, 0.0);
  const Profile x_bar = solve_equilibrium_bvp(prob, 0.0, w1);
  L2BvpGains out;
  out.c0 = norm_l2_weighted(x_tilde, rw) / w0;
  out.c1 = norm_l2_weighted(x_bar, rw) / w1;
  return out;
}

LinfGains gains_linf(const EtaFunction& eta, const Problem&) {
  if (!(eta.margin0 > 0.0) || !(eta.margin1 > 0.0))
    throw HypothesisError("sup-norm gains need strictly positive boundary margins");
  LinfGains out;
  out.gamma0 = 1.0 / eta.margin0;
  out.gamma1 = 1.0 / eta.margin1;
  out.gamma_u = 1.0 / eta.sigma;
  return out;
}

L1Gains gains_l1(double a, double b, double k) {
  if (a <= 0.0) throw ConfigError("weighted-L1 gains need a > 0");
  const double threshold = a * kPi * kPi + b * b / (4.0 * a);
  if (!(k < threshold))
    throw ConfigError("weighted-L1 gains need k < a*pi^2 + b^2/(4a) = " +
                      std::to_string(threshold));
  L1Gains out;
  out.rate = a * kPi * kPi - k + b * b / (4.0 * a);
  const double den = 4.0 * a * a * kPi * kPi + b * b - 4.0 * a * k;
  out.boundary0 = 4.0 * a * a * kPi / den;
  out.boundary1 = out.boundary0 * std::exp(b / (2.0 * a));
  out.distributed = 4.0 * a / den;
  return out;
}

std::string to_text(const GainSet& g) {
  std::ostringstream os;
  os.precision(12);
  os << "lambda1 = " << g.lambda1 << "\n";
  os << "c0 = " << g.c0 << "\n";
  os << "c1 = " << g.c1 << "\n";
  os << "c_tilde = " << g.c_tilde << "\n";
  if (g.linf) {
    os << "sigma = " << g.sigma << "\n";
    os << "gamma0 = " << g.linf->gamma0 << "\n";
    os << "gamma1 = " << g.linf->gamma1 << "\n";
    os << "gamma_u = " << g.linf->gamma_u << "\n";
  }
  if (g.l1) {
    os << "l1_rate = " << g.l1->rate << "\n";
    os << "l1_boundary0 = " << g.l1->boundary0 << "\n";
    os << "l1_boundary1 = " << g.l1->boundary1 << "\n";
    os << "l1_distributed = " << g.l1->distributed << "\n";
  }
  return os.str();
}

}  // namespace pdeiss
