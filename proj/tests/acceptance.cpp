// Acceptance suite: runs every criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expr_gen.hpp"
#include "fading_memory_harness.hpp"
#include "pdeiss/certificates.hpp"
#include "pdeiss/lemmas.hpp"
#include "pdeiss/thermo.hpp"
#include "test_util.hpp"

using namespace pdeiss;
using testutil::kPi;
using expr::parse;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

SimulationConfig heat_config(int n, double t_final, const char* x0, const char* d0,
                             const char* d1, const char* u) {
  SimulationConfig cfg;
  cfg.prob = testutil::heat_dirichlet(n);
  cfg.grid = Grid::uniform(n);
  cfg.lambda_fraction = 0.9;
  cfg.t_final = t_final;
  cfg.d0 = parse(d0);
  cfg.d1 = parse(d1);
  cfg.u = parse(u);
  cfg.x0 = parse(x0);
  cfg.record_every = 1;
  return cfg;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ------------------------------------------------------------ criteria

Check criterion1_eigen_accuracy() {
  Check c;
  const Problem prob = testutil::heat_dirichlet(1000);
  const auto eigs = compute_eigenpairs(prob, 10);
  for (int n = 1; n <= 10; ++n) {
    const double exact = n * n * kPi * kPi;
    const double rel = std::abs(eigs[n - 1].lambda - exact) / exact;
    c.require(rel <= 1e-3, "lambda_" + std::to_string(n) + " rel err " + fmt(rel));
  }
  const Grid g = Grid::uniform(1000);
  Profile rw = sample(g, prob.r);
  double worst = 0.0;
  for (int m = 0; m < 10; ++m)
    for (int n = m; n < 10; ++n) {
      Profile prod{g,
                   eigs[m].phi.values.cwiseProduct(eigs[n].phi.values).cwiseProduct(rw.values)};
      worst = std::max(worst, std::abs(trapezoid(prod) - (m == n ? 1.0 : 0.0)));
    }
  c.require(worst <= 1e-6, "orthonormality residual " + fmt(worst));
  c.detail << (c.detail.str().empty() ? "" : "; ") << "orthonormality residual " << fmt(worst);
  return c;
}

Check criterion2_gain_reproduction() {
  Check c;
  const L1Gains l1 = gains_l1(1.0, 0.0, 0.0);
  c.require(l1.rate == kPi * kPi, "l1 rate");
  c.require(l1.boundary0 == 1.0 / kPi, "l1 boundary0");
  c.require(l1.boundary1 == 1.0 / kPi, "l1 boundary1");
  c.require(l1.distributed == 1.0 / (kPi * kPi), "l1 distributed");

  Problem prob = testutil::heat_dirichlet(4000);
  const auto eigs = compute_eigenpairs(prob, 200);
  const L2SeriesGains series = gains_l2_series(eigs, prob);
  const L2BvpGains bvp = gains_l2_bvp(prob);
  const double exact = 1.0 / std::sqrt(3.0);
  c.require(std::abs(series.c0 - exact) <= 2e-3, "series c0 " + fmt(series.c0));
  c.require(std::abs(series.c1 - exact) <= 2e-3, "series c1 " + fmt(series.c1));
  c.require(std::abs(bvp.c0 - exact) <= 2e-3, "bvp c0 " + fmt(bvp.c0));
  c.require(std::abs(bvp.c1 - exact) <= 2e-3, "bvp c1 " + fmt(bvp.c1));
  c.require(std::abs(series.c0 - bvp.c0) <= 2e-3, "route gap c0");
  c.require(std::abs(series.c1 - bvp.c1) <= 2e-3, "route gap c1");
  c.detail << (c.detail.str().empty() ? "" : "; ") << "c0_series=" << fmt(series.c0)
           << " c0_bvp=" << fmt(bvp.c0);
  return c;
}

Check criterion3_sharpness() {
  Check c;
  const Problem prob = testutil::heat_dirichlet(200);
  const double h = 1.0 / 200.0;
  const double gap_l1 = sharpness_gap(prob, SharpNorm::L1W);
  const double gap_l2 = sharpness_gap(prob, SharpNorm::L2R);
  c.require(std::abs(gap_l1) <= 5.0 * h, "L1w gap " + fmt(gap_l1));
  c.require(std::abs(gap_l2) <= 5.0 * h, "L2 gap " + fmt(gap_l2));
  c.detail << (c.detail.str().empty() ? "" : "; ") << "gap_l1w=" << fmt(gap_l1)
           << " gap_l2=" << fmt(gap_l2);
  return c;
}

struct SuiteScenario {
  const char* name;
  const char* x0;
  const char* d0;
  const char* d1;
  const char* u;
  bool heat_applicable;
};

const SuiteScenario kSuite[] = {
    {"decaying_mode", "sin(pi*z)", "0", "0", "0", true},
    {"constant_d0", "0", "-1", "0", "0", true},
    {"constant_d1", "0", "0", "1", "0", true},
    {"sinusoidal_d0", "0", "-0.5*sin(3*t)", "0", "0", true},
    {"distributed_u", "0", "0", "0", "sin(pi*z)", false},
};

void run_suite_scenario(const SuiteScenario& s, Check& c,
                        std::vector<CertificateReport>* sqrt2_reports,
                        std::vector<std::pair<CertificateReport, const SuiteScenario*>>*
                            classical_reports) {
  SimulationConfig cfg = heat_config(200, 2.0, s.x0, s.d0, s.d1, s.u);
  const Trajectory traj = simulate(cfg);

  const EtaFunction ef = find_eta(cfg.prob, kPi * kPi / 4.0);
  const CertificateReport inf = certify_linf(traj, ef, gains_linf(ef, cfg.prob));
  c.require(inf.pass, std::string(s.name) + " INF_ETA margin " + fmt(inf.worst_margin));

  GainSet gs;
  {
    Problem fine = cfg.prob;
    fine.grid_n = 4000;
    const auto eigs = compute_eigenpairs(fine, 200);
    gs.lambda1 = eigs.front().lambda;
    const L2BvpGains bvp = gains_l2_bvp(cfg.prob);
    gs.c0 = bvp.c0;
    gs.c1 = bvp.c1;
    gs.c_tilde = gains_l2_series(eigs, fine).c_tilde;
  }
  std::vector<std::pair<double, double>> grid;
  for (double e : {0.1, 0.5, 1.0, 2.0, 10.0})
    for (double w : {0.1, 0.5, 1.0, 2.0, 10.0}) grid.emplace_back(e, w);
  const CertificateReport l2 = certify_l2(traj, gs, grid);
  c.require(l2.pass, std::string(s.name) + " L2_R margin " + fmt(l2.worst_margin));

  const CertificateReport l1 = certify_l1(traj, 1.0, 0.0, 0.0);
  c.require(l1.pass, std::string(s.name) + " L1_W margin " + fmt(l1.worst_margin));

  if (s.heat_applicable) {
    const auto suite = certify_heat_suite(traj, 1.0, kPi / 4.0);
    for (const CertificateReport& rep : suite) {
      c.require(rep.pass, std::string(s.name) + " " + estimate_name(rep.id) + " " + rep.detail +
                              " margin " + fmt(rep.worst_margin));
      if (rep.detail == "sqrt2" && sqrt2_reports) sqrt2_reports->push_back(rep);
      if (rep.detail == "classical" && classical_reports)
        classical_reports->emplace_back(rep, &s);
    }
  }
}

std::vector<CertificateReport> g_sqrt2;
std::vector<std::pair<CertificateReport, const SuiteScenario*>> g_classical;

Check criterion4_certificate_suite() {
  Check c;
  g_sqrt2.clear();
  g_classical.clear();
  for (const SuiteScenario& s : kSuite) run_suite_scenario(s, c, &g_sqrt2, &g_classical);
  c.detail << (c.detail.str().empty() ? "" : "; ") << "5 scenarios, all applicable estimates";
  return c;
}

Check criterion5_maximum_principle() {
  Check c;
  // the sqrt(2) bound held along every heat-suite trajectory
  c.require(g_sqrt2.size() == 4, "expected 4 sqrt2 reports");
  for (const CertificateReport& rep : g_sqrt2) c.require(rep.pass, "a sqrt2 report failed");

  // theta = pi/2 instance: rhs must equal the classical bound exactly
  c.require(g_classical.size() == 4, "expected 4 classical reports");
  for (const auto& [rep, scn] : g_classical) {
    const expr::Expr d0e = parse(scn->d0);
    const expr::Expr d1e = parse(scn->d1);
    double d0max = 0.0, d1max = 0.0;
    double worst = 0.0;
    const double init = rep.lhs.front();  // weight is identically 1
    for (std::size_t j = 0; j < rep.times.size(); ++j) {
      const double t = rep.times[j];
      d0max = std::max(d0max, std::abs(expr::evaluate(d0e, expr::Bindings::at_t(t)) / -1.0));
      d1max = std::max(d1max, std::abs(expr::evaluate(d1e, expr::Bindings::at_t(t)) / 1.0));
      const double classical = std::max({init, d0max, d1max});
      worst = std::max(worst, std::abs(rep.rhs[j] - classical));
    }
    c.require(worst <= 1e-14 * (1.0 + init), std::string(scn->name) + " classical rhs gap " +
                                                 fmt(worst));
  }
  return c;
}

Check criterion6_fd_convergence() {
  Check c;
  auto max_err = [](int n) {
    SimulationConfig cfg = heat_config(n, 0.1, "sin(pi*z)", "0", "0", "0");
    cfg.record_every = 1000000;
    const Trajectory traj = simulate(cfg);
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double exact = std::exp(-kPi * kPi * 0.1) * std::sin(kPi * i / n);
      worst = std::max(worst, std::abs(traj.profiles.back()[i] - exact));
    }
    return worst;
  };
  const double e50 = max_err(50);
  const double e100 = max_err(100);
  const double e200 = max_err(200);
  const double r1 = e50 / e100;
  const double r2 = e100 / e200;
  c.require(r1 >= 3.5 && r1 <= 4.5, "ratio 50/100 = " + fmt(r1));
  c.require(r2 >= 3.5 && r2 <= 4.5, "ratio 100/200 = " + fmt(r2));
  c.detail << (c.detail.str().empty() ? "" : "; ") << "ratios " << fmt(r1) << ", " << fmt(r2);
  return c;
}

Check criterion7_smallgain_verdicts() {
  Check c;
  const Grid g = Grid::uniform(400);
  const NonlocalKernel k08 = NonlocalKernel::make(expr::number(0.8), expr::number(0.8), g);
  const SmallGainVerdict l2 = check_smallgain_l2(k08);
  c.require(l2.holds, "L2 verdict for 0.8 kernels");
  c.require(std::abs(l2.margin - (std::sqrt(3.0) - 1.6)) <= 1e-9,
            "L2 margin " + fmt(l2.margin));

  const NonlocalKernel ksin =
      NonlocalKernel::make(parse("1.5*sin(pi*z)"), parse("1.5*sin(pi*z)"), g);
  const SmallGainVerdict l1w = check_smallgain_l1w(ksin);
  c.require(l1w.holds, "L1w verdict for 1.5 sin kernels");
  c.require(std::abs(l1w.margin - (kPi - 3.0)) <= 1e-9, "L1w margin " + fmt(l1w.margin));
  c.require(!check_smallgain_l2(ksin).holds, "L2 must fail for 1.5 sin kernels");

  // Day => (3.2) on 100 random kernels with total variation <= 0.99
  std::mt19937_64 rng(99001122);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> mass(0.05, 0.99);
  int counterexamples = 0;
  for (int trial = 0; trial < 100; ++trial) {
    NonlocalKernel k;
    k.g0 = expr::number(0.0);
    k.g1 = expr::number(0.0);
    auto smooth = [&]() {
      Eigen::VectorXd v(g.node_count);
      const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng), ph = coef(rng);
      for (int i = 0; i < g.node_count; ++i) {
        const double z = g.z(i);
        v[i] = a0 + a1 * std::sin(kPi * z + ph) + a2 * std::sin(2 * kPi * z);
      }
      return v;
    };
    k.g0_profile = Profile{g, smooth()};
    k.g1_profile = Profile{g, smooth()};
    for (Profile* p : {&k.g0_profile, &k.g1_profile}) {
      Eigen::VectorXd absv = p->values.cwiseAbs();
      const double l1 = g.h * (0.5 * (absv[0] + absv[g.node_count - 1]) +
                               absv.segment(1, g.node_count - 2).sum());
      if (l1 > 0.0) p->values *= mass(rng) / l1;
    }
    if (!check_day(k).holds || !check_smallgain_sup(k).holds) ++counterexamples;
  }
  c.require(counterexamples == 0,
            "Day => (3.2) counterexamples: " + std::to_string(counterexamples));
  return c;
}

Check criterion8_thermoelastic_decay() {
  Check c;
  const Grid g = Grid::uniform(200);
  {
    const NonlocalKernel k = NonlocalKernel::make(expr::number(0.8), expr::number(0.8), g);
    const Trajectory traj =
        simulate_nonlocal(k, 1.0, parse("sin(pi*z) + 0.3"), g, 0.9, 5.0, 200);
    const DecayFit l2 = fit_decay(traj, TrajNorm::L2);
    const DecayFit inf = fit_decay(traj, TrajNorm::Inf);
    c.require(l2.delta > 0.0, "L2 delta " + fmt(l2.delta));
    c.require(inf.delta > 0.0, "inf delta " + fmt(inf.delta));
    c.detail << (c.detail.str().empty() ? "" : "; ") << "delta_l2=" << fmt(l2.delta);
  }
  {
    const NonlocalKernel k = NonlocalKernel::make(expr::number(0.0), expr::number(0.0), g);
    const Trajectory traj = simulate_nonlocal(k, 1.0, parse("sin(pi*z)"), g, 0.9, 5.0, 200);
    const DecayFit l2 = fit_decay(traj, TrajNorm::L2);
    const double rel = std::abs(l2.delta - kPi * kPi) / (kPi * kPi);
    c.require(rel <= 0.02, "zero-kernel rate off by " + fmt(rel));
    c.detail << " delta_zero_kernel=" << fmt(l2.delta);
  }
  return c;
}

Check criterion9_lemma_harnesses() {
  Check c;
  // Lemma 4.1: 1e4 random forward-generated instances
  {
    std::mt19937_64 rng(1234567);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int inst = 0; inst < 10000; ++inst) {
      const double K = 0.2 + 3.0 * unit(rng);
      const double a = 0.05 + 0.9 * unit(rng);
      const double beta = 0.2 + 3.0 * unit(rng);
      const double gg = 0.01 + 2.0 * unit(rng);
      const int m = 5 + static_cast<int>(unit(rng) * 25);
      std::vector<double> y(m + 1), phi(m + 1);
      for (double& v : y) v = unit(rng) < 0.2 ? 0.0 : 4.0 * unit(rng);
      phi[0] = 3.0 * unit(rng);
      for (int j = 0; j < m; ++j) {
        double cap = std::numeric_limits<double>::max();
        if (y[j] <= K * phi[j]) cap = std::min(cap, a * phi[j] + gg);
        if (y[j] >= K * phi[j]) cap = std::min(cap, beta * y[j] + gg);
        phi[j + 1] = (unit(rng) < 0.5 ? 1.0 : 0.6 + 0.4 * unit(rng)) * cap;
      }
      for (int j = 0; j <= m; ++j)
        if (phi[j] > lemma41_bound(y, phi[0], K, a, beta, gg, j) + 1e-12) ++violations;
    }
    c.require(violations == 0, "lemma 4.1 violations: " + std::to_string(violations));
  }
  // tightness instance
  {
    const double K = 1.0, beta = 2.0, gg = 0.5, a = 1e-12;
    std::vector<double> y(2, 1.0);
    const double phi1 = beta * y[0] + gg;  // the (P2) branch, taken tightly
    const double bound = lemma41_bound(y, 0.0, K, a, beta, gg, 1);
    c.require(phi1 <= bound && bound - phi1 <= 1e-9,
              "tightness gap " + fmt(bound - phi1));
  }
  // Lemmas 4.2 and 4.3: 1e3 random tight instances each
  {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int inst = 0; inst < 1000; ++inst) {
      const testutil::MeshInstance mi = testutil::generate_fading_instance(
          rng, false, [](double d, double w) { return d + w; });
      const double eps = 0.1 + 3.0 * unit(rng);
      const FadingMemoryConstants cc = lemma42_constants(mi.sigma, mi.M, eps);
      const std::vector<double> S = testutil::discounted_sup(mi, cc.delta);
      for (std::size_t k = 0; k < mi.t.size(); ++k) {
        const double rhs =
            mi.M * std::exp(-cc.delta * mi.t[k]) * mi.phi[0] + mi.gamma * (1.0 + eps) * S[k];
        if (mi.phi[k] > rhs + 1e-8) ++violations;
      }
    }
    c.require(violations == 0, "lemma 4.2 violations: " + std::to_string(violations));
  }
  {
    std::mt19937_64 rng(4048);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int inst = 0; inst < 1000; ++inst) {
      const testutil::MeshInstance mi = testutil::generate_fading_instance(
          rng, true, [](double d, double w) { return std::max(d, w); });
      const double eps = 0.1 + 3.0 * unit(rng);
      const FadingMemoryConstants cc = lemma43_constants(mi.sigma, mi.M, eps);
      const std::vector<double> S = testutil::discounted_sup(mi, cc.delta);
      for (std::size_t k = 0; k < mi.t.size(); ++k) {
        const double rhs = std::max(mi.M * std::exp(-cc.delta * mi.t[k]) * mi.phi[0],
                                    mi.gamma * (1.0 + eps) * S[k]);
        if (mi.phi[k] > rhs + 1e-8) ++violations;
      }
    }
    c.require(violations == 0, "lemma 4.3 violations: " + std::to_string(violations));
  }
  return c;
}

Check criterion10_parser() {
  Check c;
  {
    std::mt19937_64 rng(20240811);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
      const expr::Expr e = testutil::random_expr(rng, 5);
      if (!expr::structurally_equal(e, parse(expr::to_string(e)))) ++failures;
    }
    c.require(failures == 0, "round-trip failures: " + std::to_string(failures));
  }
  {
    std::mt19937_64 rng(987654321);
    std::uniform_real_distribution<double> zs(0.05, 0.95);
    const double h = 1e-6;
    int checked = 0, failures = 0;
    for (int i = 0; checked < 1000 && i < 4000; ++i) {
      const expr::Expr e = testutil::random_expr(rng, 4);
      const expr::Expr de = expr::differentiate(e, expr::Var::Z);
      const double z0 = zs(rng);
      double fp, fm, fz, dz;
      try {
        fp = expr::evaluate(e, expr::Bindings::at_z(z0 + h));
        fm = expr::evaluate(e, expr::Bindings::at_z(z0 - h));
        fz = expr::evaluate(e, expr::Bindings::at_z(z0));
        dz = expr::evaluate(de, expr::Bindings::at_z(z0));
      } catch (const expr::EvalError&) {
        continue;
      }
      if (!std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(dz)) continue;
      if (std::abs(fz) > 1e6 || std::abs(dz) > 1e6) continue;
      const double fd = (fp - fm) / (2.0 * h);
      if (std::abs(dz - fd) > 1e-5 * (1.0 + std::abs(fd))) ++failures;
      ++checked;
    }
    c.require(checked == 1000, "only checked " + std::to_string(checked));
    c.require(failures == 0, "derivative failures: " + std::to_string(failures));
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
    double budget_seconds;  // 0 = no budget
  };
  const std::vector<Criterion> criteria = {
      {1, "eigen accuracy (heat Dirichlet, first 10)", criterion1_eigen_accuracy, 5.0},
      {2, "gain reproduction (closed forms, two routes)", criterion2_gain_reproduction, 0.0},
      {3, "sharpness of the L1w and L2 gains", criterion3_sharpness, 30.0},
      {4, "certificate suite (5 scenarios, N=200, T=2)", criterion4_certificate_suite, 120.0},
      {5, "maximum-principle refinement", criterion5_maximum_principle, 0.0},
      {6, "FD convergence order", criterion6_fd_convergence, 0.0},
      {7, "small-gain verdicts", criterion7_smallgain_verdicts, 0.0},
      {8, "thermoelastic decay fits", criterion8_thermoelastic_decay, 0.0},
      {9, "lemma harnesses", criterion9_lemma_harnesses, 0.0},
      {10, "parser round trips and derivatives", criterion10_parser, 0.0},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget_seconds > 0.0 && secs > cr.budget_seconds) {
      result.ok = false;
      result.detail << (result.detail.str().empty() ? "" : "; ") << "runtime " << fmt(secs)
                    << "s over budget " << fmt(cr.budget_seconds) << "s";
    }
    std::printf("%s criterion %d: %s (%.2fs%s%s)\n", result.ok ? "PASS" : "FAIL", cr.id,
                cr.name, secs, result.detail.str().empty() ? "" : "; ",
                result.detail.str().c_str());
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }
  return failures;
}
