#include "mpx/certificate.hpp"

#include <numeric>
#include <random>

namespace mpx {

namespace {

PSolutionOrbit solve_best(const ProblemSetup& setup) {
  const HamiltonianModel& H = *setup.hamiltonian;
  std::vector<Vec> guesses;
  if (setup.solver.guess) guesses.push_back(*setup.solver.guess);
  std::mt19937_64 rng(setup.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> rad(setup.solver.radius_lo,
                                             setup.solver.radius_hi);
  for (int r = 0; r < setup.solver.restarts; ++r) {
    Vec u(2 * setup.n);
    for (int i = 0; i < u.size(); ++i) u(i) = gauss(rng);
    guesses.push_back(rad(rng) * u / u.norm());
  }
  std::optional<PSolutionOrbit> best;
  std::string last_err = "no guesses";
  for (const Vec& g : guesses) {
    try {
      PSolutionOrbit sol = shoot(H, setup.P, setup.tau, g,
                                 setup.solver.max_iter);
      if (!best || sol.residual < best->residual) best = sol;
    } catch (const Error& e) {
      last_err = e.what();
    }
  }
  if (!best)
    throw Error("solve: no nonconstant orbit found (last: " + last_err + ")");
  best->k = setup.k;
  return *best;
}

}  // namespace

void apply_verdict(Certificate& cert, int k, double tau) {
  const int n = cert.cls.n;
  for (const IndexRow& row : cert.indices) {
    if (!row.agree) {
      cert.verdict = "inconsistent";
      cert.explanation = "index pipelines disagree at m=" +
                         std::to_string(row.m);
      return;
    }
  }
  if (cert.degenerate_orbit) {
    cert.verdict = "numeric_only";
    cert.explanation = "degenerate (constant) orbit; nothing to certify";
    return;
  }
  if (!cert.window_pass) {
    cert.verdict = "numeric_only";
    cert.explanation =
        "index window 2p+2-nu <= i <= 2p+1 fails at m=1; "
        "minimal-period argument does not apply to this orbit";
    return;
  }
  std::string route;
  if (cert.e_PM <= 2 * n - 2) {
    route = "certified_by_remark34";
  } else if (cert.cls.admissible && cert.cls.margin() > 1 &&
             cert.ineq_319_pass) {
    route = "certified_ktau";
  } else {
    cert.verdict = "numeric_only";
    cert.explanation =
        "window holds but neither certification route applies "
        "(elliptic height too large and iterate bound unavailable)";
    return;
  }
  if (cert.numeric_available &&
      std::abs(cert.lambda_min - k * tau) > 1e-6 * k * tau) {
    cert.verdict = "inconsistent";
    cert.explanation = route + " argument claims k*tau but the scanned "
                               "minimal period disagrees";
    return;
  }
  cert.verdict = route;
  cert.explanation =
      (route == "certified_by_remark34")
          ? "index window holds and e(P^{-1}gamma(tau)) <= 2n-2"
          : "index window holds, elliptic height large, and the iterated "
            "index bound at m=k+1 sustains the contradiction argument";
}

Certificate certify(const ProblemSetup& setup) {
  Certificate cert;
  const int k = setup.k;
  const double tau = setup.tau;
  cert.cls = classify_P(setup.P, k);

  GeneratorField gen;
  if (setup.hamiltonian) {
    PSolutionOrbit sol = solve_best(setup);
    cert.has_orbit = true;
    cert.residual = sol.residual;
    cert.energy_drift = sol.energy_drift;
    cert.orbit_radius = sol.x0.norm();
    gen = linearization_generator(sol, *setup.hamiltonian);
    PeriodScan scan = minimal_P_symmetric_period(sol, k);
    cert.numeric_available = true;
    cert.lambda_min = scan.lambda_min;
    cert.degenerate_orbit = scan.degenerate;
  } else if (setup.generator) {
    gen = *setup.generator;
  } else {
    throw Error("certify: config provides neither hamiltonian nor generator");
  }

  SymplecticPath path = fundamental_solution(gen, tau);
  for (int m = 1; m <= k + 1; ++m) {
    IndexRow row;
    row.m = m;
    OmegaIndexRecord rec =
        iterated_P_index(path, setup.P, m, UnitRational::one());
    row.i_crossing = rec.i;
    row.nu_crossing = rec.nu;
    Mat Pm = Mat::Identity(2 * setup.n, 2 * setup.n);
    for (int c = 0; c < m; ++c) Pm = Pm * setup.P;
    int km = k / std::gcd(m, k);
    GeneratorField gm = gen;
    gm.tau = m * tau;
    gm.P = Pm;
    GalerkinResult gr = galerkin_index(gm, Pm, km, m * tau);
    row.i_galerkin = gr.i;
    row.nu_galerkin = gr.nu;
    row.galerkin_ran = true;
    row.agree = row.i_crossing == row.i_galerkin &&
                row.nu_crossing == row.nu_galerkin;
    cert.indices.push_back(row);
  }

  Mat Pinv = setup.P.inverse();
  cert.e_PM = elliptic_height(Mat(Pinv * path.endpoint()));
  cert.e_P = elliptic_height(Pinv);

  const long i1 = cert.indices[0].i_crossing;
  const int nu1 = cert.indices[0].nu_crossing;
  const int dimker = 2 * cert.cls.p;
  cert.window_pass = (dimker + 2 - nu1 <= i1) && (i1 <= dimker + 1);
  cert.pattern_317 = (i1 == dimker) && (nu1 == 1);

  cert.lemma32 = lemma32_check(setup.P, k, tau);
  cert.ineq_319_lhs = cert.indices[k].i_crossing;  // m = k+1 row
  cert.ineq_319_rhs = (k + 1) * (i1 + nu1 - setup.n) + setup.n - 1 +
                      cert.lemma32.lhs;
  cert.ineq_319_pass = cert.ineq_319_lhs >= cert.ineq_319_rhs;

  apply_verdict(cert, k, tau);
  return cert;
}

Json certificate_json(const Certificate& cert) {
  Json j;
  if (cert.has_orbit) {
    j["orbit"] = {{"residual", cert.residual},
                  {"energy_drift", cert.energy_drift},
                  {"radius", cert.orbit_radius}};
  }
  j["class"] = {{"n", cert.cls.n},
                {"p", cert.cls.p},
                {"j", cert.cls.j},
                {"admissible", cert.cls.admissible},
                {"margin", cert.cls.margin()}};
  Json rows = Json::array();
  for (const IndexRow& r : cert.indices) {
    rows.push_back({{"m", r.m},
                    {"i_crossing", r.i_crossing},
                    {"nu_crossing", r.nu_crossing},
                    {"i_galerkin", r.i_galerkin},
                    {"nu_galerkin", r.nu_galerkin},
                    {"agree", r.agree}});
  }
  j["indices"] = rows;
  j["e_values"] = {{"e_P_inv_gamma_tau", cert.e_PM},
                   {"e_P_inv", cert.e_P}};
  j["window_pass"] = cert.window_pass;
  j["lemma32"] = {{"lhs", cert.lemma32.lhs},
                  {"rhs", cert.lemma32.rhs},
                  {"pass", cert.lemma32.pass}};
  j["inequality_319"] = {{"lhs", cert.ineq_319_lhs},
                         {"rhs", cert.ineq_319_rhs},
                         {"pass", cert.ineq_319_pass}};
  j["pattern_317"] = cert.pattern_317;
  if (cert.numeric_available) {
    j["numeric_period"] = {{"lambda_min", cert.lambda_min},
                           {"degenerate", cert.degenerate_orbit}};
  }
  j["verdict"] = cert.verdict;
  j["explanation"] = cert.explanation;
  return j;
}

int certificate_exit_code(const Certificate& cert) {
  return cert.verdict == "inconsistent" ? 1 : 0;
}

}  // namespace mpx
