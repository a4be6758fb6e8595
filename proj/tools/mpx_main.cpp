#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <numeric>
#include <random>

#include "mpx/certificate.hpp"
#include "mpx/galerkin.hpp"
#include "mpx/hamiltonian.hpp"
#include "mpx/index.hpp"

namespace fs = std::filesystem;
using namespace mpx;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string omega = "1/1";
  int m = 1;
  int threads = 1;
};

UnitRational parse_omega(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos)
    return UnitRational::of(std::stoll(s), 1);
  return UnitRational::of(std::stoll(s.substr(0, slash)),
                          std::stoll(s.substr(slash + 1)));
}

void emit(const Json& j, const Options& opt, const std::string& name) {
  std::cout << j.dump(2) << std::endl;
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    std::ofstream f(fs::path(opt.out_dir) / (name + ".json"));
    f << j.dump(2) << "\n";
  }
}

void write_csv(const Options& opt, const std::string& name,
               const std::string& header,
               const std::vector<std::string>& rows) {
  if (opt.out_dir.empty()) return;
  fs::create_directories(opt.out_dir);
  std::ofstream f(fs::path(opt.out_dir) / (name + ".csv"));
  f << header << "\n";
  for (const auto& r : rows) f << r << "\n";
}

std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ProblemSetup load(const Options& opt) {
  if (opt.config_path.empty()) throw Error("--config is required");
  ProblemSetup setup = load_config(opt.config_path);
  if (opt.seed_set) setup.seed = opt.seed;
  return setup;
}

// Generator for index work: direct, or the linearization of a solved orbit.
GeneratorField working_generator(const ProblemSetup& setup) {
  if (setup.generator) return *setup.generator;
  if (setup.hamiltonian) {
    const ProblemSetup& s = setup;
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> rad(s.solver.radius_lo,
                                               s.solver.radius_hi);
    std::vector<Vec> guesses;
    if (s.solver.guess) guesses.push_back(*s.solver.guess);
    for (int r = 0; r < s.solver.restarts; ++r) {
      Vec u(2 * s.n);
      for (int i = 0; i < u.size(); ++i) u(i) = gauss(rng);
      guesses.push_back(rad(rng) * u / u.norm());
    }
    for (const Vec& g : guesses) {
      try {
        PSolutionOrbit sol = shoot(*s.hamiltonian, s.P, s.tau, g,
                                   s.solver.max_iter);
        return linearization_generator(sol, *s.hamiltonian);
      } catch (const Error&) {
      }
    }
    throw Error("no orbit found for hamiltonian config");
  }
  throw Error("config provides neither generator nor hamiltonian");
}

int cmd_classify(const Options& opt) {
  ProblemSetup setup = load(opt);
  PClass cls = classify_P(setup.P, setup.k);
  Json j = {{"n", cls.n},
            {"k", cls.k},
            {"p", cls.p},
            {"j", cls.j},
            {"r", cls.r()},
            {"admissible", cls.admissible},
            {"margin", cls.margin()},
            {"reason", cls.reason},
            {"normal_form", matrix_json(normal_form_representative(cls))}};
  emit(j, opt, "classify");
  return 0;
}

int cmd_index(const Options& opt) {
  ProblemSetup setup = load(opt);
  GeneratorField gen = working_generator(setup);
  SymplecticPath path = fundamental_solution(gen, setup.tau);
  UnitRational omega = parse_omega(opt.omega);
  OmegaIndexRecord rec = iterated_P_index(path, setup.P, opt.m, omega);
  Json j = {{"m", opt.m},
            {"omega", {{"a", omega.a}, {"b", omega.b}}},
            {"i", rec.i},
            {"nu", rec.nu},
            {"method", rec.method}};
  bool agree = true;
  if (omega.is_one()) {
    Mat Pm = Mat::Identity(2 * setup.n, 2 * setup.n);
    for (int c = 0; c < opt.m; ++c) Pm = Pm * setup.P;
    int km = setup.k / std::gcd(opt.m, setup.k);
    GeneratorField gm = gen;
    gm.tau = opt.m * setup.tau;
    gm.P = Pm;
    GalerkinResult gr = galerkin_index(gm, Pm, km, opt.m * setup.tau);
    j["galerkin"] = {{"i", gr.i},
                     {"nu", gr.nu},
                     {"stabilized_at", gr.stabilized_at}};
    agree = gr.i == rec.i && gr.nu == rec.nu;
    j["agree"] = agree;
  }
  emit(j, opt, "index");
  return agree ? 0 : 1;
}

int cmd_bott(const Options& opt) {
  ProblemSetup setup = load(opt);
  GeneratorField gen = working_generator(setup);
  SymplecticPath path = fundamental_solution(gen, setup.tau);
  UnitRational omega0 = parse_omega(opt.omega);
  int m = std::max(2, opt.m);

  BottCheck bc;
  OmegaIndexRecord lhs = iterated_P_index(path, setup.P, m, omega0);
  bc.lhs_i = lhs.i;
  bc.lhs_nu = lhs.nu;
  std::vector<UnitRational> roots = omega0.roots(m);
  std::vector<std::future<OmegaIndexRecord>> futs;
  for (const UnitRational& w : roots)
    futs.push_back(std::async(
        opt.threads > 1 ? std::launch::async : std::launch::deferred,
        [&path, &setup, w] {
          return maslov_P_index(path, setup.P, w, nullptr, FlowOptions{});
        }));
  Json terms = Json::array();
  for (size_t t = 0; t < futs.size(); ++t) {
    OmegaIndexRecord r = futs[t].get();
    bc.rhs_i += r.i;
    bc.rhs_nu += r.nu;
    terms.push_back({{"omega", {{"a", roots[t].a}, {"b", roots[t].b}}},
                     {"i", r.i},
                     {"nu", r.nu}});
  }
  bc.pass = bc.lhs_i == bc.rhs_i && bc.lhs_nu == bc.rhs_nu;
  Json j = {{"m", m},
            {"lhs", {{"i", bc.lhs_i}, {"nu", bc.lhs_nu}}},
            {"rhs", {{"i", bc.rhs_i}, {"nu", bc.rhs_nu}}},
            {"terms", terms},
            {"pass", bc.pass}};
  emit(j, opt, "bott");
  return bc.pass ? 0 : 1;
}

int cmd_inequalities(const Options& opt) {
  ProblemSetup setup = load(opt);
  GeneratorField gen = working_generator(setup);
  SymplecticPath path = fundamental_solution(gen, setup.tau);
  int m = std::max(2, opt.m);
  UnitRational omega = parse_omega(opt.omega);
  if (omega.is_one()) omega = UnitRational::of(1, setup.k);

  Json j;
  bool pass = true;
  {
    InequalityCheck c = lemma22_check(path, setup.P, omega);
    j["omega_bounds"] = {{"lower", c.lower},
                         {"value", c.value},
                         {"upper", c.upper},
                         {"pass", c.pass}};
    pass = pass && c.pass;
  }
  {
    InequalityCheck c = lemma23_check(path, setup.P, m);
    j["iterate_bounds"] = {{"lower", c.lower},
                           {"value", c.value},
                           {"upper", c.upper},
                           {"pass", c.pass}};
    pass = pass && c.pass;
  }
  {
    InequalityCheck c = lemma24_check(path, setup.P, m);
    j["increment_bounds"] = {{"lower", c.lower},
                             {"value", c.value},
                             {"upper", c.upper},
                             {"pass", c.pass}};
    pass = pass && c.pass;
  }
  {
    Lemma32Check c = lemma32_check(setup.P, setup.k, setup.tau);
    j["reference_identity"] = {{"lhs", c.lhs}, {"rhs", c.rhs},
                               {"pass", c.pass}};
    pass = pass && c.pass;
  }
  j["m"] = m;
  j["pass"] = pass;
  emit(j, opt, "inequalities");
  return pass ? 0 : 1;
}

int cmd_galerkin(const Options& opt) {
  ProblemSetup setup = load(opt);
  GeneratorField gen = working_generator(setup);
  GalerkinResult gr = galerkin_index(gen, setup.P, setup.k, setup.tau);
  Json j = {{"i", gr.i},
            {"nu", gr.nu},
            {"stabilized", gr.stabilized},
            {"stabilized_at", gr.stabilized_at}};
  emit(j, opt, "galerkin");
  std::vector<std::string> rows;
  for (const auto& a : gr.audit)
    rows.push_back(std::to_string(a.m) + "," + real17(a.d) + "," +
                   std::to_string(a.minus) + "," + std::to_string(a.zero) +
                   "," + std::to_string(a.plus));
  write_csv(opt, "galerkin_audit", "m,d,m_minus,m_zero,m_plus", rows);
  return 0;
}

int cmd_solve(const Options& opt) {
  ProblemSetup setup = load(opt);
  if (!setup.hamiltonian) throw Error("solve: config needs a hamiltonian");
  std::mt19937_64 rng(setup.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> rad(setup.solver.radius_lo,
                                             setup.solver.radius_hi);
  std::vector<Vec> guesses;
  if (setup.solver.guess) guesses.push_back(*setup.solver.guess);
  for (int r = 0; r < setup.solver.restarts; ++r) {
    Vec u(2 * setup.n);
    for (int i = 0; i < u.size(); ++i) u(i) = gauss(rng);
    guesses.push_back(rad(rng) * u / u.norm());
  }
  auto attempt = [&](const Vec& g) -> std::optional<PSolutionOrbit> {
    try {
      return shoot(*setup.hamiltonian, setup.P, setup.tau, g,
                   setup.solver.max_iter);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  std::optional<PSolutionOrbit> best;
  std::vector<std::future<std::optional<PSolutionOrbit>>> futs;
  for (const Vec& g : guesses)
    futs.push_back(std::async(
        opt.threads > 1 ? std::launch::async : std::launch::deferred, attempt,
        g));
  for (auto& f : futs) {
    auto sol = f.get();
    if (sol && (!best || sol->residual < best->residual)) best = sol;
  }
  if (!best) {
    std::cout << R"({"error":"no nonconstant orbit found"})" << std::endl;
    return 1;
  }
  best->k = setup.k;
  PeriodScan scan = minimal_P_symmetric_period(*best, setup.k);
  Json grid = Json::array();
  for (const auto& c : scan.grid)
    grid.push_back({{"q", c.q},
                    {"lambda", c.lambda},
                    {"defect", c.defect},
                    {"pass", c.pass}});
  Json j = {{"residual", best->residual},
            {"energy_drift", best->energy_drift},
            {"radius", best->x0.norm()},
            {"newton_iters", best->newton_iters},
            {"lambda_min", scan.lambda_min},
            {"degenerate", scan.degenerate},
            {"period_grid", grid}};
  emit(j, opt, "solve");
  std::vector<std::string> rows;
  Trajectory ext = extend_orbit(*best, setup.k);
  for (size_t i = 0; i < ext.ts.size(); i += 8) {
    std::string row = real17(ext.ts[i]);
    for (int c = 0; c < ext.xs[i].size(); ++c)
      row += "," + real17(ext.xs[i](c));
    row += "," + real17(setup.hamiltonian->H(ext.xs[i]));
    rows.push_back(row);
  }
  write_csv(opt, "orbit", "t,x...,H", rows);
  return 0;
}

int cmd_certify(const Options& opt) {
  ProblemSetup setup = load(opt);
  Certificate cert = certify(setup);
  emit(certificate_json(cert), opt, "certificate");
  std::vector<std::string> rows;
  for (const auto& r : cert.indices)
    rows.push_back(std::to_string(r.m) + "," + std::to_string(r.i_crossing) +
                   "," + std::to_string(r.nu_crossing) + "," +
                   std::to_string(r.i_galerkin) + "," +
                   std::to_string(r.nu_galerkin) + "," +
                   (r.agree ? "1" : "0"));
  write_csv(opt, "indices",
            "m,i_crossing,nu_crossing,i_galerkin,nu_galerkin,agree", rows);
  return certificate_exit_code(cert);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maslov-type index and minimal-period certification toolkit"};
  app.require_subcommand(1);
  Options opt;
  if (const char* env = std::getenv("MPX_THREADS")) opt.threads = std::atoi(env);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON problem config");
    sub->add_option("--seed", opt.seed, "override config seed")
        ->each([&](const std::string&) { opt.seed_set = true; });
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--omega", opt.omega, "unit root a/b");
    sub->add_option("--m", opt.m, "iterate count");
    sub->add_option("--threads", opt.threads, "worker threads");
  };
  std::map<std::string, std::function<int(const Options&)>> handlers = {
      {"classify", cmd_classify},   {"index", cmd_index},
      {"bott", cmd_bott},           {"inequalities", cmd_inequalities},
      {"galerkin", cmd_galerkin},   {"solve", cmd_solve},
      {"certify", cmd_certify}};
  for (auto& [name, fn] : handlers) add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  std::string chosen = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(chosen)(opt);
  } catch (const std::exception& e) {
    Json err = {{"error", e.what()}};
    std::cout << err.dump(2) << std::endl;
    return 2;
  }
}
