#include "mpx/config.hpp"

#include <fstream>
#include <set>

namespace mpx {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed,
                  const std::set<std::string>& required,
                  const std::string& where) {
  if (!j.is_object()) throw Error("config: " + where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw Error("config: unknown key '" + key + "' in " + where);
  for (const auto& key : required)
    if (!j.contains(key))
      throw Error("config: missing key '" + key + "' in " + where);
}

Mat build_P_from_class(const Json& j, int n, int k) {
  require_keys(j, {"p", "blocks", "conjugator_seed"}, {"p", "blocks"},
               "P class spec");
  int p = j.at("p").get<int>();
  std::vector<Mat> blocks;
  for (int i = 0; i < p; ++i) blocks.push_back(Mat::Identity(2, 2));
  int weight = p;
  for (const Json& b : j.at("blocks")) {
    require_keys(b, {"m", "j"}, {"m", "j"}, "P block spec");
    int m = b.at("m").get<int>();
    int jm = b.at("j").get<int>();
    if (m < 1 || 2 * m >= k)
      throw Error("config: block angle index m out of range");
    for (int c = 0; c < jm; ++c)
      blocks.push_back(rotation2(kTwoPi * m / k));
    weight += jm;
  }
  if (weight != n)
    throw Error("config: p + sum of block counts must equal n");
  Mat Ninv = diamond_all(blocks);  // this is P^{-1} in normal form
  Mat V = Mat::Identity(2 * n, 2 * n);
  if (j.contains("conjugator_seed")) {
    std::mt19937_64 rng(j.at("conjugator_seed").get<std::uint64_t>());
    V = random_symplectic(n, rng);
  }
  Mat P = V * Ninv.inverse() * V.inverse();
  return symplectic_project(P);
}

HamiltonianModel build_hamiltonian(const Json& j, int n, const Mat& P) {
  require_keys(j, {"type", "power", "coeff", "coeffs", "Q"}, {"type"},
               "hamiltonian");
  std::string type = j.at("type").get<std::string>();
  if (type == "radial_power") {
    require_keys(j, {"type", "power", "coeff"}, {"type", "power", "coeff"},
                 "radial_power");
    return radial_power(n, P, j.at("power").get<double>(),
                        j.at("coeff").get<double>());
  }
  if (type == "radial_poly") {
    require_keys(j, {"type", "coeffs"}, {"type", "coeffs"}, "radial_poly");
    return radial_poly(n, P, j.at("coeffs").get<std::vector<double>>());
  }
  if (type == "quadratic_plus_quartic") {
    require_keys(j, {"type", "Q"}, {"type", "Q"}, "quadratic_plus_quartic");
    Mat Q = parse_matrix(j.at("Q"));
    if (Q.rows() != 2 * n) throw Error("config: Q has wrong dimension");
    return quadratic_plus_quartic(Q, P);
  }
  throw Error("config: unknown hamiltonian type '" + type + "'");
}

GeneratorField build_generator(const Json& j, int n, int k, double tau,
                               const Mat& P) {
  require_keys(j, {"type", "seed", "degree", "amplitude", "B"}, {"type"},
               "generator");
  std::string type = j.at("type").get<std::string>();
  if (type == "zero") return zero_generator(n, P, tau);
  if (type == "constant") {
    require_keys(j, {"type", "B"}, {"type", "B"}, "constant generator");
    Mat B = parse_matrix(j.at("B"));
    if (B.rows() != 2 * n) throw Error("config: B has wrong dimension");
    return constant_generator(0.5 * (B + B.transpose()), P, tau);
  }
  if (type == "random_compatible") {
    std::uint64_t seed = j.value("seed", std::uint64_t(1));
    int degree = j.value("degree", 2);
    double amplitude = j.value("amplitude", 0.8);
    return random_compatible_generator(P, k, tau, seed, degree, amplitude);
  }
  throw Error("config: unknown generator type '" + type + "'");
}

}  // namespace

Mat parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty())
    throw Error("config: matrix must be a nonempty array of rows");
  int rows = int(j.size());
  int cols = int(j[0].size());
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (int(j[r].size()) != cols) throw Error("config: ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Json matrix_json(const Mat& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

ProblemSetup parse_config(const Json& doc) {
  require_keys(doc,
               {"n", "k", "tau", "P", "hamiltonian", "generator", "solver",
                "seed"},
               {"n", "k", "tau", "P"}, "top level");
  ProblemSetup setup;
  setup.n = doc.at("n").get<int>();
  setup.k = doc.at("k").get<int>();
  setup.tau = doc.at("tau").get<double>();
  if (setup.n < 1 || setup.k < 1 || setup.tau <= 0)
    throw Error("config: n, k must be positive integers and tau > 0");
  setup.seed = doc.value("seed", std::uint64_t(1));

  const Json& pj = doc.at("P");
  if (pj.is_array())
    setup.P = parse_matrix(pj);
  else if (pj.is_object() && pj.contains("matrix"))
    setup.P = parse_matrix(pj.at("matrix"));
  else
    setup.P = build_P_from_class(pj, setup.n, setup.k);
  if (setup.P.rows() != 2 * setup.n || setup.P.cols() != 2 * setup.n)
    throw Error("config: P has wrong dimension");
  if (!is_symplectic(setup.P)) throw Error("config: P is not symplectic");
  if (!check_Pk(setup.P, setup.k))
    throw Error("config: P does not have exact order k");

  if (doc.contains("hamiltonian") && doc.contains("generator"))
    throw Error("config: give either hamiltonian or generator, not both");
  if (doc.contains("hamiltonian"))
    setup.hamiltonian =
        build_hamiltonian(doc.at("hamiltonian"), setup.n, setup.P);
  if (doc.contains("generator"))
    setup.generator = build_generator(doc.at("generator"), setup.n, setup.k,
                                      setup.tau, setup.P);

  if (doc.contains("solver")) {
    const Json& s = doc.at("solver");
    require_keys(s, {"restarts", "max_iter", "radius", "tol", "guess"}, {},
                 "solver");
    setup.solver.restarts = s.value("restarts", 8);
    setup.solver.max_iter = s.value("max_iter", 60);
    setup.solver.tol = s.value("tol", 1e-10);
    if (s.contains("radius")) {
      auto r = s.at("radius").get<std::vector<double>>();
      if (r.size() != 2) throw Error("config: radius must be [lo, hi]");
      setup.solver.radius_lo = r[0];
      setup.solver.radius_hi = r[1];
    }
    if (s.contains("guess")) {
      auto g = s.at("guess").get<std::vector<double>>();
      if (int(g.size()) != 2 * setup.n)
        throw Error("config: guess has wrong dimension");
      Vec v(2 * setup.n);
      for (size_t i = 0; i < g.size(); ++i) v(int(i)) = g[i];
      setup.solver.guess = v;
    }
  }
  return setup;
}

ProblemSetup load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path);
  Json doc = Json::parse(in);
  return parse_config(doc);
}

}  // namespace mpx
