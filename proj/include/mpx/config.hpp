#pragma once

#include "mpx/generator.hpp"
#include "mpx/hamiltonian.hpp"
#include "mpx/normal_form.hpp"

#include <nlohmann/json.hpp>
#include <optional>

namespace mpx {

using Json = nlohmann::json;

struct SolverSettings {
  int restarts{8};
  int max_iter{60};
  double radius_lo{0.5};
  double radius_hi{4.0};
  double tol{1e-10};
  std::optional<Vec> guess;
};

struct ProblemSetup {
  int n{0};
  int k{1};
  double tau{1.0};
  Mat P;
  std::uint64_t seed{1};
  std::optional<HamiltonianModel> hamiltonian;
  std::optional<GeneratorField> generator;
  SolverSettings solver;
};

// Strict parse: unknown keys anywhere are an error.
ProblemSetup parse_config(const Json& doc);
ProblemSetup load_config(const std::string& path);

Mat parse_matrix(const Json& j);
Json matrix_json(const Mat& m);

}  // namespace mpx
