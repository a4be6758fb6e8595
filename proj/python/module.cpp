#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpx/certificate.hpp"
#include "mpx/galerkin.hpp"
#include "mpx/hamiltonian.hpp"
#include "mpx/index.hpp"

namespace py = pybind11;
using namespace mpx;

namespace {

UnitRational omega_of(std::int64_t a, std::int64_t b) {
  return UnitRational::of(a, b);
}

GeneratorField generator_from(const Mat& P, int k, double tau, uint64_t seed,
                              int degree, double amplitude) {
  return random_compatible_generator(P, k, tau, seed, degree, amplitude);
}

}  // namespace

PYBIND11_MODULE(_mpx, m) {
  m.doc() = "boundary-twisted Maslov-type indices and minimal period "
            "certification";

  py::register_exception<Error>(m, "MpxError");

  py::class_<PClass>(m, "PClass")
      .def_readonly("n", &PClass::n)
      .def_readonly("k", &PClass::k)
      .def_readonly("p", &PClass::p)
      .def_readonly("j", &PClass::j)
      .def_readonly("admissible", &PClass::admissible)
      .def("margin", &PClass::margin);

  m.def("classify", [](const Mat& P, int k) { return classify_P(P, k); },
        py::arg("P"), py::arg("k"));
  m.def("rotation2", &rotation2, py::arg("theta"));
  m.def("standard_J", &standard_J, py::arg("n"));
  m.def("is_symplectic",
        [](const Mat& M) { return is_symplectic(M); }, py::arg("M"));

  m.def(
      "index",
      [](const Mat& P, int k, double tau, uint64_t seed, int iterate,
         std::int64_t a, std::int64_t b) {
        GeneratorField gen = generator_from(P, k, tau, seed, 2, 0.8);
        SymplecticPath path = fundamental_solution(gen, tau);
        OmegaIndexRecord r =
            iterated_P_index(path, P, iterate, omega_of(a, b));
        return py::make_tuple(r.i, r.nu);
      },
      py::arg("P"), py::arg("k"), py::arg("tau"), py::arg("seed"),
      py::arg("m") = 1, py::arg("omega_a") = 0, py::arg("omega_b") = 1,
      "index and nullity of a seeded random compatible generator");

  m.def(
      "galerkin_index",
      [](const Mat& P, int k, double tau, uint64_t seed) {
        GeneratorField gen = generator_from(P, k, tau, seed, 2, 0.8);
        GalerkinResult r = galerkin_index(gen, P, k, tau);
        return py::make_tuple(r.i, r.nu, r.stabilized_at);
      },
      py::arg("P"), py::arg("k"), py::arg("tau"), py::arg("seed"));

  m.def(
      "bott_sum_check",
      [](const Mat& P, int k, double tau, uint64_t seed, int iterate) {
        GeneratorField gen = generator_from(P, k, tau, seed, 2, 0.8);
        SymplecticPath path = fundamental_solution(gen, tau);
        BottCheck bc = bott_check(path, P, iterate, UnitRational::one());
        return bc.pass;
      },
      py::arg("P"), py::arg("k"), py::arg("tau"), py::arg("seed"),
      py::arg("m") = 2);

  m.def(
      "certify_json",
      [](const std::string& config_text) {
        ProblemSetup setup = parse_config(Json::parse(config_text));
        Certificate cert = certify(setup);
        return certificate_json(cert).dump();
      },
      py::arg("config_json"),
      "run the full certification pipeline on a JSON config string");
}
