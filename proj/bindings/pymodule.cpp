#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spingap/aklt.hpp"
#include "spingap/harness.hpp"
#include "spingap/mps.hpp"
#include "spingap/numerics.hpp"
#include "spingap/pvbs.hpp"
#include "spingap/so_models.hpp"
#include "spingap/verify.hpp"

namespace py = pybind11;
using namespace spingap;

namespace {

PvbsParams params_from_py(const std::vector<double>& lambdas,
                          const std::map<std::pair<int, int>, double>& thetas) {
  return PvbsParams(lambdas, thetas);
}

py::dict report_to_dict(const SpectrumReport& rep) {
  py::dict d;
  d["model"] = rep.model_id;
  d["ground_energy"] = rep.ground_energy;
  d["kernel_dim"] = static_cast<long>(rep.kernel_dim);
  d["gap"] = rep.gap;
  d["solver"] = rep.solver;
  d["wall_time_s"] = rep.wall_time_s;
  return d;
}

}  // namespace

PYBIND11_MODULE(_spingap, m) {
  m.doc() = "spin-chain gap certification core";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<MpsFamily>(m, "MpsFamily")
      .def(py::init([](int d, int k, const std::vector<Matrix>& ms) {
             MpsFamily f{d, k, ms};
             f.validate();
             return f;
           }),
           py::arg("d"), py::arg("k"), py::arg("matrices"))
      .def_readonly("d", &MpsFamily::d)
      .def_readonly("k", &MpsFamily::k)
      .def_readonly("matrices", &MpsFamily::matrices);

  py::class_<NearestNeighborInteraction>(m, "Interaction")
      .def_readonly("d", &NearestNeighborInteraction::d)
      .def_readonly("matrix", &NearestNeighborInteraction::matrix)
      .def_readonly("model", &NearestNeighborInteraction::model);

  py::class_<PvbsParams>(m, "PvbsParams")
      .def(py::init(&params_from_py), py::arg("lambdas"),
           py::arg("thetas") = std::map<std::pair<int, int>, double>{})
      .def_property_readonly("n", &PvbsParams::n)
      .def("lam", &PvbsParams::lambda, py::arg("i"))
      .def("theta", &PvbsParams::theta, py::arg("i"), py::arg("j"))
      .def("gapped_admissible", &PvbsParams::gapped_admissible);

  // numerics
  m.def("kron", [](const Matrix& a, const Matrix& b) { return kron(a, b); });
  m.def("hermitian_eigenvalues", [](const Matrix& h) {
    return hermitian_eigensystem(h).eigenvalues;
  });

  // mps core
  m.def("transfer_operator", &transfer_operator);
  m.def("transfer_eigenvalues", [](const MpsFamily& f) {
    return Vector(transfer_spectrum(f).eigenvalues);
  });
  m.def("gamma_map",
        [](const MpsFamily& f, int n, const Matrix& b) { return gamma_map(f, n, b); },
        py::arg("family"), py::arg("n_sites"), py::arg("b"));
  m.def("mps_overlap",
        [](const MpsFamily& f, const Matrix& bl, const Matrix& br, int n) {
          return mps_overlap(f, bl, br, n);
        },
        py::arg("family"), py::arg("b_left"), py::arg("b_right"), py::arg("n_sites"));
  m.def("ground_space_dim", [](const MpsFamily& f, int n) {
    return static_cast<long>(ground_space(f, n).rank());
  });
  m.def("martingale_coefficient",
        [](const NearestNeighborInteraction& h, const MpsFamily& f, int k, int n) {
          return martingale_coefficient(h, f, k, n);
        });
  m.def("check_intersection_property",
        [](const NearestNeighborInteraction& h, const MpsFamily& f, int n) {
          const auto rep = check_intersection_property(h, f, n);
          py::dict d;
          d["holds"] = rep.holds;
          d["distance"] = rep.distance;
          d["gamma_dim"] = static_cast<long>(rep.gamma_dim);
          d["kernel_dim"] = static_cast<long>(rep.kernel_dim);
          d["precondition_ok"] = rep.precondition_ok;
          return d;
        },
        py::arg("interaction"), py::arg("family"), py::arg("n_sites"));
  m.def("martingale_gap_bound", [](double gamma_k, int k, double eps_k) {
    const auto b = martingale_gap_bound(gamma_k, k, eps_k);
    return py::make_tuple(b.value, b.valid);
  });

  // pvbs
  m.def("pvbs_interaction", &pvbs_interaction);
  m.def("pvbs_mps", &pvbs_mps);
  m.def("pvbs_transfer_spectrum_closed_form", [](const PvbsParams& p) {
    return pvbs_transfer_spectrum_closed_form(p).values;
  });
  m.def("gap_upper_bound", [](const PvbsParams& p, int n_sites) {
    const auto b = gap_upper_bound(p, n_sites);
    return py::make_tuple(b.value, b.finite, b.critical);
  });
  m.def("classify", [](const PvbsParams& p) {
    const auto label = classify(p);
    return py::make_tuple(label.n_left, label.n_right);
  });
  m.def("one_particle_hamiltonian", &one_particle_hamiltonian, py::arg("lam"),
        py::arg("theta_i0"), py::arg("n_sites"));
  m.def("pvbs_ground_vector",
        [](const PvbsParams& p, int a, int b, const std::set<int>& s) {
          return pvbs_ground_vector(p, a, b, s);
        });
  m.def("equivalence_path_interaction", [](const PvbsParams& p1, const PvbsParams& p2, double s) {
    return equivalence_path(p1, p2, s).interaction;
  });

  // aklt path
  m.def("aklt_s0", [] { return PathSchedule::standard().s0; });
  m.def("aklt_interaction", &aklt_interaction);
  m.def("aklt_mps", &aklt_mps);
  m.def("path_interaction", [](double s) {
    return path_interaction(s, PathSchedule::standard());
  });
  m.def("path_mps", [](double s) { return path_mps(s, PathSchedule::standard()); });
  m.def("zeta_norms_closed_form", [](double s, int n) {
    const auto z = zeta_norms_closed_form(s, n, PathSchedule::standard());
    return py::make_tuple(z.q_n, z.norm_sq, z.t2, z.t4);
  });
  m.def("gap_along_path", [](int n_sites, const std::vector<double>& grid) {
    const auto rows = gap_along_path(n_sites, grid, PathSchedule::standard());
    py::list out;
    for (const auto& r : rows) {
      py::dict d;
      d["s"] = r.s;
      d["f"] = r.f;
      d["g"] = r.g;
      d["gap"] = r.gap;
      d["kernel_dim"] = static_cast<long>(r.kernel_dim);
      out.append(d);
    }
    return out;
  });

  // so models
  m.def("clifford_matrices", [](int j) { return clifford_rep(j).z; });
  m.def("clifford_residual", [](int j) { return clifford_residual(clifford_rep(j)); });
  m.def("so_interaction", &so_interaction);
  m.def("so_mps", &so_mps);
  m.def("so_s0", &so_s0);
  m.def("so_transfer_check", [](int j, double s, double lambda0) {
    const auto cert = so_transfer_check(j, s, default_lambda_profile(j, lambda0));
    py::dict d;
    d["pass"] = cert.pass;
    d["irreducible"] = cert.irreducible;
    d["lower_triangular"] = cert.lower_triangular;
    d["top_error"] = cert.top_error;
    d["subdominant_margin"] = cert.subdominant_margin;
    return d;
  }, py::arg("j"), py::arg("s"), py::arg("lambda0") = 0.5);
  m.def("so_ground_space_dim",
        [](int j, int n) { return static_cast<long>(so_ground_space_dim(j, n)); });

  // harness
  m.def("spectral_gap_report",
        [](const NearestNeighborInteraction& h, int n_sites, py::object expected_kernel) {
          std::optional<Index> expected;
          if (!expected_kernel.is_none()) expected = expected_kernel.cast<Index>();
          SpectrumReport rep = spectral_gap(assemble_hamiltonian(h, n_sites), expected);
          rep.n_sites = n_sites;
          return report_to_dict(rep);
        },
        py::arg("interaction"), py::arg("n_sites"), py::arg("expected_kernel") = py::none());
  m.def("run_acceptance", [](const std::string& bundle) {
    py::list out;
    for (const auto& r : run_acceptance(bundle)) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["detail"] = r.detail;
      d["seconds"] = r.seconds;
      out.append(d);
    }
    return out;
  });
}
