// Python bindings for the main operations: exterior algebra, integrands,
// polyconvexity checks, rational approximation, currents, and Q-graph
// energies. Reports cross the boundary as plain dicts.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aniso/suite.hpp"

namespace py = pybind11;
using namespace aniso;

namespace {

py::object json_to_py(const Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

QPoint qpoint_of(const std::vector<Eigen::VectorXd>& points) {
    QPoint p;
    p.points = points;
    return p;
}

}  // namespace

PYBIND11_MODULE(aniso, m) {
    m.doc() = "anisotropic variational toolkit: k-vectors, integrands, polyconvexity "
              "certification, polyhedral currents, and Q-valued graph energies";

    py::register_exception<Error>(m, "AnisoError");

    py::class_<KVector>(m, "KVector")
        .def(py::init<int, int, std::vector<double>>(), py::arg("n"), py::arg("k"),
             py::arg("coeffs"))
        .def_static("basis_vector", &KVector::basis_vector, py::arg("n"), py::arg("i"))
        .def_property_readonly("n", &KVector::n)
        .def_property_readonly("k", &KVector::grade)
        .def_property_readonly("coeffs",
                               [](const KVector& v) { return v.coeffs(); })
        .def("__add__", [](const KVector& a, const KVector& b) { return a + b; })
        .def("__sub__", [](const KVector& a, const KVector& b) { return a - b; })
        .def("__mul__", [](const KVector& a, double s) { return a * s; })
        .def("__rmul__", [](const KVector& a, double s) { return a * s; })
        .def("__neg__", [](const KVector& a) { return -a; })
        .def("__repr__", [](const KVector& v) { return to_json(v).dump(); });

    m.def("wedge", [](const KVector& a, const KVector& b) { return wedge(a, b); });
    m.def("inner", [](const KVector& a, const KVector& b) { return inner(a, b); });
    m.def("hodge_star", [](const KVector& z) { return hodge_star(z); });
    m.def("norm", [](const KVector& a) { return norm(a); });
    m.def("is_simple", [](const KVector& xi, double tol) { return is_simple(xi, tol); },
          py::arg("xi"), py::arg("tol") = kRankTol);
    m.def("associated_space",
          [](const KVector& xi, double tol) { return associated_space(xi, tol); },
          py::arg("xi"), py::arg("tol") = kRankTol,
          "orthonormal basis (columns) of the subspace annihilating xi under wedge");
    m.def("factor_simple",
          [](const KVector& xi, double tol) { return factor_simple(xi, tol); },
          py::arg("xi"), py::arg("tol") = kRankTol);
    m.def("wedge_cols", [](const Eigen::MatrixXd& w) { return wedge_cols(w); });
    m.def("wedge_M", [](const Eigen::MatrixXd& x) { return wedge_M(x); });
    m.def("xi_from_hom", [](const Eigen::MatrixXd& f) {
        auto r = xi_from_hom(f);
        return py::make_tuple(r.xi, r.rank_deficient);
    });

    py::class_<GeometricIntegrand>(m, "GeometricIntegrand")
        .def_property_readonly("n", &GeometricIntegrand::n)
        .def_property_readonly("k", &GeometricIntegrand::k)
        .def_property_readonly("name", &GeometricIntegrand::name)
        .def("__call__", [](const GeometricIntegrand& psi, const KVector& xi) { return psi(xi); });
    m.def("area", &make_area, py::arg("n"), py::arg("k"));
    m.def("ellipse_norm", &make_ellipse_norm, py::arg("n"), py::arg("k"), py::arg("A"));
    m.def("perturbed_area", &make_perturbed_area, py::arg("n"), py::arg("k"),
          py::arg("eta_star"), py::arg("eps"));
    m.def("integrand_from_json",
          [](const std::string& text) { return integrand_from_json(Json::parse(text)); });
    m.def("classical_eval", [](const GeometricIntegrand& psi, const Eigen::MatrixXd& x) {
        return ClassicalIntegrand(psi)(x);
    });

    py::class_<OrientedPlane>(m, "OrientedPlane")
        .def_static("from_kvector", &OrientedPlane::from_kvector, py::arg("xi"),
                    py::arg("tol") = kRankTol)
        .def_static("from_frame", &OrientedPlane::from_frame, py::arg("w"))
        .def_property_readonly("kvector", &OrientedPlane::kvector)
        .def_property_readonly("frame", &OrientedPlane::frame);

    py::class_<Decomposition>(m, "Decomposition")
        .def_property_readonly("d", &Decomposition::d)
        .def_property_readonly("weight_sum", &Decomposition::weight_sum)
        .def("to_dict", [](const Decomposition& dec) { return json_to_py(to_json(dec)); })
        .def("__repr__", [](const Decomposition& dec) { return to_json(dec).dump(); });
    m.def("decomposition_from_json", [](const std::string& text) {
        return decomposition_from_json(Json::parse(text));
    });
    m.def("random_decomposition",
          [](int n, int k, int d, std::uint64_t seed, bool positive) {
              return random_decomposition(n, k, d, seed,
                                          positive ? OrientationMode::positive
                                                   : OrientationMode::any);
          },
          py::arg("n"), py::arg("k"), py::arg("d"), py::arg("seed"), py::arg("positive") = false);
    m.def("check_instance",
          [](const GeometricIntegrand& psi, double c, const Decomposition& dec, bool positive) {
              return check_instance(psi, c, dec,
                                    positive ? OrientationMode::positive : OrientationMode::any);
          },
          py::arg("psi"), py::arg("c"), py::arg("dec"), py::arg("positive") = false);
    m.def("certify_sampled",
          [](const GeometricIntegrand& psi, double c, int dirs, int atoms, std::uint64_t seed) {
              return json_to_py(to_json(certify_sampled(psi, c, dirs, atoms, seed)));
          },
          py::arg("psi"), py::arg("c"), py::arg("dirs") = 50, py::arg("atoms") = 200,
          py::arg("seed") = 0);
    m.def("search_counterexample",
          [](const GeometricIntegrand& psi, double c, std::uint64_t budget, int n, int k,
             std::uint64_t seed) {
              SearchParams params;
              params.n = n;
              params.k = k;
              auto result = search_counterexample(psi, c, budget, params, seed);
              Json j{{"found", result.witness.has_value()},
                     {"gap", result.witness ? Json(result.gap) : Json(nullptr)},
                     {"samples_used", result.samples_used},
                     {"witness", result.witness ? to_json(*result.witness) : Json(nullptr)}};
              return json_to_py(j);
          },
          py::arg("psi"), py::arg("c"), py::arg("budget"), py::arg("n"), py::arg("k"),
          py::arg("seed") = 0);

    m.def("approximate_decomposition",
          [](const Decomposition& dec, double eps) {
              return json_to_py(to_json(approximate_decomposition(dec, eps)));
          },
          py::arg("dec"), py::arg("eps"),
          "rational-slope approximation; the returned dict embeds the bound ledger");

    m.def("metric_G",
          [](const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
              return metric_G(qpoint_of(a), qpoint_of(b));
          });

    m.def("test_pair_gap",
          [](const GeometricIntegrand& psi, double c, const Decomposition& dec) {
              auto [s, d] = make_test_pair_k1(dec);
              return verify_aue(psi, c, s, d);
          },
          py::arg("psi"), py::arg("c"), py::arg("dec"),
          "energy gap of the segment test pair realizing a grade-1 decomposition");

    m.def("uqc_sample_gap",
          [](const GeometricIntegrand& psi, double c, int q, int level, std::uint64_t seed) {
              Rng rng(seed);
              auto h = random_multigraph(psi.k(), psi.n() - psi.k(), q, rng);
              auto f = random_q_function(psi.k(), psi.n() - psi.k(), q, level, 1.0, h,
                                         Rng::derive(seed, 2));
              auto pair = make_graph_test_pair(f, h);
              return verify_uqc(QIntegrand(q, ClassicalIntegrand(psi)), c, pair);
          },
          py::arg("psi"), py::arg("c"), py::arg("Q"), py::arg("level"), py::arg("seed"));

    m.def("equivalence_suite",
          [](const GeometricIntegrand& psi, double c, std::uint64_t seed, int trials) {
              SuiteConfig config;
              config.c = c;
              config.seed = seed;
              config.trials = trials;
              return json_to_py(equivalence_suite(psi, config).report);
          },
          py::arg("psi"), py::arg("c"), py::arg("seed"), py::arg("trials") = 50);
}
