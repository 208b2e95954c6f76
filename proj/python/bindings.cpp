// Python bindings for the main operations: grids, forms, group maps,
// connection pairs, characteristic and string forms, and the equivalence
// decision procedures.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "caloronkit/verify.hpp"

namespace py = pybind11;
using namespace caloronkit;

namespace {

py::array_t<std::complex<double>> coeff_array(const MatrixForm& f, int ci) {
  const int n = f.rank();
  const long np = f.grid()->npoints();
  py::array_t<std::complex<double>> out({np, static_cast<long>(n), static_cast<long>(n)});
  std::copy(f.coeff(ci).begin(), f.coeff(ci).end(), out.mutable_data());
  return out;
}

py::dict graded_terms(const GradedForm& f) {
  py::dict d;
  for (const auto& [deg, t] : f.terms) d[py::int_(deg)] = t;
  return d;
}

py::dict report_dict(const EquivalenceReport& r) {
  py::dict d;
  d["verdict"] = r.verdict == Verdict::Equivalent
                     ? "equivalent"
                     : (r.verdict == Verdict::Inequivalent ? "inequivalent" : "unsupported-domain");
  py::list per;
  for (const auto& dr : r.per_degree) {
    py::dict row;
    row["degree"] = dr.degree;
    row["closedness"] = dr.closedness;
    row["worst_period"] = dr.worst_period;
    row["exact"] = dr.exact;
    row["supported"] = dr.supported;
    per.append(row);
  }
  d["per_degree"] = per;
  py::dict extras;
  for (const auto& [k, v] : r.extras) extras[py::str(k)] = v;
  d["extras"] = extras;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "numerical caloron-correspondence toolkit";

  py::class_<FactorSpec>(m, "FactorSpec")
      .def_static("circle", &FactorSpec::circle, py::arg("n"))
      .def_static("interval", &FactorSpec::interval, py::arg("n"), py::arg("a"), py::arg("b"))
      .def_static("sphere3", &FactorSpec::sphere3, py::arg("n_psi"), py::arg("n_theta"),
                  py::arg("n_phi"));

  py::class_<Grid, GridPtr>(m, "Grid")
      .def_static("make", &Grid::make, py::arg("factors"),
                  py::arg("distinguished_circle") = std::nullopt)
      .def_static("parse", &parse_grid_spec, py::arg("spec"))
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("npoints", &Grid::npoints)
      .def_property_readonly("total_measure", &Grid::total_measure)
      .def("describe", &Grid::describe)
      .def("without_axis", &Grid::without_axis)
      .def("__repr__", [](const Grid& g) { return "<Grid " + g.describe() + ">"; });

  py::class_<MatrixForm>(m, "MatrixForm")
      .def_static("zero", &MatrixForm::zero, py::arg("grid"), py::arg("degree"), py::arg("rank"))
      .def_property_readonly("degree", &MatrixForm::degree)
      .def_property_readonly("rank", &MatrixForm::rank)
      .def_property_readonly("grid", &MatrixForm::grid)
      .def("coeff", &coeff_array, py::arg("index"),
           "coefficient table of the i-th increasing multi-index, shape (npoints, n, n)")
      .def("set_coeff",
           [](MatrixForm& f, int ci, py::array_t<std::complex<double>, py::array::c_style> a) {
             if (static_cast<size_t>(a.size()) != f.coeff(ci).size())
               throw std::invalid_argument("set_coeff: wrong size");
             std::copy(a.data(), a.data() + a.size(), f.coeff(ci).begin());
           })
      .def("sup_norm", [](const MatrixForm& f) { return sup_norm(f); })
      .def("__add__", [](const MatrixForm& a, const MatrixForm& b) { return a + b; })
      .def("__sub__", [](const MatrixForm& a, const MatrixForm& b) { return a - b; });

  m.def("wedge", &wedge);
  m.def("d", [](const MatrixForm& a) { return d(a); });
  m.def("contract", &contract);
  m.def("slice_form", &slice);
  m.def("fiber_integrate", &fiber_integrate);
  m.def("integrate", [](const MatrixForm& a) {
    auto v = integrate(a);
    const int n = a.rank();
    py::array_t<std::complex<double>> out({n, n});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
  });
  m.def("periods", [](const MatrixForm& a) {
    py::list out;
    for (const auto& p : periods(a)) out.append(py::make_tuple(p.cycle, p.value));
    return out;
  });
  m.def("is_exact", [](const MatrixForm& a, double tol) {
    auto r = is_exact(a, tol);
    py::dict d;
    d["exact"] = r.exact();
    d["closedness"] = r.closedness;
    d["worst_period"] = r.worst_period;
    return d;
  });
  m.def("max_diff", &max_diff);

  py::class_<GroupMap>(m, "GroupMap")
      .def_static("identity", &GroupMap::identity)
      .def_property_readonly("rank", &GroupMap::rank)
      .def_property_readonly("grid", &GroupMap::grid)
      .def_property_readonly("unitary", &GroupMap::unitary)
      .def_property_readonly("based", &GroupMap::based)
      .def("values", [](const GroupMap& g) {
        const int n = g.rank();
        py::array_t<std::complex<double>> out(
            {g.grid()->npoints(), static_cast<long>(n), static_cast<long>(n)});
        std::copy(g.values().begin(), g.values().end(), out.mutable_data());
        return out;
      });

  m.def("maurer_cartan", &maurer_cartan);
  m.def("block_sum", &block_sum);
  m.def("pointwise_inverse", &pointwise_inverse);
  m.def("rotation_homotopy", &rotation_homotopy);
  m.def("rotation_homotopy_family", &rotation_homotopy_family);
  m.def("random_smooth_map", &random_smooth_map, py::arg("grid"), py::arg("rank"),
        py::arg("seed"), py::arg("band"), py::arg("amplitude"), py::arg("unitary") = false,
        py::arg("based") = false);
  m.def("random_form", &random_form, py::arg("grid"), py::arg("degree"), py::arg("rank"),
        py::arg("seed"), py::arg("band"), py::arg("amplitude"),
        py::arg("anti_hermitian") = false);
  m.def("random_homotopy", &random_homotopy, py::arg("grid"), py::arg("rank"), py::arg("seed"),
        py::arg("band"), py::arg("amplitude"), py::arg("n_t"));

  py::class_<ConnectionPair>(m, "ConnectionPair")
      .def_static("make", &ConnectionPair::make, py::arg("A"), py::arg("Phi"),
                  py::arg("unitary") = false)
      .def_readonly("A", &ConnectionPair::A)
      .def_readonly("Phi", &ConnectionPair::Phi)
      .def_readonly("unitary", &ConnectionPair::unitary)
      .def_property_readonly("rank", &ConnectionPair::rank);
  py::class_<FramedConnection>(m, "FramedConnection")
      .def_readonly("a", &FramedConnection::a)
      .def_readonly("unitary", &FramedConnection::unitary);

  m.def("caloron_transform", &caloron_transform);
  m.def("inverse_caloron", &inverse_caloron);
  m.def("curvature", &curvature);
  m.def("higgs_covariant_derivative", &higgs_covariant_derivative);
  m.def("higgs_holonomy_map", &higgs_holonomy_map, py::arg("pair"), py::arg("ode_steps") = 256);
  m.def("random_pair", &random_pair, py::arg("grid"), py::arg("rank"), py::arg("seed"),
        py::arg("band"), py::arg("amplitude"), py::arg("unitary") = false);
  m.def("flat_pair", &flat_pair);

  py::class_<PairPath>(m, "PairPath");
  m.def("straight_line", &straight_line);
  m.def("sample_path", &sample_path);

  py::class_<GradedForm>(m, "GradedForm")
      .def_property_readonly("parity",
                             [](const GradedForm& f) {
                               return f.parity == Parity::Even ? "even" : "odd";
                             })
      .def_property_readonly("terms", &graded_terms)
      .def("term", [](const GradedForm& f, int deg) { return f.term(deg); })
      .def("sup", [](const GradedForm& f) { return graded_sup(f); });
  m.def("graded_d", &graded_d);
  m.def("graded_max_diff", &graded_max_diff);

  m.def("chern_character", &chern_character, py::arg("connection"), py::arg("cutoff"));
  m.def("odd_chern_character", &odd_chern_character, py::arg("map"), py::arg("cutoff"));
  m.def("chern_simons",
        [](const ConnectionPair& p0, const ConnectionPair& p1, int cutoff) {
          return chern_simons(caloron_path(straight_line(p0, p1)), cutoff);
        },
        py::arg("p0"), py::arg("p1"), py::arg("cutoff"));

  py::enum_<StringFormAlg>(m, "StringFormAlg")
      .value("Direct", StringFormAlg::Direct)
      .value("ViaCaloron", StringFormAlg::ViaCaloron);
  py::enum_<StringPotentialAlg>(m, "StringPotentialAlg")
      .value("Slice", StringPotentialAlg::Slice)
      .value("Explicit", StringPotentialAlg::Explicit)
      .value("CsFiber", StringPotentialAlg::CsFiber);

  m.def("string_form", &string_form, py::arg("pair"), py::arg("cutoff"),
        py::arg("algorithm") = StringFormAlg::Direct);
  m.def("string_potential", &string_potential, py::arg("path"), py::arg("cutoff"),
        py::arg("algorithm") = StringPotentialAlg::Explicit);
  m.def("total_string_potential", &total_string_potential, py::arg("pair"), py::arg("cutoff"));
  m.def("tau_hat_pullback", &tau_hat_pullback, py::arg("based_map"), py::arg("cutoff"));
  m.def("universal_string_pullback", &universal_string_pullback, py::arg("map"),
        py::arg("cutoff"));
  m.def("string_coefficient", &string_coefficient, py::arg("i"), py::arg("j"));
  m.def("gerbe_curving_check", [](const ConnectionPair& p) {
    auto g = gerbe_curving_check(p);
    return py::make_tuple(g.B, g.defect);
  });
  m.def("surjectivity_witness",
        [](GridPtr grid, const MatrixForm& f, int k) { return surjectivity_witness(grid, f, k); },
        py::arg("grid"), py::arg("f_on_base"), py::arg("k"));

  m.def("twz_transgression", &twz_transgression, py::arg("homotopy"), py::arg("cutoff"));
  m.def("cs_equivalent",
        [](const GroupMap& g0, const GroupMap& g1, const GroupMap& G, int cutoff, double tol) {
          return report_dict(cs_equivalent(g0, g1, G, cutoff, tol));
        },
        py::arg("g0"), py::arg("g1"), py::arg("homotopy"), py::arg("cutoff"), py::arg("tol"));
  m.def("string_data_equivalent",
        [](const ConnectionPair& p0, const ConnectionPair& p1, int cutoff, double tol) {
          return report_dict(string_data_equivalent(p0, p1, cutoff, tol));
        },
        py::arg("p0"), py::arg("p1"), py::arg("cutoff"), py::arg("tol"));
  m.def("direct_sum", &direct_sum);
  m.def("homotopy_endpoint", &homotopy_endpoint);

  m.def("run_suite", [](const std::string& name, const std::string& grid, int rank, int cutoff,
                        std::uint64_t seed, int band, double amplitude) {
    SuiteConfig cfg;
    if (!grid.empty()) cfg.grid = parse_grid_spec(grid);
    cfg.rank = rank;
    cfg.cutoff = cutoff;
    cfg.seed = seed;
    cfg.band = band;
    cfg.amplitude = amplitude;
    py::list out;
    for (const auto& r : run_suite(name, cfg)) {
      py::dict row;
      row["name"] = r.name;
      row["identity"] = r.identity;
      row["defect"] = r.defect;
      row["tol"] = r.tol;
      row["pass"] = r.pass();
      out.append(row);
    }
    return out;
  }, py::arg("name"), py::arg("grid") = "", py::arg("rank") = 2, py::arg("cutoff") = 2,
     py::arg("seed") = 7, py::arg("band") = 2, py::arg("amplitude") = 0.2);
}
