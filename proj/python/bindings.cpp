#include "hdg/config.hpp"
#include "hdg/errors.hpp"
#include "hdg/infsup.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/mesh.hpp"
#include "hdg/study.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hdg;

namespace
{

Eigen::MatrixXd vertex_array(const Mesh& m)
{
    Eigen::MatrixXd v(m.num_vertices(), 2);
    for (int i = 0; i < m.num_vertices(); ++i)
        v.row(i) = m.vertices()[i].transpose();
    return v;
}

Eigen::MatrixXi cell_array(const Mesh& m)
{
    Eigen::MatrixXi c(m.num_cells(), 3);
    for (int i = 0; i < m.num_cells(); ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = m.cells()[i][j];
    return c;
}

InfSupMethod method_from(const std::string& s)
{
    if (s == "dense")
        return InfSupMethod::Dense;
    if (s == "lanczos")
        return InfSupMethod::Lanczos;
    if (s == "auto")
        return InfSupMethod::Auto;
    throw ConfigError("unknown inf-sup method '" + s + "'");
}

std::string method_name(InfSupMethod m)
{
    switch (m)
    {
    case InfSupMethod::Dense:
        return "dense";
    case InfSupMethod::Lanczos:
        return "lanczos";
    default:
        return "auto";
    }
}

SolveOptions options(int k, double tau, double tau_n, double tau_t)
{
    SolveOptions o;
    o.k = k;
    o.tau = tau;
    o.tau_n = tau_n;
    o.tau_t = tau_t;
    return o;
}

CaseParameters parameters(double beta_x, double beta_y, double reaction, double nu)
{
    CaseParameters p;
    p.beta_x = beta_x;
    p.beta_y = beta_y;
    p.reaction = reaction;
    p.nu = nu;
    return p;
}

py::dict level_dict(const LevelResult& r)
{
    py::dict d;
    d["n"] = r.n;
    d["h"] = r.h;
    d["cells"] = r.cells;
    d["dofs"] = r.dofs;
    d["condensed_dofs"] = r.condensed_dofs;
    d["residual"] = r.residual;
    d["monolithic_difference"] = r.monolithic_difference;
    d["gamma"] = r.gamma;
    py::dict errors;
    for (const auto& [name, value] : r.errors)
        errors[py::str(name)] = value;
    d["errors"] = errors;
    py::list bounds;
    for (const BoundCheck& b : r.bounds)
    {
        py::dict bd;
        bd["name"] = b.name;
        bd["lhs"] = b.lhs;
        bd["rhs"] = b.rhs;
        bd["holds"] = b.holds();
        bounds.append(bd);
    }
    d["bounds"] = bounds;
    d["seconds"] = r.seconds;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Hybridizable discontinuous Galerkin solvers and verification studies";

    static py::exception<Error> base(m, "HdgError", PyExc_RuntimeError);
    static py::exception<ConfigError> config_error(m, "ConfigError", base.ptr());
    static py::exception<ParseError> parse_error(m, "ParseError", config_error.ptr());
    static py::exception<TopologyError> topology_error(m, "TopologyError", base.ptr());
    static py::exception<AssemblyError> assembly_error(m, "AssemblyError", base.ptr());
    static py::exception<SolverError> solver_error(m, "SolverError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const ParseError& e)
        {
            parse_error(e.what());
        }
        catch (const ConfigError& e)
        {
            config_error(e.what());
        }
        catch (const TopologyError& e)
        {
            topology_error(e.what());
        }
        catch (const AssemblyError& e)
        {
            assembly_error(e.what());
        }
        catch (const SolverError& e)
        {
            solver_error(e.what());
        }
        catch (const Error& e)
        {
            base(e.what());
        }
    });

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("num_vertices", &Mesh::num_vertices)
        .def_property_readonly("num_cells", &Mesh::num_cells)
        .def_property_readonly("num_facets", &Mesh::num_facets)
        .def_property_readonly("num_boundary_facets", &Mesh::num_boundary_facets)
        .def_property_readonly("area", &Mesh::domain_area)
        .def_property_readonly("h", &Mesh::max_cell_diameter)
        .def_property_readonly("vertices", &vertex_array)
        .def_property_readonly("cells", &cell_array)
        .def("to_text", &save_mesh)
        .def_static("from_text", &load_mesh, py::arg("text"))
        .def("refine", &refine_uniform);

    m.def("structured_mesh", &generate_structured, py::arg("n"));
    m.def("lshape_mesh", &generate_lshape, py::arg("n"));
    m.def("catalog", &catalog_names);

    m.def(
        "solve",
        [](const std::string& name, int n, int k, double tau, double tau_n, double tau_t, bool inf_sup,
           bool error_bounds, bool compare_monolithic, double beta_x, double beta_y, double reaction,
           double nu) {
            SolveOptions o = options(k, tau, tau_n, tau_t);
            o.inf_sup = inf_sup;
            o.error_bounds = error_bounds;
            o.compare_monolithic = compare_monolithic;
            return level_dict(solve_case(manufactured_case(name, parameters(beta_x, beta_y, reaction, nu)), n, o));
        },
        py::arg("case"), py::arg("n"), py::arg("k") = 1, py::arg("tau") = 1.0, py::arg("tau_n") = 1.0,
        py::arg("tau_t") = 1.0, py::arg("inf_sup") = false, py::arg("error_bounds") = false,
        py::arg("compare_monolithic") = false, py::arg("beta_x") = 1.0, py::arg("beta_y") = 1.0,
        py::arg("reaction") = 1.0, py::arg("nu") = 1.0);

    m.def(
        "convergence",
        [](const std::string& name, const std::vector<int>& levels, int k, double tau) {
            const SolveOptions o = options(k, tau, tau, tau);
            const StudyReport rep = run_convergence_study(manufactured_case(name), levels, o);
            py::dict d;
            d["case"] = rep.case_name;
            d["k"] = rep.k;
            py::list lv;
            for (const LevelResult& l : rep.levels)
                lv.append(level_dict(l));
            d["levels"] = lv;
            py::dict rates;
            for (const std::string& e : rep.error_names)
                rates[py::str(e)] = rep.rates(e);
            d["rates"] = rates;
            return d;
        },
        py::arg("case"), py::arg("levels"), py::arg("k") = 1, py::arg("tau") = 1.0);

    m.def(
        "inf_sup",
        [](const std::string& name, int n, int k, const std::string& method, unsigned seed) {
            SolveOptions o = options(k, 1.0, 1.0, 1.0);
            o.inf_sup_method = method_from(method);
            o.seed = seed;
            const InfSupEstimate est = case_inf_sup(manufactured_case(name), n, o);
            py::dict d;
            d["gamma"] = est.gamma;
            d["dimension"] = est.dimension;
            d["method"] = method_name(est.method);
            d["iterations"] = est.iterations;
            return d;
        },
        py::arg("case"), py::arg("n"), py::arg("k") = 1, py::arg("method") = "auto", py::arg("seed") = 1u);

    m.def(
        "identity_residual",
        [](const std::string& name, int n, int k, int trials, unsigned seed) {
            SolveOptions o = options(k, 1.0, 1.0, 1.0);
            o.seed = seed;
            return case_identity_residual(manufactured_case(name), n, o, trials);
        },
        py::arg("case"), py::arg("n"), py::arg("k") = 1, py::arg("trials") = 20, py::arg("seed") = 1u);

    m.def(
        "config_hash", [](const std::string& text) { return config_hash(parse_config(text)); },
        py::arg("text"));
    m.def(
        "canonical_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"));
}
