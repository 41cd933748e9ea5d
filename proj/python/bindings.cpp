#include <iomanip>
#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coolmap/json_io.hpp"

namespace py = pybind11;
using namespace coolmap;
using io::json;

namespace {

ToleranceSet tolerances(std::optional<double> tol)
{
    ToleranceSet t;
    return tol ? t.with_decision_tol(*tol) : t;
}

std::string check(const CMatrix& rho_m, const CMatrix& sigma_m, std::optional<double> tol, int grid)
{
    const auto t = tolerances(tol);
    const auto d = decide_transition(validate_density(rho_m, t), validate_density(sigma_m, t), t, grid);
    json j = io::decision_to_json(d);
    j["tolerances"] = io::tolerances_to_json(t);
    return j.dump();
}

std::string synthesize(const CMatrix& rho_m, const CMatrix& sigma_m, std::optional<double> tol, int grid)
{
    const auto t = tolerances(tol);
    const auto rho = validate_density(rho_m, t), sigma = validate_density(sigma_m, t);
    const auto d = decide_transition(rho, sigma, t, grid);
    json j = io::decision_to_json(d);
    if (d.feasible) {
        const auto m = synthesize_cooling_map(*d.certificate, t);
        j["map"] = io::cooling_map_to_json(m);
        j["round_trip_deviation"] = max_abs(apply_kraus(kraus_of(m), rho.matrix()) - sigma.matrix());
    }
    j["tolerances"] = io::tolerances_to_json(t);
    return j.dump();
}

CoolingMap parse_map(const std::string& text)
{
    auto m = io::cooling_map_from_json(json::parse(text));
    validate_cooling_map(m);
    return m;
}

std::string dilate(const std::string& map_file, std::size_t samples, std::uint64_t seed)
{
    const ToleranceSet t;
    const auto file = io::map_file_from_json(json::parse(map_file));
    const auto spectrum = validate_spectrum(file.energies, t.gap_tol);
    const auto dil = build_mixture_dilation(file.maps, file.weights, spectrum, t);
    const auto report = verify_dilation(dil, mixture_kraus(file.maps, file.weights), samples, seed, t.gap_tol);
    json j = io::dilation_to_json(dil, report);
    j["passes"] = report.passes(t.unit_tol);
    return j.dump();
}

std::string region(double x, std::size_t samples, std::uint64_t seed, bool raw)
{
    if (!(x >= 0.0 && x <= 0.5)) {
        throw Error(ErrorKind::InvalidArgument, "x must lie in [0, 0.5]", x);
    }
    CMatrix rho(2, 2);
    rho << 0.5, x, x, 0.5;
    SamplerConfig cfg;
    cfg.seed = seed;
    cfg.dim = 2;
    cfg.trials = samples;
    auto points = reachable_region_scan(validate_density(rho), cfg);
    if (!raw) points = bin_region(points);
    std::ostringstream csv;
    csv << "model,x,y,beta,cooling_boundary,gp_boundary\n" << std::setprecision(12);
    for (const auto& p : points) {
        csv << model_name(p.model) << ',' << x << ',' << p.y << ',' << p.beta << ',' << cooling_boundary(x, p.beta)
            << ',' << gp_boundary(x, p.beta) << '\n';
    }
    return csv.str();
}

std::string fuzz(std::size_t dim, std::size_t trials, std::uint64_t seed, std::size_t n_diag)
{
    if (dim < 2 || n_diag > dim) {
        throw Error(ErrorKind::InvalidArgument, "need dim >= 2 and n_diag <= dim");
    }
    SamplerConfig cfg;
    cfg.seed = seed;
    cfg.dim = dim;
    cfg.trials = trials;
    cfg.n_diag = n_diag;
    const ToleranceSet t;
    return io::fuzz_to_json_lines(necessity_fuzz(cfg, t), cfg, t);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Low-temperature state transitions: decisions, cooling maps, dilations.";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result(
        [&]() { return py::object(py::exception<Error>(m, "CoolmapError", PyExc_ValueError)); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            // args: (kind, message, magnitude, indices)
            const std::string what = e.what();
            const auto colon = what.find(": ");
            const auto args = py::make_tuple(std::string(to_string(e.kind())),
                                             colon == std::string::npos ? what : what.substr(colon + 2), e.magnitude(),
                                             e.indices());
            PyErr_SetObject(error_type.get_stored().ptr(), args.ptr());
        } catch (const json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("check", &check, py::arg("rho"), py::arg("sigma"), py::arg("tol") = py::none(), py::arg("grid") = 33);
    m.def("synthesize", &synthesize, py::arg("rho"), py::arg("sigma"), py::arg("tol") = py::none(),
          py::arg("grid") = 33);
    m.def(
        "kraus_operators", [](const std::string& map) { return kraus_of(parse_map(map)).operators; },
        py::arg("map"));
    m.def(
        "apply_map",
        [](const std::string& map, const CMatrix& rho) {
            return CMatrix(apply_channel(kraus_of(parse_map(map)), validate_density(rho)).matrix());
        },
        py::arg("map"), py::arg("rho"));
    m.def("dilate", &dilate, py::arg("map_file"), py::arg("samples") = 16, py::arg("seed") = 1);
    m.def(
        "monotones", [](const CMatrix& rho) { return io::monotones_to_json(monotones(validate_density(rho))).dump(); },
        py::arg("rho"));
    m.def(
        "ut_majorizes",
        [](const RVector& u, const RVector& v, double tol) {
            return ut_majorizes(ProbabilityVector::from(u), ProbabilityVector::from(v), tol).majorizes;
        },
        py::arg("u"), py::arg("v"), py::arg("tol") = 1e-10);
    m.def(
        "construct_utcs",
        [](const RVector& u, const RVector& v) {
            return RMatrix(construct_utcs(ProbabilityVector::from(u), ProbabilityVector::from(v)).matrix());
        },
        py::arg("u"), py::arg("v"));
    m.def(
        "thermo_majorizes",
        [](const RVector& u, const RVector& v, const std::vector<double>& energies, double beta, double tol) {
            const GibbsDistribution g(validate_spectrum(energies), beta);
            return thermo_majorizes(ProbabilityVector::from(u), ProbabilityVector::from(v), g, tol);
        },
        py::arg("u"), py::arg("v"), py::arg("energies"), py::arg("beta"), py::arg("tol") = 1e-10);
    m.def(
        "gp_two_level",
        [](const CMatrix& rho, const CMatrix& sigma) {
            return synthesize_gp_two_level(validate_density(rho), validate_density(sigma)).to_kraus().operators;
        },
        py::arg("rho"), py::arg("sigma"));
    m.def("region_csv", &region, py::arg("x"), py::arg("samples") = 10000, py::arg("seed") = 1,
          py::arg("raw") = false);
    m.def("fuzz", &fuzz, py::arg("dim"), py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("n_diag") = 0);
}
