#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coolmap/cooling.hpp"
#include "coolmap/dilation.hpp"
#include "coolmap/gibbs.hpp"
#include "coolmap/majorization.hpp"
#include "coolmap/oracle.hpp"

namespace coolmap::io {

using nlohmann::json;

// Complex matrix: {"dim": d, "re": [row-major], "im": [row-major]}; "im" may be omitted.
json matrix_to_json(const CMatrix& m);
json matrix_to_json(const RMatrix& m);
CMatrix matrix_from_json(const json& j);

// Complex vector: {"re": [...], "im": [...]}.
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

DensityMatrix density_from_json(const json& j, const ToleranceSet& tol = {});

// {"dim": d, "w": [...]}; a bare array is accepted too.
json probability_to_json(const ProbabilityVector& p);
ProbabilityVector probability_from_json(const json& j, const ToleranceSet& tol = {});

// A bare array or {"energies": [...]}.
std::vector<double> energies_from_json(const json& j);

json tolerances_to_json(const ToleranceSet& t);

json certificate_to_json(const TransitionCertificate& c);
json decision_to_json(const Decision& d);

// {"dim": d, "n_diag": n, "lambda": [vector, ...], "mu": matrix}
json cooling_map_to_json(const CoolingMap& m);
CoolingMap cooling_map_from_json(const json& j);

/// Either {"energies", "dim", "n_diag", "lambda", "mu"} for a single map or
/// {"energies", "mixture": [{"weight": [m, g] or number, "map": {...}}]}.
struct MapFile {
    std::vector<double> energies;
    std::vector<CoolingMap> maps;
    std::vector<RationalWeight> weights;
    bool mixture = false;
};

MapFile map_file_from_json(const json& j);

json dilation_to_json(const ThermalDilation& t, const DilationReport& r);

json monotones_to_json(const MonotoneReport& r);

json sweep_to_json(const SweepTable& t);

/// One JSON object per line: a summary line followed by one line per violation.
std::string fuzz_to_json_lines(const FuzzReport& r, const SamplerConfig& cfg, const ToleranceSet& tol = {});

} // namespace coolmap::io
