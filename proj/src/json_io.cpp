#include "coolmap/json_io.hpp"

#include <cmath>

namespace coolmap::io {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorKind::InvalidArgument, what);
}

const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        bad(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

std::vector<double> numbers(const json& j, const char* what)
{
    if (!j.is_array()) {
        bad(std::string(what) + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : j) {
        if (!x.is_number()) {
            bad(std::string(what) + " must be an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

json violation_to_json(const Violation& v)
{
    struct Visitor {
        json operator()(const NotUTMajorizedViolation& x) const { return {{"index", x.index}}; }
        json operator()(const QNotPSDViolation& x) const { return {{"min_eig", x.min_eig}}; }
        json operator()(const ZeroCoherenceMismatchViolation& x) const { return {{"j", x.j}, {"k", x.k}}; }
        json operator()(const NoPSDCompletionFoundViolation& x) const { return {{"best_min_eig", x.best_min_eig}}; }
    };
    json j = std::visit(Visitor{}, v);
    j["kind"] = violation_name(v);
    return j;
}

} // namespace

json matrix_to_json(const CMatrix& m)
{
    std::vector<double> re, im;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    }
    json j{{"dim", m.rows()}, {"re", re}, {"im", im}};
    if (m.rows() != m.cols()) {
        j["cols"] = m.cols();
    }
    return j;
}

json matrix_to_json(const RMatrix& m)
{
    return matrix_to_json(CMatrix(m.cast<Complex>()));
}

CMatrix matrix_from_json(const json& j)
{
    const json& dim = field(j, "dim");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
        bad("\"dim\" must be a positive integer");
    }
    const auto rows = dim.get<Eigen::Index>();
    const Eigen::Index cols = j.contains("cols") ? j.at("cols").get<Eigen::Index>() : rows;
    const auto re = numbers(field(j, "re"), "\"re\"");
    const auto im = j.contains("im") ? numbers(j.at("im"), "\"im\"") : std::vector<double>(re.size(), 0.0);
    const auto n = static_cast<std::size_t>(rows * cols);
    if (re.size() != n || im.size() != n) {
        bad("matrix arrays must have dim*dim entries");
    }
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto i = static_cast<std::size_t>(r * cols + c);
            m(r, c) = Complex(re[i], im[i]);
        }
    }
    if (!m.allFinite()) {
        bad("matrix entries must be finite");
    }
    return m;
}

json vector_to_json(const CVector& v)
{
    std::vector<double> re(static_cast<std::size_t>(v.size())), im(re.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re[static_cast<std::size_t>(i)] = v(i).real();
        im[static_cast<std::size_t>(i)] = v(i).imag();
    }
    return {{"re", re}, {"im", im}};
}

CVector vector_from_json(const json& j)
{
    const auto re = numbers(field(j, "re"), "\"re\"");
    const auto im = j.contains("im") ? numbers(j.at("im"), "\"im\"") : std::vector<double>(re.size(), 0.0);
    if (im.size() != re.size()) {
        bad("vector \"re\" and \"im\" differ in length");
    }
    CVector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
    }
    return v;
}

DensityMatrix density_from_json(const json& j, const ToleranceSet& tol)
{
    return validate_density(matrix_from_json(j), tol);
}

json probability_to_json(const ProbabilityVector& p)
{
    std::vector<double> w(p.weights().data(), p.weights().data() + p.weights().size());
    return {{"dim", p.dim()}, {"w", w}};
}

ProbabilityVector probability_from_json(const json& j, const ToleranceSet& tol)
{
    if (j.is_array()) {
        return ProbabilityVector::from(numbers(j, "probability vector"), tol.prob_tol);
    }
    const auto w = numbers(field(j, "w"), "\"w\"");
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != w.size()) {
        bad("\"dim\" does not match the length of \"w\"");
    }
    return ProbabilityVector::from(w, tol.prob_tol);
}

std::vector<double> energies_from_json(const json& j)
{
    return numbers(j.is_array() ? j : field(j, "energies"), "energies");
}

json tolerances_to_json(const ToleranceSet& t)
{
    return {{"herm_tol", t.herm_tol}, {"trace_tol", t.trace_tol}, {"psd_tol", t.psd_tol},
            {"comp_tol", t.comp_tol}, {"unit_tol", t.unit_tol},   {"gap_tol", t.gap_tol},
            {"zero_tol", t.zero_tol}, {"prob_tol", t.prob_tol},   {"stoch_tol", t.stoch_tol}};
}

json certificate_to_json(const TransitionCertificate& c)
{
    json lambda = json::array();
    for (const auto& v : c.gram) {
        lambda.push_back(vector_to_json(v));
    }
    return {{"P", matrix_to_json(c.p.matrix())},
            {"Q", matrix_to_json(c.q.matrix())},
            {"min_eig_Q", c.min_eig_q},
            {"lambda", lambda}};
}

json decision_to_json(const Decision& d)
{
    json j{{"feasible", d.feasible}};
    if (d.certificate) {
        j["certificate"] = certificate_to_json(*d.certificate);
    }
    if (d.violation) {
        j["violation"] = violation_to_json(*d.violation);
    }
    return j;
}

json cooling_map_to_json(const CoolingMap& m)
{
    json lambda = json::array();
    for (const auto& v : m.lambda) {
        lambda.push_back(vector_to_json(v));
    }
    return {{"dim", m.dim}, {"n_diag", m.n_diag}, {"lambda", lambda}, {"mu", matrix_to_json(m.mu)}};
}

CoolingMap cooling_map_from_json(const json& j)
{
    CoolingMap m;
    m.dim = field(j, "dim").get<std::size_t>();
    const json& lambda = field(j, "lambda");
    if (!lambda.is_array()) {
        bad("\"lambda\" must be an array of complex vectors");
    }
    for (const auto& v : lambda) {
        m.lambda.push_back(vector_from_json(v));
    }
    m.n_diag = j.contains("n_diag") ? j.at("n_diag").get<std::size_t>()
                                    : (m.lambda.empty() ? 0 : static_cast<std::size_t>(m.lambda.front().size()));
    m.mu = matrix_from_json(field(j, "mu"));
    validate_cooling_map(m, std::numeric_limits<double>::infinity());
    return m;
}

MapFile map_file_from_json(const json& j)
{
    MapFile f;
    f.energies = energies_from_json(field(j, "energies"));
    if (!j.contains("mixture")) {
        f.maps.push_back(cooling_map_from_json(j));
        f.weights.push_back({1, 1});
        return f;
    }
    f.mixture = true;
    const json& mix = j.at("mixture");
    if (!mix.is_array() || mix.empty()) {
        bad("\"mixture\" must be a nonempty array");
    }
    for (const auto& item : mix) {
        const json& w = field(item, "weight");
        if (w.is_array()) {
            if (w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer()) {
                bad("a rational weight is a pair of integers [m, g]");
            }
            f.weights.push_back({w[0].get<std::int64_t>(), w[1].get<std::int64_t>()});
        } else if (w.is_number()) {
            f.weights.push_back(to_rational(w.get<double>()));
        } else {
            bad("\"weight\" must be [m, g] or a number");
        }
        f.maps.push_back(cooling_map_from_json(field(item, "map")));
    }
    return f;
}

json dilation_to_json(const ThermalDilation& t, const DilationReport& r)
{
    json levels = json::array();
    levels.push_back({{"energy", 0.0}, {"multiplicity", t.ancilla.g}, {"pair", nullptr}});
    for (std::size_t i = 0; i < t.ancilla.pairs.size(); ++i) {
        levels.push_back({{"energy", t.ancilla.levels[i + 1]},
                          {"multiplicity", t.ancilla.g},
                          {"pair", {t.ancilla.pairs[i].first + 1, t.ancilla.pairs[i].second + 1}}});
    }
    return {{"system_energies", t.system.energies()},
            {"ancilla", {{"ground_multiplicity", t.ancilla.g}, {"levels", levels}}},
            {"joint_dim", t.u.dim()},
            {"U", matrix_to_json(t.u.matrix())},
            {"report",
             {{"unitarity_defect", r.unitarity_defect},
              {"energy_offblock", r.energy_offblock},
              {"max_channel_deviation", r.max_channel_deviation}}}};
}

json monotones_to_json(const MonotoneReport& r)
{
    return {{"nu_I", r.nu_i}, {"nu_C", r.nu_c}, {"alpha", r.alpha}, {"schur", r.schur}};
}

json sweep_to_json(const SweepTable& t)
{
    json rows = json::array();
    for (const auto& row : t.rows) {
        rows.push_back({{"beta", row.beta}, {"thermo", row.thermo}, {"ut", row.ut}});
    }
    json j{{"rows", rows}};
    j["agreement_from"] = t.agreement_from ? json(*t.agreement_from) : json(nullptr);
    return j;
}

std::string fuzz_to_json_lines(const FuzzReport& r, const SamplerConfig& cfg, const ToleranceSet& tol)
{
    std::string out = json{{"type", "summary"},
                           {"seed", cfg.seed},
                           {"dim", cfg.dim},
                           {"n_diag", cfg.n_diag},
                           {"trials", r.trials},
                           {"violations", r.violations.size()},
                           {"max_coherence_excess", r.max_coherence_excess},
                           {"rank_one_trials", r.rank_one_trials},
                           {"max_rank_one_gap", r.max_rank_one_gap},
                           {"tolerances", tolerances_to_json(tol)}}
                          .dump() +
                      "\n";
    for (const auto& v : r.violations) {
        out += json{{"type", "violation"},
                    {"trial", v.trial},
                    {"seed", v.seed},
                    {"kind", v.kind},
                    {"detail", v.detail}}
                   .dump() +
               "\n";
    }
    return out;
}

} // namespace coolmap::io
