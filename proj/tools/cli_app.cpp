#include "cli_app.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "coolmap/json_io.hpp"

namespace coolmap::cli {

namespace {

using io::json;

constexpr std::size_t kLargeJointDim = 4096;

const char* kRegionHelp =
    "CSV columns: model,x,y,beta,cooling_boundary,gp_boundary\n"
    "  model             cooling | gp\n"
    "  x                 initial coherence of [[1/2, x], [x, 1/2]]\n"
    "  y                 reached coherence |sigma_12|\n"
    "  beta              reached ground population sigma_11\n"
    "  cooling_boundary  x * sqrt(2 (1 - beta))\n"
    "  gp_boundary       sqrt((1 - beta) (beta - 1/2 + 2 x^2))\n"
    "Points are binned on a 200x200 (beta, y) grid keeping the largest y per cell; --raw disables binning.";

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
    }
    return json::parse(in);
}

std::uint64_t default_seed()
{
    const char* env = std::getenv("COOLMAP_SEED");
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(env, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != std::string(env).size()) {
        throw Error(ErrorKind::InvalidArgument, "COOLMAP_SEED must be an unsigned integer");
    }
    return v;
}

int exit_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NotOptimallyCoherent:
    case ErrorKind::CompletenessDefect:
    case ErrorKind::CertificateInconsistent:
    case ErrorKind::NotUnitary:
    case ErrorKind::DegenerateEdgeCase:
        return kStructural;
    default:
        return kInputError;
    }
}

struct Options {
    std::string rho, sigma, map, u, v, energies, out_path;
    std::optional<double> tol;
    int grid = 33;
    std::size_t samples = 16;
    std::optional<std::uint64_t> seed;
    double x = 0.5;
    std::size_t region_samples = 10000;
    bool raw = false;
    std::vector<double> betas;
    std::optional<double> beta;
    std::size_t dim = 3;
    std::size_t trials = 1000;
    std::size_t n_diag = 0;

    ToleranceSet tolerances() const
    {
        ToleranceSet t;
        return tol ? t.with_decision_tol(*tol) : t;
    }
    std::uint64_t resolved_seed() const { return seed ? *seed : default_seed(); }
};

int cmd_check(const Options& o, std::ostream& out)
{
    const auto tol = o.tolerances();
    const auto rho = io::density_from_json(read_json(o.rho), tol);
    const auto sigma = io::density_from_json(read_json(o.sigma), tol);
    const auto d = decide_transition(rho, sigma, tol, o.grid);
    json j = io::decision_to_json(d);
    j["tolerances"] = io::tolerances_to_json(tol);
    out << j.dump(2) << "\n";
    return d.feasible ? kOk : kInfeasible;
}

int cmd_synthesize(const Options& o, std::ostream& out)
{
    const auto tol = o.tolerances();
    const auto rho = io::density_from_json(read_json(o.rho), tol);
    const auto sigma = io::density_from_json(read_json(o.sigma), tol);
    const auto d = decide_transition(rho, sigma, tol, o.grid);
    json j = io::decision_to_json(d);
    if (d.feasible) {
        const auto m = synthesize_cooling_map(*d.certificate, tol);
        const CMatrix image = apply_kraus(kraus_of(m), rho.matrix());
        j["map"] = io::cooling_map_to_json(m);
        j["round_trip_deviation"] = max_abs(image - sigma.matrix());
    }
    j["tolerances"] = io::tolerances_to_json(tol);
    out << j.dump(2) << "\n";
    return d.feasible ? kOk : kInfeasible;
}

int cmd_dilate(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto tol = o.tolerances();
    const auto file = io::map_file_from_json(read_json(o.map));
    const auto spectrum = validate_spectrum(file.energies, tol.gap_tol);
    const auto t = build_mixture_dilation(file.maps, file.weights, spectrum, tol);
    if (t.u.dim() > kLargeJointDim) {
        err << "warning: joint dimension " << t.u.dim() << " exceeds " << kLargeJointDim << "\n";
    }
    const auto report = verify_dilation(t, mixture_kraus(file.maps, file.weights), o.samples, o.resolved_seed(),
                                        tol.gap_tol);
    json j = io::dilation_to_json(t, report);
    j["tolerances"] = io::tolerances_to_json(tol);
    out << j.dump(2) << "\n";
    return report.passes(tol.unit_tol) ? kOk : kStructural;
}

int cmd_monotones(const Options& o, std::ostream& out)
{
    const auto tol = o.tolerances();
    const auto rho = io::density_from_json(read_json(o.rho), tol);
    json j = io::monotones_to_json(monotones(rho, tol));
    j["tolerances"] = io::tolerances_to_json(tol);
    out << j.dump(2) << "\n";
    return kOk;
}

int cmd_region(const Options& o, std::ostream& out)
{
    if (!(o.x >= 0.0 && o.x <= 0.5)) {
        throw Error(ErrorKind::InvalidArgument, "--x must lie in [0, 0.5]", o.x);
    }
    CMatrix rho(2, 2);
    rho << 0.5, o.x, o.x, 0.5;
    SamplerConfig cfg;
    cfg.seed = o.resolved_seed();
    cfg.dim = 2;
    cfg.trials = o.region_samples;
    auto points = reachable_region_scan(validate_density(rho), cfg);
    if (!o.raw) {
        points = bin_region(points);
    }

    std::ofstream file;
    if (!o.out_path.empty() && o.out_path != "-") {
        file.open(o.out_path);
        if (!file) {
            throw Error(ErrorKind::InvalidArgument, "cannot write " + o.out_path);
        }
    }
    std::ostream& csv = file.is_open() ? static_cast<std::ostream&>(file) : out;
    csv << "model,x,y,beta,cooling_boundary,gp_boundary\n";
    csv << std::setprecision(12);
    for (const auto& p : points) {
        csv << model_name(p.model) << ',' << o.x << ',' << p.y << ',' << p.beta << ','
            << cooling_boundary(o.x, p.beta) << ',' << gp_boundary(o.x, p.beta) << '\n';
    }
    return kOk;
}

int cmd_thermo_limit(const Options& o, std::ostream& out)
{
    const auto tol = o.tolerances();
    const auto u = io::probability_from_json(read_json(o.u), tol);
    const auto v = io::probability_from_json(read_json(o.v), tol);
    const auto spectrum = validate_spectrum(io::energies_from_json(read_json(o.energies)), tol.gap_tol);
    std::vector<double> betas = o.betas;
    if (o.beta) {
        betas.push_back(*o.beta);
    }
    if (betas.empty()) {
        throw Error(ErrorKind::InvalidArgument, "give at least one inverse temperature with --betas or --beta");
    }
    json j = io::sweep_to_json(beta_sweep_limit(u, v, spectrum, betas, tol.prob_tol));
    j["tolerances"] = io::tolerances_to_json(tol);
    out << j.dump(2) << "\n";
    return kOk;
}

int cmd_fuzz(const Options& o, std::ostream& out)
{
    const auto tol = o.tolerances();
    SamplerConfig cfg;
    cfg.seed = o.resolved_seed();
    cfg.dim = o.dim;
    cfg.trials = o.trials;
    cfg.n_diag = o.n_diag;
    if (cfg.dim < 2 || cfg.n_diag > cfg.dim) {
        throw Error(ErrorKind::InvalidArgument, "need --dim >= 2 and --n-diag <= --dim");
    }
    const auto report = necessity_fuzz(cfg, tol);
    out << io::fuzz_to_json_lines(report, cfg, tol);
    return report.violations.empty() ? kOk : kFoundViolations;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Decide, construct and verify low-temperature state transitions.", "coolmap"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success or feasible, 1 fuzz found violations, 2 invalid input, 3 infeasible, "
               "4 structural precondition failure. COOLMAP_SEED sets the default --seed.");
    Options o;

    auto add_tol = [&](CLI::App* c) {
        c->add_option("--tol", o.tol, "Decision tolerance (PSD and tail sums)")->check(CLI::PositiveNumber);
    };
    auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed (default: $COOLMAP_SEED or 1)"); };

    auto* check = app.add_subcommand("check", "Decide whether rho can be cooled to sigma; prints the decision JSON");
    check->add_option("--rho", o.rho, "Initial state (matrix JSON)")->required();
    check->add_option("--sigma", o.sigma, "Target state (matrix JSON)")->required();
    check->add_option("--grid", o.grid, "Grid points per free entry when Q has undetermined entries")
        ->check(CLI::Range(3, 100000));
    add_tol(check);

    auto* synth = app.add_subcommand("synthesize", "Construct a cooling map taking rho to sigma");
    synth->add_option("--rho", o.rho, "Initial state (matrix JSON)")->required();
    synth->add_option("--sigma", o.sigma, "Target state (matrix JSON)")->required();
    synth->add_option("--grid", o.grid, "Grid points per free entry")->check(CLI::Range(3, 100000));
    add_tol(synth);

    auto* dilate = app.add_subcommand("dilate", "Build and verify a thermal dilation of a map or rational mixture");
    dilate->add_option("--map", o.map, "Map file JSON")->required();
    dilate->add_option("--samples", o.samples, "Random states used in verification");
    add_seed(dilate);
    add_tol(dilate);

    auto* mono = app.add_subcommand("monotones", "Print the two Gibbs-preserving monotones of a state");
    mono->add_option("--rho", o.rho, "State (matrix JSON)")->required();
    add_tol(mono);

    auto* region = app.add_subcommand("region", "Sample the qubit states reachable from [[1/2, x], [x, 1/2]]");
    region->add_option("--x", o.x, "Initial coherence in [0, 1/2]")->required();
    region->add_option("--samples", o.region_samples, "Samples per model");
    region->add_option("--out", o.out_path, "Output CSV path (default stdout)");
    region->add_flag("--raw", o.raw, "Write every sample instead of the binned cloud");
    add_seed(region);
    region->footer(kRegionHelp);

    auto* thermo = app.add_subcommand("thermo-limit", "Compare thermo-majorization and UT majorization over beta");
    thermo->add_option("--u", o.u, "Initial distribution JSON")->required();
    thermo->add_option("--v", o.v, "Target distribution JSON")->required();
    thermo->add_option("--energies", o.energies, "Spectrum JSON")->required();
    thermo->add_option("--betas", o.betas, "Comma-separated inverse temperatures")->delimiter(',');
    thermo->add_option("--beta", o.beta, "Single inverse temperature");
    add_tol(thermo);

    auto* fuzz = app.add_subcommand("fuzz", "Check that images of random cooling maps are always accepted");
    fuzz->add_option("--dim", o.dim, "System dimension")->check(CLI::Range(2, 64));
    fuzz->add_option("--trials", o.trials, "Number of trials");
    fuzz->add_option("--n-diag", o.n_diag, "Diagonal Kraus operators per map (0: random per trial)");
    add_seed(fuzz);
    add_tol(fuzz);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*check) return cmd_check(o, out);
        if (*synth) return cmd_synthesize(o, out);
        if (*dilate) return cmd_dilate(o, out, err);
        if (*mono) return cmd_monotones(o, out);
        if (*region) return cmd_region(o, out);
        if (*thermo) return cmd_thermo_limit(o, out);
        if (*fuzz) return cmd_fuzz(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_for(e.kind());
    } catch (const json::exception& e) {
        err << "error: invalid JSON: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

} // namespace coolmap::cli
