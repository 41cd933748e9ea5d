#include "coolmap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <limits>
#include <tuple>

#include "coolmap/dilation.hpp"

namespace coolmap {

namespace {

std::size_t draw_n_diag(std::size_t requested, std::size_t d, Rng& rng)
{
    if (requested != 0) {
        return requested;
    }
    return std::uniform_int_distribution<std::size_t>(1, d)(rng);
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

double cross(const Point2& o, const Point2& a, const Point2& b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double segment_distance(const Point2& p, const Point2& a, const Point2& b)
{
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    const double t = len2 > 0.0 ? std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0) : 0.0;
    return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

// Monotone-chain hull, counter-clockwise, collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return std::tie(a.x, a.y) < std::tie(b.x, b.y);
    });
    if (pts.size() < 3) {
        return pts;
    }
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double hull_distance(const Point2& p, const std::vector<Point2>& hull)
{
    if (hull.size() == 1) {
        return std::hypot(p.x - hull[0].x, p.y - hull[0].y);
    }
    if (hull.size() == 2) {
        return segment_distance(p, hull[0], hull[1]);
    }
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        if (cross(a, b, p) < 0.0) inside = false;
        best = std::min(best, segment_distance(p, a, b));
    }
    return inside ? 0.0 : best;
}

// Vertices of {N >= 0 : row sums = col sums = gamma}; every vertex is supported
// on a spanning forest of at most 2d - 1 cells.
std::vector<RMatrix> transport_vertices(const RVector& gamma)
{
    const auto d = gamma.size();
    const Eigen::Index cells = d * d;
    const Eigen::Index basis = 2 * d - 1;
    RVector rhs(2 * d);
    rhs << gamma, gamma;
    std::vector<RMatrix> out;
    std::vector<bool> pick(static_cast<std::size_t>(cells), false);
    std::fill(pick.begin(), pick.begin() + basis, true);
    do {
        std::vector<Eigen::Index> support;
        for (Eigen::Index c = 0; c < cells; ++c) {
            if (pick[static_cast<std::size_t>(c)]) support.push_back(c);
        }
        RMatrix a = RMatrix::Zero(2 * d, basis);
        for (Eigen::Index i = 0; i < basis; ++i) {
            const Eigen::Index r = support[static_cast<std::size_t>(i)] / d;
            const Eigen::Index c = support[static_cast<std::size_t>(i)] % d;
            a(r, i) = 1.0;
            a(d + c, i) = 1.0;
        }
        Eigen::ColPivHouseholderQR<RMatrix> qr(a);
        if (qr.rank() < basis) continue;
        const RVector x = qr.solve(rhs);
        if ((a * x - rhs).cwiseAbs().maxCoeff() > 1e-12 || x.minCoeff() < -1e-12) continue;
        RMatrix n = RMatrix::Zero(d, d);
        for (Eigen::Index i = 0; i < basis; ++i) {
            n(support[static_cast<std::size_t>(i)] / d, support[static_cast<std::size_t>(i)] % d) =
                std::max(x(i), 0.0);
        }
        out.push_back(std::move(n));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

} // namespace

CoolingMap random_cooling_map(std::size_t d, std::size_t n_diag, Rng& rng)
{
    if (d == 0 || n_diag == 0 || n_diag > d) {
        throw Error(ErrorKind::InvalidArgument, "need 1 <= n_diag <= d");
    }
    CoolingMap m;
    m.dim = d;
    m.n_diag = n_diag;
    const auto di = static_cast<Eigen::Index>(d);
    const auto n = static_cast<Eigen::Index>(n_diag);
    m.mu = CMatrix::Zero(di, di);
    for (Eigen::Index k = 0; k < di; ++k) {
        const CVector col = random_unit_vector(n_diag + static_cast<std::size_t>(k), rng);
        m.lambda.push_back(col.head(n));
        for (Eigen::Index j = 0; j < k; ++j) {
            m.mu(j, k) = col(n + j);
        }
    }
    return m;
}

CoolingMap random_cooling_map(const SamplerConfig& cfg)
{
    Rng rng(cfg.seed);
    return random_cooling_map(cfg.dim, draw_n_diag(cfg.n_diag, cfg.dim, rng), rng);
}

KrausSet random_gp_channel(std::size_t d, std::size_t r, Rng& rng)
{
    if (d == 0 || r == 0) {
        throw Error(ErrorKind::InvalidArgument, "need d >= 1 and Kraus rank r >= 1");
    }
    const auto di = static_cast<Eigen::Index>(d);
    const auto ri = static_cast<Eigen::Index>(r);
    const Eigen::Index n = di * ri;
    // Joint index s * r + i; the first column is |E_1>|e_1>.
    CMatrix seed = CMatrix::Zero(n, 1);
    seed(0, 0) = 1.0;
    const CMatrix v = orthonormal_completion(seed, random_ginibre(n, d - 1, rng), d);
    std::vector<CMatrix> ops;
    for (Eigen::Index i = 0; i < ri; ++i) {
        CMatrix k(di, di);
        for (Eigen::Index s = 0; s < di; ++s) {
            k.row(s) = v.row(s * ri + i);
        }
        ops.push_back(std::move(k));
    }
    return KrausSet(d, d, std::move(ops));
}

KrausSet random_gp_channel(const SamplerConfig& cfg)
{
    Rng rng(cfg.seed);
    return random_gp_channel(cfg.dim, draw_n_diag(cfg.n_diag, cfg.dim, rng), rng);
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial)
{
    return mix_seed(seed, static_cast<std::uint64_t>(trial));
}

FuzzCase make_fuzz_case(std::uint64_t seed, std::size_t d, std::size_t n_diag, const ToleranceSet& tol)
{
    Rng rng(seed);
    CoolingMap m = random_cooling_map(d, draw_n_diag(n_diag, d, rng), rng);
    DensityMatrix rho = random_state(d, rng);
    DensityMatrix sigma = apply_channel(kraus_of(m), rho, tol);
    return {std::move(m), std::move(rho), std::move(sigma)};
}

FuzzReport necessity_fuzz(const SamplerConfig& cfg, const ToleranceSet& tol, Decider decider)
{
    if (!decider) {
        decider = [&tol](const DensityMatrix& r, const DensityMatrix& s) { return decide_transition(r, s, tol); };
    }
    FuzzReport report;
    report.trials = cfg.trials;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t seed = trial_seed(cfg.seed, trial);
        try {
            const auto c = make_fuzz_case(seed, cfg.dim, cfg.n_diag, tol);
            const auto decision = decider(c.rho, c.sigma);
            if (!decision.feasible) {
                std::ostringstream os;
                os << "image rejected";
                if (decision.violation) {
                    if (const auto* q = std::get_if<QNotPSDViolation>(&*decision.violation)) {
                        os << ", min eigenvalue " << q->min_eig;
                    }
                }
                report.violations.push_back(
                    {trial, seed, decision.violation ? violation_name(*decision.violation) : "Infeasible", os.str()});
            }
            const auto bound = coherence_bound_check(c.map, c.rho, tol);
            report.max_coherence_excess = std::max(report.max_coherence_excess, bound.max_excess);
            if (!bound.holds) {
                report.violations.push_back(
                    {trial, seed, "CoherenceBound", "excess " + std::to_string(bound.max_excess)});
            }
            if (is_optimally_coherent(c.map, tol.psd_tol)) {
                ++report.rank_one_trials;
                report.max_rank_one_gap = std::max(report.max_rank_one_gap, bound.max_gap);
                if (bound.max_gap > 1e-10) {
                    report.violations.push_back(
                        {trial, seed, "CoherenceEquality", "gap " + std::to_string(bound.max_gap)});
                }
            }
        } catch (const Error& e) {
            report.violations.push_back({trial, seed, std::string(to_string(e.kind())), e.what()});
        }
    }
    return report;
}

std::string model_name(Model m)
{
    return m == Model::Cooling ? "cooling" : "gp";
}

std::vector<RegionPoint> reachable_region_scan(const DensityMatrix& rho, const SamplerConfig& cfg)
{
    if (rho.dim() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "region scans need a qubit state");
    }
    Rng rng(cfg.seed);
    std::vector<RegionPoint> points;
    points.reserve(2 * cfg.trials);
    auto record = [&](Model model, const KrausSet& k) {
        const CMatrix s = apply_kraus(k, rho.matrix());
        points.push_back({model, std::abs(s(0, 1)), s(0, 0).real()});
    };
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        const std::size_t n = cfg.n_diag != 0 ? cfg.n_diag : std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        record(Model::Cooling, kraus_of(random_cooling_map(2, n, rng)));
    }
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        // Kraus rank 2 already reaches the whole Gibbs-preserving region.
        record(Model::Gp, random_gp_channel(2, 2, rng));
    }
    return points;
}

std::vector<RegionPoint> bin_region(const std::vector<RegionPoint>& points, std::size_t bins)
{
    std::map<std::tuple<int, std::size_t, std::size_t>, RegionPoint> cells;
    const auto cell = [bins](double v, double range) {
        const auto i = static_cast<std::size_t>(std::max(0.0, std::floor(v / range * static_cast<double>(bins))));
        return std::min(i, bins - 1);
    };
    for (const auto& p : points) {
        const auto key = std::make_tuple(static_cast<int>(p.model), cell(p.beta, 1.0), cell(p.y, 0.5));
        auto it = cells.find(key);
        if (it == cells.end() || p.y > it->second.y) {
            cells[key] = p;
        }
    }
    std::vector<RegionPoint> out;
    for (const auto& [key, p] : cells) {
        out.push_back(p);
    }
    return out;
}

double cooling_boundary(double x, double beta)
{
    return x * std::sqrt(std::max(0.0, 2.0 * (1.0 - beta)));
}

double gp_boundary(double x, double beta)
{
    return std::sqrt(std::max(0.0, (1.0 - beta) * (beta - 0.5 + 2.0 * x * x)));
}

bool thermo_stochastic_oracle(const ProbabilityVector& u, const ProbabilityVector& v, const GibbsDistribution& g,
                              const SamplerConfig& cfg)
{
    const auto d = static_cast<Eigen::Index>(u.dim());
    if (v.dim() != u.dim() || g.spectrum().dim() != u.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "oracle inputs differ in dimension");
    }
    if (d < 2 || d > 3) {
        throw Error(ErrorKind::InvalidArgument, "stochastic oracle supports d = 2 and d = 3 only");
    }
    const RVector& gamma = g.weights();
    std::vector<RVector> images;
    for (const auto& n : transport_vertices(gamma)) {
        RMatrix m(d, d);
        for (Eigen::Index k = 0; k < d; ++k) {
            // Columns of an empty Gibbs weight are unconstrained; keep them fixed.
            for (Eigen::Index j = 0; j < d; ++j) {
                m(j, k) = gamma(k) > 0.0 ? n(j, k) / gamma(k) : (j == k ? 1.0 : 0.0);
            }
        }
        images.push_back(m * u.weights());
    }
    // Images lie in the plane sum = 1; measure distances in an orthonormal frame of it.
    const RVector& target = v.weights();
    if (d == 2) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& p : images) {
            lo = std::min(lo, p(0));
            hi = std::max(hi, p(0));
        }
        const double t = target(0);
        const double gap = t < lo ? lo - t : (t > hi ? t - hi : 0.0);
        return std::sqrt(2.0) * gap <= cfg.resolution;
    }
    const auto frame = [](const RVector& p) {
        return Point2{(p(0) - p(1)) / std::sqrt(2.0), (p(0) + p(1) - 2.0 * p(2)) / std::sqrt(6.0)};
    };
    std::vector<Point2> pts;
    for (const auto& p : images) {
        pts.push_back(frame(p));
    }
    return hull_distance(frame(target), convex_hull(pts)) <= cfg.resolution;
}

} // namespace coolmap
