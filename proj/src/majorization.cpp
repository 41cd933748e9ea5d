#include "coolmap/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace coolmap {

namespace {

void require_same_dim(const ProbabilityVector& u, const ProbabilityVector& v)
{
    if (u.dim() != v.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "probability vectors differ in dimension");
    }
}

// Indices sorted by p_j / gamma_j descending, computed in log space so that
// tiny Gibbs weights at large beta keep their ordering. Ties keep index order.
std::vector<std::size_t> beta_order(const ProbabilityVector& p, const GibbsDistribution& g)
{
    const auto& e = g.spectrum().energies();
    std::vector<double> key(p.dim());
    for (std::size_t j = 0; j < p.dim(); ++j) {
        const double pj = p[static_cast<Eigen::Index>(j)];
        key[j] = pj > 0.0 ? std::log(pj) + g.beta() * (e[j] - e[0]) : -std::numeric_limits<double>::infinity();
    }
    std::vector<std::size_t> order(p.dim());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    return order;
}

// Unnormalized log Gibbs weights relative to the ground level.
std::vector<double> log_weights(const GibbsDistribution& g)
{
    const auto& e = g.spectrum().energies();
    std::vector<double> lw(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) lw[j] = -g.beta() * (e[j] - e[0]);
    return lw;
}

// Height of u's curve at the abscissa sum_{j in target} gamma_j. The remaining
// budget is always evaluated as a set difference so shared terms cancel exactly,
// and every comparison is rescaled by its largest term so that excited weights
// far below the double range still order correctly.
double curve_height(const ProbabilityVector& u, const std::vector<std::size_t>& u_order,
                    const std::vector<bool>& target, const std::vector<double>& lw)
{
    const std::size_t d = u.dim();
    std::vector<bool> taken(d, false);
    double height = 0.0;
    for (std::size_t idx : u_order) {
        double top = lw[idx];
        for (std::size_t j = 0; j < d; ++j) {
            if (target[j] != taken[j]) top = std::max(top, lw[j]);
        }
        double budget = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (target[j] && !taken[j]) budget += std::exp(lw[j] - top);
            if (taken[j] && !target[j]) budget -= std::exp(lw[j] - top);
        }
        const double cost = std::exp(lw[idx] - top);
        const double mass = u[static_cast<Eigen::Index>(idx)];
        if (cost <= budget) {
            taken[idx] = true;
            height += mass;
            continue;
        }
        if (budget > 0.0) {
            height += mass * (budget / cost);
        }
        break;
    }
    return height;
}

} // namespace

ProbabilityVector ProbabilityVector::from(const RVector& w, double prob_tol)
{
    if (w.size() == 0) {
        throw Error(ErrorKind::InvalidProbability, "empty probability vector");
    }
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w(i)) || w(i) < -prob_tol) {
            throw Error(ErrorKind::InvalidProbability, "negative or non-finite weight at index " + std::to_string(i + 1),
                        w(i), {static_cast<int>(i + 1)});
        }
    }
    const double dev = std::abs(w.sum() - 1.0);
    if (dev > prob_tol) {
        throw Error(ErrorKind::InvalidProbability, "weights do not sum to one", dev);
    }
    return ProbabilityVector(w);
}

ProbabilityVector ProbabilityVector::from(const std::vector<double>& w, double prob_tol)
{
    return from(RVector(Eigen::Map<const RVector>(w.data(), static_cast<Eigen::Index>(w.size()))), prob_tol);
}

UTCSMatrix UTCSMatrix::from(const RMatrix& p, double stoch_tol)
{
    if (p.rows() != p.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "stochastic matrix must be square");
    }
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
        for (Eigen::Index j = k + 1; j < p.rows(); ++j) {
            if (p(j, k) != 0.0) {
                throw Error(ErrorKind::InvalidUTCS, "entry below the diagonal is nonzero", p(j, k),
                            {static_cast<int>(j + 1), static_cast<int>(k + 1)});
            }
        }
        for (Eigen::Index j = 0; j <= k; ++j) {
            if (p(j, k) < -stoch_tol || p(j, k) > 1.0 + stoch_tol) {
                throw Error(ErrorKind::InvalidUTCS, "entry outside [0, 1]", p(j, k),
                            {static_cast<int>(j + 1), static_cast<int>(k + 1)});
            }
        }
        const double dev = std::abs(p.col(k).sum() - 1.0);
        if (dev > stoch_tol) {
            throw Error(ErrorKind::InvalidUTCS, "column " + std::to_string(k + 1) + " does not sum to one", dev,
                        {static_cast<int>(k + 1)});
        }
    }
    return UTCSMatrix(p);
}

GibbsDistribution::GibbsDistribution(EnergySpectrum spectrum, double beta)
    : spectrum_(std::move(spectrum)), beta_(beta)
{
    if (!std::isfinite(beta)) {
        throw Error(ErrorKind::NonFiniteBeta, "inverse temperature must be finite", beta);
    }
    if (beta < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "inverse temperature must be nonnegative", beta);
    }
    const auto& e = spectrum_.energies();
    weights_.resize(static_cast<Eigen::Index>(e.size()));
    for (std::size_t j = 0; j < e.size(); ++j) {
        weights_(static_cast<Eigen::Index>(j)) = std::exp(-beta * (e[j] - e[0]));
    }
    weights_ /= weights_.sum();
}

UTCheck ut_majorizes(const ProbabilityVector& u, const ProbabilityVector& v, double tol)
{
    require_same_dim(u, v);
    const auto d = static_cast<Eigen::Index>(u.dim());
    double tail_u = 0.0, tail_v = 0.0;
    for (Eigen::Index k = d - 1; k >= 1; --k) {
        tail_u += u[k];
        tail_v += v[k];
        if (tail_u < tail_v - tol) {
            return {false, static_cast<int>(k + 1)};
        }
    }
    return {true, std::nullopt};
}

UTCSMatrix construct_utcs(const ProbabilityVector& u, const ProbabilityVector& v, double tol, double zero_tol)
{
    const auto check = ut_majorizes(u, v, tol);
    if (!check.majorizes) {
        throw Error(ErrorKind::NotUTMajorized,
                    "tail sum from level " + std::to_string(*check.first_violated_index) + " is violated", 0.0,
                    {*check.first_violated_index});
    }
    const auto d = static_cast<Eigen::Index>(u.dim());
    RMatrix p = RMatrix::Zero(d, d);
    // remaining(k): fraction of column k not yet assigned to any row.
    RVector remaining = RVector::Ones(d);

    for (Eigen::Index j = d - 1; j >= 0; --j) {
        const bool populated = u[j] > zero_tol;
        p(j, j) = populated ? std::min(v[j] / u[j], 1.0) : 0.0;
        const double deficit = populated ? std::max(0.0, v[j] - u[j]) : v[j];

        double available = 0.0;
        for (Eigen::Index k = j + 1; k < d; ++k) {
            available += remaining(k) * u[k];
        }
        // 0/0 is defined as 0; a deficit exceeding what is available only
        // happens within tolerance and is clamped.
        const double fraction = available > 0.0 ? std::clamp(deficit / available, 0.0, 1.0) : 0.0;
        for (Eigen::Index k = j + 1; k < d; ++k) {
            const double share = fraction * remaining(k);
            p(j, k) = share;
            remaining(k) -= share;
        }
        remaining(j) = 1.0 - p(j, j);
    }
    // Columns that still carry a remainder hold (numerically) no mass; the
    // residue goes to the ground row. Column 1 has no other row to go to, so
    // an unpopulated ground level maps to itself.
    for (Eigen::Index k = 0; k < d; ++k) {
        if (remaining(k) > 0.0) {
            p(0, k) += remaining(k);
        }
    }
    return UTCSMatrix::from(p, std::max(tol, 1e-12));
}

std::vector<LorenzPoint> lorenz_curve(const ProbabilityVector& p, const GibbsDistribution& g)
{
    if (p.dim() != g.spectrum().dim()) {
        throw Error(ErrorKind::DimensionMismatch, "distribution and Gibbs state differ in dimension");
    }
    const auto order = beta_order(p, g);
    std::vector<LorenzPoint> pts{{0.0, 0.0}};
    for (std::size_t idx : order) {
        const auto i = static_cast<Eigen::Index>(idx);
        pts.push_back({pts.back().x + g.weights()(i), pts.back().y + p[i]});
    }
    return pts;
}

bool thermo_majorizes(const ProbabilityVector& u, const ProbabilityVector& v, const GibbsDistribution& g, double tol)
{
    require_same_dim(u, v);
    if (u.dim() != g.spectrum().dim()) {
        throw Error(ErrorKind::DimensionMismatch, "distribution and Gibbs state differ in dimension");
    }
    const auto u_order = beta_order(u, g);
    const auto v_order = beta_order(v, g);
    const auto lw = log_weights(g);
    std::vector<bool> prefix(u.dim(), false);
    double v_height = 0.0;
    // The u-curve is concave, so checking it against every vertex of the
    // piecewise-linear v-curve decides curve dominance.
    for (std::size_t idx : v_order) {
        prefix[idx] = true;
        v_height += v[static_cast<Eigen::Index>(idx)];
        if (curve_height(u, u_order, prefix, lw) < v_height - tol) {
            return false;
        }
    }
    return true;
}

SweepTable beta_sweep_limit(const ProbabilityVector& u, const ProbabilityVector& v, const EnergySpectrum& spectrum,
                            const std::vector<double>& betas, double tol)
{
    SweepTable table;
    const bool ut = ut_majorizes(u, v, tol).majorizes;
    for (double beta : betas) {
        const GibbsDistribution g(spectrum, beta);
        table.rows.push_back({beta, thermo_majorizes(u, v, g, tol), ut});
    }
    std::vector<std::size_t> order(table.rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return table.rows[a].beta < table.rows[b].beta; });
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto& row = table.rows[*it];
        if (row.thermo != row.ut) {
            break;
        }
        table.agreement_from = row.beta;
    }
    return table;
}

} // namespace coolmap
