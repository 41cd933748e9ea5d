#include "coolmap/cooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coolmap {

namespace {

double min_eigenvalue(const CMatrix& m)
{
    return Eigen::SelfAdjointEigenSolver<CMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

ProbabilityVector diagonal_distribution(const DensityMatrix& rho, const ToleranceSet& tol)
{
    const double slack = std::max(tol.prob_tol, tol.trace_tol + tol.psd_tol * static_cast<double>(rho.dim()));
    return ProbabilityVector::from(rho.diagonal(), slack);
}

} // namespace

CMatrix CoolingMap::gramian() const
{
    return coolmap::gramian(lambda);
}

RMatrix CoolingMap::induced_p() const
{
    const auto d = static_cast<Eigen::Index>(dim);
    RMatrix p = RMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        p(k, k) = lambda[static_cast<std::size_t>(k)].squaredNorm();
        for (Eigen::Index j = 0; j < k; ++j) {
            p(j, k) = std::norm(mu(j, k));
        }
    }
    return p;
}

double CoolingMap::completeness_defect() const
{
    const RMatrix p = induced_p();
    return p.size() == 0 ? 0.0 : (p.colwise().sum().array() - 1.0).abs().maxCoeff();
}

void validate_cooling_map(const CoolingMap& m, double comp_tol)
{
    const auto d = static_cast<Eigen::Index>(m.dim);
    if (m.lambda.size() != m.dim || m.mu.rows() != d || m.mu.cols() != d) {
        throw Error(ErrorKind::DimensionMismatch, "cooling map arrays do not match its dimension");
    }
    for (const auto& l : m.lambda) {
        if (static_cast<std::size_t>(l.size()) != m.n_diag) {
            throw Error(ErrorKind::DimensionMismatch, "lambda vectors must have n_diag components");
        }
    }
    const double defect = m.completeness_defect();
    if (defect > comp_tol) {
        throw Error(ErrorKind::CompletenessDefect, "cooling map columns are not normalized", defect);
    }
}

CMatrix QFamily::assemble(std::span<const double> values) const
{
    CMatrix q = fixed;
    for (std::size_t i = 0; i < free.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(free[i].j);
        const auto k = static_cast<Eigen::Index>(free[i].k);
        q(j, k) = values[i];
        q(k, j) = values[i];
    }
    return q;
}

TransitionQ build_q(const DensityMatrix& rho, const DensityMatrix& sigma, double zero_tol)
{
    if (rho.dim() != sigma.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "states differ in dimension");
    }
    const auto d = static_cast<Eigen::Index>(rho.dim());
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            if (std::abs(rho(j, k)) <= zero_tol && std::abs(sigma(j, k)) > zero_tol) {
                throw Error(ErrorKind::ZeroCoherenceMismatch,
                            "rho has no coherence between levels " + std::to_string(j + 1) + " and " +
                                std::to_string(k + 1) + " but sigma does",
                            std::abs(sigma(j, k)), {static_cast<int>(j + 1), static_cast<int>(k + 1)});
            }
        }
    }

    std::vector<bool> empty_row(static_cast<std::size_t>(d));
    bool any_zero = false;
    CMatrix q = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double rjj = rho(j, j).real();
        empty_row[static_cast<std::size_t>(j)] = rjj <= zero_tol;
        any_zero = any_zero || rjj <= zero_tol;
        q(j, j) = rjj <= zero_tol ? 0.0 : std::min(sigma(j, j).real() / rjj, 1.0);
    }

    QFamily family;
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            if (empty_row[static_cast<std::size_t>(j)] || empty_row[static_cast<std::size_t>(k)]) {
                continue;
            }
            if (std::abs(rho(j, k)) <= zero_tol) {
                any_zero = true;
                family.free.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(k),
                                       std::sqrt(q(j, j).real() * q(k, k).real())});
                continue;
            }
            q(j, k) = sigma(j, k) / rho(j, k);
            q(k, j) = std::conj(q(j, k));
        }
    }
    if (!any_zero) {
        return HermitianMatrix::from(q, std::numeric_limits<double>::infinity());
    }
    family.fixed = std::move(q);
    return family;
}

std::optional<HermitianMatrix> complete_q_family(const QFamily& family, double tol, CompletionSearch search,
                                                 double* best_min_eig)
{
    const std::size_t n = family.free.size();
    double best = -std::numeric_limits<double>::infinity();
    auto evaluate = [&](const std::vector<double>& x) {
        const double value = min_eigenvalue(family.assemble(x));
        best = std::max(best, value);
        return value;
    };
    auto accept = [&](const std::vector<double>& x) -> std::optional<HermitianMatrix> {
        auto q = HermitianMatrix::from(family.assemble(x), std::numeric_limits<double>::infinity());
        if (is_psd(q, tol).psd) {
            return q;
        }
        return std::nullopt;
    };
    auto finish = [&](std::optional<HermitianMatrix> r) {
        if (best_min_eig) *best_min_eig = best;
        return r;
    };

    std::vector<double> zeros(n, 0.0), lower(n), upper(n);
    for (std::size_t i = 0; i < n; ++i) {
        lower[i] = -family.free[i].bound;
        upper[i] = family.free[i].bound;
    }
    evaluate(zeros);
    if (auto q = accept(zeros)) {
        return finish(q);
    }
    if (n == 0) {
        return finish(std::nullopt);
    }

    const int grid = std::max(search.grid, 3);
    constexpr double inv_phi = 0.6180339887498949;
    for (const auto& start : {zeros, lower, upper}) {
        std::vector<double> x = start;
        double current = evaluate(x);
        for (int sweep = 0; sweep < search.sweeps; ++sweep) {
            const double before = current;
            for (std::size_t c = 0; c < n; ++c) {
                const double b = family.free[c].bound;
                if (b == 0.0) {
                    x[c] = 0.0;
                    continue;
                }
                auto f = [&](double t) {
                    x[c] = t;
                    return evaluate(x);
                };
                // The minimum eigenvalue is concave along each coordinate: a
                // grid bracket followed by golden-section search finds its peak.
                const double step = 2.0 * b / (grid - 1);
                int best_i = 0;
                double best_v = -std::numeric_limits<double>::infinity();
                for (int i = 0; i < grid; ++i) {
                    const double v = f(-b + step * i);
                    if (v > best_v) {
                        best_v = v;
                        best_i = i;
                    }
                }
                double lo = -b + step * std::max(best_i - 1, 0);
                double hi = -b + step * std::min(best_i + 1, grid - 1);
                double m1 = hi - inv_phi * (hi - lo), m2 = lo + inv_phi * (hi - lo);
                double f1 = f(m1), f2 = f(m2);
                for (int it = 0; it < 60 && hi - lo > 1e-14 * b; ++it) {
                    if (f1 < f2) {
                        lo = m1;
                        m1 = m2;
                        f1 = f2;
                        m2 = lo + inv_phi * (hi - lo);
                        f2 = f(m2);
                    } else {
                        hi = m2;
                        m2 = m1;
                        f2 = f1;
                        m1 = hi - inv_phi * (hi - lo);
                        f1 = f(m1);
                    }
                }
                const double golden_t = f1 > f2 ? m1 : m2;
                const double golden_v = std::max(f1, f2);
                x[c] = golden_v >= best_v ? golden_t : -b + step * best_i;
                current = std::max(golden_v, best_v);
                if (auto q = accept(x)) {
                    return finish(q);
                }
            }
            if (current - before <= 1e-15) {
                break;
            }
        }
    }
    return finish(std::nullopt);
}

std::string violation_name(const Violation& v)
{
    struct Visitor {
        std::string operator()(const NotUTMajorizedViolation&) const { return "NotUTMajorized"; }
        std::string operator()(const QNotPSDViolation&) const { return "QNotPSD"; }
        std::string operator()(const ZeroCoherenceMismatchViolation&) const { return "ZeroCoherenceMismatch"; }
        std::string operator()(const NoPSDCompletionFoundViolation&) const { return "NoPSDCompletionFound"; }
    };
    return std::visit(Visitor{}, v);
}

Decision decide_transition(const DensityMatrix& rho, const DensityMatrix& sigma, const ToleranceSet& tol, int grid)
{
    if (rho.dim() != sigma.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "states differ in dimension");
    }
    Decision decision;

    std::optional<TransitionQ> tq;
    try {
        tq = build_q(rho, sigma, tol.zero_tol);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroCoherenceMismatch) throw;
        decision.violation = ZeroCoherenceMismatchViolation{e.indices().at(0), e.indices().at(1)};
        return decision;
    }

    const auto u = diagonal_distribution(rho, tol);
    const auto v = diagonal_distribution(sigma, tol);
    const auto ut = ut_majorizes(u, v, tol.prob_tol);
    if (!ut.majorizes) {
        decision.violation = NotUTMajorizedViolation{*ut.first_violated_index};
        return decision;
    }

    std::optional<HermitianMatrix> q;
    if (const auto* fixed = std::get_if<HermitianMatrix>(&*tq)) {
        const auto check = is_psd(*fixed, tol.psd_tol);
        if (!check.psd) {
            decision.violation = QNotPSDViolation{check.min_eigenvalue};
            return decision;
        }
        q = *fixed;
    } else {
        double best = 0.0;
        q = complete_q_family(std::get<QFamily>(*tq), tol.psd_tol, {grid, 20}, &best);
        if (!q) {
            decision.violation = NoPSDCompletionFoundViolation{best};
            return decision;
        }
    }

    auto p = construct_utcs(u, v, tol.prob_tol, tol.zero_tol);
    const double min_eig = is_psd(*q, tol.psd_tol).min_eigenvalue;
    auto gram = gram_vectors(*q, tol.psd_tol);
    decision.feasible = true;
    decision.certificate = TransitionCertificate{std::move(p), std::move(*q), min_eig, std::move(gram)};
    return decision;
}

CoolingMap synthesize_cooling_map(const TransitionCertificate& cert, const ToleranceSet& tol)
{
    const auto d = static_cast<Eigen::Index>(cert.p.dim());
    if (cert.q.dim() != cert.p.dim()) {
        throw Error(ErrorKind::CertificateInconsistent, "P and Q differ in dimension");
    }
    // The Gramian of the diagonal Kraus vectors carries the diagonal of P and
    // the off-diagonal of Q.
    CMatrix q = cert.q.matrix();
    for (Eigen::Index j = 0; j < d; ++j) {
        q(j, j) = cert.p(j, j);
    }
    const auto gram_q = HermitianMatrix::from(q, std::numeric_limits<double>::infinity());
    const auto check = is_psd(gram_q, tol.psd_tol);
    if (!check.psd) {
        throw Error(ErrorKind::CertificateInconsistent, "Q with the diagonal of P is not PSD", check.min_eigenvalue);
    }

    CoolingMap m;
    m.dim = static_cast<std::size_t>(d);
    m.lambda = gram_vectors(gram_q, tol.psd_tol, 1e-14);
    m.n_diag = m.lambda.empty() ? 0 : static_cast<std::size_t>(m.lambda.front().size());
    // Pin each column's weight to P_{k|k} so completeness holds to rounding.
    for (Eigen::Index k = 0; k < d; ++k) {
        auto& l = m.lambda[static_cast<std::size_t>(k)];
        const double norm = l.norm();
        if (norm > 0.0) {
            l *= std::sqrt(cert.p(k, k)) / norm;
        }
    }
    m.mu = CMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index j = 0; j < k; ++j) {
            m.mu(j, k) = std::sqrt(cert.p(j, k));
        }
    }
    const double defect = m.completeness_defect();
    if (defect > tol.comp_tol) {
        throw Error(ErrorKind::CertificateInconsistent, "synthesized map is not trace preserving", defect);
    }
    return m;
}

KrausSet kraus_of(const CoolingMap& m)
{
    const auto d = static_cast<Eigen::Index>(m.dim);
    std::vector<CMatrix> ops;
    for (std::size_t i = 0; i < m.n_diag; ++i) {
        CMatrix k = CMatrix::Zero(d, d);
        for (Eigen::Index j = 0; j < d; ++j) {
            k(j, j) = m.lambda[static_cast<std::size_t>(j)](static_cast<Eigen::Index>(i));
        }
        ops.push_back(std::move(k));
    }
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index j = 0; j < k; ++j) {
            if (m.mu(j, k) != Complex(0.0)) {
                CMatrix op = CMatrix::Zero(d, d);
                op(j, k) = m.mu(j, k);
                ops.push_back(std::move(op));
            }
        }
    }
    return KrausSet(m.dim, m.dim, std::move(ops));
}

DensityMatrix max_coherent_target(const DensityMatrix& rho, const ProbabilityVector& v, const ToleranceSet& tol)
{
    if (v.dim() != rho.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "target diagonal differs in dimension");
    }
    const auto u = diagonal_distribution(rho, tol);
    const auto ut = ut_majorizes(u, v, tol.prob_tol);
    if (!ut.majorizes) {
        throw Error(ErrorKind::NotUTMajorized, "diag(rho) does not UT-majorize the target", 0.0,
                    {*ut.first_violated_index});
    }
    const auto d = static_cast<Eigen::Index>(rho.dim());
    RVector scale(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        scale(j) = u[j] > tol.zero_tol ? std::sqrt(std::min(v[j] / u[j], 1.0)) : 0.0;
    }
    CMatrix sigma(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            sigma(j, k) = j == k ? Complex(v[j]) : scale(j) * scale(k) * rho(j, k);
        }
    }
    return validate_density(sigma, tol);
}

CoherenceBoundReport coherence_bound_check(const CoolingMap& m, const DensityMatrix& rho, const ToleranceSet& tol,
                                           double slack)
{
    const auto sigma = apply_channel(kraus_of(m), rho, tol);
    const RMatrix p = m.induced_p();
    CoherenceBoundReport report;
    const auto d = static_cast<Eigen::Index>(m.dim);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            if (j == k) continue;
            const double bound = std::sqrt(p(j, j) * p(k, k)) * std::abs(rho(j, k));
            const double diff = std::abs(sigma(j, k)) - bound;
            report.max_excess = std::max(report.max_excess, diff);
            report.max_gap = std::max(report.max_gap, std::abs(diff));
        }
    }
    report.holds = report.max_excess <= slack;
    return report;
}

} // namespace coolmap
