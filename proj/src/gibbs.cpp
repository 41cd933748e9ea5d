#include "coolmap/gibbs.hpp"

#include <algorithm>
#include <cmath>

namespace coolmap {

namespace {

CMatrix ground_projector(Eigen::Index d)
{
    CMatrix p = CMatrix::Zero(d, d);
    p(0, 0) = 1.0;
    return p;
}

CMatrix phase_diag(double phi)
{
    CMatrix d = CMatrix::Identity(2, 2);
    d(1, 1) = std::polar(1.0, phi);
    return d;
}

} // namespace

CanonicalState canonical_params(const DensityMatrix& rho)
{
    const auto d = static_cast<Eigen::Index>(rho.dim());
    const CMatrix& m = rho.matrix();
    return {m(0, 0).real(), m.col(0).tail(d - 1), m.bottomRightCorner(d - 1, d - 1)};
}

DensityMatrix assemble(const CanonicalState& c, const ToleranceSet& tol)
{
    const Eigen::Index n = c.x.size();
    if (c.a.rows() != n || c.a.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "x and A differ in dimension");
    }
    CMatrix m(n + 1, n + 1);
    m(0, 0) = c.alpha;
    m.col(0).tail(n) = c.x;
    m.row(0).tail(n) = c.x.adjoint();
    m.bottomRightCorner(n, n) = c.a;
    return validate_density(m, tol);
}

double schur_complement(const CanonicalState& c, const ToleranceSet& tol)
{
    if (c.x.size() == 0) {
        return c.alpha;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (c.a + c.a.adjoint()));
    const CVector coeff = es.eigenvectors().adjoint() * c.x;
    double inside = 0.0, outside = 0.0;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
        const double w = es.eigenvalues()(i);
        if (w > tol.zero_tol) {
            inside += std::norm(coeff(i)) / w;
        } else {
            outside += std::norm(coeff(i));
        }
    }
    if (outside > tol.psd_tol) {
        throw Error(ErrorKind::SupportViolation, "coherence outside the support of the excited block", outside);
    }
    return std::clamp(c.alpha - inside, 0.0, std::max(c.alpha, 0.0));
}

MonotoneReport monotones(const DensityMatrix& rho, const ToleranceSet& tol)
{
    const auto c = canonical_params(rho);
    const double schur = schur_complement(c, tol);
    return {1.0 - c.alpha, 1.0 - schur, c.alpha, schur};
}

double nu_I(const DensityMatrix& rho)
{
    return 1.0 - rho(0, 0).real();
}

double nu_C(const DensityMatrix& rho, const ToleranceSet& tol)
{
    return 1.0 - schur_complement(canonical_params(rho), tol);
}

GPNecessary gp_necessary(const DensityMatrix& rho, const DensityMatrix& sigma, const ToleranceSet& tol)
{
    if (rho.dim() != sigma.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "states differ in dimension");
    }
    GPNecessary out;
    out.population_margin = sigma(0, 0).real() - rho(0, 0).real();
    out.schur_margin = schur_complement(canonical_params(sigma), tol) - schur_complement(canonical_params(rho), tol);
    out.holds = out.population_margin >= -tol.prob_tol && out.schur_margin >= -tol.prob_tol;
    return out;
}

double GPKrausSet::completeness_defect(const std::vector<GPKrausOp>& ops, std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim) - 1;
    double eta_sum = 0.0;
    CVector cross = CVector::Zero(n);
    CMatrix block = CMatrix::Zero(n, n);
    for (const auto& op : ops) {
        eta_sum += std::norm(op.eta);
        cross += op.eta * op.v;
        block += op.v * op.v.adjoint() + op.l.adjoint() * op.l;
    }
    double defect = std::abs(eta_sum - 1.0);
    if (n > 0) {
        defect = std::max(defect, cross.cwiseAbs().maxCoeff());
        defect = std::max(defect, max_abs(block - CMatrix::Identity(n, n)));
    }
    return defect;
}

GPKrausSet GPKrausSet::from(std::vector<GPKrausOp> ops, double comp_tol)
{
    if (ops.empty()) {
        throw Error(ErrorKind::InvalidGPKraus, "no Kraus operators");
    }
    const Eigen::Index n = ops.front().v.size();
    for (const auto& op : ops) {
        if (op.v.size() != n || op.l.rows() != n || op.l.cols() != n) {
            throw Error(ErrorKind::InvalidGPKraus, "block shapes are inconsistent");
        }
    }
    const auto dim = static_cast<std::size_t>(n + 1);
    const double defect = completeness_defect(ops, dim);
    if (defect > comp_tol) {
        throw Error(ErrorKind::InvalidGPKraus, "completeness relations fail", defect);
    }
    return GPKrausSet(std::move(ops), dim);
}

GPKrausSet GPKrausSet::from_kraus(const KrausSet& k, double comp_tol)
{
    if (k.dim_in != k.dim_out || k.dim_in == 0) {
        throw Error(ErrorKind::InvalidGPKraus, "Gibbs-preserving Kraus operators must be square");
    }
    const auto n = static_cast<Eigen::Index>(k.dim_in) - 1;
    std::vector<GPKrausOp> ops;
    for (const auto& m : k.operators) {
        const double leak = n > 0 ? m.col(0).tail(n).cwiseAbs().maxCoeff() : 0.0;
        if (leak > comp_tol) {
            throw Error(ErrorKind::InvalidGPKraus, "operator moves the ground state", leak);
        }
        ops.push_back({m(0, 0), m.row(0).tail(n).adjoint(), m.bottomRightCorner(n, n)});
    }
    return from(std::move(ops), comp_tol);
}

KrausSet GPKrausSet::to_kraus() const
{
    const auto n = static_cast<Eigen::Index>(dim_) - 1;
    std::vector<CMatrix> out;
    for (const auto& op : ops_) {
        CMatrix m = CMatrix::Zero(n + 1, n + 1);
        m(0, 0) = op.eta;
        m.row(0).tail(n) = op.v.adjoint();
        m.bottomRightCorner(n, n) = op.l;
        out.push_back(std::move(m));
    }
    return KrausSet(dim_, dim_, std::move(out));
}

DensityMatrix apply_gp_channel(const GPKrausSet& k, const DensityMatrix& rho, const ToleranceSet& tol)
{
    if (rho.dim() != k.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "state dimension does not match the channel");
    }
    const auto c = canonical_params(rho);
    const Eigen::Index n = c.x.size();
    CanonicalState out{c.alpha, CVector::Zero(n), CMatrix::Zero(n, n)};
    CMatrix mix = CMatrix::Zero(n, n);
    for (const auto& op : k.ops()) {
        const CVector av = c.a * op.v;
        out.alpha += op.v.dot(av).real();
        mix += std::conj(op.eta) * op.l;
        out.x += op.l * av;
        out.a += op.l * c.a * op.l.adjoint();
    }
    out.x += mix * c.x;
    out.a = 0.5 * (out.a + out.a.adjoint());
    return assemble(out, tol);
}

GPKrausSet synthesize_gp_two_level(const DensityMatrix& rho, const DensityMatrix& sigma, const ToleranceSet& tol)
{
    if (rho.dim() != 2 || sigma.dim() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "two-level synthesis needs qubit states");
    }
    const double alpha = rho(0, 0).real();
    const double beta = sigma(0, 0).real();
    const Complex xc = rho(1, 0);
    const Complex yc = sigma(1, 0);

    if (1.0 - alpha <= tol.zero_tol) {
        if (max_abs(sigma.matrix() - ground_projector(2)) <= tol.prob_tol) {
            return GPKrausSet::from({{1.0, CVector::Zero(1), CMatrix::Identity(1, 1)}}, tol.comp_tol);
        }
        throw Error(ErrorKind::DegenerateEdgeCase, "the ground state can only reach itself", 1.0 - beta);
    }
    const auto necessary = gp_necessary(rho, sigma, tol);
    if (!necessary.holds) {
        throw Error(ErrorKind::NotNecessaryConditions,
                    "margins beta - alpha = " + std::to_string(necessary.population_margin) +
                        ", c_sigma - c_rho = " + std::to_string(necessary.schur_margin),
                    std::min(necessary.population_margin, necessary.schur_margin));
    }

    // Work with real nonnegative coherences; diagonal phases are undone at the end.
    const double x = std::abs(xc);
    const double y = std::abs(yc);
    const double s2 = std::clamp((beta - alpha) / (1.0 - alpha), 0.0, 1.0);
    const double s = std::sqrt(s2);
    const double ell = std::sqrt(1.0 - s2);

    // eta = (1, 0), v = (0, s); y = <lambda, w> with w = x eta + (1 - alpha) v.
    const Eigen::Vector2d w(x, (1.0 - alpha) * s);
    const double wn = w.norm();
    Eigen::Vector2d lambda(ell, 0.0);
    if (wn > 0.0 && ell > 0.0) {
        const Eigen::Vector2d wh = w / wn;
        const Eigen::Vector2d wp(-wh(1), wh(0));
        const double cos_t = std::clamp(y / (ell * wn), 0.0, 1.0);
        const double sin_t = std::sqrt(1.0 - cos_t * cos_t);
        lambda = ell * (cos_t * wh + sin_t * wp);
    }

    CMatrix k1 = CMatrix::Zero(2, 2), k2 = CMatrix::Zero(2, 2);
    k1(0, 0) = 1.0;
    k1(1, 1) = lambda(0);
    k2(0, 1) = s;
    k2(1, 1) = lambda(1);
    const CMatrix in = phase_diag(-std::arg(xc));
    const CMatrix out = phase_diag(std::arg(yc));
    std::vector<CMatrix> ops{out * k1 * in};
    if (s > 0.0 || lambda(1) != 0.0) {
        ops.push_back(out * k2 * in);
    }
    return GPKrausSet::from_kraus(KrausSet(2, 2, std::move(ops)), tol.comp_tol);
}

CMatrix PureReduction::block_unitary() const
{
    const Eigen::Index n = v.rows();
    CMatrix u = CMatrix::Zero(n + 1, n + 1);
    u(0, 0) = 1.0;
    u.bottomRightCorner(n, n) = v;
    return u;
}

PureReduction reduce_pure(const CVector& psi, double tol)
{
    if (psi.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "pure-state reduction needs at least two levels");
    }
    if (std::abs(psi.norm() - 1.0) > tol) {
        throw Error(ErrorKind::InvalidArgument, "state vector is not normalized", psi.norm());
    }
    const Eigen::Index n = psi.size() - 1;
    const CVector phi = psi.tail(n);
    const double norm = phi.norm();
    PureReduction r;
    r.t = psi(0);
    r.representative = CVector::Zero(2);
    r.representative(0) = r.t;
    r.representative(1) = norm;
    if (norm <= tol) {
        r.v = CMatrix::Identity(n, n);
        r.representative(1) = std::sqrt(std::max(0.0, 1.0 - std::norm(r.t)));
        return r;
    }
    const CMatrix basis = orthonormal_completion(phi / norm, CMatrix::Identity(n, n), static_cast<std::size_t>(n));
    r.v = basis.adjoint();
    return r;
}

GPKrausSet synthesize_gp_pure(const CVector& psi, const CVector& phi, const ToleranceSet& tol)
{
    if (psi.size() != phi.size()) {
        throw Error(ErrorKind::DimensionMismatch, "pure states differ in dimension");
    }
    const auto rp = reduce_pure(psi);
    const auto rq = reduce_pure(phi);
    const auto rho2 = validate_density(rp.representative * rp.representative.adjoint(), tol);
    const auto sigma2 = validate_density(rq.representative * rq.representative.adjoint(), tol);
    const auto qubit = synthesize_gp_two_level(rho2, sigma2, tol).to_kraus();

    const Eigen::Index d = psi.size();
    const CMatrix in = rp.block_unitary();
    const CMatrix out = rq.block_unitary().adjoint();
    std::vector<CMatrix> ops;
    for (std::size_t i = 0; i < qubit.operators.size(); ++i) {
        CMatrix m = CMatrix::Zero(d, d);
        m.topLeftCorner(2, 2) = qubit.operators[i];
        // Levels beyond the representative's span are carried along unchanged.
        if (i == 0 && d > 2) {
            m.bottomRightCorner(d - 2, d - 2).setIdentity();
        }
        ops.push_back(out * m * in);
    }
    return GPKrausSet::from_kraus(KrausSet(static_cast<std::size_t>(d), static_cast<std::size_t>(d), std::move(ops)),
                                  tol.comp_tol);
}

} // namespace coolmap
