#pragma once

#include <vector>

#include "coolmap/quantum_core.hpp"

namespace coolmap {

/// rho = [[alpha, x^dag], [x, A]] with the ground level split off.
struct CanonicalState {
    double alpha = 1.0;
    CVector x;
    CMatrix a;
};

CanonicalState canonical_params(const DensityMatrix& rho);
DensityMatrix assemble(const CanonicalState& c, const ToleranceSet& tol = {});

/// alpha - x^dag A^+ x, with A inverted on its numerical support
/// (eigenvalues > zero_tol). Throws SupportViolation if x carries more than
/// psd_tol weight outside that support. Clamped to [0, alpha].
double schur_complement(const CanonicalState& c, const ToleranceSet& tol = {});

struct MonotoneReport {
    double nu_i = 0.0;
    double nu_c = 0.0;
    double alpha = 0.0;
    double schur = 0.0;
};

MonotoneReport monotones(const DensityMatrix& rho, const ToleranceSet& tol = {});
double nu_I(const DensityMatrix& rho);
double nu_C(const DensityMatrix& rho, const ToleranceSet& tol = {});

struct GPNecessary {
    bool holds = false;
    double population_margin = 0.0; // beta - alpha
    double schur_margin = 0.0;      // c_sigma - c_rho
};

GPNecessary gp_necessary(const DensityMatrix& rho, const DensityMatrix& sigma, const ToleranceSet& tol = {});

/// K = [[eta, v^dag], [0, L]].
struct GPKrausOp {
    Complex eta;
    CVector v;
    CMatrix l;
};

class GPKrausSet {
public:
    /// Throws InvalidGPKraus unless sum |eta|^2 = 1, sum eta v = 0 and
    /// sum (v v^dag + L^dag L) = I hold within comp_tol.
    static GPKrausSet from(std::vector<GPKrausOp> ops, double comp_tol = 1e-9);
    /// Splits full Kraus operators into block form; any weight below the
    /// ground entry of the first column is an InvalidGPKraus.
    static GPKrausSet from_kraus(const KrausSet& k, double comp_tol = 1e-9);

    std::size_t dim() const { return dim_; }
    const std::vector<GPKrausOp>& ops() const { return ops_; }
    KrausSet to_kraus() const;
    /// Max deviation over the three completeness relations.
    static double completeness_defect(const std::vector<GPKrausOp>& ops, std::size_t dim);

private:
    GPKrausSet(std::vector<GPKrausOp> ops, std::size_t dim) : ops_(std::move(ops)), dim_(dim) {}
    std::vector<GPKrausOp> ops_;
    std::size_t dim_ = 0;
};

/// Block-form action: beta = alpha + sum v^dag A v,
/// y = (sum conj(eta) L) x + sum L A v, B = sum L A L^dag.
DensityMatrix apply_gp_channel(const GPKrausSet& k, const DensityMatrix& rho, const ToleranceSet& tol = {});

/// Qubit Gibbs-preserving channel mapping rho to sigma. Throws
/// NotNecessaryConditions when gp_necessary fails and DegenerateEdgeCase when
/// rho is the ground state but sigma is not.
GPKrausSet synthesize_gp_two_level(const DensityMatrix& rho, const DensityMatrix& sigma, const ToleranceSet& tol = {});

struct PureReduction {
    Complex t;              // ground amplitude
    CVector representative; // (t, sqrt(1 - |t|^2))
    CMatrix v;              // (d-1) x (d-1) unitary on the excited space

    /// 1 (+) V.
    CMatrix block_unitary() const;
};

PureReduction reduce_pure(const CVector& psi, double tol = 1e-10);

/// Gibbs-preserving channel taking |psi><psi| to |phi><phi| through the
/// qubit representatives; both must have the same dimension.
GPKrausSet synthesize_gp_pure(const CVector& psi, const CVector& phi, const ToleranceSet& tol = {});

} // namespace coolmap
