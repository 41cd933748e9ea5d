#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coolmap/error.hpp"
#include "coolmap/tolerance.hpp"

namespace coolmap {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Non-degenerate system spectrum E_1 < ... < E_d with pairwise distinct gaps.
class EnergySpectrum {
public:
    std::size_t dim() const { return energies_.size(); }
    const std::vector<double>& energies() const { return energies_; }
    double operator[](std::size_t i) const { return energies_[i]; }
    double min_gap() const;

private:
    friend EnergySpectrum validate_spectrum(std::vector<double>, double);
    explicit EnergySpectrum(std::vector<double> e) : energies_(std::move(e)) {}
    std::vector<double> energies_;
};

/// Validated state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const CMatrix& matrix() const { return rho_; }
    Complex operator()(Eigen::Index j, Eigen::Index k) const { return rho_(j, k); }
    RVector diagonal() const { return rho_.diagonal().real(); }

private:
    friend DensityMatrix validate_density(const CMatrix&, const ToleranceSet&);
    explicit DensityMatrix(CMatrix m) : rho_(std::move(m)) {}
    CMatrix rho_;
};

class HermitianMatrix {
public:
    // Throws NotHermitian when the input deviates by more than herm_tol; the
    // stored matrix is the exact Hermitian part.
    static HermitianMatrix from(const CMatrix& m, double herm_tol = 1e-10);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }
    Complex operator()(Eigen::Index j, Eigen::Index k) const { return m_(j, k); }

private:
    explicit HermitianMatrix(CMatrix m) : m_(std::move(m)) {}
    CMatrix m_;
};

struct KrausSet {
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;
    std::vector<CMatrix> operators;

    KrausSet() = default;
    // Dimensions are taken from the first operator; all others must agree.
    explicit KrausSet(std::vector<CMatrix> ops);
    KrausSet(std::size_t in, std::size_t out, std::vector<CMatrix> ops);
};

class UnitaryMatrix {
public:
    static UnitaryMatrix from(const CMatrix& m, double unit_tol = 1e-9);
    // No unitarity check; defect() reports how far off the matrix is.
    static UnitaryMatrix unchecked(CMatrix m) { return UnitaryMatrix(std::move(m)); }

    std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }
    const CMatrix& matrix() const { return u_; }
    double defect() const;

private:
    explicit UnitaryMatrix(CMatrix m) : u_(std::move(m)) {}
    CMatrix u_;
};

struct PsdCheck {
    bool psd = false;
    double min_eigenvalue = 0.0;
};

struct CompletenessCheck {
    bool complete = false;
    double defect = 0.0;
};

struct EnergyLevel {
    double energy = 0.0;
    std::vector<std::size_t> indices;
};

struct EnergyConservationCheck {
    bool conserving = false;
    double max_offblock = 0.0;
};

EnergySpectrum validate_spectrum(std::vector<double> energies, double gap_tol = 1e-9);

DensityMatrix validate_density(const CMatrix& entries, const ToleranceSet& tol = {});

PsdCheck is_psd(const HermitianMatrix& m, double tol);

/// Vectors lambda_j (one per row of Q) with sum_i lambda_j[i] conj(lambda_k[i]) = Q_jk,
/// of dimension equal to the numerical rank of Q.
std::vector<CVector> gram_vectors(const HermitianMatrix& q, double tol);
/// As above, with eigenvalues <= rank_tol * norm dropped instead of tol * norm.
std::vector<CVector> gram_vectors(const HermitianMatrix& q, double tol, double rank_tol);

/// Gramian with the same convention as gram_vectors.
CMatrix gramian(std::span<const CVector> vectors);

std::size_t numerical_rank(const HermitianMatrix& m, double tol);

CompletenessCheck check_kraus_completeness(const KrausSet& k, double tol);

DensityMatrix apply_channel(const KrausSet& k, const DensityMatrix& rho, const ToleranceSet& tol = {});

/// Linear action sum_i K_i X K_i^dag on an arbitrary operator.
CMatrix apply_kraus(const KrausSet& k, const CMatrix& x);

EnergyConservationCheck check_energy_conserving(const CMatrix& u, std::span<const EnergyLevel> levels,
                                                double tol, double gap_tol = 1e-9);
inline EnergyConservationCheck check_energy_conserving(const UnitaryMatrix& u,
                                                       std::span<const EnergyLevel> levels,
                                                       double tol, double gap_tol = 1e-9)
{
    return check_energy_conserving(u.matrix(), levels, tol, gap_tol);
}

/// Groups (possibly repeated) energies into eigenspaces, merging values closer
/// than gap_tol. Levels are returned in ascending energy order.
std::vector<EnergyLevel> group_energy_levels(std::span<const double> energies, double gap_tol);

/// Extends `seed` columns (assumed orthonormal) with orthonormalized candidate
/// columns, dropping candidates whose residual norm is below drop_tol.
CMatrix orthonormal_completion(const CMatrix& seed, const CMatrix& candidates, std::size_t target_cols,
                               double drop_tol = 1e-10);

double max_abs(const CMatrix& m);

} // namespace coolmap
