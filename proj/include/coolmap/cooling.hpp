#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "coolmap/majorization.hpp"
#include "coolmap/quantum_core.hpp"

namespace coolmap {

/// Channel with diagonal Kraus operators K_i = sum_j lambda_j[i] |j><j| and
/// decay operators J_jk = mu_jk |j><k| for j < k.
struct CoolingMap {
    std::size_t dim = 0;
    std::size_t n_diag = 0;
    std::vector<CVector> lambda; // dim vectors, each of size n_diag
    CMatrix mu;                  // dim x dim, only the strict upper triangle is used

    CMatrix gramian() const;
    /// P_{j|j} = <lambda_j, lambda_j>, P_{j|k} = |mu_jk|^2 for j < k.
    RMatrix induced_p() const;
    /// max_k | <lambda_k, lambda_k> + sum_{j<k} |mu_jk|^2 - 1 |
    double completeness_defect() const;
};

/// Checks shapes and per-column completeness; throws on failure.
void validate_cooling_map(const CoolingMap& m, double comp_tol = 1e-9);

struct TransitionCertificate {
    UTCSMatrix p;
    HermitianMatrix q;
    double min_eig_q = 0.0;
    std::vector<CVector> gram;
};

struct FreeEntry {
    std::size_t j = 0; // 0-based, j < k
    std::size_t k = 0;
    double bound = 0.0; // Q_jk ranges over [-bound, bound]
};

/// Q with undetermined entries where rho has a zero coherence.
struct QFamily {
    CMatrix fixed; // free positions hold 0
    std::vector<FreeEntry> free;

    CMatrix assemble(std::span<const double> values) const;
};

using TransitionQ = std::variant<HermitianMatrix, QFamily>;

/// Q_jj = min(sigma_jj / rho_jj, 1), Q_jk = sigma_jk / rho_jk. Any zero entry in
/// rho (|.| <= zero_tol) turns the result into a QFamily.
TransitionQ build_q(const DensityMatrix& rho, const DensityMatrix& sigma, double zero_tol = 1e-12);

struct NotUTMajorizedViolation {
    int index = 0;
};
struct QNotPSDViolation {
    double min_eig = 0.0;
};
struct ZeroCoherenceMismatchViolation {
    int j = 0; // 1-based
    int k = 0;
};
struct NoPSDCompletionFoundViolation {
    double best_min_eig = 0.0;
};

using Violation = std::variant<NotUTMajorizedViolation, QNotPSDViolation, ZeroCoherenceMismatchViolation,
                               NoPSDCompletionFoundViolation>;

struct Decision {
    bool feasible = false;
    std::optional<TransitionCertificate> certificate;
    std::optional<Violation> violation;
};

std::string violation_name(const Violation& v);

Decision decide_transition(const DensityMatrix& rho, const DensityMatrix& sigma, const ToleranceSet& tol = {},
                           int grid = 33);

struct CompletionSearch {
    int grid = 33;
    int sweeps = 20;
};

/// Coordinate ascent on the minimum eigenvalue over the free entries. A
/// returned matrix is PSD within tol; nullopt only means nothing was found at
/// this resolution. `best_min_eig` receives the best value seen.
std::optional<HermitianMatrix> complete_q_family(const QFamily& family, double tol, CompletionSearch search = {},
                                                 double* best_min_eig = nullptr);

CoolingMap synthesize_cooling_map(const TransitionCertificate& cert, const ToleranceSet& tol = {});

KrausSet kraus_of(const CoolingMap& m);

DensityMatrix max_coherent_target(const DensityMatrix& rho, const ProbabilityVector& v, const ToleranceSet& tol = {});

struct CoherenceBoundReport {
    bool holds = false;
    // max over pairs of |sigma_jk| - sqrt(P_jj P_kk) |rho_jk|
    double max_excess = 0.0;
    // max over pairs of | |sigma_jk| - sqrt(P_jj P_kk) |rho_jk| |
    double max_gap = 0.0;
};

CoherenceBoundReport coherence_bound_check(const CoolingMap& m, const DensityMatrix& rho,
                                           const ToleranceSet& tol = {}, double slack = 1e-10);

} // namespace coolmap
