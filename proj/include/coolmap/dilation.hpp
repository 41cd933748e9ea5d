#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "coolmap/cooling.hpp"

namespace coolmap {

std::size_t q_rank(const HermitianMatrix& q, double tol = 1e-9);
std::size_t q_rank(const TransitionCertificate& cert, double tol = 1e-9);
std::size_t q_rank(const CoolingMap& m, double tol = 1e-9);

/// True iff the Gramian of the diagonal Kraus vectors has numerical rank one.
bool is_optimally_coherent(const CoolingMap& m, double tol = 1e-9);

/// Ancilla with a g-fold ground level at 0 and, for each pair j < k of system
/// levels, a g-fold level at E_k - E_j. Basis index = level * g + t.
struct AncillaSpec {
    std::size_t g = 1;
    std::vector<double> levels;                          // levels[0] == 0
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // (j, k) of levels[1..], 0-based

    static AncillaSpec for_spectrum(const EnergySpectrum& spectrum, std::size_t g);

    std::size_t dim() const { return levels.size() * g; }
    /// Level index of the pair (j, k), j < k.
    std::size_t level_of(std::size_t j, std::size_t k) const;
    /// Energy of every ancilla basis vector.
    std::vector<double> basis_energies() const;
};

struct ThermalDilation {
    EnergySpectrum system;
    AncillaSpec ancilla;
    UnitaryMatrix u; // joint index = s * ancilla.dim() + a

    /// Uniform mixture over the g ground vectors.
    CMatrix ancilla_state() const;
    std::vector<double> joint_energies() const;
    /// Kraus form of rho -> Tr_A[U (rho x gamma_A) U^dag].
    KrausSet channel() const;
};

/// Per-block data of a dilation: for ancilla ground vector t, the image of
/// |E_k, F_1; t> is sum_s lambda[t](k, s) |E_k, F_1; s> + sum_{j<k} mu[t](j, k) |E_j, F_jk; t>.
struct BlockData {
    std::vector<CMatrix> lambda; // g matrices of shape d x g
    std::vector<CMatrix> mu;     // g matrices of shape d x d, strict upper triangle
};

/// Assembles the energy-conserving unitary from block data, completing it
/// within each joint-energy eigenspace. Throws NotUnitary if the designated
/// images are not orthonormal within tol.unit_tol.
ThermalDilation build_from_blocks(const EnergySpectrum& spectrum, const BlockData& blocks, const ToleranceSet& tol = {});

ThermalDilation build_thermal_dilation(const CoolingMap& m, const EnergySpectrum& spectrum,
                                       const ToleranceSet& tol = {});

struct RationalWeight {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

/// Exact rational for w with denominator <= max_den, or IrrationalWeight.
RationalWeight to_rational(double w, std::int64_t max_den = 1000, double tol = 1e-12);

ThermalDilation build_mixture_dilation(const std::vector<CoolingMap>& maps, const std::vector<RationalWeight>& weights,
                                       const EnergySpectrum& spectrum, const ToleranceSet& tol = {});

/// Mixture sum_i w_i E_i in Kraus form (operators scaled by sqrt(w_i)).
KrausSet mixture_kraus(const std::vector<CoolingMap>& maps, const std::vector<RationalWeight>& weights);

/// Block data realizing a cooling map with Gramian diagonal P_kk and
/// off-diagonal Q_jk through g orthogonal ground blocks, in the cases where
/// such vectors are known to exist: rank-1 Gramian (g = 1), d = 2 (g = 2) and
/// diagonal Gramian (g = d). nullopt otherwise.
std::optional<BlockData> closed_form_blocks(const CoolingMap& m, double tol = 1e-9);

struct DilationReport {
    double unitarity_defect = 0.0;
    double energy_offblock = 0.0;
    double max_channel_deviation = 0.0;

    bool passes(double tol) const
    {
        return unitarity_defect <= tol && energy_offblock <= tol && max_channel_deviation <= tol;
    }
};

/// Compares the dilation channel with `expected` on all d^2 matrix units and
/// on `samples` random states drawn from `seed`.
DilationReport verify_dilation(const ThermalDilation& t, const KrausSet& expected, std::size_t samples = 16,
                               std::uint64_t seed = 1, double gap_tol = 1e-9);

struct TwoLevelEquivalence {
    bool applicable = false; // false when the transition is infeasible
    bool constructed = false;
    std::optional<ThermalDilation> dilation;
    DilationReport report;
    double state_deviation = 0.0; // max |Tr_A[...](rho) - sigma|

    // Infeasible transitions hold vacuously.
    bool holds() const { return !applicable || constructed; }
};

TwoLevelEquivalence two_level_equivalence_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                                                const EnergySpectrum& spectrum, const ToleranceSet& tol = {});
/// Same check with the spectrum {0, 1}; the ancilla gap does not affect the result.
TwoLevelEquivalence two_level_equivalence_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                                                const ToleranceSet& tol = {});

} // namespace coolmap
