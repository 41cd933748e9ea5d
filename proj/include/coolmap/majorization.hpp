#pragma once

#include <optional>
#include <vector>

#include "coolmap/quantum_core.hpp"

namespace coolmap {

class ProbabilityVector {
public:
    static ProbabilityVector from(const RVector& w, double prob_tol = 1e-10);
    static ProbabilityVector from(const std::vector<double>& w, double prob_tol = 1e-10);

    std::size_t dim() const { return static_cast<std::size_t>(w_.size()); }
    const RVector& weights() const { return w_; }
    double operator[](Eigen::Index i) const { return w_(i); }

private:
    explicit ProbabilityVector(RVector w) : w_(std::move(w)) {}
    RVector w_;
};

/// Upper-triangular column-stochastic matrix, P(j, k) = P_{j|k}.
class UTCSMatrix {
public:
    static UTCSMatrix from(const RMatrix& p, double stoch_tol = 1e-10);

    std::size_t dim() const { return static_cast<std::size_t>(p_.rows()); }
    const RMatrix& matrix() const { return p_; }
    double operator()(Eigen::Index j, Eigen::Index k) const { return p_(j, k); }

private:
    explicit UTCSMatrix(RMatrix p) : p_(std::move(p)) {}
    RMatrix p_;
};

class GibbsDistribution {
public:
    GibbsDistribution(EnergySpectrum spectrum, double beta);

    const EnergySpectrum& spectrum() const { return spectrum_; }
    double beta() const { return beta_; }
    const RVector& weights() const { return weights_; }

private:
    EnergySpectrum spectrum_;
    double beta_;
    RVector weights_;
};

struct UTCheck {
    bool majorizes = false;
    // 1-based k of the first failing tail sum sum_{j>=k}, scanning k = d down to 2.
    std::optional<int> first_violated_index;
};

UTCheck ut_majorizes(const ProbabilityVector& u, const ProbabilityVector& v, double tol = 1e-10);

/// Builds the UTCS matrix with maximal diagonal by filling deficits from the
/// top level down. Entries u_j <= zero_tol count as unpopulated.
UTCSMatrix construct_utcs(const ProbabilityVector& u, const ProbabilityVector& v, double tol = 1e-10,
                          double zero_tol = 0.0);

/// Gibbs-rescaled Lorenz curve comparison at finite inverse temperature.
bool thermo_majorizes(const ProbabilityVector& u, const ProbabilityVector& v, const GibbsDistribution& g,
                      double tol = 1e-10);

struct LorenzPoint {
    double x = 0.0; // cumulative Gibbs weight
    double y = 0.0; // cumulative probability
};

/// Vertices of the thermo-majorization curve of p (d + 1 points from the origin).
std::vector<LorenzPoint> lorenz_curve(const ProbabilityVector& p, const GibbsDistribution& g);

struct SweepRow {
    double beta = 0.0;
    bool thermo = false;
    bool ut = false;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    // Smallest swept beta from which both decisions coincide for every later row.
    std::optional<double> agreement_from;
};

SweepTable beta_sweep_limit(const ProbabilityVector& u, const ProbabilityVector& v, const EnergySpectrum& spectrum,
                            const std::vector<double>& betas, double tol = 1e-10);

} // namespace coolmap
