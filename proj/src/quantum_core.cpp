#include "coolmap/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace coolmap {

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> eigen_of(const CMatrix& m, bool vectors)
{
    return Eigen::SelfAdjointEigenSolver<CMatrix>(
        m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
}

double hermiticity_defect(const CMatrix& m)
{
    return max_abs(m - m.adjoint());
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

} // namespace

double max_abs(const CMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double EnergySpectrum::min_gap() const
{
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < energies_.size(); ++i) {
        gap = std::min(gap, energies_[i + 1] - energies_[i]);
    }
    return gap;
}

EnergySpectrum validate_spectrum(std::vector<double> energies, double gap_tol)
{
    const std::size_t d = energies.size();
    if (d == 0) {
        throw Error(ErrorKind::InvalidArgument, "empty spectrum");
    }
    for (double e : energies) {
        if (!std::isfinite(e)) {
            throw Error(ErrorKind::InvalidArgument, "non-finite energy");
        }
    }
    for (std::size_t i = 0; i + 1 < d; ++i) {
        if (energies[i + 1] - energies[i] <= gap_tol) {
            const int a = static_cast<int>(i + 1), b = static_cast<int>(i + 2);
            throw Error(ErrorKind::DegenerateLevels,
                        "levels " + std::to_string(a) + " and " + std::to_string(b) + " are not increasing",
                        energies[i + 1] - energies[i], {a, b});
        }
    }
    // Gaps E_i - E_j for i > j, enumerated in lexicographic order of (i, j).
    struct Gap {
        int hi, lo;
        double value;
    };
    std::vector<Gap> gaps;
    for (std::size_t i = 1; i < d; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            gaps.push_back({static_cast<int>(i + 1), static_cast<int>(j + 1), energies[i] - energies[j]});
        }
    }
    for (std::size_t a = 0; a < gaps.size(); ++a) {
        for (std::size_t b = a + 1; b < gaps.size(); ++b) {
            if (std::abs(gaps[a].value - gaps[b].value) <= gap_tol) {
                const auto& g = gaps[a];
                const auto& h = gaps[b];
                throw Error(ErrorKind::DegenerateGaps,
                            "gap (" + std::to_string(g.hi) + "," + std::to_string(g.lo) + ") equals gap (" +
                                std::to_string(h.hi) + "," + std::to_string(h.lo) + ")",
                            std::abs(g.value - h.value), {g.hi, g.lo, h.hi, h.lo});
            }
        }
    }
    return EnergySpectrum(std::move(energies));
}

DensityMatrix validate_density(const CMatrix& entries, const ToleranceSet& tol)
{
    if (entries.rows() != entries.cols() || entries.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "density matrix must be square and non-empty");
    }
    const double herm = hermiticity_defect(entries);
    if (herm > tol.herm_tol) {
        throw Error(ErrorKind::NotHermitian, "max |rho_jk - conj(rho_kj)| = " + fmt(herm), herm);
    }
    CMatrix h = 0.5 * (entries + entries.adjoint());
    const double trace_dev = std::abs(h.trace().real() - 1.0);
    if (trace_dev > tol.trace_tol) {
        throw Error(ErrorKind::NotUnitTrace, "|Tr rho - 1| = " + fmt(trace_dev), trace_dev);
    }
    const RVector w = eigen_of(h, false).eigenvalues();
    const double norm = w.cwiseAbs().maxCoeff();
    if (w.minCoeff() < -tol.psd_tol * norm) {
        throw Error(ErrorKind::NotPSD, "min eigenvalue " + fmt(w.minCoeff()), w.minCoeff());
    }
    return DensityMatrix(std::move(h));
}

HermitianMatrix HermitianMatrix::from(const CMatrix& m, double herm_tol)
{
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "Hermitian matrix must be square");
    }
    const double herm = hermiticity_defect(m);
    if (herm > herm_tol) {
        throw Error(ErrorKind::NotHermitian, "max |M_jk - conj(M_kj)| = " + fmt(herm), herm);
    }
    return HermitianMatrix(0.5 * (m + m.adjoint()));
}

KrausSet::KrausSet(std::vector<CMatrix> ops) : operators(std::move(ops))
{
    if (operators.empty()) return;
    dim_in = static_cast<std::size_t>(operators.front().cols());
    dim_out = static_cast<std::size_t>(operators.front().rows());
    for (const auto& k : operators) {
        if (static_cast<std::size_t>(k.cols()) != dim_in || static_cast<std::size_t>(k.rows()) != dim_out) {
            throw Error(ErrorKind::DimensionMismatch, "Kraus operators have inconsistent shapes");
        }
    }
}

KrausSet::KrausSet(std::size_t in, std::size_t out, std::vector<CMatrix> ops)
    : dim_in(in), dim_out(out), operators(std::move(ops))
{
    for (const auto& k : operators) {
        if (static_cast<std::size_t>(k.cols()) != dim_in || static_cast<std::size_t>(k.rows()) != dim_out) {
            throw Error(ErrorKind::DimensionMismatch, "Kraus operators have inconsistent shapes");
        }
    }
}

UnitaryMatrix UnitaryMatrix::from(const CMatrix& m, double unit_tol)
{
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "unitary must be square");
    }
    UnitaryMatrix u(m);
    const double defect = u.defect();
    if (defect > unit_tol) {
        throw Error(ErrorKind::NotUnitary, "max |U^dag U - I| = " + fmt(defect), defect);
    }
    return u;
}

double UnitaryMatrix::defect() const
{
    return max_abs(u_.adjoint() * u_ - CMatrix::Identity(u_.rows(), u_.cols()));
}

PsdCheck is_psd(const HermitianMatrix& m, double tol)
{
    if (m.dim() == 0) {
        return {true, 0.0};
    }
    const RVector w = eigen_of(m.matrix(), false).eigenvalues();
    const double min_eig = w.minCoeff();
    const double norm = w.cwiseAbs().maxCoeff();
    return {min_eig >= -tol * std::max(1.0, norm), min_eig};
}

std::size_t numerical_rank(const HermitianMatrix& m, double tol)
{
    if (m.dim() == 0) {
        return 0;
    }
    const RVector w = eigen_of(m.matrix(), false).eigenvalues();
    const double norm = w.cwiseAbs().maxCoeff();
    if (norm == 0.0) {
        return 0;
    }
    return static_cast<std::size_t>((w.array() > tol * norm).count());
}

std::vector<CVector> gram_vectors(const HermitianMatrix& q, double tol)
{
    return gram_vectors(q, tol, tol);
}

std::vector<CVector> gram_vectors(const HermitianMatrix& q, double tol, double rank_tol)
{
    const auto check = is_psd(q, tol);
    if (!check.psd) {
        throw Error(ErrorKind::NotPSD, "Gramian has min eigenvalue " + fmt(check.min_eigenvalue),
                    check.min_eigenvalue);
    }
    const Eigen::Index d = static_cast<Eigen::Index>(q.dim());
    auto es = eigen_of(q.matrix(), true);
    const RVector& w = es.eigenvalues();
    const CMatrix& v = es.eigenvectors();
    const double norm = d == 0 ? 0.0 : w.cwiseAbs().maxCoeff();

    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = d - 1; i >= 0; --i) {
        if (norm > 0.0 && w(i) > rank_tol * norm) {
            kept.push_back(i);
        }
    }
    std::vector<CVector> out(static_cast<std::size_t>(d), CVector::Zero(static_cast<Eigen::Index>(kept.size())));
    for (Eigen::Index j = 0; j < d; ++j) {
        for (std::size_t c = 0; c < kept.size(); ++c) {
            out[static_cast<std::size_t>(j)](static_cast<Eigen::Index>(c)) =
                std::sqrt(w(kept[c])) * v(j, kept[c]);
        }
    }
    return out;
}

CMatrix gramian(std::span<const CVector> vectors)
{
    const auto d = static_cast<Eigen::Index>(vectors.size());
    CMatrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            // Eigen's dot conjugates its first argument.
            g(j, k) = vectors[static_cast<std::size_t>(k)].dot(vectors[static_cast<std::size_t>(j)]);
        }
    }
    return g;
}

CompletenessCheck check_kraus_completeness(const KrausSet& k, double tol)
{
    CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(k.dim_in), static_cast<Eigen::Index>(k.dim_in));
    for (const auto& op : k.operators) {
        sum.noalias() += op.adjoint() * op;
    }
    const double defect = max_abs(sum - CMatrix::Identity(sum.rows(), sum.cols()));
    return {defect <= tol, defect};
}

CMatrix apply_kraus(const KrausSet& k, const CMatrix& x)
{
    if (static_cast<std::size_t>(x.rows()) != k.dim_in || static_cast<std::size_t>(x.cols()) != k.dim_in) {
        throw Error(ErrorKind::DimensionMismatch, "operator dimension does not match Kraus input dimension");
    }
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(k.dim_out), static_cast<Eigen::Index>(k.dim_out));
    for (const auto& op : k.operators) {
        out.noalias() += op * x * op.adjoint();
    }
    return out;
}

DensityMatrix apply_channel(const KrausSet& k, const DensityMatrix& rho, const ToleranceSet& tol)
{
    if (rho.dim() != k.dim_in) {
        throw Error(ErrorKind::DimensionMismatch, "state dimension does not match Kraus input dimension");
    }
    const auto comp = check_kraus_completeness(k, tol.comp_tol);
    if (!comp.complete) {
        throw Error(ErrorKind::IncompleteKraus, "completeness defect " + fmt(comp.defect), comp.defect);
    }
    CMatrix out = apply_kraus(k, rho.matrix());
    return validate_density(0.5 * (out + out.adjoint()), tol);
}

std::vector<EnergyLevel> group_energy_levels(std::span<const double> energies, double gap_tol)
{
    std::vector<std::size_t> order(energies.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });
    std::vector<EnergyLevel> levels;
    for (std::size_t idx : order) {
        if (levels.empty() || energies[idx] - energies[levels.back().indices.back()] > gap_tol) {
            levels.push_back({energies[idx], {}});
        }
        levels.back().indices.push_back(idx);
    }
    for (auto& level : levels) {
        std::sort(level.indices.begin(), level.indices.end());
    }
    return levels;
}

EnergyConservationCheck check_energy_conserving(const CMatrix& u, std::span<const EnergyLevel> levels,
                                                double tol, double gap_tol)
{
    const auto n = static_cast<std::size_t>(u.rows());
    if (u.rows() != u.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "unitary must be square");
    }
    std::vector<int> block(n, -1);
    for (std::size_t b = 0; b < levels.size(); ++b) {
        for (std::size_t idx : levels[b].indices) {
            if (idx >= n || block[idx] != -1) {
                throw Error(ErrorKind::BadPartition, "index sets do not partition the dimension");
            }
            block[idx] = static_cast<int>(b);
        }
    }
    if (std::find(block.begin(), block.end(), -1) != block.end()) {
        throw Error(ErrorKind::BadPartition, "index sets do not cover the dimension");
    }
    for (std::size_t a = 0; a < levels.size(); ++a) {
        for (std::size_t b = a + 1; b < levels.size(); ++b) {
            if (std::abs(levels[a].energy - levels[b].energy) <= gap_tol) {
                throw Error(ErrorKind::BadPartition, "two blocks share the same eigenvalue");
            }
        }
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (block[r] != block[c]) {
                worst = std::max(worst, std::abs(u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
            }
        }
    }
    return {worst <= tol, worst};
}

CMatrix orthonormal_completion(const CMatrix& seed, const CMatrix& candidates, std::size_t target_cols,
                               double drop_tol)
{
    const Eigen::Index n = seed.rows();
    std::vector<CVector> basis;
    for (Eigen::Index c = 0; c < seed.cols(); ++c) {
        basis.emplace_back(seed.col(c));
    }
    for (Eigen::Index c = 0; c < candidates.cols() && basis.size() < target_cols; ++c) {
        CVector v = candidates.col(c);
        // Two passes of modified Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                v -= b.dot(v) * b;
            }
        }
        const double norm = v.norm();
        if (norm > drop_tol) {
            basis.emplace_back(v / norm);
        }
    }
    CMatrix out(n, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c) {
        out.col(static_cast<Eigen::Index>(c)) = basis[c];
    }
    return out;
}

} // namespace coolmap
