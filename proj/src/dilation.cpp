#include "coolmap/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coolmap/random.hpp"

namespace coolmap {

namespace {

HermitianMatrix hermitian_of(const CMatrix& m)
{
    return HermitianMatrix::from(m, std::numeric_limits<double>::infinity());
}

// Scalars c_k with c_j conj(c_k) = G_jk for a rank-one Gramian, taken from
// the top eigenvector and rescaled so that |c_k|^2 = G_kk exactly.
CVector rank_one_scalars(const CoolingMap& m)
{
    const CMatrix g = m.gramian();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
    const auto d = g.rows();
    CVector c = std::sqrt(std::max(es.eigenvalues()(d - 1), 0.0)) * es.eigenvectors().col(d - 1);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double target = std::sqrt(std::max(g(k, k).real(), 0.0));
        const double mag = std::abs(c(k));
        c(k) = mag > 0.0 ? c(k) * (target / mag) : Complex(target);
    }
    return c;
}

void require_map(const CoolingMap& m, const EnergySpectrum& spectrum, const ToleranceSet& tol)
{
    if (m.dim != spectrum.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "map and spectrum differ in dimension");
    }
    validate_cooling_map(m, tol.comp_tol);
}

} // namespace

std::size_t q_rank(const HermitianMatrix& q, double tol)
{
    return numerical_rank(q, tol);
}

std::size_t q_rank(const TransitionCertificate& cert, double tol)
{
    return numerical_rank(cert.q, tol);
}

std::size_t q_rank(const CoolingMap& m, double tol)
{
    return numerical_rank(hermitian_of(m.gramian()), tol);
}

bool is_optimally_coherent(const CoolingMap& m, double tol)
{
    return q_rank(m, tol) == 1;
}

AncillaSpec AncillaSpec::for_spectrum(const EnergySpectrum& spectrum, std::size_t g)
{
    if (g == 0) {
        throw Error(ErrorKind::InvalidArgument, "ancilla multiplicity must be positive");
    }
    AncillaSpec a;
    a.g = g;
    a.levels.push_back(0.0);
    for (std::size_t j = 0; j < spectrum.dim(); ++j) {
        for (std::size_t k = j + 1; k < spectrum.dim(); ++k) {
            a.levels.push_back(spectrum[k] - spectrum[j]);
            a.pairs.emplace_back(j, k);
        }
    }
    return a;
}

std::size_t AncillaSpec::level_of(std::size_t j, std::size_t k) const
{
    const auto it = std::find(pairs.begin(), pairs.end(), std::make_pair(j, k));
    if (it == pairs.end()) {
        throw Error(ErrorKind::InvalidArgument, "no ancilla level for this pair");
    }
    return static_cast<std::size_t>(it - pairs.begin()) + 1;
}

std::vector<double> AncillaSpec::basis_energies() const
{
    std::vector<double> e;
    for (double level : levels) {
        e.insert(e.end(), g, level);
    }
    return e;
}

CMatrix ThermalDilation::ancilla_state() const
{
    const auto n = static_cast<Eigen::Index>(ancilla.dim());
    CMatrix gamma = CMatrix::Zero(n, n);
    for (std::size_t t = 0; t < ancilla.g; ++t) {
        gamma(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(t)) = 1.0 / static_cast<double>(ancilla.g);
    }
    return gamma;
}

std::vector<double> ThermalDilation::joint_energies() const
{
    const auto fa = ancilla.basis_energies();
    std::vector<double> e;
    for (double es : system.energies()) {
        for (double f : fa) {
            e.push_back(es + f);
        }
    }
    return e;
}

KrausSet ThermalDilation::channel() const
{
    const auto d = static_cast<Eigen::Index>(system.dim());
    const auto na = static_cast<Eigen::Index>(ancilla.dim());
    const double scale = 1.0 / std::sqrt(static_cast<double>(ancilla.g));
    const CMatrix& um = u.matrix();
    std::vector<CMatrix> ops;
    for (Eigen::Index out = 0; out < na; ++out) {
        for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(ancilla.g); ++t) {
            CMatrix k(d, d);
            for (Eigen::Index r = 0; r < d; ++r) {
                for (Eigen::Index c = 0; c < d; ++c) {
                    k(r, c) = scale * um(r * na + out, c * na + t);
                }
            }
            if (max_abs(k) > 0.0) {
                ops.push_back(std::move(k));
            }
        }
    }
    return KrausSet(system.dim(), system.dim(), std::move(ops));
}

ThermalDilation build_from_blocks(const EnergySpectrum& spectrum, const BlockData& blocks, const ToleranceSet& tol)
{
    const std::size_t g = blocks.lambda.size();
    const auto d = static_cast<Eigen::Index>(spectrum.dim());
    if (g == 0 || blocks.mu.size() != g) {
        throw Error(ErrorKind::DimensionMismatch, "block data needs one lambda and one mu per ground vector");
    }
    for (std::size_t t = 0; t < g; ++t) {
        if (blocks.lambda[t].rows() != d || blocks.lambda[t].cols() != static_cast<Eigen::Index>(g) ||
            blocks.mu[t].rows() != d || blocks.mu[t].cols() != d) {
            throw Error(ErrorKind::DimensionMismatch, "block data shapes do not match the spectrum");
        }
    }

    auto ancilla = AncillaSpec::for_spectrum(spectrum, g);
    const auto na = static_cast<Eigen::Index>(ancilla.dim());
    const Eigen::Index n = d * na;
    const auto gi = static_cast<Eigen::Index>(g);
    CMatrix u = CMatrix::Zero(n, n);
    std::vector<bool> designated(static_cast<std::size_t>(n), false);
    std::vector<Eigen::Index> designated_cols;

    for (Eigen::Index t = 0; t < gi; ++t) {
        const auto& lam = blocks.lambda[static_cast<std::size_t>(t)];
        const auto& mu = blocks.mu[static_cast<std::size_t>(t)];
        for (Eigen::Index k = 0; k < d; ++k) {
            const Eigen::Index col = k * na + t;
            for (Eigen::Index s = 0; s < gi; ++s) {
                u(k * na + s, col) = lam(k, s);
            }
            for (Eigen::Index j = 0; j < k; ++j) {
                const auto level = static_cast<Eigen::Index>(
                    ancilla.level_of(static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
                u(j * na + level * gi + t, col) = mu(j, k);
            }
            designated[static_cast<std::size_t>(col)] = true;
            designated_cols.push_back(col);
        }
    }

    CMatrix seed_all(n, static_cast<Eigen::Index>(designated_cols.size()));
    for (std::size_t c = 0; c < designated_cols.size(); ++c) {
        seed_all.col(static_cast<Eigen::Index>(c)) = u.col(designated_cols[c]);
    }
    const double overlap =
        max_abs(seed_all.adjoint() * seed_all - CMatrix::Identity(seed_all.cols(), seed_all.cols()));
    if (overlap > tol.unit_tol) {
        throw Error(ErrorKind::NotUnitary, "designated images are not orthonormal", overlap);
    }

    ThermalDilation out{spectrum, ancilla, UnitaryMatrix::unchecked(CMatrix())};
    const auto energies = out.joint_energies();
    for (const auto& level : group_energy_levels(energies, tol.gap_tol)) {
        std::vector<Eigen::Index> fixed, rest;
        for (std::size_t idx : level.indices) {
            (designated[idx] ? fixed : rest).push_back(static_cast<Eigen::Index>(idx));
        }
        if (rest.empty()) {
            continue;
        }
        CMatrix seed(n, static_cast<Eigen::Index>(fixed.size()));
        for (std::size_t c = 0; c < fixed.size(); ++c) {
            seed.col(static_cast<Eigen::Index>(c)) = u.col(fixed[c]);
        }
        CMatrix candidates = CMatrix::Zero(n, static_cast<Eigen::Index>(level.indices.size()));
        for (std::size_t c = 0; c < level.indices.size(); ++c) {
            candidates(static_cast<Eigen::Index>(level.indices[c]), static_cast<Eigen::Index>(c)) = 1.0;
        }
        const CMatrix basis = orthonormal_completion(seed, candidates, level.indices.size());
        if (static_cast<std::size_t>(basis.cols()) != level.indices.size()) {
            throw Error(ErrorKind::NotUnitary, "could not complete an energy eigenspace");
        }
        for (std::size_t r = 0; r < rest.size(); ++r) {
            u.col(rest[r]) = basis.col(static_cast<Eigen::Index>(fixed.size() + r));
        }
    }
    out.u = UnitaryMatrix::unchecked(std::move(u));
    return out;
}

ThermalDilation build_thermal_dilation(const CoolingMap& m, const EnergySpectrum& spectrum, const ToleranceSet& tol)
{
    require_map(m, spectrum, tol);
    if (!is_optimally_coherent(m, tol.psd_tol)) {
        throw Error(ErrorKind::NotOptimallyCoherent, "Gramian rank is " + std::to_string(q_rank(m, tol.psd_tol)),
                    static_cast<double>(q_rank(m, tol.psd_tol)));
    }
    return build_mixture_dilation({m}, {{1, 1}}, spectrum, tol);
}

RationalWeight to_rational(double w, std::int64_t max_den, double tol)
{
    if (!std::isfinite(w) || w <= 0.0) {
        throw Error(ErrorKind::InvalidArgument, "mixture weights must be positive", w);
    }
    for (std::int64_t den = 1; den <= max_den; ++den) {
        const double num = std::round(w * static_cast<double>(den));
        if (std::abs(num / static_cast<double>(den) - w) <= tol) {
            const auto n = static_cast<std::int64_t>(num);
            const auto c = std::gcd(n, den);
            return {n / c, den / c};
        }
    }
    throw Error(ErrorKind::IrrationalWeight, "weight has no exact fraction with denominator <= " +
                                                 std::to_string(max_den),
                w);
}

ThermalDilation build_mixture_dilation(const std::vector<CoolingMap>& maps, const std::vector<RationalWeight>& weights,
                                       const EnergySpectrum& spectrum, const ToleranceSet& tol)
{
    if (maps.empty() || maps.size() != weights.size()) {
        throw Error(ErrorKind::InvalidArgument, "need one weight per map");
    }
    std::vector<RationalWeight> reduced;
    std::int64_t g = 1;
    for (const auto& w : weights) {
        if (w.num <= 0 || w.den <= 0) {
            throw Error(ErrorKind::InvalidArgument, "mixture weights must be positive fractions");
        }
        const auto c = std::gcd(w.num, w.den);
        reduced.push_back({w.num / c, w.den / c});
        g = std::lcm(g, reduced.back().den);
    }
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;
    for (const auto& w : reduced) {
        counts.push_back(w.num * (g / w.den));
        total += counts.back();
    }
    if (total != g) {
        throw Error(ErrorKind::WeightsNotNormalized, "weights sum to " + std::to_string(total) + "/" + std::to_string(g),
                    static_cast<double>(total) / static_cast<double>(g));
    }

    std::vector<CVector> scalars;
    for (const auto& m : maps) {
        require_map(m, spectrum, tol);
        if (!is_optimally_coherent(m, tol.psd_tol)) {
            throw Error(ErrorKind::NotOptimallyCoherent, "mixture component is not optimally coherent",
                        static_cast<double>(q_rank(m, tol.psd_tol)));
        }
        scalars.push_back(rank_one_scalars(m));
    }

    const auto d = static_cast<Eigen::Index>(spectrum.dim());
    const auto gi = static_cast<Eigen::Index>(g);
    BlockData blocks;
    // Ground vector t runs map i_t, with i_t constant on consecutive runs of length m_i.
    for (std::size_t i = 0; i < maps.size(); ++i) {
        for (std::int64_t r = 0; r < counts[i]; ++r) {
            const auto t = static_cast<Eigen::Index>(blocks.lambda.size());
            CMatrix lam = CMatrix::Zero(d, gi);
            lam.col(t) = scalars[i];
            blocks.lambda.push_back(std::move(lam));
            blocks.mu.push_back(maps[i].mu.triangularView<Eigen::StrictlyUpper>());
        }
    }
    return build_from_blocks(spectrum, blocks, tol);
}

KrausSet mixture_kraus(const std::vector<CoolingMap>& maps, const std::vector<RationalWeight>& weights)
{
    if (maps.empty() || maps.size() != weights.size()) {
        throw Error(ErrorKind::InvalidArgument, "need one weight per map");
    }
    std::vector<CMatrix> ops;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const double scale = std::sqrt(static_cast<double>(weights[i].num) / static_cast<double>(weights[i].den));
        for (const auto& k : kraus_of(maps[i]).operators) {
            ops.push_back(scale * k);
        }
    }
    return KrausSet(maps.front().dim, maps.front().dim, std::move(ops));
}

std::optional<BlockData> closed_form_blocks(const CoolingMap& m, double tol)
{
    const auto d = static_cast<Eigen::Index>(m.dim);
    const CMatrix gram = m.gramian();
    const CMatrix mu = m.mu.triangularView<Eigen::StrictlyUpper>();
    const auto rank = q_rank(m, tol);

    if (rank == 1) {
        BlockData b;
        b.lambda.push_back(CMatrix(rank_one_scalars(m)));
        b.mu.push_back(mu);
        return b;
    }

    if (d == 2) {
        const double a = gram(0, 0).real();
        const double bb = gram(1, 1).real();
        const Complex c = gram(0, 1);
        CMatrix l1 = CMatrix::Zero(2, 2), l2 = CMatrix::Zero(2, 2);
        if (a <= tol) {
            l1(1, 0) = std::sqrt(bb);
            l2(1, 1) = std::sqrt(bb);
        } else {
            const double sa = std::sqrt(a);
            const double r = std::sqrt(std::max(bb - std::norm(c) / a, 0.0));
            const Complex phase = std::abs(c) > 0.0 ? -std::conj(c) / c : Complex(1.0);
            // Block 1: lambda_1 = sqrt(a) e1, lambda_2 = (conj(c)/sqrt(a), r).
            l1(0, 0) = sa;
            l1(1, 0) = std::conj(c) / sa;
            l1(1, 1) = r;
            // Block 2 mirrors block 1 on e2, with lambda_2 rotated orthogonal to block 1's.
            l2(0, 1) = sa;
            l2(1, 0) = r * phase;
            l2(1, 1) = std::conj(c) / sa;
        }
        BlockData b;
        b.lambda = {l1, l2};
        b.mu = {mu, mu};
        return b;
    }

    const CMatrix off = gram - CMatrix(gram.diagonal().asDiagonal());
    if (max_abs(off) <= tol) {
        // Latin-square assignment: level k in block t sits on ground vector (t + k) mod d.
        BlockData b;
        for (Eigen::Index t = 0; t < d; ++t) {
            CMatrix lam = CMatrix::Zero(d, d);
            for (Eigen::Index k = 0; k < d; ++k) {
                lam(k, (t + k) % d) = std::sqrt(std::max(gram(k, k).real(), 0.0));
            }
            b.lambda.push_back(std::move(lam));
            b.mu.push_back(mu);
        }
        return b;
    }
    return std::nullopt;
}

DilationReport verify_dilation(const ThermalDilation& t, const KrausSet& expected, std::size_t samples,
                               std::uint64_t seed, double gap_tol)
{
    const std::size_t d = t.system.dim();
    if (expected.dim_in != d || expected.dim_out != d ||
        static_cast<std::size_t>(t.u.matrix().rows()) != d * t.ancilla.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "dilation and channel dimensions differ");
    }
    DilationReport report;
    report.unitarity_defect = t.u.defect();
    const auto energies = t.joint_energies();
    const auto levels = group_energy_levels(energies, gap_tol);
    report.energy_offblock = check_energy_conserving(t.u.matrix(), levels, 0.0, gap_tol).max_offblock;

    const KrausSet dilated = t.channel();
    auto compare = [&](const CMatrix& x) {
        report.max_channel_deviation =
            std::max(report.max_channel_deviation, max_abs(apply_kraus(dilated, x) - apply_kraus(expected, x)));
    };
    const auto di = static_cast<Eigen::Index>(d);
    for (Eigen::Index j = 0; j < di; ++j) {
        for (Eigen::Index k = 0; k < di; ++k) {
            CMatrix e = CMatrix::Zero(di, di);
            e(j, k) = 1.0;
            compare(e);
        }
    }
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        compare(random_state(d, rng).matrix());
    }
    return report;
}

TwoLevelEquivalence two_level_equivalence_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                                                const EnergySpectrum& spectrum, const ToleranceSet& tol)
{
    if (rho.dim() != 2 || sigma.dim() != 2 || spectrum.dim() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "two-level check needs qubit states");
    }
    TwoLevelEquivalence out;
    const auto decision = decide_transition(rho, sigma, tol);
    if (!decision.feasible) {
        return out;
    }
    out.applicable = true;
    const CoolingMap m = synthesize_cooling_map(*decision.certificate, tol);
    const auto blocks = closed_form_blocks(m, tol.psd_tol);
    if (!blocks) {
        return out;
    }
    ThermalDilation t = build_from_blocks(spectrum, *blocks, tol);
    out.report = verify_dilation(t, kraus_of(m), 8, 1, tol.gap_tol);
    out.state_deviation = max_abs(apply_kraus(t.channel(), rho.matrix()) - sigma.matrix());
    out.constructed = out.report.passes(tol.unit_tol) && out.state_deviation <= tol.comp_tol;
    out.dilation = std::move(t);
    return out;
}

TwoLevelEquivalence two_level_equivalence_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                                                const ToleranceSet& tol)
{
    return two_level_equivalence_check(rho, sigma, validate_spectrum({0.0, 1.0}), tol);
}

} // namespace coolmap
