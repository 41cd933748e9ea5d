#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coolmap/quantum_core.hpp"
#include "coolmap/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace coolmap;
using tu::mat;

TEST_CASE("validate_density accepts states and names the broken invariant")
{
    CHECK_NOTHROW(validate_density(CMatrix::Identity(3, 3) / 3.0));
    CHECK_NOTHROW(validate_density(mat({{0.5, 0.5}, {0.5, 0.5}})));

    const Error e = tu::caught([] { validate_density(mat({{0.5, 0.6}, {0.6, 0.5}})); });
    CHECK(e.kind() == ErrorKind::NotPSD);
    CHECK(e.magnitude() == doctest::Approx(-0.1).epsilon(1e-9));

    CHECK(tu::error_kind([] { validate_density(mat({{0.5, 0.1}, {0.2, 0.5}})); }) == ErrorKind::NotHermitian);
    const Error t = tu::caught([] { validate_density(mat({{0.5, 0.0}, {0.0, 0.6}})); });
    CHECK(t.kind() == ErrorKind::NotUnitTrace);
    CHECK(t.magnitude() == doctest::Approx(0.1));
    CHECK(tu::error_kind([] { validate_density(CMatrix::Identity(2, 3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("is_psd returns the eigenvalue witness")
{
    auto id = is_psd(HermitianMatrix::from(CMatrix::Identity(3, 3)), 1e-9);
    CHECK(id.psd);
    CHECK(id.min_eigenvalue == doctest::Approx(1.0));

    auto proj = is_psd(HermitianMatrix::from(mat({{1, 0}, {0, 0}})), 1e-9);
    CHECK(proj.psd);
    CHECK(std::abs(proj.min_eigenvalue) < 1e-15);

    auto bad = is_psd(HermitianMatrix::from(mat({{1, 2}, {2, 1}})), 1e-9);
    CHECK_FALSE(bad.psd);
    CHECK(bad.min_eigenvalue == doctest::Approx(-1.0));
}

TEST_CASE("is_psd agrees with closed-form roots and principal minors")
{
    Rng rng(11);
    std::normal_distribution<double> n(0.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = n(rng), c = n(rng) + 1.0;
        const Complex b(n(rng), n(rng));
        const double ref = oracle::min_eig_2x2(a, b, c);
        CMatrix m(2, 2);
        m << a, b, std::conj(b), c;
        auto r = is_psd(HermitianMatrix::from(m), 1e-12);
        CHECK(r.min_eigenvalue == doctest::Approx(ref).epsilon(1e-9));
        CHECK(r.psd == (ref >= 0));
    }
    for (int trial = 0; trial < 2000; ++trial) {
        // Shifted Gram matrices straddle the PSD boundary.
        const CMatrix g = random_ginibre(3, 2, rng);
        const CMatrix m = g * g.adjoint() - 0.3 * n(rng) * n(rng) * CMatrix::Identity(3, 3);
        auto r = is_psd(HermitianMatrix::from(m), 1e-12);
        if (std::abs(r.min_eigenvalue) < 1e-6) continue;
        ++checked;
        CHECK(r.psd == oracle::psd_by_minors(m));
    }
    CHECK(checked > 1000);
}

TEST_CASE("gram_vectors examples")
{
    auto id = gram_vectors(HermitianMatrix::from(CMatrix::Identity(2, 2)), 1e-9);
    REQUIRE(id.size() == 2);
    CHECK(id[0].size() == 2);
    CHECK(oracle::max_abs(gramian(id) - CMatrix::Identity(2, 2)) < 1e-12);

    auto ones = gram_vectors(HermitianMatrix::from(CMatrix::Ones(3, 3)), 1e-9);
    REQUIRE(ones.size() == 3);
    for (const auto& v : ones) {
        REQUIRE(v.size() == 1);
        CHECK(std::abs(v(0)) == doctest::Approx(1.0));
    }
    CHECK(oracle::max_abs(gramian(ones) - CMatrix::Ones(3, 3)) < 1e-12);

    const CMatrix half = mat({{1, 0.5}, {0.5, 1}});
    auto h = gram_vectors(HermitianMatrix::from(half), 1e-9);
    CHECK(h[0].norm() == doctest::Approx(1.0));
    CHECK(h[1].norm() == doctest::Approx(1.0));
    CHECK(oracle::max_abs(gramian(h) - half) < 1e-12);

    CHECK(tu::error_kind([] { gram_vectors(HermitianMatrix::from(mat({{1, 2}, {2, 1}})), 1e-9); }) ==
          ErrorKind::NotPSD);
}

TEST_CASE("gramian convention is sum_i a_j[i] conj(a_k[i])")
{
    std::vector<CVector> v(2, CVector(1));
    v[0](0) = Complex(0, 1);
    v[1](0) = 1.0;
    const CMatrix g = gramian(v);
    CHECK(std::abs(g(0, 1) - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(g(1, 0) - Complex(0, -1)) < 1e-15);
}

TEST_CASE("gram round trip on random PSD matrices")
{
    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto d = static_cast<std::size_t>(1 + trial % 6);
        const auto r = static_cast<std::size_t>(1 + (trial / 6) % d);
        const CMatrix g = random_ginibre(d, r, rng);
        const CMatrix q = g * g.adjoint();
        auto vs = gram_vectors(HermitianMatrix::from(q), 1e-9);
        CHECK(vs.front().size() == static_cast<Eigen::Index>(r));
        CHECK(oracle::max_abs(gramian(vs) - q) < 1e-9);
    }
}

TEST_CASE("apply_channel examples")
{
    Rng rng(3);
    const DensityMatrix rho = random_state(3, rng);
    const KrausSet id({CMatrix::Identity(3, 3)});
    CHECK(oracle::max_abs(apply_channel(id, rho).matrix() - rho.matrix()) < 1e-15);

    const KrausSet decay({mat({{1, 0}, {0, 0}}), mat({{0, 1}, {0, 0}})});
    const DensityMatrix out = apply_channel(decay, tu::plus_state());
    CHECK(oracle::max_abs(out.matrix() - mat({{1, 0}, {0, 0}})) < 1e-15);

    const DensityMatrix q = random_state(2, rng);
    CHECK(oracle::max_abs(apply_channel(KrausSet({mat({{1, 0}, {0, 1}})}), q).matrix() - q.matrix()) < 1e-15);

    CHECK(tu::error_kind([&] { apply_channel(KrausSet({mat({{1, 0}, {0, 0}})}), q); }) ==
          ErrorKind::IncompleteKraus);
    CHECK(tu::error_kind([&] { apply_channel(id, q); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("apply_channel preserves trace and positivity and matches the naive sum")
{
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 2 + trial % 4, r = 1 + trial % 3;
        // Kraus operators are the blocks of a random isometry C^d -> C^(d r).
        const CMatrix v = random_unitary(d * r, rng).leftCols(static_cast<Eigen::Index>(d));
        std::vector<CMatrix> ops;
        for (std::size_t i = 0; i < r; ++i) {
            ops.push_back(v.middleRows(static_cast<Eigen::Index>(i * d), static_cast<Eigen::Index>(d)));
        }
        const DensityMatrix rho = random_state(d, rng);
        const CMatrix out = apply_channel(KrausSet(ops), rho).matrix();
        CHECK(std::abs(out.trace() - 1.0) < 1e-10);
        CHECK(Eigen::SelfAdjointEigenSolver<CMatrix>(out).eigenvalues().minCoeff() > -1e-9);
        CHECK(oracle::max_abs(out - oracle::naive_channel(ops, rho.matrix())) < 1e-12);
    }
}

TEST_CASE("check_kraus_completeness examples")
{
    auto ok = check_kraus_completeness(KrausSet({CMatrix::Identity(2, 2)}), 1e-9);
    CHECK(ok.complete);
    CHECK(ok.defect == 0.0);
    auto bad = check_kraus_completeness(KrausSet({mat({{1, 0}, {0, 0}})}), 1e-9);
    CHECK_FALSE(bad.complete);
    CHECK(bad.defect == doctest::Approx(1.0));
}

TEST_CASE("check_energy_conserving")
{
    const std::vector<EnergyLevel> levels{{0.0, {0}}, {1.0, {1, 2}}};
    CMatrix u = CMatrix::Zero(3, 3);
    u(0, 0) = 1.0;
    u.block(1, 1, 2, 2) = mat({{0, 1}, {1, 0}});
    auto block = check_energy_conserving(u, levels, 1e-9);
    CHECK(block.conserving);
    CHECK(block.max_offblock == 0.0);

    CMatrix swap = CMatrix::Zero(3, 3);
    swap(0, 1) = swap(1, 0) = swap(2, 2) = 1.0;
    auto s = check_energy_conserving(swap, levels, 1e-9);
    CHECK_FALSE(s.conserving);
    CHECK(s.max_offblock == doctest::Approx(1.0));

    const std::vector<EnergyLevel> overlap{{0.0, {0, 1}}, {1.0, {1, 2}}};
    CHECK(tu::error_kind([&] { check_energy_conserving(u, overlap, 1e-9); }) == ErrorKind::BadPartition);
    const std::vector<EnergyLevel> missing{{0.0, {0}}, {1.0, {1}}};
    CHECK(tu::error_kind([&] { check_energy_conserving(u, missing, 1e-9); }) == ErrorKind::BadPartition);
    const std::vector<EnergyLevel> same{{0.0, {0}}, {0.0, {1, 2}}};
    CHECK(tu::error_kind([&] { check_energy_conserving(u, same, 1e-9); }) == ErrorKind::BadPartition);
}

TEST_CASE("energy conservation is invariant under rotations inside a block")
{
    Rng rng(21);
    const std::vector<EnergyLevel> levels{{0.0, {0, 3}}, {1.0, {1, 2, 4}}};
    for (int trial = 0; trial < 50; ++trial) {
        CMatrix u = CMatrix::Zero(5, 5);
        const CMatrix a = random_unitary(2, rng), b = random_unitary(3, rng);
        const std::vector<Eigen::Index> ia{0, 3}, ib{1, 2, 4};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) u(ia[r], ia[c]) = a(r, c);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) u(ib[r], ib[c]) = b(r, c);
        if (trial % 2) u(0, 1) = 0.3; // broken instance

        CMatrix w = CMatrix::Zero(5, 5);
        const CMatrix ra = random_unitary(2, rng), rb = random_unitary(3, rng);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) w(ia[r], ia[c]) = ra(r, c);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) w(ib[r], ib[c]) = rb(r, c);

        const auto base = check_energy_conserving(u, levels, 1e-9);
        const auto rotated = check_energy_conserving(CMatrix(w * u), levels, 1e-9);
        CHECK(base.conserving == (trial % 2 == 0));
        CHECK(rotated.conserving == base.conserving);
    }
}

TEST_CASE("validate_spectrum identifies colliding levels and gaps")
{
    CHECK_NOTHROW(validate_spectrum({0, 1, 2.5}));

    const Error gaps = tu::caught([] { validate_spectrum({0, 1, 2}); });
    CHECK(gaps.kind() == ErrorKind::DegenerateGaps);
    CHECK(gaps.indices() == std::vector<int>{2, 1, 3, 2});

    const Error lv = tu::caught([] { validate_spectrum({0, 1, 1}); });
    CHECK(lv.kind() == ErrorKind::DegenerateLevels);
    CHECK(lv.indices() == std::vector<int>{2, 3});

    CHECK(validate_spectrum({0, 1, 2.5}).min_gap() == doctest::Approx(1.0));
}

TEST_CASE("group_energy_levels and orthonormal_completion")
{
    const std::vector<double> e{1.0, 0.0, 1.0 + 1e-12, 2.0};
    auto lv = group_energy_levels(e, 1e-9);
    REQUIRE(lv.size() == 3);
    CHECK(lv[0].indices == std::vector<std::size_t>{1});
    CHECK(lv[1].indices == std::vector<std::size_t>{0, 2});

    CVector seed(3);
    seed << 1, 1, 0;
    seed /= std::sqrt(2.0);
    const CMatrix full = orthonormal_completion(seed, CMatrix::Identity(3, 3), 3);
    REQUIRE(full.cols() == 3);
    CHECK(oracle::max_abs(full.adjoint() * full - CMatrix::Identity(3, 3)) < 1e-12);
    CHECK(oracle::max_abs(full.col(0) - seed) == 0.0);
}

TEST_CASE("UnitaryMatrix checks")
{
    CHECK(UnitaryMatrix::from(mat({{0, 1}, {1, 0}})).defect() == 0.0);
    CHECK(tu::error_kind([] { UnitaryMatrix::from(mat({{1, 1}, {0, 1}})); }) == ErrorKind::NotUnitary);
    CHECK(tu::error_kind([] { HermitianMatrix::from(mat({{1, 1}, {0, 1}})); }) == ErrorKind::NotHermitian);
}
