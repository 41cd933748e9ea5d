#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coolmap/cooling.hpp"
#include "coolmap/oracle.hpp"
#include "coolmap/random.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace coolmap;
using tu::mat;

namespace {

using gen::feasible_target;
using gen::random_utcs;

const HermitianMatrix& fixed_q(const TransitionQ& t) { return std::get<HermitianMatrix>(t); }

} // namespace

TEST_CASE("build_q examples")
{
    const auto plus = tu::plus_state();
    CHECK(oracle::max_abs(fixed_q(build_q(plus, plus)).matrix() - CMatrix::Ones(2, 2)) < 1e-15);

    CHECK(oracle::max_abs(fixed_q(build_q(plus, tu::ground(2))).matrix() - mat({{1, 0}, {0, 0}})) < 1e-15);

    const double b = 0.7;
    const auto target = tu::pure2(std::sqrt(b), std::sqrt(1 - b));
    const CMatrix q = fixed_q(build_q(plus, target)).matrix();
    CHECK(oracle::max_abs(q - mat({{1, 2 * std::sqrt(0.21)}, {2 * std::sqrt(0.21), 0.6}})) < 1e-12);
    CHECK(is_psd(HermitianMatrix::from(q), 1e-9).min_eigenvalue < 0);
    CHECK((q.determinant().real() - (0.6 - 0.84)) == doctest::Approx(0.0));
}

TEST_CASE("build_q zero coherences")
{
    const auto mixed = tu::density(mat({{0.5, 0}, {0, 0.5}}));
    const Error e = tu::caught([&] { build_q(mixed, tu::plus_state()); });
    CHECK(e.kind() == ErrorKind::ZeroCoherenceMismatch);
    CHECK(e.indices() == std::vector<int>{1, 2});

    const auto target = tu::density(mat({{0.7, 0}, {0, 0.3}}));
    const auto fam = std::get<QFamily>(build_q(mixed, target));
    REQUIRE(fam.free.size() == 1);
    CHECK(fam.free[0].bound == doctest::Approx(std::sqrt(0.6)));

    // An empty level removes its row from the free set.
    const auto empty = tu::density(mat({{0.5, 0, 0}, {0, 0.5, 0}, {0, 0, 0}}));
    const auto fam3 = std::get<QFamily>(build_q(empty, empty));
    REQUIRE(fam3.free.size() == 1);
    CHECK(fam3.free[0].j == 0);
    CHECK(fam3.free[0].k == 1);
    CHECK(fam3.fixed(2, 2) == 0.0);
}

TEST_CASE("decide_transition examples")
{
    Rng rng(1);
    const auto rho = random_state(3, rng);
    auto same = decide_transition(rho, rho);
    REQUIRE(same.feasible);
    CHECK((same.certificate->p.matrix() - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(oracle::max_abs(same.certificate->q.matrix() - CMatrix::Ones(3, 3)) < 1e-12);
    CHECK(same.certificate->gram.front().size() == 1);

    auto cool = decide_transition(tu::plus_state(), tu::ground(2));
    REQUIRE(cool.feasible);
    CHECK(oracle::max_abs(cool.certificate->q.matrix() - mat({{1, 0}, {0, 0}})) < 1e-15);

    auto bad = decide_transition(tu::plus_state(), tu::pure2(std::sqrt(0.7), std::sqrt(0.3)));
    CHECK_FALSE(bad.feasible);
    REQUIRE(bad.violation);
    CHECK(violation_name(*bad.violation) == "QNotPSD");
    CHECK(std::get<QNotPSDViolation>(*bad.violation).min_eig < 0);

    auto up = decide_transition(tu::ground(2), tu::plus_state());
    REQUIRE(up.violation);
    CHECK(violation_name(*up.violation) == "ZeroCoherenceMismatch");

    auto heat = decide_transition(tu::plus_state(), tu::pure2(std::sqrt(0.3), std::sqrt(0.7)));
    REQUIRE(heat.violation);
    CHECK(std::get<NotUTMajorizedViolation>(*heat.violation).index == 2);
}

TEST_CASE("decide_transition with zero coherences searches the family")
{
    const auto mixed = tu::density(mat({{0.5, 0}, {0, 0.5}}));
    auto d = decide_transition(mixed, tu::density(mat({{0.7, 0}, {0, 0.3}})));
    REQUIRE(d.feasible);
    CHECK(std::abs(d.certificate->q(0, 1)) < 1e-15);

    // rho_13 = 0 while the other coherences force a nonzero completion.
    const CMatrix r = mat({{0.4, 0.15, 0}, {0.15, 0.3, 0.1}, {0, 0.1, 0.3}});
    const auto rho = tu::density(r);
    CHECK(decide_transition(rho, rho).feasible);
}

TEST_CASE("complete_q_family examples")
{
    QFamily none;
    none.fixed = mat({{1, 0.5}, {0.5, 1}});
    CHECK(complete_q_family(none, 1e-9).has_value());
    none.fixed = mat({{1, 2}, {2, 1}});
    double best = 0;
    CHECK_FALSE(complete_q_family(none, 1e-9, {}, &best).has_value());
    CHECK(best == doctest::Approx(-1.0));

    QFamily diag;
    diag.fixed = mat({{0.6, 0}, {0, 0.3}});
    diag.free = {{0, 1, std::sqrt(0.18)}};
    auto q = complete_q_family(diag, 1e-9);
    REQUIRE(q);
    CHECK((*q)(0, 1) == Complex(0.0));
}

TEST_CASE("complete_q_family matches a dense scan over one free entry")
{
    Rng rng(12);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const double q11 = 1.0, q22 = 0.3 + 0.7 * std::abs(unif(rng)), q33 = 0.05 + 0.95 * std::abs(unif(rng));
        const Complex q12(unif(rng) * std::sqrt(q11 * q22), 0.3 * unif(rng) * std::sqrt(q11 * q22));
        const Complex q23 = 1.1 * unif(rng) * std::sqrt(q22 * q33);
        QFamily f;
        f.fixed = mat({{q11, q12, 0}, {std::conj(q12), q22, q23}, {0, std::conj(q23), q33}});
        const double bound = std::sqrt(q11 * q33);
        f.free = {{0, 2, bound}};
        double grid_best = -INFINITY;
        for (int i = 0; i <= 20000; ++i) {
            const double t = -bound + 2 * bound * i / 20000.0;
            const std::vector<double> vals{t};
            grid_best = std::max(grid_best,
                                 Eigen::SelfAdjointEigenSolver<CMatrix>(f.assemble(vals)).eigenvalues().minCoeff());
        }
        double best = 0;
        auto q = complete_q_family(f, 1e-9, {}, &best);
        if (grid_best > 1e-6) {
            REQUIRE(q);
            CHECK(is_psd(*q, 1e-9).psd);
            ++feasible;
        } else if (grid_best < -1e-6) {
            CHECK_FALSE(q);
            // Without a completion the search reports the best it saw.
            CHECK(best >= grid_best - 1e-6);
            ++infeasible;
        }
    }
    CHECK(feasible > 5);
    CHECK(infeasible > 5);
}

TEST_CASE("synthesize_cooling_map examples")
{
    Rng rng(2);
    const auto rho = random_state(3, rng);
    auto id = decide_transition(rho, rho);
    const CoolingMap m = synthesize_cooling_map(*id.certificate);
    CHECK(m.n_diag == 1);
    CHECK(oracle::max_abs(m.mu) == 0.0);
    const auto ops = kraus_of(m).operators;
    REQUIRE(ops.size() == 1);
    const Complex phase = ops[0](0, 0);
    CHECK(oracle::max_abs(ops[0] - phase * CMatrix::Identity(3, 3)) < 1e-12);
    CHECK(std::abs(phase) == doctest::Approx(1.0));

    auto cool = decide_transition(tu::plus_state(), tu::ground(2));
    const CoolingMap c = synthesize_cooling_map(*cool.certificate);
    CHECK(std::abs(c.mu(0, 1)) == doctest::Approx(1.0));
    CHECK(c.lambda[1].norm() < 1e-12);
    const auto out = apply_channel(kraus_of(c), tu::plus_state());
    CHECK(oracle::max_abs(out.matrix() - tu::ground(2).matrix()) < 1e-12);

    for (int trial = 0; trial < 20; ++trial) {
        const auto r4 = random_state(4, rng);
        const auto s4 = feasible_target(r4, rng);
        auto dec = decide_transition(r4, s4);
        REQUIRE(dec.feasible);
        const auto back = apply_channel(kraus_of(synthesize_cooling_map(*dec.certificate)), r4);
        CHECK(oracle::max_abs(back.matrix() - s4.matrix()) <= 1e-9);
    }
}

TEST_CASE("synthesize_cooling_map rejects inconsistent certificates")
{
    TransitionCertificate bad{UTCSMatrix::from(RMatrix::Identity(2, 2)), HermitianMatrix::from(mat({{1, 2}, {2, 1}})),
                              -1.0, {}};
    CHECK(tu::error_kind([&] { synthesize_cooling_map(bad); }) == ErrorKind::CertificateInconsistent);
}

TEST_CASE("sufficiency round trip on perturbed feasible pairs")
{
    Rng rng(42);
    double worst = 0;
    for (int trial = 0; trial < 600; ++trial) {
        const std::size_t d = 2 + trial % 3;
        const auto rho = random_state(d, rng);
        const auto sigma = feasible_target(rho, rng);
        auto dec = decide_transition(rho, sigma);
        REQUIRE(dec.feasible);
        const auto m = synthesize_cooling_map(*dec.certificate);
        CHECK(check_kraus_completeness(kraus_of(m), 1e-10).complete);
        worst = std::max(worst, oracle::max_abs(apply_channel(kraus_of(m), rho).matrix() - sigma.matrix()));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("kraus_of examples")
{
    CoolingMap id;
    id.dim = 2;
    id.n_diag = 1;
    id.lambda = {CVector::Ones(1), CVector::Ones(1)};
    id.mu = CMatrix::Zero(2, 2);
    auto k = kraus_of(id).operators;
    REQUIRE(k.size() == 1);
    CHECK(oracle::max_abs(k[0] - CMatrix::Identity(2, 2)) == 0.0);

    CoolingMap decay = id;
    decay.lambda = {CVector::Ones(1), CVector::Zero(1)};
    decay.mu(0, 1) = 1.0;
    k = kraus_of(decay).operators;
    REQUIRE(k.size() == 2);
    CHECK(oracle::max_abs(k[0] - mat({{1, 0}, {0, 0}})) == 0.0);
    CHECK(oracle::max_abs(k[1] - mat({{0, 1}, {0, 0}})) == 0.0);

    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto m = random_cooling_map(2 + i % 4, 1 + i % 2, rng);
        CHECK(check_kraus_completeness(kraus_of(m), 1e-9).complete);
    }

    CoolingMap broken = decay;
    broken.mu(0, 1) = 0.5;
    CHECK(tu::error_kind([&] { validate_cooling_map(broken); }) == ErrorKind::CompletenessDefect);
}

TEST_CASE("max_coherent_target examples")
{
    Rng rng(5);
    const auto rho = random_state(3, rng);
    const auto same = max_coherent_target(rho, ProbabilityVector::from(RVector(rho.diagonal())));
    CHECK(oracle::max_abs(same.matrix() - rho.matrix()) < 1e-12);

    const auto s = max_coherent_target(tu::plus_state(), ProbabilityVector::from(std::vector<double>{0.7, 0.3}));
    CHECK(s(0, 1).real() == doctest::Approx(std::sqrt(0.6) * 0.5));
    CHECK(s(0, 1).real() == doctest::Approx(0.3873).epsilon(1e-4));

    const auto g = max_coherent_target(tu::plus_state(), ProbabilityVector::from(std::vector<double>{1, 0}));
    CHECK(oracle::max_abs(g.matrix() - tu::ground(2).matrix()) < 1e-15);

    CHECK(tu::error_kind([] {
              max_coherent_target(tu::plus_state(), ProbabilityVector::from(std::vector<double>{0.2, 0.8}));
          }) == ErrorKind::NotUTMajorized);

    // The target's Q has rank one.
    const auto t = max_coherent_target(rho, ProbabilityVector::from(RVector(random_utcs(3, rng) * rho.diagonal())));
    const CMatrix q = fixed_q(build_q(rho, t)).matrix();
    const auto w = Eigen::SelfAdjointEigenSolver<CMatrix>(q).eigenvalues();
    CHECK(std::abs(w(0)) < 1e-9);
    CHECK(std::abs(w(1)) < 1e-9);
}

TEST_CASE("max_coherent_target dominates sampled images")
{
    Rng rng(6);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 2 + trial % 3;
        const auto rho = random_state(d, rng);
        const auto m = random_cooling_map(d, 1 + trial % d, rng);
        const auto img = apply_channel(kraus_of(m), rho);
        const auto best = max_coherent_target(rho, ProbabilityVector::from(RVector(img.diagonal()), 1e-9));
        CHECK((img.matrix().cwiseAbs() - best.matrix().cwiseAbs()).maxCoeff() <= 1e-9);
    }
}

TEST_CASE("sampled maps: Q = q + D and diagonal maximality")
{
    Rng rng(8);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 2 + trial % 4;
        const auto rho = random_state(d, rng);
        const auto m = random_cooling_map(d, 1 + trial % d, rng);
        const auto sigma = apply_channel(kraus_of(m), rho);
        const CMatrix q = fixed_q(build_q(rho, sigma)).matrix();
        const CMatrix diff = q - m.gramian();
        CMatrix off = diff;
        off.diagonal().setZero();
        CHECK(oracle::max_abs(off) < 1e-9);
        CHECK(diff.diagonal().real().minCoeff() > -1e-12);

        // Any UTCS P' with P' u = v has P'_jj <= min(v_j / u_j, 1).
        const RMatrix p = m.induced_p();
        const RVector u = rho.diagonal(), v = p * u;
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
            CHECK(p(j, j) <= std::min(v(j) / u(j), 1.0) + 1e-12);
        }
    }
}

TEST_CASE("coherence_bound_check")
{
    Rng rng(9);
    const auto rho = random_state(3, rng);
    CoolingMap id;
    id.dim = 3;
    id.n_diag = 1;
    id.lambda = {CVector::Ones(1), CVector::Ones(1), CVector::Ones(1)};
    id.mu = CMatrix::Zero(3, 3);
    auto r = coherence_bound_check(id, rho);
    CHECK(r.holds);
    CHECK(r.max_gap < 1e-15);

    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t d = 2 + trial % 4;
        const auto state = random_state(d, rng);
        const auto rank_one = random_cooling_map(d, 1, rng);
        const auto rep1 = coherence_bound_check(rank_one, state);
        CHECK(rep1.holds);
        CHECK(rep1.max_gap <= 1e-10);
        CHECK(coherence_bound_check(random_cooling_map(d, d, rng), state).holds);
    }
}
