#include "gravoptics/errors.hpp"
#include "gravoptics/fock.hpp"

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"

#include <numeric>

using namespace gravoptics;
using doctest::Approx;

namespace
{

// Random normalized state supported on total occupation <= max_total, so that
// a few creations stay inside the truncation.
FockState random_state(oracle::Rng& rng, int modes, int max_total)
{
    auto basis = std::make_shared<const FockBasis>(modes);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis->dimension());
    for (std::size_t i = 0; i < basis->dimension(); ++i)
    {
        const auto& occ = basis->occupation(i);
        if (std::accumulate(occ.begin(), occ.end(), 0) <= max_total)
            amps(i) = cplx(rng.normal(), rng.normal());
    }
    return FockState(basis, amps).normalized();
}

double distance(const FockState& a, const FockState& b) { return (a.amplitudes() - b.amplitudes()).norm(); }

} // namespace

TEST_CASE("ladder operators on number states")
{
    const FockState vac = FockState::vacuum(2);
    const FockState one = apply_creation(vac, 0);
    CHECK(one.amplitude({1, 0}) == cplx(1.0));
    const FockState two = apply_creation(one, 0);
    CHECK(two.amplitude({2, 0}).real() == Approx(std::sqrt(2.0)));
    CHECK(apply_annihilation(two, 0).amplitude({1, 0}).real() == Approx(2.0));
    CHECK(apply_annihilation(vac, 1).norm() == 0.0);
    const FockState mixed = apply_creation(apply_creation(vac, 1), 0);
    CHECK(mixed.amplitude({1, 1}) == cplx(1.0));
    CHECK_THROWS_AS(apply_creation(vac, 2), std::out_of_range);
}

TEST_CASE("truncation overflow is reported")
{
    FockState s = FockState::vacuum(1, 2, 2);
    s = apply_creation(apply_creation(s, 0), 0);
    CHECK_THROWS_AS(apply_creation(s, 0), TruncationOverflow);
}

TEST_CASE("canonical commutators on random states")
{
    oracle::Rng rng(41);
    for (int trial = 0; trial < 20; ++trial)
    {
        const int modes = rng.integer(2, 3);
        const FockState psi = random_state(rng, modes, 2);
        for (int i = 0; i < modes; ++i)
            for (int j = 0; j < modes; ++j)
            {
                const FockState lhs = apply_annihilation(apply_creation(psi, j), i) -
                                      apply_creation(apply_annihilation(psi, i), j);
                const FockState expected = psi * cplx(i == j ? 1.0 : 0.0);
                CHECK(distance(lhs, expected) < 1e-13);
                const FockState aa = apply_annihilation(apply_annihilation(psi, j), i) -
                                     apply_annihilation(apply_annihilation(psi, i), j);
                CHECK(aa.norm() < 1e-13);
                const FockState cc = apply_creation(apply_creation(psi, j), i) - apply_creation(apply_creation(psi, i), j);
                CHECK(cc.norm() < 1e-13);
            }
    }
}

TEST_CASE("one-particle density matrix is Hermitian PSD with trace <N>")
{
    oracle::Rng rng(42);
    for (int trial = 0; trial < 100; ++trial)
    {
        const int modes = rng.integer(1, 3);
        const FockState psi = random_state(rng, modes, 4);
        const auto rho = one_particle_rho(psi);
        CHECK((rho.matrix() - rho.matrix().adjoint()).norm() < 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        double n = 0.0;
        for (std::size_t i = 0; i < psi.basis().dimension(); ++i)
        {
            const auto& occ = psi.basis().occupation(i);
            n += std::norm(psi.amplitudes()(i)) * std::accumulate(occ.begin(), occ.end(), 0);
        }
        CHECK(rho.trace() == Approx(n).epsilon(1e-12));
    }
}

TEST_CASE("mode phase rotation preserves the norm and rotates coherences")
{
    oracle::Rng rng(43);
    for (int trial = 0; trial < 20; ++trial)
    {
        const FockState psi = random_state(rng, 2, 4);
        const double phase = rng.uniform(-3, 3);
        const FockState rotated = apply_mode_phase(psi, 0, phase);
        CHECK(rotated.norm() == Approx(1.0).epsilon(1e-14));
        const auto before = one_particle_rho(psi);
        const auto after = one_particle_rho(rotated);
        CHECK(std::abs(after.expect_adag_a(1, 0) - std::polar(1.0, phase) * before.expect_adag_a(1, 0)) < 1e-13);
        CHECK(after(1, 1).real() == Approx(before(1, 1).real()).epsilon(1e-13));
    }
}

TEST_CASE("density matrix validation")
{
    Eigen::MatrixXcd bad(2, 2);
    bad << 1.0, 0.5, 0.0, 0.0;
    CHECK_THROWS_AS(OneParticleDensityMatrix{bad}, std::invalid_argument);
    bad << 0.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(OneParticleDensityMatrix{bad}, std::invalid_argument);
    CHECK_THROWS_AS(OneParticleDensityMatrix{Eigen::MatrixXcd::Zero(2, 3)}, DimensionMismatch);
}

TEST_CASE("two-photon interference state")
{
    SUBCASE("c = 0 has no coherence between the ports")
    {
        const auto rho = one_particle_rho(build_hom_state(0.0, 0.0));
        CHECK(rho.expect_adag_a(0, 0).real() == Approx(1.0));
        CHECK(rho.expect_adag_a(1, 1).real() == Approx(1.0));
        CHECK(std::abs(rho.expect_adag_a(0, 1)) < 1e-15);
    }
    SUBCASE("coherence follows 2 c cos(chi) / (1 + c^2) over a grid")
    {
        for (double c : {0.25, 0.5, 1.0, 2.0, 4.0})
            for (double chi : {0.0, 0.7, 1.5707963267948966, 2.5, 3.141592653589793})
            {
                const FockState psi = build_hom_state(c, chi);
                CHECK(psi.norm() == Approx(1.0).epsilon(1e-14));
                const auto rho = one_particle_rho(psi);
                CHECK(rho.trace() == Approx(2.0).epsilon(1e-14));
                const cplx cross = rho.expect_adag_a(0, 1);
                CHECK(cross.real() == Approx(2 * c * std::cos(chi) / (1 + c * c)).scale(1.0).epsilon(1e-14));
                CHECK(std::abs(cross.imag()) < 1e-15);
            }
    }
    CHECK_THROWS_AS(build_hom_state(-1.0, 0.0), std::invalid_argument);
}
