#include "gravoptics/errors.hpp"
#include "gravoptics/scalar_modes.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <numbers>

using namespace gravoptics;
using doctest::Approx;

namespace
{

const double kNorm = std::pow(2.0 * std::numbers::pi, -1.5);

ParticleSpec along_x(double k, double m = 0.0) { return ParticleSpec::from_wavevector(m, Vec3(k, 0, 0)); }

} // namespace

TEST_CASE("linearized q^2")
{
    CHECK(effective_q_squared(along_x(1.0), -0.01) == Approx(1.04));
    CHECK(effective_q_squared(along_x(3.0), 0.0) == Approx(9.0));
    const auto heavy = along_x(0.1, 10.0);
    CHECK(effective_q_squared(heavy, -1e-3) == Approx(0.21004).epsilon(1e-12));
    CHECK_FALSE(perturbative_guard_ok(heavy, -1e-3));
    CHECK(perturbative_parameter(heavy, -1e-3) == Approx(5.001));
}

TEST_CASE("exact q^2 reduces to the linear form at first order")
{
    const auto p = along_x(2.0, 1.5);
    for (double phi : {-1e-4, -1e-5, -1e-6})
    {
        const double diff = effective_q_squared_exact(p, phi) - effective_q_squared(p, phi);
        CHECK(std::abs(diff) < 20.0 * phi * phi * p.omega * p.omega);
    }
}

TEST_CASE("on-shell validation")
{
    ParticleSpec p = along_x(3.0, 4.0);
    CHECK(p.omega == Approx(5.0));
    CHECK_NOTHROW(p.validate());
    p.omega = 4.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("amplitude correction alpha")
{
    CHECK(amplitude_correction_alpha(along_x(1.0), -1e-9) == Approx(-1e-9).epsilon(1e-15));
    // m^2 / 2k^2 = 1
    const auto p = along_x(1.0, std::sqrt(2.0));
    CHECK(amplitude_correction_alpha(p, -1e-9, ModeVariant::Standard) == Approx(-2e-9).epsilon(1e-14));
    CHECK(std::abs(amplitude_correction_alpha(p, -1e-9, ModeVariant::Orthonormal)) < 1e-24);
    CHECK(amplitude_correction_alpha(p, 0.0) == 0.0);
    CHECK_THROWS_AS(amplitude_correction_alpha(along_x(1.0), -0.2), PerturbativeGuardViolation);
}

TEST_CASE("homogeneous-field phase correction")
{
    const double g = 2e-6, h = 7.0, omega = 30.0;
    const PotentialField f(Homogeneous{g});
    const auto path = PathPolyline::segment(Vec3::Zero(), Vec3(h, 0, 0));
    CHECK(phase_correction_sigma(along_x(omega), f, path) == Approx(omega * g * h * h).epsilon(1e-12));
    CHECK(optical_shift_deltax(along_x(omega), f, path) == Approx(g * h * h).epsilon(1e-12));
    CHECK(phase_correction_sigma(along_x(omega), PotentialField(Homogeneous{0.0}), path) == 0.0);
}

TEST_CASE("radial phase correction in a point-mass field")
{
    const double gm = 1e-3, r1 = 2.0, r2 = 9.0, k = 50.0;
    const PotentialField f(PointMass{gm});
    const auto path = PathPolyline::segment(Vec3(r1, 0, 0), Vec3(r2, 0, 0));
    CHECK(phase_correction_sigma(along_x(k), f, path) == Approx(2 * k * gm * std::log(r2 / r1)).epsilon(1e-12));
    const double dx = optical_shift_deltax(along_x(k), f, path);
    CHECK(dx == Approx(2 * gm * std::log(r2 / r1)).epsilon(1e-12));
    CHECK(dx > 0.0);
}

TEST_CASE("massless delta x equals -2 integral of Phi")
{
    oracle::Rng rng(21);
    const PotentialField f(PointMass{3e-3, Vec3(0, -1, 0)});
    for (int i = 0; i < 10; ++i)
    {
        const Vec3 a(rng.uniform(-3, 3), rng.uniform(0, 3), rng.uniform(-3, 3));
        const Vec3 dir = rng.unit_vector();
        const auto path = PathPolyline::segment(a, a + rng.uniform(0.5, 4) * dir);
        const auto p = ParticleSpec::massless(rng.uniform(1, 100) * dir);
        CHECK(optical_shift_deltax(p, f, path) == Approx(-2.0 * line_integral_phi(f, path)).epsilon(1e-14));
    }
}

TEST_CASE("phase additivity over concatenated aligned paths")
{
    const PotentialField f(PointMass{1e-3, Vec3(0, 1, 0)});
    const auto p = along_x(40.0, 5.0);
    const auto a = PathPolyline::segment(Vec3(-3, 0, 0), Vec3(0.5, 0, 0));
    const auto b = PathPolyline::segment(Vec3(0.5, 0, 0), Vec3(4, 0, 0));
    CHECK(phase_correction_sigma(p, f, a.concatenated(b)) ==
          Approx(phase_correction_sigma(p, f, a) + phase_correction_sigma(p, f, b)).epsilon(1e-12));
}

TEST_CASE("massless limit is continuous")
{
    const PotentialField f(Homogeneous{1e-5});
    const auto path = PathPolyline::segment(Vec3(0, 0, 0), Vec3(3, 0, 0));
    const double k = 10.0;
    CHECK(phase_correction_sigma(along_x(k, 1e-8 * k), f, path) ==
          Approx(phase_correction_sigma(along_x(k), f, path)).epsilon(1e-15));
}

TEST_CASE("misaligned path is rejected")
{
    const PotentialField f(Homogeneous{1e-5});
    const auto path = PathPolyline::segment(Vec3(0, 0, 0), Vec3(3, 0.01, 0));
    CHECK_THROWS_AS(phase_correction_sigma(along_x(1.0), f, path), PathNotAligned);
}

TEST_CASE("perturbative guard along a path")
{
    const PotentialField f(PointMass{0.05});
    const auto path = PathPolyline::segment(Vec3(0.2, 0.3, 0), Vec3(2, 0.3, 0));
    CHECK_THROWS_AS(check_perturbative_guard(along_x(1.0), f, path), PerturbativeGuardViolation);
    CHECK_NOTHROW(check_perturbative_guard(along_x(1.0), PotentialField(PointMass{1e-3}), path));
}

TEST_CASE("refractive index")
{
    const auto earth = refractive_index(-6.96e-10);
    CHECK(earth.n - 1.0 == Approx(1.392e-9).epsilon(1e-6));
    CHECK(earth.weak_field);
    CHECK(refractive_index(0.0).n == 1.0);
    const auto strong = refractive_index(-0.25);
    CHECK(strong.n == Approx(1.5));
    CHECK_FALSE(strong.weak_field);
    CHECK_THROWS_AS(refractive_index(1e-6), PositivePotential);
}

TEST_CASE("flat-space mode is a plane wave")
{
    const auto p = ParticleSpec::massless(Vec3(1.0, 2.0, -0.5));
    const PotentialField flat(Homogeneous{0.0});
    const Vec3 x(0.3, 1.1, 2.0);
    const auto m = mode_value_at(p, flat, Vec3::Zero(), x);
    const auto expected = kNorm * std::exp(std::complex<double>(0.0, p.k.dot(x)));
    CHECK(std::abs(m.value() - expected) < 1e-15);
}

TEST_CASE("amplitude and phase agree with a 1-D shooting solution to O(Phi^2)")
{
    // f'' + q^2 f = 0 with q^2 = omega^2 exp(-4 Phi), Phi = -g x, started as a right-moving wave at x = 0
    const double g = 1e-3, h = 5.0, omega = 200.0;
    const PotentialField field(Homogeneous{g});
    auto q2 = [&](double x) { return omega * omega * std::exp(4.0 * g * x); };
    const auto [f, df] = oracle::rk4_helmholtz(q2, 0.0, h, 1.0, std::complex<double>(0.0, omega), 400000);
    const auto m = mode_value(along_x(omega), field, PathPolyline::segment(Vec3::Zero(), Vec3(h, 0, 0)));
    const double phi_h = -g * h;
    CHECK(std::abs(std::abs(f) - m.amplitude) < 2.0 * phi_h * phi_h);
    // second-order phase: omega * integral of 2 Phi^2
    const double second_order = omega * 2.0 * g * g * h * h * h / 3.0;
    const double phase_num = std::arg(f * std::exp(std::complex<double>(0.0, -m.phase)));
    CHECK(std::abs(phase_num) < 2.0 * second_order);
}

TEST_CASE("mode value at a point behind the reference plane")
{
    const PotentialField f(PointMass{1e-3, Vec3(0, 2, 0)});
    const auto p = along_x(20.0);
    const auto ahead = mode_value_at(p, f, Vec3(0, 0, 0), Vec3(1.5, 0, 0));
    const auto behind = mode_value_at(p, f, Vec3(1.5, 0, 0), Vec3(0, 0, 0));
    CHECK(ahead.sigma == Approx(-behind.sigma).epsilon(1e-13));
}

TEST_CASE("Wightman function")
{
    const Vec3 k(0.5, -1.0, 2.0);
    const FieldMode mode{k.norm(), [k](const Vec3& x) {
                             Eigen::VectorXcd v(1);
                             v(0) = kNorm * std::exp(std::complex<double>(0.0, k.dot(x)));
                             return v;
                         }};
    const std::vector<FieldMode> one{mode};
    const Vec3 x(0.1, 0.2, 0.3), xp(-1, 0.5, 2);

    SUBCASE("vacuum keeps only the ordering term")
    {
        const auto vac = OneParticleDensityMatrix::vacuum(1);
        const auto expected = mode.profile(x)(0) * std::conj(mode.profile(xp)(0)) *
                              std::exp(std::complex<double>(0.0, -mode.omega * (0.7 - 0.2)));
        CHECK(std::abs(wightman_function(one, vac, 0.7, x, 0.2, xp) - expected) < 1e-16);
        CHECK(wightman_function(one, vac, 0.4, x, 0.4, x).real() == Approx(std::pow(2 * std::numbers::pi, -3.0)));
    }

    SUBCASE("Hermiticity over random density matrices")
    {
        oracle::Rng rng(22);
        for (int trial = 0; trial < 20; ++trial)
        {
            const int n = rng.integer(1, 4);
            std::vector<FieldMode> modes;
            for (int i = 0; i < n; ++i)
            {
                const Vec3 ki = rng.uniform(0.5, 3.0) * rng.unit_vector();
                modes.push_back({ki.norm(), [ki](const Vec3& y) {
                                     Eigen::VectorXcd v(1);
                                     v(0) = kNorm * std::exp(std::complex<double>(0.0, ki.dot(y)));
                                     return v;
                                 }});
            }
            const OneParticleDensityMatrix rho(rng.density_matrix(n));
            const double t = rng.uniform(-2, 2), tp = rng.uniform(-2, 2);
            const auto a = wightman_function(modes, rho, t, x, tp, xp);
            const auto b = wightman_function(modes, rho, tp, xp, t, x);
            CHECK(std::abs(a - std::conj(b)) < 1e-15);
        }
    }
}
