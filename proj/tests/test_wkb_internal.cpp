#include "gravoptics/errors.hpp"
#include "gravoptics/wkb_internal.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace gravoptics;
using doctest::Approx;

namespace
{

ParticleSpec along_x(double k, double m = 0.0) { return ParticleSpec::from_wavevector(m, Vec3(k, 0, 0)); }

CompositeParticleSpec composite(double m0, std::vector<double> levels, double v, const Vec3& dir = Vec3::UnitX())
{
    CompositeParticleSpec cp;
    cp.m0 = m0;
    cp.levels = std::move(levels);
    cp.k = m0 * v * dir.normalized();
    return cp;
}

} // namespace

TEST_CASE("flat-space WKB phase is |k| times the length")
{
    const auto path = PathPolyline({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(2, 3, 0)});
    CHECK(wkb_phase(along_x(5.0), PotentialField(Homogeneous{0.0}), path) == Approx(25.0).epsilon(1e-14));
}

TEST_CASE("homogeneous-field eikonal closed form")
{
    const double g = 1e-4, h = 50.0, omega = 1e3;
    const PotentialField f(Homogeneous{g});
    const auto path = PathPolyline::segment(Vec3::Zero(), Vec3(h, 0, 0));
    const double expected = omega / (6.0 * g) * (std::pow(1.0 + 4.0 * g * h, 1.5) - 1.0);
    CHECK(wkb_phase(along_x(omega), f, path) == Approx(expected).epsilon(1e-12));
}

TEST_CASE("WKB agrees with the perturbative phase in the overlap regime")
{
    oracle::Rng rng(31);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Vec3 centre(rng.uniform(-1, 1), rng.uniform(2, 4), rng.uniform(-1, 1));
        const PotentialField f(PointMass{rng.uniform(1e-7, 1e-6), centre});
        const Vec3 dir = rng.unit_vector();
        const Vec3 a(rng.uniform(-1, 1), rng.uniform(-1, 0), rng.uniform(-1, 1));
        const double len = rng.uniform(1, 5);
        const auto path = PathPolyline::segment(a, a + len * dir);
        const auto p = ParticleSpec::from_wavevector(rng.uniform(0, 1e5), 1e6 * dir);
        REQUIRE(perturbative_parameter(p, f.value(path.end())) <= 1e-6);
        const double s = wkb_phase(p, f, path);
        CHECK(s == Approx(p.k_norm() * len + phase_correction_sigma(p, f, path)).epsilon(1e-6));
    }
}

TEST_CASE("WKB amplitude")
{
    const PotentialField flat(Homogeneous{0.0});
    CHECK(wkb_amplitude(along_x(1.0), flat, Vec3(1, 2, 3)) == 1.0);
    // coupling * Phi = -0.01
    const PotentialField f(Homogeneous{0.01});
    CHECK(wkb_amplitude(along_x(1.0), f, Vec3(1, 0, 0)) == Approx(std::pow(1.04, -0.25)).epsilon(1e-14));
    CHECK(std::pow(1.04, -0.25) == Approx(0.99024).epsilon(1e-5));
    const PotentialField repulsive(Homogeneous{-0.1});
    CHECK(wkb_amplitude(along_x(1.0), repulsive, Vec3(3, 0, 0)) == 0.0);
}

TEST_CASE("amplitude-flux product is constant along the path")
{
    const PotentialField f(PointMass{1e-3, Vec3(0, -0.5, 0)});
    const auto p = along_x(1e5, 3e4);
    auto phase_to = [&](double s) { return wkb_phase(p, f, PathPolyline::segment(Vec3(-2, 0, 0), Vec3(s, 0, 0))); };
    double first = 0.0;
    for (double s : {-1.0, 0.0, 1.5, 3.0})
    {
        const double a = wkb_amplitude(p, f, Vec3(s, 0, 0));
        const double flux = a * a * oracle::central_first(phase_to, s, 1e-3);
        if (first == 0.0)
            first = flux;
        CHECK(flux == Approx(first).epsilon(1e-7));
    }
}

TEST_CASE("turning point is located and reported")
{
    const PotentialField f(Homogeneous{-0.1}); // Phi = 0.1 x, forbidden beyond x = 2.5
    try
    {
        wkb_phase(along_x(1e5), f, PathPolyline::segment(Vec3::Zero(), Vec3(5, 0, 0)));
        FAIL("expected ClassicallyForbidden");
    }
    catch (const ClassicallyForbidden& e)
    {
        CHECK(e.turning_point() == Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("short wavelength requirement")
{
    const PotentialField f(PointMass{1e-3});
    const auto path = PathPolyline::segment(Vec3(1, 1, 0), Vec3(3, 1, 0));
    CHECK_THROWS_AS(wkb_phase(along_x(0.1), f, path), WkbValidityViolation);
    CHECK_NOTHROW(wkb_phase(along_x(1e5), f, path));
    CHECK(wkb_variation_length(along_x(1.0), PotentialField(Homogeneous{0.0}), path) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("tunneling energy spread")
{
    // mu = 1, GM1 / R^3 = 1
    CHECK(tunneling_energy_spread(TwoBody{1.0, 1.0, 1.0}) == Approx(4.0));
    CHECK(barrier_curvature_energy(TwoBody{1.0, 1.0, 1.0}) == Approx(4.0));
    const TwoBody tb{3.0, 0.5, 2.0};
    const TwoBody far{3.0, 0.5, 16.0};
    CHECK(tunneling_energy_spread(tb) / tunneling_energy_spread(far) == Approx(std::pow(8.0, 1.5)));
}

TEST_CASE("composite particle validity")
{
    CHECK_NOTHROW(composite(1e6, {0.0, 10.0}, 1e-3).validate());
    CHECK_THROWS_AS(composite(1e6, {0.0, 2e3}, 1e-3).validate(), ValidityViolation);
    CHECK_THROWS_AS(composite(1e6, {0.0, 1e2}, 1e-6).validate(), ValidityViolation);
    CHECK_THROWS_AS(composite(1e6, {0.5, 1.0}, 1e-3).validate(), std::invalid_argument);
}

TEST_CASE("internal-level phase shift")
{
    const double g = 1e-6, L = 4.0, eps = 2.0, v = 1e-3;
    const PotentialField f(Homogeneous{g});
    const auto path = PathPolyline::segment(Vec3::Zero(), Vec3(L, 0, 0));
    const auto cp = composite(1e5, {0.0, eps}, v);
    CHECK(internal_phase_shift(cp, 0, f, path) == 0.0);
    CHECK(internal_phase_shift(cp, 1, f, path) == Approx(eps * g * L * L / v).epsilon(1e-13));
    const auto fast = composite(1e5, {0.0, eps}, 2 * v);
    CHECK(internal_phase_shift(fast, 1, f, path) == Approx(0.5 * internal_phase_shift(cp, 1, f, path)));
    // same velocity, different mass
    const auto heavy = composite(7e5, {0.0, eps}, v);
    CHECK(internal_phase_shift(heavy, 1, f, path) == Approx(internal_phase_shift(cp, 1, f, path)).epsilon(1e-14));
}

TEST_CASE("relative phase u")
{
    const PotentialField f(PointMass{1e-4, Vec3(0, 3, 0)});
    const auto path = PathPolyline::segment(Vec3(-2, 0, 0), Vec3(5, 0, 0));
    const auto cp = composite(1e6, {0.0, 50.0}, 1e-4);
    const auto r = relative_phase_u(cp, 1, f, path);
    CHECK(r.u == Approx(r.delta_phi / (cp.k_norm() * path.length())).epsilon(1e-14));
    CHECK(r.u == Approx(-2.0 * 50.0 * 1e6 * r.mean_phi / (cp.k_norm() * cp.k_norm())).epsilon(1e-12));
    CHECK(relative_phase_u(cp, 1, PotentialField(Homogeneous{0.0}), path).u == 0.0);
}

TEST_CASE("internal-level WKB modes")
{
    const PotentialField f(PointMass{1e-4, Vec3(0, 3, 0)});
    const auto path = PathPolyline::segment(Vec3(-2, 0, 0), Vec3(5, 0, 0));
    const auto cp = composite(1e8, {0.0, 10.0, 30.0}, 1e-3);
    const auto ground = wkb_internal_mode(cp, 0, f, path);
    const auto plain = wkb_mode(cp.ground(), f, path);
    CHECK(ground.phase == Approx(plain.phase).epsilon(1e-15));
    CHECK(ground.amplitude == plain.amplitude);
    const double d12 = wkb_internal_mode(cp, 1, f, path).phase - wkb_internal_mode(cp, 2, f, path).phase;
    CHECK(d12 == Approx(internal_phase_shift(cp, 1, f, path) - internal_phase_shift(cp, 2, f, path)).epsilon(1e-6));
    const PotentialField flat(Homogeneous{0.0});
    CHECK(wkb_internal_mode(cp, 2, flat, path).amplitude == 1.0);
    CHECK(wkb_internal_mode(cp, 2, flat, path).phase == Approx(cp.k.dot(path.start()) + cp.k_norm() * 7.0));
}
