#include "gravoptics/detection.hpp"
#include "gravoptics/errors.hpp"
#include "gravoptics/interferometry.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <numbers>

using namespace gravoptics;
using doctest::Approx;

namespace
{

FieldMode plane_wave(const Vec3& k)
{
    const double norm = std::pow(2 * std::numbers::pi, -1.5);
    return {k.norm(), [k, norm](const Vec3& x) {
                Eigen::VectorXcd v(1);
                v(0) = norm * std::polar(1.0, k.dot(x));
                return v;
            }};
}

FieldMode constant_mode(double omega, cplx value)
{
    return {omega, [value](const Vec3&) {
                Eigen::VectorXcd v(1);
                v(0) = value;
                return v;
            }};
}

CompositeParticleSpec composite(std::vector<double> levels)
{
    CompositeParticleSpec cp;
    cp.m0 = 1e6;
    cp.levels = std::move(levels);
    cp.k = Vec3(1e3, 0, 0);
    return cp;
}

} // namespace

TEST_CASE("single-detector probability for number states")
{
    const std::vector<FieldMode> modes{plane_wave(Vec3(1, 0, 0)), plane_wave(Vec3(0, 2, 1))};
    const Vec3 x(0.3, -0.2, 1.0);
    CHECK(glauber_single(modes, OneParticleDensityMatrix::vacuum(2), 0.4, x) == 0.0);
    const double f2 = std::pow(2 * std::numbers::pi, -3.0);
    CHECK(glauber_single(modes, OneParticleDensityMatrix::single(2, 1), 0.4, x) == Approx(f2).epsilon(1e-14));
    CHECK_THROWS_AS(glauber_single(modes, OneParticleDensityMatrix::vacuum(3), 0.0, x), DimensionMismatch);
}

TEST_CASE("delta-kernel smearing reproduces the single-detector probability")
{
    oracle::Rng rng(61);
    for (int trial = 0; trial < 25; ++trial)
    {
        const int n = rng.integer(1, 4);
        std::vector<FieldMode> modes;
        for (int i = 0; i < n; ++i)
            modes.push_back(plane_wave(rng.uniform(0.2, 4.0) * rng.unit_vector()));
        const OneParticleDensityMatrix rho(rng.density_matrix(n));
        const Vec3 x(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        const double t = rng.uniform(-3, 3);
        const double g = glauber_single(modes, rho, t, x);
        CHECK(g >= -1e-16);
        CHECK(qtp_single(modes, rho, t, x, DeltaKernel{}) == Approx(g).epsilon(1e-13).scale(1e-15));
    }
}

TEST_CASE("Gaussian smearing of a plane wave multiplies by the kernel characteristic function")
{
    const Vec3 k(0.6, -0.3, 0.9);
    const std::vector<FieldMode> modes{plane_wave(k)};
    const auto rho = OneParticleDensityMatrix::single(1, 0);
    const double bare = glauber_single(modes, rho, 0.0, Vec3::Zero());
    for (double sigma : {0.1, 0.5, 1.0})
    {
        const double got = qtp_single(modes, rho, 0.0, Vec3::Zero(), GaussianKernel{sigma, sigma});
        const double expected = bare * std::exp(-0.5 * sigma * sigma * (k.squaredNorm() + k.squaredNorm()));
        CHECK(got == Approx(expected).epsilon(1e-7));
    }
    // smearing vanishes as the widths shrink
    double previous = 1.0;
    for (double sigma : {0.2, 0.1, 0.05})
    {
        const double err = std::abs(qtp_single(modes, rho, 0.0, Vec3::Zero(), GaussianKernel{sigma, sigma}) - bare);
        CHECK(err < previous);
        previous = err;
    }
}

TEST_CASE("kernel validation")
{
    CHECK_THROWS_AS(DetectorKernel(GaussianKernel{-1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(DetectorKernel(SampledKernel{}), std::invalid_argument);
    CHECK_THROWS_AS(DetectorKernel(SampledKernel{{{0.1, Vec3::Zero(), 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(DetectorKernel(SampledKernel{{{0.0, Vec3::Zero(), 0.9}}}), std::invalid_argument);
    CHECK_NOTHROW(DetectorKernel(SampledKernel{{{0.1, Vec3(0, 1, 0), 0.5}, {-0.1, Vec3(0, -1, 0), 0.5}}}));
}

TEST_CASE("detector modes behind a Mach-Zehnder reproduce the port probabilities")
{
    oracle::Rng rng(62);
    for (int trial = 0; trial < 20; ++trial)
    {
        const OneParticleDensityMatrix rho(rng.density_matrix(2));
        const double omega = 1.3, dl = rng.uniform(-3, 3);
        const Eigen::Matrix2cd u = mach_zehnder_transfer(omega * dl);
        const auto p = mach_zehnder_probabilities(dl, omega, rho);
        for (int j = 0; j < 2; ++j)
        {
            const std::vector<FieldMode> out{constant_mode(omega, u(j, 0)), constant_mode(omega, u(j, 1))};
            const double g = glauber_single(out, rho, 0.0, Vec3::Zero());
            CHECK(g == Approx(j == 0 ? p.p1 : p.p2).scale(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("flat-space Gaussian packet density")
{
    const double k0 = 50.0, sk = 2.0, x0 = -1.0;
    const auto packet = WavePacket1D::gaussian(k0, sk, x0);
    CHECK(packet.rho().trace().real() == Approx(1.0).epsilon(1e-13));
    const double peak = 2.0 * sk / std::sqrt(2 * std::numbers::pi);
    for (double t : {0.0, 1.0, 3.5})
        for (double x : {-1.0, 0.0, 0.3, 2.5, 3.0})
        {
            const double u = x - x0 - t;
            const double expected = 2.0 * sk / std::sqrt(2 * std::numbers::pi) * std::exp(-2.0 * sk * sk * u * u);
            // psi is cut off at 8 sigma_k, which leaves an absolute error far below the peak
            CHECK(std::abs(packet.flat_density(x, t) - expected) < 1e-7 * peak);
        }
    const auto coarse = WavePacket1D::gaussian(k0, sk, x0, 64);
    CHECK(coarse.flat_density(0.2, 0.5) == Approx(packet.flat_density(0.2, 0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(WavePacket1D::gaussian(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("time of arrival")
{
    const auto packet = WavePacket1D::gaussian(40.0, 1.5, 0.0);
    const double L = 20.0;
    std::vector<double> times;
    for (int i = 0; i <= 200; ++i)
        times.push_back(L - 2.0 + 0.02 * i);

    SUBCASE("flat space peaks at t = L")
    {
        const auto r = time_of_arrival_density(packet, PotentialField(Homogeneous{0.0}), L, times);
        CHECK(r.delta_x == 0.0);
        const auto peak = std::max_element(r.density.begin(), r.density.end()) - r.density.begin();
        CHECK(times[peak] == Approx(L).epsilon(1e-12));
        CHECK(r.density == r.flat_density);
    }
    SUBCASE("homogeneous field delays the density by g L^2")
    {
        const double g = 1e-4;
        const auto r = time_of_arrival_density(packet, PotentialField(Homogeneous{g}), L, times);
        CHECK(r.delta_x == Approx(g * L * L).epsilon(1e-12));
        for (std::size_t i = 0; i < times.size(); i += 25)
            CHECK(r.density[i] == Approx(packet.flat_density(L, times[i] - g * L * L)).epsilon(1e-10).scale(1e-12));
    }
    SUBCASE("point-mass field with an offset source")
    {
        const PotentialField f(PointMass{1e-3, Vec3(0, 5, 0)});
        const Vec3 source(-3, 0, 0);
        const auto r = time_of_arrival_density(packet, f, L, times, {}, source, Vec3::UnitX());
        const double expected_dx =
            -2.0 * line_integral_phi(f, PathPolyline::segment(source, source + L * Vec3::UnitX()));
        CHECK(r.delta_x == Approx(expected_dx).epsilon(1e-12));
        CHECK(r.delta_x > 0.0);
        CHECK(r.density[40] == Approx(packet.flat_density(L + r.delta_x, times[40])).epsilon(1e-14));
    }
    CHECK_THROWS_AS(time_of_arrival_density(packet, PotentialField(Homogeneous{0.0}), -1.0, times),
                    std::invalid_argument);
}

TEST_CASE("internal-level detection")
{
    const PotentialField f(PointMass{1e-4, Vec3(0, 3, 0)});
    const auto path = PathPolyline::segment(Vec3(-2, 0, 0), Vec3(5, 0, 0));
    const auto cp = composite({0.0, 20.0, 35.0});
    const double amp2 = std::pow(wkb_amplitude(cp.ground(), f, path.end()), 2);

    SUBCASE("diagonal states do not oscillate")
    {
        InternalState s{Eigen::Vector3cd(0.2, 0.5, 0.3).asDiagonal().toDenseMatrix(), 0.0};
        for (double t : {0.0, 0.4, 7.0})
            CHECK(internal_dof_detection(s, cp, f, path, t) == Approx(amp2).epsilon(1e-14));
    }
    SUBCASE("degenerate levels give a constant")
    {
        const auto flat_levels = composite({0.0, 0.0});
        Eigen::Matrix2cd rho;
        rho << 0.5, 0.5, 0.5, 0.5;
        const InternalState s{rho, 0.0};
        const double p0 = internal_dof_detection(s, flat_levels, f, path, 0.0);
        for (double t : {0.3, 1.1, 9.0})
            CHECK(internal_dof_detection(s, flat_levels, f, path, t) == Approx(p0).epsilon(1e-14));
    }
    SUBCASE("phase at t = 0 is the difference of internal phase shifts")
    {
        const double expected = internal_phase_shift(cp, 2, f, path) - internal_phase_shift(cp, 0, f, path);
        CHECK(internal_oscillation_phase(cp, 2, 0, f, path, 0.0) == Approx(expected).epsilon(1e-12));
        CHECK(internal_oscillation_phase(cp, 1, 1, f, path, 3.0) == 0.0);
        CHECK(internal_oscillation_phase(cp, 1, 0, f, path, 0.0, 0.25) ==
              Approx(internal_oscillation_phase(cp, 1, 0, f, path, 0.0) + 0.25 * 20.0).epsilon(1e-12));
    }
    SUBCASE("probability is 2 pi periodic in the oscillation phase")
    {
        const auto two = composite({0.0, 20.0});
        Eigen::Matrix2cd rho;
        rho << 0.5, 0.5, 0.5, 0.5;
        const double s = 2 * std::numbers::pi / 20.0;
        const double p = internal_dof_detection(InternalState{rho, 0.0}, two, f, path, 0.7);
        CHECK(internal_dof_detection(InternalState{rho, s}, two, f, path, 0.7) == Approx(p).epsilon(1e-9));
    }
    SUBCASE("probabilities are non-negative for random states")
    {
        oracle::Rng rng(63);
        for (int trial = 0; trial < 30; ++trial)
        {
            const InternalState s{rng.density_matrix(3), rng.uniform(-1, 1)};
            CHECK(internal_dof_detection(s, cp, f, path, rng.uniform(0, 10)) >= -1e-15);
        }
    }
    SUBCASE("invalid states are rejected")
    {
        CHECK_THROWS_AS((InternalState{Eigen::Matrix2cd::Identity(), 0.0}.validate(3)), DimensionMismatch);
        CHECK_THROWS_AS((InternalState{Eigen::Matrix3cd::Identity(), 0.0}.validate(3)), std::invalid_argument);
    }
}
