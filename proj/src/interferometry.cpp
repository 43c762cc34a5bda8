#include "gravoptics/interferometry.hpp"

#include "gravoptics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gravoptics
{

using namespace std::complex_literals;

Eigen::Matrix2cd beam_splitter_matrix()
{
    Eigen::Matrix2cd t;
    t << 1.0, 1i, 1i, 1.0;
    return t / std::sqrt(2.0);
}

InterferometerGeometry::InterferometerGeometry(PathPolyline arm1, PathPolyline arm2, Vec3 detector1,
                                               Vec3 detector2)
    : arm1_(std::move(arm1)), arm2_(std::move(arm2)), detector1_(detector1), detector2_(detector2)
{
    if (arm1_.closed() || arm2_.closed())
        throw std::invalid_argument("interferometer arms must be open paths");
    const double scale = std::max({1.0, arm1_.length(), arm2_.length()});
    if ((arm1_.start() - arm2_.start()).norm() > 1e-12 * scale ||
        (arm1_.end() - arm2_.end()).norm() > 1e-12 * scale)
        throw std::invalid_argument("interferometer arms must share both endpoints");
}

InterferometerGeometry InterferometerGeometry::rectangle(double h, double d, const Vec3& origin)
{
    const Vec3 ex = Vec3::UnitX(), ey = Vec3::UnitY();
    PathPolyline arm1({origin, origin + d * ey, origin + h * ex + d * ey});
    PathPolyline arm2({origin, origin + h * ex, origin + h * ex + d * ey});
    const Vec3 far = origin + h * ex + d * ey;
    return InterferometerGeometry(std::move(arm1), std::move(arm2), far, far);
}

PathPolyline InterferometerGeometry::loop() const
{
    std::vector<Vec3> v = arm2_.vertices();
    const auto& back = arm1_.vertices();
    // arm 1 backward, without repeating the shared endpoints
    v.insert(v.end(), back.rbegin() + 1, back.rend() - 1);
    return PathPolyline(std::move(v), true);
}

OpticalPathDifference optical_path_difference(const InterferometerGeometry& geom, const PotentialField& field,
                                              const QuadratureSpec& spec)
{
    const double loop = line_integral_phi(field, geom.arm2(), spec) - line_integral_phi(field, geom.arm1(), spec);
    const double dl = geom.delta_L();
    return OpticalPathDifference{dl, loop, dl - 2.0 * loop, dl - loop};
}

Eigen::Matrix2cd mach_zehnder_transfer(double phase)
{
    const Eigen::Matrix2cd t = beam_splitter_matrix();
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Identity();
    d(1, 1) = std::polar(1.0, phase);
    return t * d * t;
}

namespace
{

void require_two_modes(const OneParticleDensityMatrix& rho)
{
    if (rho.size() != 2)
        throw DimensionMismatch("two-port interferometer needs a 2x2 density matrix, got " +
                                std::to_string(rho.size()));
}

} // namespace

DetectorPair mach_zehnder_probabilities(double Delta_L, double omega, const OneParticleDensityMatrix& rho,
                                        double a1, double a2)
{
    require_two_modes(rho);
    const Eigen::Matrix2cd u = mach_zehnder_transfer(omega * Delta_L);
    double p[2];
    for (int j = 0; j < 2; ++j)
    {
        cplx sum = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                sum += std::conj(u(j, a)) * u(j, b) * rho.expect_adag_a(a, b);
        p[j] = sum.real();
    }
    return DetectorPair{a1 * p[0], a2 * p[1]};
}

DetectorPair hong_ou_mandel_probabilities(double Delta_L, double omega, const OneParticleDensityMatrix& rho,
                                          double a1, double a2)
{
    require_two_modes(rho);
    const double n = rho.expect_adag_a(0, 0).real() + rho.expect_adag_a(1, 1).real();
    const double cross = 2.0 * (std::polar(1.0, omega * Delta_L) * rho.expect_adag_a(0, 1)).real();
    return DetectorPair{a1 * 0.5 * (n - cross), a2 * 0.5 * (n + cross)};
}

DetectorPair hong_ou_mandel_probabilities(double Delta_L, double omega, double c, double chi, double a1,
                                          double a2)
{
    return hong_ou_mandel_probabilities(Delta_L, omega, one_particle_rho(build_hom_state(c, chi)), a1, a2);
}

ChannelFactor detector_channel_factor(const DetectorChannel& channel, double omega, const PotentialField& field,
                                      const EmModeOptions& options)
{
    const ParticleSpec p = ParticleSpec::massless(omega * channel.basis.k_hat);
    const EmModeValue m = em_mode_value(p, channel.basis, channel.lambda, field, channel.path, options);
    return ChannelFactor{m.amplitude_factor(), m.theta, m.phi};
}

Visibility mz_visibility(const ChannelFactor& c1, const ChannelFactor& c2, int steps)
{
    steps = std::max(steps + (steps % 2), 2);
    const auto rho = OneParticleDensityMatrix::single(2, 0);
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < steps; ++i)
    {
        const double x = 2.0 * std::numbers::pi * i / steps;
        const DetectorPair p = mach_zehnder_probabilities(x, 1.0, rho, c1.amplitude_factor, c2.amplitude_factor);
        hi = std::max(hi, p.p2 - p.p1);
        lo = std::min(lo, p.p2 - p.p1);
    }
    Visibility v;
    v.b_plus = 0.5 * (hi - lo);
    v.b_minus = 0.5 * (hi + lo);
    v.sweep = (v.b_plus - v.b_minus) / (v.b_plus + v.b_minus);
    v.first_order = 1.0 + c1.theta - c2.theta + 2.0 * c1.phi - 2.0 * c2.phi;
    return v;
}

} // namespace gravoptics
