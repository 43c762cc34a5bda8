#include "gravoptics/scalar_modes.hpp"

#include "gravoptics/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace gravoptics
{

namespace
{

const double kModeNorm = std::pow(2.0 * std::numbers::pi, -1.5);

ModeVariant resolve(const ParticleSpec& p, ModeVariant variant)
{
    if (variant != ModeVariant::Default)
        return variant;
    return p.mass == 0.0 ? ModeVariant::Standard : ModeVariant::Orthonormal;
}

void guard(const ParticleSpec& p, double phi, const Vec3* where)
{
    if (perturbative_guard_ok(p, phi))
        return;
    std::ostringstream os;
    os << "perturbative parameter (1 + m^2/2k^2)|Phi| = " << perturbative_parameter(p, phi) << " exceeds "
       << kPerturbativeThreshold;
    if (where)
        os << " at (" << where->transpose() << ")";
    os << "; use the WKB modes for this regime";
    throw PerturbativeGuardViolation(os.str());
}

} // namespace

ParticleSpec ParticleSpec::from_wavevector(double mass, const Vec3& k)
{
    ParticleSpec p;
    p.mass = mass;
    p.k = k;
    p.omega = std::sqrt(k.squaredNorm() + mass * mass);
    return p;
}

double ParticleSpec::mass_ratio() const
{
    const double k2 = k.squaredNorm();
    return mass * mass / (2.0 * k2);
}

void ParticleSpec::validate() const
{
    if (!(omega > 0.0))
        throw std::invalid_argument("particle: omega must be positive");
    if (mass < 0.0)
        throw std::invalid_argument("particle: mass must be non-negative");
    if (!(k.squaredNorm() > 0.0))
        throw std::invalid_argument("particle: wavevector must be non-zero");
    const double lhs = omega * omega - mass * mass;
    const double rhs = k.squaredNorm();
    if (std::abs(lhs - rhs) > 1e-10 * omega * omega)
        throw std::invalid_argument("particle: off shell, omega^2 - m^2 != |k|^2");
}

double effective_q_squared(const ParticleSpec& p, double phi)
{
    const double k2 = p.k.squaredNorm();
    return k2 - 2.0 * (p.mass * p.mass + 2.0 * k2) * phi;
}

double effective_q_squared_exact(const ParticleSpec& p, double phi)
{
    return p.omega * p.omega * std::exp(-4.0 * phi) - p.mass * p.mass * std::exp(-2.0 * phi);
}

double perturbative_parameter(const ParticleSpec& p, double phi) { return p.coupling() * std::abs(phi); }

bool perturbative_guard_ok(const ParticleSpec& p, double phi, double threshold)
{
    return perturbative_parameter(p, phi) <= threshold;
}

void check_path_alignment(const PathPolyline& path, const Vec3& direction)
{
    const Vec3 d = direction.normalized();
    for (std::size_t i = 0; i < path.segment_count(); ++i)
    {
        const Vec3 t = path.segment_tangent(i);
        const double angle = std::atan2(t.cross(d).norm(), t.dot(d));
        if (angle > kAlignmentTolerance)
        {
            std::ostringstream os;
            os << "path segment " << i << " makes an angle of " << angle << " rad with the wavevector";
            throw PathNotAligned(os.str());
        }
    }
}

void check_perturbative_guard(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                              double threshold)
{
    for (const auto& x : path.sample_points(8))
    {
        const double phi = field.value(x);
        if (!perturbative_guard_ok(p, phi, threshold))
            guard(p, phi, &x);
    }
}

double amplitude_correction_alpha(const ParticleSpec& p, double phi, ModeVariant variant)
{
    guard(p, phi, nullptr);
    const double ratio = p.mass_ratio();
    return resolve(p, variant) == ModeVariant::Orthonormal ? (1.0 - ratio) * phi : (1.0 + ratio) * phi;
}

double phase_correction_sigma(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                              const QuadratureSpec& spec)
{
    p.validate();
    check_path_alignment(path, p.k);
    check_perturbative_guard(p, field, path);
    return -2.0 * p.k_norm() * p.coupling() * line_integral_phi(field, path, spec);
}

double optical_shift_deltax(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                            const QuadratureSpec& spec)
{
    return phase_correction_sigma(p, field, path, spec) / p.k_norm();
}

RefractiveIndex refractive_index(double phi, double phi_max)
{
    if (phi > 0.0)
        throw PositivePotential("refractive index requires an attractive potential (Phi <= 0)");
    return RefractiveIndex{1.0 + 2.0 * std::abs(phi), is_weak_field(phi, phi_max)};
}

std::complex<double> ScalarModeValue::value() const { return kModeNorm * std::polar(amplitude, phase); }

double ScalarModeValue::magnitude() const { return kModeNorm * amplitude; }

ScalarModeValue mode_value(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                           ModeVariant variant, const QuadratureSpec& spec)
{
    const Vec3 x = path.end();
    const double sigma = phase_correction_sigma(p, field, path, spec);
    const double alpha = amplitude_correction_alpha(p, field.value(x), variant);
    return ScalarModeValue{std::exp(alpha), p.k.dot(x) + sigma, alpha, sigma};
}

ScalarModeValue mode_value_at(const ParticleSpec& p, const PotentialField& field, const Vec3& reference,
                              const Vec3& x, ModeVariant variant, const QuadratureSpec& spec)
{
    p.validate();
    const Vec3 khat = p.direction();
    const double s = (x - reference).dot(khat);
    const Vec3 foot = x - s * khat;
    double sigma = 0.0;
    if (std::abs(s) > 1e-15 * std::max(1.0, x.norm()))
        sigma = s > 0.0 ? phase_correction_sigma(p, field, PathPolyline::segment(foot, x), spec)
                        : -phase_correction_sigma(p, field, PathPolyline::segment(x, foot), spec);
    const double alpha = amplitude_correction_alpha(p, field.value(x), variant);
    return ScalarModeValue{std::exp(alpha), p.k.dot(x) + sigma, alpha, sigma};
}

std::complex<double> wightman_function(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho,
                                       double t, const Vec3& x, double t_prime, const Vec3& x_prime)
{
    const int n_modes = static_cast<int>(modes.size());
    if (rho.size() != n_modes)
        throw DimensionMismatch("density matrix dimension " + std::to_string(rho.size()) + " != mode count " +
                                std::to_string(n_modes));
    std::vector<std::complex<double>> at_x(n_modes), at_xp(n_modes);
    for (int n = 0; n < n_modes; ++n)
    {
        const Eigen::VectorXcd fx = modes[n].profile(x);
        const Eigen::VectorXcd fxp = modes[n].profile(x_prime);
        if (fx.size() != 1 || fxp.size() != 1)
            throw DimensionMismatch("wightman_function expects scalar (one-component) modes");
        at_x[n] = fx(0);
        at_xp[n] = fxp(0);
    }
    using namespace std::complex_literals;
    std::complex<double> excited = 0.0;
    std::complex<double> vacuum = 0.0;
    for (int n = 0; n < n_modes; ++n)
    {
        for (int m = 0; m < n_modes; ++m)
            excited += rho(n, m) * at_xp[n] * std::conj(at_x[m]) *
                       std::exp(-1i * (modes[n].omega * t - modes[m].omega * t_prime));
        vacuum += at_x[n] * std::conj(at_xp[n]) * std::exp(-1i * modes[n].omega * (t - t_prime));
    }
    return 2.0 * excited.real() + vacuum;
}

} // namespace gravoptics
