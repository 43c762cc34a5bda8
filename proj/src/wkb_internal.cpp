#include "gravoptics/wkb_internal.hpp"

#include "gravoptics/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gravoptics
{

namespace
{

constexpr int kTurningPointSamples = 64;

// 1 - 4 b Phi, i.e. q^2 / k^2.
double allowed_factor(double coupling, double phi) { return 1.0 - 4.0 * coupling * phi; }

void check_allowed(double coupling, const PotentialField& field, const PathPolyline& path)
{
    double offset = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i)
    {
        const Vec3 a = path.segment_start(i);
        const Vec3 t = path.segment_tangent(i);
        const double len = path.segment_length(i);
        auto q2 = [&](double s) { return allowed_factor(coupling, field.value(Vec3(a + s * t))); };
        double prev = 0.0;
        for (int j = 0; j <= kTurningPointSamples; ++j)
        {
            const double s = len * j / kTurningPointSamples;
            if (q2(s) > 0.0)
            {
                prev = s;
                continue;
            }
            double lo = prev, hi = s;
            if (j > 0)
                for (int it = 0; it < 200 && hi - lo > 1e-15 * len; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    (q2(mid) > 0.0 ? lo : hi) = mid;
                }
            std::ostringstream os;
            os << "classically forbidden region (q^2 <= 0) reached at arc length " << offset + hi
               << " on segment " << i;
            throw ClassicallyForbidden(os.str(), offset + hi);
        }
        offset += len;
    }
}

void check_validity(double k_norm, double length_scale, double validity_factor)
{
    if (k_norm * length_scale < validity_factor)
    {
        std::ostringstream os;
        os << "WKB requires |k| L >= " << validity_factor << ", got " << k_norm * length_scale;
        throw WkbValidityViolation(os.str());
    }
}

double variation_length(double coupling, const PotentialField& field, const PathPolyline& path)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : path.sample_points(8))
    {
        const double g = field.gradient(x).norm();
        if (g == 0.0)
            continue;
        best = std::min(best, allowed_factor(coupling, field.value(x)) / (2.0 * coupling * g));
    }
    return best;
}

double eikonal(double k_norm, double coupling, double extra, const PotentialField& field, const PathPolyline& path,
               const QuadratureSpec& spec)
{
    return k_norm * integrate_along(
                        path,
                        [&](const Vec3& x) {
                            const double phi = field.value(x);
                            return std::sqrt(allowed_factor(coupling, phi)) - extra * phi;
                        },
                        spec);
}

} // namespace

double wkb_variation_length(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path)
{
    return variation_length(p.coupling(), field, path);
}

double wkb_phase(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                 const QuadratureSpec& spec, double validity_factor)
{
    p.validate();
    check_allowed(p.coupling(), field, path);
    check_validity(p.k_norm(), wkb_variation_length(p, field, path), validity_factor);
    return eikonal(p.k_norm(), p.coupling(), 0.0, field, path, spec);
}

double wkb_amplitude(const ParticleSpec& p, const PotentialField& field, const Vec3& x)
{
    const double f = allowed_factor(p.coupling(), field.value(x));
    return f > 0.0 ? std::pow(f, -0.25) : 0.0;
}

std::complex<double> WkbModeValue::value() const
{
    return std::pow(2.0 * std::numbers::pi, -1.5) * normalization * std::polar(amplitude, phase);
}

WkbModeValue wkb_mode(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                      const QuadratureSpec& spec, double validity_factor)
{
    const double s = wkb_phase(p, field, path, spec, validity_factor);
    return WkbModeValue{wkb_amplitude(p, field, path.end()), p.k.dot(path.start()) + s};
}

double tunneling_energy_spread(const TwoBody& field)
{
    const double mu = std::sqrt(field.gm1 / field.gm2);
    const double r3 = field.separation * field.separation * field.separation;
    return std::sqrt(field.gm1 / r3 * (1.0 + 1.0 / mu) * std::pow(1.0 + mu, 3));
}

double barrier_curvature_energy(const TwoBody& field)
{
    return std::sqrt(std::abs(potential_max_two_body(field).curvature));
}

double CompositeParticleSpec::level(std::size_t a) const
{
    if (a >= levels.size())
        throw std::out_of_range("internal level " + std::to_string(a) + " out of range");
    return levels[a];
}

void CompositeParticleSpec::validate() const
{
    if (!(m0 > 0.0))
        throw std::invalid_argument("composite particle: m0 must be positive");
    if (!(k.squaredNorm() > 0.0))
        throw std::invalid_argument("composite particle: wavevector must be non-zero");
    if (levels.empty() || levels.front() != 0.0)
        throw std::invalid_argument("composite particle: levels must start with 0");
    for (std::size_t a = 1; a < levels.size(); ++a)
        if (levels[a] < levels[a - 1])
            throw std::invalid_argument("composite particle: levels must be non-decreasing");
    const double top = levels.back();
    if (top / m0 >= kMaxLevelToMass)
    {
        std::ostringstream os;
        os << "internal level eps/m0 = " << top / m0 << " is not small (limit " << kMaxLevelToMass << ")";
        throw ValidityViolation(os.str());
    }
    if (top / k_norm() > kMaxLevelToMomentum)
    {
        std::ostringstream os;
        os << "internal level eps/|k| = " << top / k_norm() << " exceeds " << kMaxLevelToMomentum;
        throw ValidityViolation(os.str());
    }
}

double internal_phase_shift(const CompositeParticleSpec& cp, std::size_t a, const PotentialField& field,
                            const PathPolyline& path, const QuadratureSpec& spec)
{
    cp.validate();
    check_path_alignment(path, cp.k);
    const double eps = cp.level(a);
    if (eps == 0.0)
        return 0.0;
    return -2.0 * eps / cp.velocity() * line_integral_phi(field, path, spec);
}

RelativePhase relative_phase_u(const CompositeParticleSpec& cp, std::size_t a, const PotentialField& field,
                               const PathPolyline& path, const QuadratureSpec& spec)
{
    cp.validate();
    check_path_alignment(path, cp.k);
    const double eps = cp.level(a);
    const double length = path.length();
    const double integral = line_integral_phi(field, path, spec);
    const double mean = integral / length;
    const double k = cp.k_norm();
    const double dphi = -2.0 * eps / cp.velocity() * integral;

    RelativePhase r{dphi / (k * length), -2.0 * eps * cp.m0 * mean / (k * k), dphi, mean, length};
    const double scale = std::max(std::abs(r.u), std::abs(r.u_mean));
    if (std::abs(r.u - r.u_mean) > 1e-12 * scale)
        throw std::logic_error("relative phase: the two expressions for u disagree");
    return r;
}

WkbModeValue wkb_internal_mode(const CompositeParticleSpec& cp, std::size_t a, const PotentialField& field,
                               const PathPolyline& path, const QuadratureSpec& spec, double validity_factor)
{
    cp.validate();
    const ParticleSpec ground = cp.ground();
    const double k = cp.k_norm();
    check_allowed(ground.coupling(), field, path);
    check_validity(k, variation_length(ground.coupling(), field, path), validity_factor);
    const double extra = 2.0 * cp.m0 * cp.level(a) / (k * k);
    const double s = eikonal(k, ground.coupling(), extra, field, path, spec);
    return WkbModeValue{wkb_amplitude(ground, field, path.end()), cp.k.dot(path.start()) + s};
}

} // namespace gravoptics
