#pragma once

#include "gravoptics/path.hpp"
#include "gravoptics/potential.hpp"
#include "gravoptics/scalar_modes.hpp"

#include <complex>
#include <vector>

namespace gravoptics
{

/// Required value of |k| * L, with L the local scale of variation of q.
inline constexpr double kWkbValidityFactor = 1e3;

/// Smallest q/|grad q| over the sample points of the path, with
/// q^2 = k^2 (1 - 4 b Phi) and b = 1 + m^2/2k^2. Infinite for uniform Phi.
double wkb_variation_length(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path);

/// Eikonal phase: integral of |k| sqrt(1 - 4 b Phi) along the path.
///
/// Throws ClassicallyForbidden when 1 - 4 b Phi <= 0 somewhere on the path (the
/// exception carries the arc length of the first turning point) and
/// WkbValidityViolation when |k| L < validity_factor.
double wkb_phase(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                 const QuadratureSpec& spec = {}, double validity_factor = kWkbValidityFactor);

/// [1 - 4 b Phi(x)]^{-1/4}; zero in the classically forbidden region.
double wkb_amplitude(const ParticleSpec& p, const PotentialField& field, const Vec3& x);

struct WkbModeValue
{
    double amplitude;
    double phase;
    double normalization = 1.0;

    /// D A e^{iS} / (2 pi)^{3/2}
    std::complex<double> value() const;
};

/// WKB mode at the end of the path. The phase is k.start + wkb_phase, so it
/// reduces to k.x for Phi = 0.
WkbModeValue wkb_mode(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                      const QuadratureSpec& spec = {}, double validity_factor = kWkbValidityFactor);

/// Order-of-magnitude spread of energies for which tunneling through the
/// two-body potential barrier matters:
///   delta E ~ sqrt((GM1/R^3)(1 + 1/mu)(1 + mu)^3),  mu = sqrt(GM1/GM2).
/// It is the inverse-harmonic-oscillator frequency of the barrier top. Result
/// in 1/length.
double tunneling_energy_spread(const TwoBody& field);

/// sqrt(|c2|) with c2 the on-axis curvature of Phi at the barrier top. Agrees with
/// tunneling_energy_spread for equal masses; in general the two differ by a factor mu.
double barrier_curvature_energy(const TwoBody& field);

/// Composite particle with internal levels. v = |k|/m0 in units of c.
struct CompositeParticleSpec
{
    double m0 = 0.0;
    std::vector<double> levels{0.0};
    Vec3 k = Vec3::Zero();

    double k_norm() const { return k.norm(); }
    double velocity() const { return k.norm() / m0; }
    double level(std::size_t a) const;
    ParticleSpec ground() const { return ParticleSpec::from_wavevector(m0, k); }

    /// Checks levels[0] = 0, non-decreasing levels, eps/m0 < 1e-3 and eps/|k| <= 10.
    void validate() const;
};

inline constexpr double kMaxLevelToMass = 1e-3;
inline constexpr double kMaxLevelToMomentum = 10.0;

/// Delta phi_a = -(2 eps_a / v) * integral of Phi along the path.
double internal_phase_shift(const CompositeParticleSpec& cp, std::size_t a, const PotentialField& field,
                            const PathPolyline& path, const QuadratureSpec& spec = {});

struct RelativePhase
{
    double u;          ///< Delta phi / (|k| L)
    double u_mean;     ///< -2 eps m0 <Phi> / k^2
    double delta_phi;
    double mean_phi;   ///< <Phi> = L^{-1} integral of Phi
    double length;
};

/// Relative internal phase u. Both forms are evaluated; a std::logic_error is
/// thrown if they disagree beyond 1e-12 relative.
RelativePhase relative_phase_u(const CompositeParticleSpec& cp, std::size_t a, const PotentialField& field,
                               const PathPolyline& path, const QuadratureSpec& spec = {});

/// WKB mode of internal level a: ground-mass amplitude, eikonal integrand
/// |k| [sqrt(1 - 4 b0 Phi) - (2 m0 eps_a / k^2) Phi].
WkbModeValue wkb_internal_mode(const CompositeParticleSpec& cp, std::size_t a, const PotentialField& field,
                               const PathPolyline& path, const QuadratureSpec& spec = {},
                               double validity_factor = kWkbValidityFactor);

} // namespace gravoptics
