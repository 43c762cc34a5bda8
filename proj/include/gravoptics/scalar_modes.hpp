#pragma once

#include "gravoptics/fock.hpp"
#include "gravoptics/path.hpp"
#include "gravoptics/potential.hpp"

#include <complex>
#include <functional>
#include <span>

namespace gravoptics
{

/// Rejection threshold for (1 + m^2/2k^2)|Phi|.
inline constexpr double kPerturbativeThreshold = 0.1;
/// Angular tolerance (radians) for a path segment to count as parallel to k.
inline constexpr double kAlignmentTolerance = 1e-9;

/// On-shell particle: omega^2 - m^2 = |k|^2. All quantities in 1/length.
struct ParticleSpec
{
    double mass = 0.0;
    double omega = 0.0;
    Vec3 k = Vec3::Zero();

    static ParticleSpec from_wavevector(double mass, const Vec3& k);
    static ParticleSpec massless(const Vec3& k) { return from_wavevector(0.0, k); }

    double k_norm() const { return k.norm(); }
    Vec3 direction() const { return k.normalized(); }
    /// m^2 / (2 k^2)
    double mass_ratio() const;
    /// 1 + m^2/(2 k^2), the factor multiplying Phi in alpha, sigma and delta x.
    double coupling() const { return 1.0 + mass_ratio(); }

    /// Throws std::invalid_argument unless omega > 0 and the particle is on shell.
    void validate() const;
};

/// Amplitude exponent choice: Standard uses (1 + m^2/2k^2) Phi, Orthonormal uses
/// (1 - m^2/2k^2) Phi. Default picks Standard for m = 0 and Orthonormal otherwise.
enum class ModeVariant
{
    Default,
    Standard,
    Orthonormal,
};

/// Linearized q^2 = k^2 - 2(m^2 + 2k^2) Phi.
double effective_q_squared(const ParticleSpec& p, double phi);
/// q^2 = omega^2 e^{-4 Phi} - m^2 e^{-2 Phi}.
double effective_q_squared_exact(const ParticleSpec& p, double phi);

/// (1 + m^2/2k^2)|Phi|, compared against kPerturbativeThreshold.
double perturbative_parameter(const ParticleSpec& p, double phi);
bool perturbative_guard_ok(const ParticleSpec& p, double phi, double threshold = kPerturbativeThreshold);

/// Throws PathNotAligned unless every segment of the path points along `direction`.
void check_path_alignment(const PathPolyline& path, const Vec3& direction);
/// Throws PerturbativeGuardViolation if any sample point of the path breaks the guard.
void check_perturbative_guard(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                              double threshold = kPerturbativeThreshold);

/// alpha = (1 + m^2/2k^2) Phi, or (1 - m^2/2k^2) Phi for the orthonormal variant.
/// Throws PerturbativeGuardViolation when the perturbative parameter exceeds the threshold.
double amplitude_correction_alpha(const ParticleSpec& p, double phi, ModeVariant variant = ModeVariant::Standard);

/// sigma = -2|k|(1 + m^2/2k^2) * integral of Phi along a path parallel to k.
/// sigma vanishes at the start of the path.
double phase_correction_sigma(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                              const QuadratureSpec& spec = {});

/// delta x = -2(1 + m^2/2k^2) * integral of Phi = sigma/|k|; positive (a delay) for attractive fields.
double optical_shift_deltax(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                            const QuadratureSpec& spec = {});

struct RefractiveIndex
{
    double n;
    bool weak_field; ///< false when |Phi| is outside the weak-field domain
};

/// n = 1 + 2|Phi|. Throws PositivePotential for Phi > 0.
RefractiveIndex refractive_index(double phi, double phi_max = kDefaultWeakFieldMax);

struct ScalarModeValue
{
    double amplitude; ///< A = exp(alpha)
    double phase;     ///< S = k.x + sigma
    double alpha;
    double sigma;

    /// f = A e^{iS} / (2 pi)^{3/2}
    std::complex<double> value() const;
    double magnitude() const;
};

/// Perturbative mode evaluated at the end of `path`; the path runs along k from the
/// reference point where sigma = 0.
ScalarModeValue mode_value(const ParticleSpec& p, const PotentialField& field, const PathPolyline& path,
                           ModeVariant variant = ModeVariant::Default, const QuadratureSpec& spec = {});

/// Perturbative mode at x with sigma = 0 on the plane through `reference` normal to k.
ScalarModeValue mode_value_at(const ParticleSpec& p, const PotentialField& field, const Vec3& reference,
                              const Vec3& x, ModeVariant variant = ModeVariant::Default,
                              const QuadratureSpec& spec = {});

/// A positive-frequency mode f_n(x) e^{-i omega_n t}: one component for scalar
/// fields, three for the electric field.
struct FieldMode
{
    double omega;
    std::function<Eigen::VectorXcd(const Vec3&)> profile;
};

/// G(t,x; t',x') = 2 Re(sum rho^n_m f_n(x') f*_m(x) e^{-i(w_n t - w_m t')})
///               + sum_n f_n(x) f*_n(x') e^{-i w_n (t - t')}
/// over a finite set of scalar modes.
std::complex<double> wightman_function(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho,
                                       double t, const Vec3& x, double t_prime, const Vec3& x_prime);

} // namespace gravoptics
