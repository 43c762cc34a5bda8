#pragma once

#include "gravoptics/fock.hpp"
#include "gravoptics/path.hpp"
#include "gravoptics/potential.hpp"
#include "gravoptics/scalar_modes.hpp"
#include "gravoptics/wkb_internal.hpp"

#include <span>
#include <variant>
#include <vector>

namespace gravoptics
{

/// Single-detector probability up to C:
///   sum_nm rho^n_m f_n(x) . conj(f_m(x)) e^{-i(w_n - w_m) t}.
/// Vector modes are contracted component by component.
double glauber_single(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho, double t,
                      const Vec3& x);

struct DeltaKernel
{
};

/// Product of normalized Gaussians in tau (width sigma_t) and in each spatial
/// component of y (width sigma_y). A zero width collapses that factor to a delta.
struct GaussianKernel
{
    double sigma_t = 0.0;
    double sigma_y = 0.0;
};

/// Explicit quadrature points (tau, y, weight) of a kernel.
struct SampledKernel
{
    struct Point
    {
        double tau;
        Vec3 y;
        double weight;
    };
    std::vector<Point> points;
};

/// K(Y): symmetric under Y -> -Y and normalized to unit integral.
class DetectorKernel
{
public:
    using Family = std::variant<DeltaKernel, GaussianKernel, SampledKernel>;

    DetectorKernel() : family_(DeltaKernel{}) {}
    DetectorKernel(DeltaKernel k) : family_(k) {}
    DetectorKernel(GaussianKernel k);
    /// Validates symmetry and unit total weight (both to 1e-12).
    DetectorKernel(SampledKernel k);

    const Family& family() const { return family_; }

private:
    Family family_;
};

struct QtpOptions
{
    double rel_tol = 1e-10;
    /// Gauss-Legendre orders tried in turn until two successive results agree.
    std::vector<int> orders{16, 32, 64};
};

/// Kernel-smeared two-point function
///   integral K(Y) Tr[rho phi^(-)(X + Y/2) phi^(+)(X - Y/2)] d^4Y
/// with the factor 2 of the QTP formula absorbed into C, so the delta kernel
/// returns glauber_single exactly. Gaussian kernels are truncated at 6 sigma and
/// renormalized. Throws QuadratureFailure if the order ladder does not converge.
double qtp_single(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho, double t, const Vec3& x,
                  const DetectorKernel& kernel, const QtpOptions& options = {});

/// One-dimensional massless packet, described by a momentum density matrix on
/// a quadrature grid with weights w. rho is the unit-trace matrix of the
/// coefficients sqrt(w_i) psi(k_i); empty weights mean a discrete set of modes
/// (all weights 1).
class WavePacket1D
{
public:
    WavePacket1D(std::vector<double> k, Eigen::MatrixXcd rho, std::vector<double> weights = {});

    /// Pure state from amplitudes psi(k_i) and quadrature weights w_i; the
    /// result is normalized to unit trace.
    static WavePacket1D pure(std::vector<double> k, const std::vector<double>& weights,
                             const std::vector<cplx>& psi);
    /// Gaussian |psi(k)|^2 centred at k0 with width sigma_k, starting at x0 at t = 0.
    static WavePacket1D gaussian(double k0, double sigma_k, double x0 = 0.0, int nodes = 96);

    const std::vector<double>& k() const { return k_; }
    const Eigen::MatrixXcd& rho() const { return rho_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Flat-space arrival density at position x and time t with the given
    /// kernel in (tau, y):
    ///   Re sum sqrt(w w') rho(k,k') e^{i(k-k')(x-t)} K~(k,k') / 2 pi,
    /// normalized to unit integral over x for the delta kernel.
    double flat_density(double x, double t, const DetectorKernel& kernel = {}) const;

private:
    std::vector<double> k_;
    Eigen::MatrixXcd rho_;
    std::vector<double> weights_;
};

struct TimeOfArrival
{
    std::vector<double> times;
    std::vector<double> density;      ///< P(L, t) = P0(L + delta x(L), t)
    std::vector<double> flat_density; ///< P0(L, t)
    double delta_x;
};

/// Arrival density of a massless packet at distance L along `direction` from
/// `source`. The field enters only through delta x(L) = -2 integral_0^L Phi,
/// which delays the whole distribution. detector_size is compared with the
/// variation length |grad Phi| / ||hess Phi|| and must be smaller than it.
TimeOfArrival time_of_arrival_density(const WavePacket1D& packet, const PotentialField& field, double L,
                                      const std::vector<double>& times, const DetectorKernel& kernel = {},
                                      const Vec3& source = Vec3::Zero(), const Vec3& direction = Vec3::UnitX(),
                                      double detector_size = 0.0);

/// Reduced density matrix over internal levels, with an optional preparation
/// phase s that multiplies rho_ab by e^{i s (eps_a - eps_b)}.
struct InternalState
{
    Eigen::MatrixXcd rho;
    double preparation_phase = 0.0;

    void validate(std::size_t levels) const;
};

/// Oscillation argument for the (a, b) term:
///   (Delta phi_a - Delta phi_b) - (w_a - w_b) t + s (eps_a - eps_b),
/// with w_a = sqrt(k^2 + (m0 + eps_a)^2). At t = 0 and s = 0 it is the difference
/// of internal phase shifts accumulated from the source (path start).
double internal_oscillation_phase(const CompositeParticleSpec& cp, std::size_t a, std::size_t b,
                                  const PotentialField& field, const PathPolyline& path, double t,
                                  double preparation_phase = 0.0, const QuadratureSpec& spec = {});

/// P(t, x) = Re sum_ab rho_ab |f|^2 e^{i phase_ab}, evaluated at the end of the
/// path. |f|^2 is the ground-state WKB amplitude squared (C dropped).
double internal_dof_detection(const InternalState& state, const CompositeParticleSpec& cp,
                              const PotentialField& field, const PathPolyline& path, double t,
                              const QuadratureSpec& spec = {});

} // namespace gravoptics
