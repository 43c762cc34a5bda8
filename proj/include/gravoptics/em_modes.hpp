#pragma once

#include "gravoptics/path.hpp"
#include "gravoptics/potential.hpp"
#include "gravoptics/scalar_modes.hpp"

#include <array>
#include <string>
#include <vector>

namespace gravoptics
{

using Vec3c = Eigen::Vector3cd;

/// Required value of omega * L for the electromagnetic modes.
inline constexpr double kEmValidityFactor = 1e3;
/// Warning threshold for the dropped 7 d_i d_j Phi term relative to q^2.
inline constexpr double kNeglectedTermLimit = 1e-3;

/// Right-handed orthonormal triad {e1, e2, k_hat}.
struct PolarizationBasis
{
    Vec3 k_hat;
    Vec3 e1;
    Vec3 e2;

    /// Builds a triad for direction k; e1 is the normalized component of `hint`
    /// orthogonal to k (a fixed axis is used when hint is omitted or parallel).
    static PolarizationBasis from_direction(const Vec3& k, const Vec3& hint = Vec3::Zero());

    /// e1 for lambda = 1, e2 for lambda = 2.
    const Vec3& polarization(int lambda) const;
    void validate() const;
};

/// J^{ijk} = 7 delta^{ik} d^j Phi - 3 delta^{jk} d^i Phi - 4 delta^{ij} d^k Phi.
struct JTensor
{
    std::array<double, 27> c{};

    double operator()(int i, int j, int k) const { return c[9 * i + 3 * j + k]; }
    double& operator()(int i, int j, int k) { return c[9 * i + 3 * j + k]; }

    /// Theta integrand: M(i,j) = J^{i k j} t_k.
    Mat3 contract_middle(const Vec3& t) const;
};

JTensor j_tensor(const PotentialField& field, const Vec3& x);
JTensor j_tensor_from_gradient(const Vec3& grad_phi);

/// Theta^i_j = integral of J^{i k j} dx^k along the path. Row = upper index.
Mat3 theta_tensor(const PotentialField& field, const PathPolyline& path, const QuadratureSpec& spec = {});

/// Lambda = I + Theta/2. Throws ValidityViolation if |Phi| >= phi_max on the path.
Mat3 rotation_lambda(const PotentialField& field, const PathPolyline& path, const QuadratureSpec& spec = {},
                     double phi_max = kDefaultWeakFieldMax);

/// ||Lambda^T Lambda - I||_F. Lambda is only orthogonal to first order when
/// Theta is antisymmetric, so this is reported rather than enforced.
double orthogonality_defect(const Mat3& lambda);

/// beta = -(1/2) k_hat_i e_j Theta^{ij}.
double longitudinal_beta(const PolarizationBasis& basis, int lambda, const Mat3& theta);

/// theta = Theta_ij e^i e^j.
double polarization_rotation_theta(const PolarizationBasis& basis, int lambda, const Mat3& theta);

struct EmModeOptions
{
    bool polarization_term = true;
    double validity_factor = kEmValidityFactor;
    double phi_max = kDefaultWeakFieldMax;
    QuadratureSpec quadrature{};
};

struct EmModeValue
{
    Vec3c f;              ///< f^i including the (2 pi)^{-3/2} (-i omega) prefactor
    Vec3 polarization;    ///< e + Theta e / 2 + beta k_hat (or e when the term is off)
    double phase;         ///< k.x + sigma
    double sigma;
    double phi;           ///< Phi at the evaluation point
    double theta;         ///< polarization rotation
    double beta;
    double validity_length;
    double neglected_term_ratio; ///< 7 ||d d Phi||_F / omega^2, worst over the path
    std::vector<std::string> warnings;

    /// |f|^2 (2 pi)^3 / omega^2 = |polarization|^2 e^{2 Phi} ~ 1 + theta + 2 Phi.
    double amplitude_factor() const;
};

/// Electromagnetic mode at the end of a path that runs along k from the point
/// where sigma = 0. Throws ValidityViolation unless p.mass == 0, omega L exceeds
/// options.validity_factor, and the path stays in the weak-field domain.
EmModeValue em_mode_value(const ParticleSpec& p, const PolarizationBasis& basis, int lambda,
                          const PotentialField& field, const PathPolyline& path, const EmModeOptions& options = {});

/// min over the path of |grad Phi| / ||hess Phi||_F; infinite for a uniform field.
double em_variation_length(const PotentialField& field, const PathPolyline& path);

} // namespace gravoptics
