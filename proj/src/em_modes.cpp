#include "gravoptics/em_modes.hpp"

#include "gravoptics/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gravoptics
{

PolarizationBasis PolarizationBasis::from_direction(const Vec3& k, const Vec3& hint)
{
    if (!(k.squaredNorm() > 0.0))
        throw std::invalid_argument("polarization basis needs a non-zero direction");
    PolarizationBasis b;
    b.k_hat = k.normalized();
    Vec3 e = hint - hint.dot(b.k_hat) * b.k_hat;
    if (e.norm() < 1e-8 * std::max(1.0, hint.norm()))
    {
        // pick the coordinate axis least aligned with k
        Eigen::Index axis;
        b.k_hat.cwiseAbs().minCoeff(&axis);
        const Vec3 u = Vec3::Unit(axis);
        e = u - u.dot(b.k_hat) * b.k_hat;
    }
    b.e1 = e.normalized();
    b.e2 = b.k_hat.cross(b.e1);
    return b;
}

const Vec3& PolarizationBasis::polarization(int lambda) const
{
    if (lambda == 1)
        return e1;
    if (lambda == 2)
        return e2;
    throw std::out_of_range("polarization index must be 1 or 2");
}

void PolarizationBasis::validate() const
{
    Mat3 m;
    m << e1, e2, k_hat;
    const double defect = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (defect > 1e-12)
        throw std::invalid_argument("polarization basis is not orthonormal");
    if (m.determinant() < 0.0)
        throw std::invalid_argument("polarization basis is not right-handed");
}

Mat3 JTensor::contract_middle(const Vec3& t) const
{
    Mat3 m = Mat3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                m(i, j) += (*this)(i, k, j) * t(k);
    return m;
}

JTensor j_tensor_from_gradient(const Vec3& d)
{
    JTensor J;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                J(i, j, k) = 7.0 * (i == k) * d(j) - 3.0 * (j == k) * d(i) - 4.0 * (i == j) * d(k);
    return J;
}

JTensor j_tensor(const PotentialField& field, const Vec3& x) { return j_tensor_from_gradient(field.gradient(x)); }

Mat3 theta_tensor(const PotentialField& field, const PathPolyline& path, const QuadratureSpec& spec)
{
    return integrate_along_with_tangent(
        path, [&](const Vec3& x, const Vec3& t) -> Mat3 { return j_tensor(field, x).contract_middle(t); }, spec);
}

Mat3 rotation_lambda(const PotentialField& field, const PathPolyline& path, const QuadratureSpec& spec,
                     double phi_max)
{
    const double worst = max_abs_potential(field, path);
    if (!is_weak_field(worst, phi_max))
    {
        std::ostringstream os;
        os << "rotation_lambda: |Phi| = " << worst << " on the path exceeds the weak-field bound " << phi_max;
        throw ValidityViolation(os.str());
    }
    return Mat3::Identity() + 0.5 * theta_tensor(field, path, spec);
}

double orthogonality_defect(const Mat3& lambda)
{
    return (lambda.transpose() * lambda - Mat3::Identity()).norm();
}

double longitudinal_beta(const PolarizationBasis& basis, int lambda, const Mat3& theta)
{
    return -0.5 * basis.k_hat.dot(theta * basis.polarization(lambda));
}

double polarization_rotation_theta(const PolarizationBasis& basis, int lambda, const Mat3& theta)
{
    const Vec3& e = basis.polarization(lambda);
    return e.dot(theta * e);
}

double em_variation_length(const PotentialField& field, const PathPolyline& path)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : path.sample_points(8))
    {
        const double h = field.hessian(x).norm();
        if (h > 0.0)
            best = std::min(best, field.gradient(x).norm() / h);
    }
    return best;
}

double EmModeValue::amplitude_factor() const { return polarization.squaredNorm() * std::exp(2.0 * phi); }

EmModeValue em_mode_value(const ParticleSpec& p, const PolarizationBasis& basis, int lambda,
                          const PotentialField& field, const PathPolyline& path, const EmModeOptions& options)
{
    if (p.mass != 0.0)
        throw ValidityViolation("electromagnetic modes require a massless particle");
    basis.validate();
    if ((p.direction() - basis.k_hat).norm() > 1e-12)
        throw std::invalid_argument("polarization basis direction does not match the wavevector");

    const double worst = max_abs_potential(field, path);
    if (!is_weak_field(worst, options.phi_max))
    {
        std::ostringstream os;
        os << "em mode: |Phi| = " << worst << " on the path exceeds the weak-field bound " << options.phi_max;
        throw ValidityViolation(os.str());
    }

    EmModeValue out;
    out.validity_length = em_variation_length(field, path);
    if (p.omega * out.validity_length <= options.validity_factor)
    {
        std::ostringstream os;
        os << "em mode: omega L = " << p.omega * out.validity_length << " is not above "
           << options.validity_factor;
        throw ValidityViolation(os.str());
    }
    out.neglected_term_ratio = 0.0;
    for (const auto& x : path.sample_points(8))
        out.neglected_term_ratio =
            std::max(out.neglected_term_ratio, 7.0 * field.hessian(x).norm() / (p.omega * p.omega));
    if (out.neglected_term_ratio >= kNeglectedTermLimit)
    {
        std::ostringstream os;
        os << "neglected 7 d d Phi term is " << out.neglected_term_ratio << " of q^2";
        out.warnings.push_back(os.str());
    }

    const Vec3 x = path.end();
    const Mat3 theta = theta_tensor(field, path, options.quadrature);
    const Vec3& e = basis.polarization(lambda);
    out.theta = polarization_rotation_theta(basis, lambda, theta);
    out.beta = longitudinal_beta(basis, lambda, theta);
    out.polarization = options.polarization_term ? Vec3(e + 0.5 * theta * e + out.beta * basis.k_hat) : e;
    out.sigma = phase_correction_sigma(p, field, path, options.quadrature);
    out.phase = p.k.dot(x) + out.sigma;
    out.phi = field.value(x);

    using namespace std::complex_literals;
    const std::complex<double> scalar =
        std::pow(2.0 * std::numbers::pi, -1.5) * (-1i * p.omega) * std::exp(out.phi + 1i * out.phase);
    out.f = out.polarization.cast<std::complex<double>>() * scalar;
    return out;
}

} // namespace gravoptics
