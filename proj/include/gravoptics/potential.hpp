#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <variant>
#include <vector>

namespace gravoptics
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Default bound for the weak-field check |Phi| < Phi_max.
inline constexpr double kDefaultWeakFieldMax = 1e-4;

/// Uniform field along the first axis: Phi = -g x_1. g has units of 1/length (g_SI / c^2).
struct Homogeneous
{
    double g = 0.0;
};

/// Phi = -GM / |x - centre|. GM is in length units (GM_SI / c^2).
struct PointMass
{
    double gm = 0.0;
    Vec3 centre = Vec3::Zero();
    /// Points closer than exclusion_factor * gm to the centre are rejected.
    double exclusion_factor = 1e-6;
};

/// Two point masses on the first axis: body 1 at the origin, body 2 at (R, 0, 0).
/// On the axis Phi = -GM1/x - GM2/(R - x).
struct TwoBody
{
    double gm1 = 0.0;
    double gm2 = 0.0;
    double separation = 0.0;
    double exclusion_factor = 1e-6;
};

class PotentialField;

struct Superposition
{
    std::vector<PotentialField> terms;
};

/// Static Newtonian potential in geometric units (c = 1, Phi dimensionless).
class PotentialField
{
public:
    using Model = std::variant<Homogeneous, PointMass, TwoBody, Superposition>;

    PotentialField() : model_(Homogeneous{0.0}) {}
    PotentialField(Homogeneous m) : model_(m) {}
    PotentialField(PointMass m) : model_(m) {}
    PotentialField(TwoBody m) : model_(m) {}
    PotentialField(Superposition m) : model_(std::move(m)) {}

    const Model& model() const { return model_; }

    double value(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;
    Mat3 hessian(const Vec3& x) const;

    /// Copy with every source strength (g or GM) multiplied by s.
    PotentialField scaled(double s) const;

private:
    Model model_;
};

/// Phi(x). Throws SourceSingularity inside the exclusion radius of a point source.
double eval_potential(const PotentialField& field, const Vec3& x);
Vec3 grad_potential(const PotentialField& field, const Vec3& x);
Mat3 hessian_potential(const PotentialField& field, const Vec3& x);

inline bool is_weak_field(double phi, double phi_max = kDefaultWeakFieldMax)
{
    return phi < phi_max && -phi < phi_max;
}

/// Saddle of the two-body potential on the axis.
struct TwoBodyMaximum
{
    double position;  ///< x_m measured from body 1
    double potential; ///< Phi(x_m)
    double curvature; ///< coefficient c2 of (x - x_m)^2 in the on-axis Taylor expansion (negative)
};

/// Closed-form maximum of Phi along the axis joining the two bodies.
///
/// With mu = sqrt(M1/M2): x_m = R mu/(1+mu), Phi(x_m) = -(GM1/R)(1+mu)^2/mu^2 and
/// c2 = -(GM1/R^3)(1+mu)^4/mu^3.
TwoBodyMaximum potential_max_two_body(const TwoBody& field);

} // namespace gravoptics
