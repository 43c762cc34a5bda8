#include "gravoptics/potential.hpp"

#include "gravoptics/errors.hpp"

#include <cmath>
#include <sstream>

namespace gravoptics
{

namespace
{

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec3 checked_offset(const Vec3& x, const Vec3& centre, double gm, double exclusion_factor)
{
    const Vec3 d = x - centre;
    const double radius = exclusion_factor * std::abs(gm);
    if (d.norm() <= radius || d.norm() == 0.0)
    {
        std::ostringstream os;
        os << "point (" << x.transpose() << ") lies within the exclusion radius " << radius
           << " of the source at (" << centre.transpose() << ")";
        throw SourceSingularity(os.str());
    }
    return d;
}

double point_value(double gm, const Vec3& d) { return -gm / d.norm(); }

Vec3 point_gradient(double gm, const Vec3& d)
{
    const double r = d.norm();
    return gm * d / (r * r * r);
}

Mat3 point_hessian(double gm, const Vec3& d)
{
    const double r = d.norm();
    const double r3 = r * r * r;
    return gm / r3 * (Mat3::Identity() - 3.0 * d * d.transpose() / (r * r));
}

Vec3 second_body(const TwoBody& m) { return Vec3(m.separation, 0.0, 0.0); }

} // namespace

double PotentialField::value(const Vec3& x) const
{
    return std::visit(
        Overloaded{
            [&](const Homogeneous& m) { return -m.g * x[0]; },
            [&](const PointMass& m) {
                return point_value(m.gm, checked_offset(x, m.centre, m.gm, m.exclusion_factor));
            },
            [&](const TwoBody& m) {
                const Vec3 d1 = checked_offset(x, Vec3::Zero(), m.gm1, m.exclusion_factor);
                const Vec3 d2 = checked_offset(x, second_body(m), m.gm2, m.exclusion_factor);
                return point_value(m.gm1, d1) + point_value(m.gm2, d2);
            },
            [&](const Superposition& m) {
                double sum = 0.0;
                for (const auto& term : m.terms)
                    sum += term.value(x);
                return sum;
            },
        },
        model_);
}

Vec3 PotentialField::gradient(const Vec3& x) const
{
    return std::visit(
        Overloaded{
            [&](const Homogeneous& m) -> Vec3 { return Vec3(-m.g, 0.0, 0.0); },
            [&](const PointMass& m) -> Vec3 {
                return point_gradient(m.gm, checked_offset(x, m.centre, m.gm, m.exclusion_factor));
            },
            [&](const TwoBody& m) -> Vec3 {
                const Vec3 d1 = checked_offset(x, Vec3::Zero(), m.gm1, m.exclusion_factor);
                const Vec3 d2 = checked_offset(x, second_body(m), m.gm2, m.exclusion_factor);
                return point_gradient(m.gm1, d1) + point_gradient(m.gm2, d2);
            },
            [&](const Superposition& m) -> Vec3 {
                Vec3 sum = Vec3::Zero();
                for (const auto& term : m.terms)
                    sum += term.gradient(x);
                return sum;
            },
        },
        model_);
}

Mat3 PotentialField::hessian(const Vec3& x) const
{
    return std::visit(
        Overloaded{
            [&](const Homogeneous&) -> Mat3 { return Mat3::Zero(); },
            [&](const PointMass& m) -> Mat3 {
                return point_hessian(m.gm, checked_offset(x, m.centre, m.gm, m.exclusion_factor));
            },
            [&](const TwoBody& m) -> Mat3 {
                const Vec3 d1 = checked_offset(x, Vec3::Zero(), m.gm1, m.exclusion_factor);
                const Vec3 d2 = checked_offset(x, second_body(m), m.gm2, m.exclusion_factor);
                return point_hessian(m.gm1, d1) + point_hessian(m.gm2, d2);
            },
            [&](const Superposition& m) -> Mat3 {
                Mat3 sum = Mat3::Zero();
                for (const auto& term : m.terms)
                    sum += term.hessian(x);
                return sum;
            },
        },
        model_);
}

PotentialField PotentialField::scaled(double s) const
{
    return std::visit(
        Overloaded{
            [&](Homogeneous m) -> PotentialField {
                m.g *= s;
                return m;
            },
            [&](PointMass m) -> PotentialField {
                m.gm *= s;
                return m;
            },
            [&](TwoBody m) -> PotentialField {
                m.gm1 *= s;
                m.gm2 *= s;
                return m;
            },
            [&](const Superposition& m) -> PotentialField {
                Superposition out;
                for (const auto& term : m.terms)
                    out.terms.push_back(term.scaled(s));
                return out;
            },
        },
        model_);
}

double eval_potential(const PotentialField& field, const Vec3& x) { return field.value(x); }
Vec3 grad_potential(const PotentialField& field, const Vec3& x) { return field.gradient(x); }
Mat3 hessian_potential(const PotentialField& field, const Vec3& x) { return field.hessian(x); }

TwoBodyMaximum potential_max_two_body(const TwoBody& field)
{
    if (!(field.gm1 > 0.0 && field.gm2 > 0.0 && field.separation > 0.0))
        throw std::invalid_argument("potential_max_two_body: masses and separation must be positive");
    const double mu = std::sqrt(field.gm1 / field.gm2);
    const double r = field.separation;
    const double onep = 1.0 + mu;
    TwoBodyMaximum out;
    out.position = r * mu / onep;
    out.potential = -(field.gm1 / r) * onep * onep / (mu * mu);
    out.curvature = -(field.gm1 / (r * r * r)) * std::pow(onep, 4) / (mu * mu * mu);
    return out;
}

} // namespace gravoptics
