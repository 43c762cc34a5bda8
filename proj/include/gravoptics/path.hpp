#pragma once

#include "gravoptics/potential.hpp"
#include "gravoptics/quadrature.hpp"

#include <vector>

namespace gravoptics
{

/// Piecewise-linear spatial path parameterized by flat (Minkowski) arc length.
///
/// A closed path has an implicit final segment from the last vertex back to
/// the first; its orientation is the vertex order.
class PathPolyline
{
public:
    PathPolyline(std::vector<Vec3> vertices, bool closed = false);

    static PathPolyline segment(const Vec3& from, const Vec3& to) { return PathPolyline({from, to}); }

    const std::vector<Vec3>& vertices() const { return vertices_; }
    bool closed() const { return closed_; }

    std::size_t segment_count() const { return closed_ ? vertices_.size() : vertices_.size() - 1; }
    const Vec3& segment_start(std::size_t i) const { return vertices_[i]; }
    const Vec3& segment_end(std::size_t i) const { return vertices_[(i + 1) % vertices_.size()]; }
    double segment_length(std::size_t i) const { return (segment_end(i) - segment_start(i)).norm(); }
    Vec3 segment_tangent(std::size_t i) const { return (segment_end(i) - segment_start(i)).normalized(); }

    const Vec3& start() const { return vertices_.front(); }
    const Vec3& end() const { return closed_ ? vertices_.front() : vertices_.back(); }

    double length() const;
    /// Point at arc length s from the start (clamped to [0, length]).
    Vec3 point_at(double s) const;

    /// Same points traversed in the opposite direction.
    PathPolyline reversed() const;
    /// This path followed by other; other must start where this one ends.
    PathPolyline concatenated(const PathPolyline& other) const;

    /// Vertices plus `per_segment - 1` interior points on every segment.
    std::vector<Vec3> sample_points(int per_segment = 8) const;

private:
    std::vector<Vec3> vertices_;
    bool closed_;
};

/// Integral of f(x(lambda)) d lambda along the path, adaptive per segment.
template <class F>
auto integrate_along(const PathPolyline& path, const F& f, const QuadratureSpec& spec = {})
{
    using T = std::decay_t<decltype(f(path.start()))>;
    T total = detail::zero_like(f(path.start()));
    for (std::size_t i = 0; i < path.segment_count(); ++i)
    {
        const Vec3 a = path.segment_start(i);
        const Vec3 t = path.segment_tangent(i);
        const double len = path.segment_length(i);
        total += integrate([&](double s) { return f(Vec3(a + s * t)); }, 0.0, len, spec).value;
    }
    return total;
}

/// Integral of f(x(lambda), tangent) d lambda; the integrand also sees the unit tangent.
template <class F>
auto integrate_along_with_tangent(const PathPolyline& path, const F& f, const QuadratureSpec& spec = {})
{
    const Vec3 t0 = path.segment_tangent(0);
    using T = std::decay_t<decltype(f(path.start(), t0))>;
    T total = detail::zero_like(f(path.start(), t0));
    for (std::size_t i = 0; i < path.segment_count(); ++i)
    {
        const Vec3 a = path.segment_start(i);
        const Vec3 t = path.segment_tangent(i);
        const double len = path.segment_length(i);
        total += integrate([&](double s) { return f(Vec3(a + s * t), t); }, 0.0, len, spec).value;
    }
    return total;
}

/// Integral of Phi along the path (loop integral when the path is closed).
double line_integral_phi(const PotentialField& field, const PathPolyline& path,
                         const QuadratureSpec& spec = {});

/// Largest |Phi| over the path's sample points.
double max_abs_potential(const PotentialField& field, const PathPolyline& path, int per_segment = 8);

} // namespace gravoptics
