#include "gravoptics/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gravoptics
{

PathPolyline::PathPolyline(std::vector<Vec3> vertices, bool closed)
    : vertices_(std::move(vertices)), closed_(closed)
{
    const std::size_t minimum = closed_ ? 3 : 2;
    if (vertices_.size() < minimum)
        throw std::invalid_argument(closed_ ? "closed path needs at least 3 vertices"
                                            : "path needs at least 2 vertices");
    for (std::size_t i = 0; i < segment_count(); ++i)
        if (segment_length(i) == 0.0)
            throw std::invalid_argument("path has coincident consecutive vertices at index " +
                                        std::to_string(i));
}

double PathPolyline::length() const
{
    double total = 0.0;
    for (std::size_t i = 0; i < segment_count(); ++i)
        total += segment_length(i);
    return total;
}

Vec3 PathPolyline::point_at(double s) const
{
    if (s <= 0.0)
        return start();
    for (std::size_t i = 0; i < segment_count(); ++i)
    {
        const double len = segment_length(i);
        if (s <= len)
            return segment_start(i) + s * segment_tangent(i);
        s -= len;
    }
    return end();
}

PathPolyline PathPolyline::reversed() const
{
    std::vector<Vec3> v(vertices_.rbegin(), vertices_.rend());
    if (closed_)
        // keep the same starting vertex so the loop is just traversed backwards
        std::rotate(v.begin(), v.end() - 1, v.end());
    return PathPolyline(std::move(v), closed_);
}

PathPolyline PathPolyline::concatenated(const PathPolyline& other) const
{
    if (closed_ || other.closed_)
        throw std::invalid_argument("cannot concatenate closed paths");
    const double scale = std::max({1.0, end().norm(), other.start().norm()});
    if ((end() - other.start()).norm() > 1e-12 * scale)
        throw std::invalid_argument("concatenated paths must share the junction point");
    std::vector<Vec3> v = vertices_;
    v.insert(v.end(), other.vertices_.begin() + 1, other.vertices_.end());
    return PathPolyline(std::move(v), false);
}

std::vector<Vec3> PathPolyline::sample_points(int per_segment) const
{
    per_segment = std::max(per_segment, 1);
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < segment_count(); ++i)
    {
        const Vec3 a = segment_start(i);
        const Vec3 b = segment_end(i);
        for (int j = 0; j < per_segment; ++j)
            out.push_back(a + (b - a) * (static_cast<double>(j) / per_segment));
    }
    out.push_back(end());
    return out;
}

double line_integral_phi(const PotentialField& field, const PathPolyline& path, const QuadratureSpec& spec)
{
    return integrate_along(path, [&](const Vec3& x) { return field.value(x); }, spec);
}

double max_abs_potential(const PotentialField& field, const PathPolyline& path, int per_segment)
{
    double worst = 0.0;
    for (const auto& x : path.sample_points(per_segment))
        worst = std::max(worst, std::abs(field.value(x)));
    return worst;
}

} // namespace gravoptics
