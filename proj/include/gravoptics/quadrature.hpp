#pragma once

#include "gravoptics/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace gravoptics
{

struct QuadratureSpec
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-30;
    int max_subdivisions = 500;

    void validate() const
    {
        if (!(rel_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
        if (!(abs_tol >= 0.0))
            throw std::invalid_argument("QuadratureSpec: abs_tol must be >= 0");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    }
};

template <class T>
struct QuadratureResult
{
    T value;
    double error;
    int intervals;
};

namespace detail
{

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double magnitude(const T& v)
{
    if constexpr (std::is_arithmetic_v<T>)
        return std::abs(v);
    else
        return v.norm();
}

template <class T>
T zero_like(const T& v)
{
    if constexpr (std::is_arithmetic_v<T>)
        return T{0};
    else
        return T::Zero(v.rows(), v.cols());
}

template <class T>
struct Panel
{
    double a, b;
    T kronrod;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class T, class F>
Panel<T> gauss_kronrod_15(const F& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(centre);
    T kronrod = fc * kWgk[7];
    T gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j)
    {
        const double dx = half * kXgk[j];
        const T sum = f(centre - dx) + f(centre + dx);
        kronrod += sum * kWgk[j];
        if (j % 2 == 1)
            gauss += sum * kWg[j / 2];
    }
    kronrod *= half;
    gauss *= half;
    const T diff = kronrod - gauss;
    return Panel<T>{a, b, kronrod, magnitude(diff)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 quadrature of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// error drops below max(abs_tol, rel_tol * |I|). T may be double or any
/// fixed-size Eigen type; the error is measured in its Euclidean norm.
template <class F>
auto integrate(const F& f, double a, double b, const QuadratureSpec& spec = {})
{
    using T = std::decay_t<decltype(f(a))>;
    spec.validate();
    if (a == b)
    {
        const T probe = f(a);
        return QuadratureResult<T>{detail::zero_like(probe), 0.0, 0};
    }

    std::vector<detail::Panel<T>> panels;
    panels.push_back(detail::gauss_kronrod_15<T>(f, a, b));
    T total = panels.front().kronrod;
    double total_error = panels.front().error;
    int count = 1;

    while (total_error > std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(total)))
    {
        if (count >= spec.max_subdivisions)
            throw QuadratureFailure("adaptive quadrature did not converge: error " +
                                    std::to_string(total_error) + " after " + std::to_string(count) +
                                    " panels");
        std::pop_heap(panels.begin(), panels.end());
        const auto worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        panels.push_back(detail::gauss_kronrod_15<T>(f, worst.a, mid));
        std::push_heap(panels.begin(), panels.end());
        panels.push_back(detail::gauss_kronrod_15<T>(f, mid, worst.b));
        std::push_heap(panels.begin(), panels.end());
        ++count;

        // re-sum instead of updating in place so cancellation does not accumulate
        total = detail::zero_like(total);
        total_error = 0.0;
        for (const auto& panel : panels)
        {
            total += panel.kronrod;
            total_error += panel.error;
        }
    }
    return QuadratureResult<T>{total, total_error, count};
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k)
            {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // Recompute derivative at the converged root.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k)
        {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

} // namespace gravoptics
