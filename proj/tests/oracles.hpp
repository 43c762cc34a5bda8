#pragma once

// Independent numerical oracles used to produce and check expected values.
// Nothing here calls into the library.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>

namespace oracle
{

/// Golden-section search for the maximum of a unimodal f on [a, b].
inline double golden_max(const std::function<double(double)>& f, double a, double b, int iterations = 200)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations && (b - a) > 1e-15 * (std::abs(a) + std::abs(b)); ++i)
    {
        if (fc > fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline double central_first(const std::function<double(double)>& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double central_second(const std::function<double(double)>& f, double x, double h)
{
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Second derivative with one Richardson step (O(h^4)).
inline double richardson_second(const std::function<double(double)>& f, double x, double h)
{
    const double coarse = central_second(f, x, h);
    const double fine = central_second(f, x, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

/// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(const F& f, double a, double b, int n = 20000)
{
    if (n % 2)
        ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Classical RK4 for y'' = g(x, y, y') on [x0, x1] with n steps; returns (y, y') at x1.
inline Eigen::Vector2d rk4_second_order(const std::function<double(double, double, double)>& g, double x0,
                                        double x1, double y0, double dy0, int n)
{
    const double h = (x1 - x0) / n;
    double x = x0, y = y0, v = dy0;
    for (int i = 0; i < n; ++i)
    {
        const double k1y = v, k1v = g(x, y, v);
        const double k2y = v + 0.5 * h * k1v, k2v = g(x + 0.5 * h, y + 0.5 * h * k1y, v + 0.5 * h * k1v);
        const double k3y = v + 0.5 * h * k2v, k3v = g(x + 0.5 * h, y + 0.5 * h * k2y, v + 0.5 * h * k2v);
        const double k4y = v + h * k3v, k4v = g(x + h, y + h * k3y, v + h * k3v);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        x += h;
    }
    return {y, v};
}

/// Complex RK4 for the linear ODE y'' = -q2(x) y.
inline std::pair<std::complex<double>, std::complex<double>>
rk4_helmholtz(const std::function<double(double)>& q2, double x0, double x1, std::complex<double> y0,
              std::complex<double> dy0, int n)
{
    using C = std::complex<double>;
    const double h = (x1 - x0) / n;
    double x = x0;
    C y = y0, v = dy0;
    for (int i = 0; i < n; ++i)
    {
        const C k1y = v, k1v = -q2(x) * y;
        const C k2y = v + 0.5 * h * k1v, k2v = -q2(x + 0.5 * h) * (y + 0.5 * h * k1y);
        const C k3y = v + 0.5 * h * k2v, k3v = -q2(x + 0.5 * h) * (y + 0.5 * h * k2y);
        const C k4y = v + h * k3v, k4v = -q2(x + h) * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        x += h;
    }
    return {y, v};
}

/// Seeded generator for property tests.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(engine_); }

    Eigen::Vector3d unit_vector()
    {
        Eigen::Vector3d v(normal(), normal(), normal());
        return v.normalized();
    }

    /// Random Hermitian positive semidefinite matrix G G^dagger, scaled to unit trace.
    Eigen::MatrixXcd density_matrix(int n)
    {
        Eigen::MatrixXcd g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                g(i, j) = {normal(), normal()};
        Eigen::MatrixXcd rho = g * g.adjoint();
        rho /= rho.trace().real();
        return 0.5 * (rho + rho.adjoint());
    }

private:
    std::mt19937_64 engine_;
};

} // namespace oracle
