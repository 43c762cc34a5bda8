#include "gravoptics/detection.hpp"

#include "gravoptics/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gravoptics
{

namespace
{

constexpr double kKernelCut = 6.0;
constexpr int kSmearingOrder = 48;

struct Node
{
    double s;
    double w;
};

// Gauss-Legendre nodes on [-6 sigma, 6 sigma] weighted by the normalized Gaussian,
// renormalized so the weights sum to one.
std::vector<Node> gaussian_nodes(double sigma, int order)
{
    if (sigma == 0.0)
        return {{0.0, 1.0}};
    std::vector<double> x, w;
    gauss_legendre(order, x, w);
    std::vector<Node> out(order);
    double total = 0.0;
    for (int i = 0; i < order; ++i)
    {
        const double s = kKernelCut * sigma * x[i];
        out[i] = {s, w[i] * std::exp(-0.5 * s * s / (sigma * sigma))};
        total += out[i].w;
    }
    for (auto& n : out)
        n.w /= total;
    return out;
}

// integral g(s) cos(q s / 2) ds for the truncated Gaussian g.
double gaussian_characteristic(double sigma, double q, int order)
{
    double sum = 0.0;
    for (const auto& n : gaussian_nodes(sigma, order))
        sum += n.w * std::cos(0.5 * q * n.s);
    return sum;
}

std::vector<Eigen::VectorXcd> sample_modes(std::span<const FieldMode> modes, const Vec3& x)
{
    std::vector<Eigen::VectorXcd> out;
    out.reserve(modes.size());
    for (const auto& m : modes)
    {
        out.push_back(m.profile(x));
        if (out.back().size() != out.front().size())
            throw DimensionMismatch("modes have different numbers of components");
    }
    return out;
}

void check_rho(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho)
{
    if (rho.size() != static_cast<int>(modes.size()))
        throw DimensionMismatch("density matrix dimension " + std::to_string(rho.size()) + " != mode count " +
                                std::to_string(modes.size()));
}

// S(n, m) = sum_p w_p f_n(x - y_p/2) . conj(f_m(x + y_p/2)) over spatial points.
Eigen::MatrixXcd spatial_overlap(std::span<const FieldMode> modes, const Vec3& x,
                                 const std::vector<std::pair<Vec3, double>>& points)
{
    const int n_modes = static_cast<int>(modes.size());
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n_modes, n_modes);
    for (const auto& [y, w] : points)
    {
        const auto minus = sample_modes(modes, x - 0.5 * y);
        const auto plus = sample_modes(modes, x + 0.5 * y);
        for (int n = 0; n < n_modes; ++n)
            for (int m = 0; m < n_modes; ++m)
                s(n, m) += w * plus[m].dot(minus[n]);
    }
    return s;
}

double contract(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho, double t,
                const Eigen::MatrixXcd& space, const Eigen::MatrixXd& time)
{
    using namespace std::complex_literals;
    cplx sum = 0.0;
    for (std::size_t n = 0; n < modes.size(); ++n)
        for (std::size_t m = 0; m < modes.size(); ++m)
            sum += rho(n, m) * space(n, m) * time(n, m) * std::exp(-1i * (modes[n].omega - modes[m].omega) * t);
    return sum.real();
}

double qtp_gaussian(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho, double t, const Vec3& x,
                    const GaussianKernel& k, int order)
{
    const int n_modes = static_cast<int>(modes.size());
    Eigen::MatrixXd time(n_modes, n_modes);
    for (int n = 0; n < n_modes; ++n)
        for (int m = 0; m < n_modes; ++m)
            time(n, m) = gaussian_characteristic(k.sigma_t, modes[n].omega + modes[m].omega, order);

    const auto nodes = gaussian_nodes(k.sigma_y, order);
    std::vector<std::pair<Vec3, double>> points;
    points.reserve(nodes.size() * nodes.size() * nodes.size());
    for (const auto& a : nodes)
        for (const auto& b : nodes)
            for (const auto& c : nodes)
                points.emplace_back(Vec3(a.s, b.s, c.s), a.w * b.w * c.w);
    return contract(modes, rho, t, spatial_overlap(modes, x, points), time);
}

double qtp_sampled(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho, double t, const Vec3& x,
                   const SampledKernel& k)
{
    using namespace std::complex_literals;
    cplx sum = 0.0;
    for (const auto& p : k.points)
    {
        const auto minus = sample_modes(modes, x - 0.5 * p.y);
        const auto plus = sample_modes(modes, x + 0.5 * p.y);
        for (std::size_t n = 0; n < modes.size(); ++n)
            for (std::size_t m = 0; m < modes.size(); ++m)
                sum += p.weight * rho(n, m) * plus[m].dot(minus[n]) *
                       std::exp(1i * (modes[m].omega * (t + 0.5 * p.tau) - modes[n].omega * (t - 0.5 * p.tau)));
    }
    return sum.real();
}

} // namespace

double glauber_single(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho, double t,
                      const Vec3& x)
{
    check_rho(modes, rho);
    const auto f = sample_modes(modes, x);
    using namespace std::complex_literals;
    cplx sum = 0.0;
    for (std::size_t n = 0; n < modes.size(); ++n)
        for (std::size_t m = 0; m < modes.size(); ++m)
            sum += rho(n, m) * f[m].dot(f[n]) * std::exp(-1i * (modes[n].omega - modes[m].omega) * t);
    return sum.real();
}

DetectorKernel::DetectorKernel(GaussianKernel k) : family_(k)
{
    if (k.sigma_t < 0.0 || k.sigma_y < 0.0)
        throw std::invalid_argument("Gaussian kernel widths must be non-negative");
}

DetectorKernel::DetectorKernel(SampledKernel k)
{
    if (k.points.empty())
        throw std::invalid_argument("sampled kernel has no points");
    double total = 0.0;
    for (const auto& p : k.points)
    {
        total += p.weight;
        const double scale = 1e-12 * std::max({1.0, std::abs(p.tau), p.y.norm()});
        bool mirrored = false;
        for (const auto& q : k.points)
            if (std::abs(q.tau + p.tau) <= scale && (q.y + p.y).norm() <= scale &&
                std::abs(q.weight - p.weight) <= 1e-12 * std::abs(p.weight))
            {
                mirrored = true;
                break;
            }
        if (!mirrored)
            throw std::invalid_argument("sampled kernel is not symmetric under Y -> -Y");
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("sampled kernel weights must sum to 1");
    family_ = std::move(k);
}

double qtp_single(std::span<const FieldMode> modes, const OneParticleDensityMatrix& rho, double t, const Vec3& x,
                  const DetectorKernel& kernel, const QtpOptions& options)
{
    check_rho(modes, rho);
    if (std::holds_alternative<DeltaKernel>(kernel.family()))
        return qtp_sampled(modes, rho, t, x, SampledKernel{{{0.0, Vec3::Zero(), 1.0}}});
    if (const auto* s = std::get_if<SampledKernel>(&kernel.family()))
        return qtp_sampled(modes, rho, t, x, *s);

    const auto& g = std::get<GaussianKernel>(kernel.family());
    if (options.orders.empty())
        throw std::invalid_argument("QtpOptions::orders is empty");
    double previous = qtp_gaussian(modes, rho, t, x, g, options.orders.front());
    for (std::size_t i = 1; i < options.orders.size(); ++i)
    {
        const double current = qtp_gaussian(modes, rho, t, x, g, options.orders[i]);
        if (std::abs(current - previous) <= options.rel_tol * std::abs(current))
            return current;
        previous = current;
    }
    if (options.orders.size() == 1 || previous == 0.0)
        return previous;
    std::ostringstream os;
    os << "QTP kernel quadrature did not converge to " << options.rel_tol << " with Gauss-Legendre order "
       << options.orders.back();
    throw QuadratureFailure(os.str());
}

WavePacket1D::WavePacket1D(std::vector<double> k, Eigen::MatrixXcd rho, std::vector<double> weights)
    : k_(std::move(k)), rho_(std::move(rho)), weights_(std::move(weights))
{
    const auto n = static_cast<Eigen::Index>(k_.size());
    if (rho_.rows() != n || rho_.cols() != n)
        throw DimensionMismatch("wave packet density matrix does not match the k grid");
    if (weights_.empty())
        weights_.assign(k_.size(), 1.0);
    if (weights_.size() != k_.size())
        throw DimensionMismatch("wave packet weights do not match the k grid");
    for (double w : weights_)
        if (!(w > 0.0))
            throw std::invalid_argument("wave packet quadrature weights must be positive");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("wave packet density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("wave packet density matrix is not positive semidefinite");
    if (std::abs(rho_.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("wave packet density matrix must have unit trace");
}

WavePacket1D WavePacket1D::pure(std::vector<double> k, const std::vector<double>& weights,
                                const std::vector<cplx>& psi)
{
    if (weights.size() != k.size() || psi.size() != k.size())
        throw DimensionMismatch("wave packet grid, weights and amplitudes differ in length");
    Eigen::VectorXcd v(k.size());
    for (std::size_t i = 0; i < k.size(); ++i)
        v(i) = std::sqrt(weights[i]) * psi[i];
    v /= v.norm();
    return WavePacket1D(std::move(k), v * v.adjoint(), weights);
}

WavePacket1D WavePacket1D::gaussian(double k0, double sigma_k, double x0, int nodes)
{
    if (!(sigma_k > 0.0) || k0 <= 8.0 * sigma_k)
        throw std::invalid_argument("Gaussian packet needs 0 < 8 sigma_k < k0 (right movers only)");
    std::vector<double> x, w;
    gauss_legendre(nodes, x, w);
    std::vector<double> k(nodes), weights(nodes);
    std::vector<cplx> psi(nodes);
    const double half = 8.0 * sigma_k;
    for (int i = 0; i < nodes; ++i)
    {
        k[i] = k0 + half * x[i];
        weights[i] = half * w[i];
        const double d = k[i] - k0;
        psi[i] = std::polar(std::exp(-d * d / (4.0 * sigma_k * sigma_k)), -k[i] * x0);
    }
    return pure(std::move(k), weights, psi);
}

double WavePacket1D::flat_density(double x, double t, const DetectorKernel& kernel) const
{
    const auto n = static_cast<Eigen::Index>(k_.size());
    const double s = x - t;
    Eigen::VectorXcd u(n);
    for (Eigen::Index i = 0; i < n; ++i)
        u(i) = std::polar(std::sqrt(weights_[i]), k_[i] * s);

    // rho(k,k') pairs with e^{i(k - k') s} = u_k conj(u_k')
    if (std::holds_alternative<DeltaKernel>(kernel.family()))
        return (u.transpose() * rho_ * u.conjugate()).value().real() / (2.0 * std::numbers::pi);

    // K~(k, k') = integral K(tau, y) e^{-i(k + k')(y - tau)/2}; y is the
    // component of the spatial offset along the propagation axis.
    Eigen::MatrixXcd smeared(n, n);
    if (const auto* g = std::get_if<GaussianKernel>(&kernel.family()))
    {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
            {
                const double q = k_[i] + k_[j];
                smeared(i, j) = rho_(i, j) * gaussian_characteristic(g->sigma_t, q, kSmearingOrder) *
                                gaussian_characteristic(g->sigma_y, q, kSmearingOrder);
            }
    }
    else
    {
        const auto& pts = std::get<SampledKernel>(kernel.family()).points;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
            {
                cplx f = 0.0;
                for (const auto& p : pts)
                    f += p.weight * std::polar(1.0, -0.5 * (k_[i] + k_[j]) * (p.y(0) - p.tau));
                smeared(i, j) = rho_(i, j) * f;
            }
    }
    return (u.transpose() * smeared * u.conjugate()).value().real() / (2.0 * std::numbers::pi);
}

TimeOfArrival time_of_arrival_density(const WavePacket1D& packet, const PotentialField& field, double L,
                                      const std::vector<double>& times, const DetectorKernel& kernel,
                                      const Vec3& source, const Vec3& direction, double detector_size)
{
    if (!(L > 0.0))
        throw std::invalid_argument("time of arrival: L must be positive");
    const Vec3 dir = direction.normalized();
    const Vec3 detector = source + L * dir;
    if (detector_size > 0.0)
    {
        const double h = field.hessian(detector).norm();
        const double scale = h > 0.0 ? field.gradient(detector).norm() / h : std::numeric_limits<double>::infinity();
        if (detector_size >= scale)
        {
            std::ostringstream os;
            os << "detector size " << detector_size << " is not small compared to the potential variation length "
               << scale;
            throw ValidityViolation(os.str());
        }
    }
    const double dx =
        optical_shift_deltax(ParticleSpec::massless(dir), field, PathPolyline::segment(source, detector));

    TimeOfArrival out;
    out.times = times;
    out.delta_x = dx;
    out.density.reserve(times.size());
    out.flat_density.reserve(times.size());
    for (double t : times)
    {
        out.density.push_back(packet.flat_density(L + dx, t, kernel));
        out.flat_density.push_back(packet.flat_density(L, t, kernel));
    }
    return out;
}

void InternalState::validate(std::size_t levels) const
{
    const auto n = static_cast<Eigen::Index>(levels);
    if (rho.rows() != n || rho.cols() != n)
        throw DimensionMismatch("internal density matrix is " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + ", expected " + std::to_string(levels) + " levels");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("internal density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("internal density matrix is not positive semidefinite");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("internal density matrix must have unit trace");
}

double internal_oscillation_phase(const CompositeParticleSpec& cp, std::size_t a, std::size_t b,
                                  const PotentialField& field, const PathPolyline& path, double t,
                                  double preparation_phase, const QuadratureSpec& spec)
{
    const double ea = cp.level(a), eb = cp.level(b);
    const double k2 = cp.k.squaredNorm();
    const double ma = cp.m0 + ea, mb = cp.m0 + eb;
    const double wa = std::sqrt(k2 + ma * ma), wb = std::sqrt(k2 + mb * mb);
    const double dw = (ea - eb) * (ma + mb) / (wa + wb);
    const double dphi = internal_phase_shift(cp, a, field, path, spec) - internal_phase_shift(cp, b, field, path, spec);
    return dphi - dw * t + preparation_phase * (ea - eb);
}

double internal_dof_detection(const InternalState& state, const CompositeParticleSpec& cp,
                              const PotentialField& field, const PathPolyline& path, double t,
                              const QuadratureSpec& spec)
{
    cp.validate();
    state.validate(cp.levels.size());
    const double amp = wkb_amplitude(cp.ground(), field, path.end());
    const double f2 = amp * amp;
    cplx sum = 0.0;
    for (std::size_t a = 0; a < cp.levels.size(); ++a)
        for (std::size_t b = 0; b < cp.levels.size(); ++b)
        {
            const cplx r = state.rho(a, b);
            if (r == cplx{0.0})
                continue;
            sum += r * std::polar(1.0, internal_oscillation_phase(cp, a, b, field, path, t, state.preparation_phase,
                                                                  spec));
        }
    return f2 * sum.real();
}

} // namespace gravoptics
