#include "gravoptics/fock.hpp"

#include "gravoptics/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <string>

namespace gravoptics
{

OneParticleDensityMatrix::OneParticleDensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho))
{
    if (rho_.rows() != rho_.cols())
        throw DimensionMismatch("density matrix must be square");
    if (rho_.size() == 0)
        return;
    const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw std::invalid_argument("density matrix is not Hermitian (defect " + std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("density matrix is not positive semidefinite");
}

OneParticleDensityMatrix OneParticleDensityMatrix::vacuum(int modes)
{
    return OneParticleDensityMatrix(Eigen::MatrixXcd::Zero(modes, modes));
}

OneParticleDensityMatrix OneParticleDensityMatrix::single(int modes, int i)
{
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(modes, modes);
    rho(i, i) = 1.0;
    return OneParticleDensityMatrix(rho);
}

FockBasis::FockBasis(int modes, int per_mode_cap, int total_cap)
    : modes_(modes), per_mode_cap_(per_mode_cap), total_cap_(total_cap)
{
    if (modes < 1 || per_mode_cap < 0 || total_cap < 0)
        throw std::invalid_argument("FockBasis: invalid mode count or caps");
    std::vector<int> occ(modes, 0);
    // odometer enumeration in lexicographic order
    while (true)
    {
        if (std::accumulate(occ.begin(), occ.end(), 0) <= total_cap)
        {
            lookup_[occ] = static_cast<long>(occupations_.size());
            occupations_.push_back(occ);
        }
        int pos = modes - 1;
        while (pos >= 0 && occ[pos] == per_mode_cap)
        {
            occ[pos] = 0;
            --pos;
        }
        if (pos < 0)
            break;
        ++occ[pos];
    }
}

long FockBasis::index_of(const std::vector<int>& occupation) const
{
    auto it = lookup_.find(occupation);
    return it == lookup_.end() ? -1 : it->second;
}

FockState::FockState(std::shared_ptr<const FockBasis> basis)
    : basis_(std::move(basis)), amplitudes_(Eigen::VectorXcd::Zero(basis_->dimension()))
{
}

FockState::FockState(std::shared_ptr<const FockBasis> basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes))
{
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dimension())
        throw DimensionMismatch("amplitude vector does not match the Fock basis dimension");
}

FockState FockState::vacuum(int modes, int per_mode_cap, int total_cap)
{
    auto basis = std::make_shared<const FockBasis>(modes, per_mode_cap, total_cap);
    FockState out(basis);
    out.amplitudes_(basis->index_of(std::vector<int>(modes, 0))) = 1.0;
    return out;
}

cplx FockState::amplitude(const std::vector<int>& occupation) const
{
    const long i = basis_->index_of(occupation);
    return i < 0 ? cplx{0.0} : amplitudes_(i);
}

FockState FockState::normalized() const
{
    const double n = norm();
    if (n == 0.0)
        throw std::invalid_argument("cannot normalize the zero vector");
    return FockState(basis_, amplitudes_ / n);
}

cplx FockState::inner(const FockState& other) const
{
    if (basis_ != other.basis_ && basis_->dimension() != other.basis_->dimension())
        throw DimensionMismatch("states live in different Fock spaces");
    return amplitudes_.dot(other.amplitudes_);
}

FockState FockState::operator+(const FockState& other) const
{
    return FockState(basis_, amplitudes_ + other.amplitudes_);
}

FockState FockState::operator-(const FockState& other) const
{
    return FockState(basis_, amplitudes_ - other.amplitudes_);
}

FockState FockState::operator*(cplx s) const { return FockState(basis_, amplitudes_ * s); }

namespace
{

void check_mode(const FockState& state, int mode)
{
    if (mode < 0 || mode >= state.basis().modes())
        throw std::out_of_range("mode index " + std::to_string(mode) + " out of range");
}

} // namespace

FockState apply_creation(const FockState& state, int mode)
{
    check_mode(state, mode);
    const auto& basis = state.basis();
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis.dimension());
    for (std::size_t i = 0; i < basis.dimension(); ++i)
    {
        const cplx a = state.amplitudes()(i);
        if (a == cplx{0.0})
            continue;
        std::vector<int> occ = basis.occupation(i);
        const int n = occ[mode];
        ++occ[mode];
        const long j = basis.index_of(occ);
        if (j < 0)
            throw TruncationOverflow("creation on mode " + std::to_string(mode) +
                                     " exceeds the Fock truncation (per-mode cap " +
                                     std::to_string(basis.per_mode_cap()) + ", total cap " +
                                     std::to_string(basis.total_cap()) + ")");
        amps(j) += std::sqrt(static_cast<double>(n + 1)) * a;
    }
    return FockState(state.basis_ptr(), amps);
}

FockState apply_annihilation(const FockState& state, int mode)
{
    check_mode(state, mode);
    const auto& basis = state.basis();
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis.dimension());
    for (std::size_t i = 0; i < basis.dimension(); ++i)
    {
        std::vector<int> occ = basis.occupation(i);
        const int n = occ[mode];
        if (n == 0)
            continue;
        --occ[mode];
        amps(basis.index_of(occ)) += std::sqrt(static_cast<double>(n)) * state.amplitudes()(i);
    }
    return FockState(state.basis_ptr(), amps);
}

FockState apply_mode_phase(const FockState& state, int mode, double phase)
{
    check_mode(state, mode);
    const auto& basis = state.basis();
    Eigen::VectorXcd amps = state.amplitudes();
    for (std::size_t i = 0; i < basis.dimension(); ++i)
        amps(i) *= std::polar(1.0, phase * basis.occupation(i)[mode]);
    return FockState(state.basis_ptr(), amps);
}

OneParticleDensityMatrix one_particle_rho(const FockState& state)
{
    const int modes = state.basis().modes();
    std::vector<FockState> lowered;
    lowered.reserve(modes);
    for (int n = 0; n < modes; ++n)
        lowered.push_back(apply_annihilation(state, n));
    Eigen::MatrixXcd rho(modes, modes);
    for (int n = 0; n < modes; ++n)
        for (int m = 0; m < modes; ++m)
            rho(n, m) = lowered[m].inner(lowered[n]);
    return OneParticleDensityMatrix(rho);
}

FockState build_hom_state(double c, double chi)
{
    if (!(c >= 0.0))
        throw std::invalid_argument("build_hom_state: c must be non-negative");
    const FockState vac = FockState::vacuum(2);
    const FockState a1a1 = apply_creation(apply_creation(vac, 0), 0);
    const FockState a2a2 = apply_creation(apply_creation(vac, 1), 1);
    const FockState a1a2 = apply_creation(apply_creation(vac, 1), 0);
    const cplx prefactor = 0.5 / std::sqrt(1.0 + c * c);
    FockState psi = (a1a1 + a2a2 + a1a2 * (2.0 * c * std::polar(1.0, chi))) * prefactor;
    if (std::abs(psi.norm() - 1.0) > 1e-12)
        throw std::logic_error("HOM state normalization failed");
    return psi;
}

} // namespace gravoptics
