#pragma once

#include <Eigen/Core>

#include <complex>
#include <map>
#include <memory>
#include <vector>

namespace gravoptics
{

using cplx = std::complex<double>;

/// rho^n_m = <a^dagger_m a_n> over a finite mode set.
///
/// Stored with row = n (annihilated mode) and column = m (created mode). The
/// matrix is Hermitian and positive semidefinite; its trace is the mean
/// particle number.
class OneParticleDensityMatrix
{
public:
    explicit OneParticleDensityMatrix(Eigen::MatrixXcd rho);

    static OneParticleDensityMatrix vacuum(int modes);
    /// One particle in mode i.
    static OneParticleDensityMatrix single(int modes, int i);

    int size() const { return static_cast<int>(rho_.rows()); }
    /// rho^n_m
    cplx operator()(int n, int m) const { return rho_(n, m); }
    /// <a^dagger_i a_j>
    cplx expect_adag_a(int i, int j) const { return rho_(j, i); }
    double trace() const { return rho_.trace().real(); }
    const Eigen::MatrixXcd& matrix() const { return rho_; }

private:
    Eigen::MatrixXcd rho_;
};

/// Occupation-number basis with a per-mode cap and a total-number cap.
class FockBasis
{
public:
    FockBasis(int modes, int per_mode_cap = 4, int total_cap = 6);

    int modes() const { return modes_; }
    int per_mode_cap() const { return per_mode_cap_; }
    int total_cap() const { return total_cap_; }
    std::size_t dimension() const { return occupations_.size(); }

    const std::vector<int>& occupation(std::size_t index) const { return occupations_[index]; }
    /// Index of an occupation tuple, or -1 if it lies outside the truncation.
    long index_of(const std::vector<int>& occupation) const;

private:
    int modes_;
    int per_mode_cap_;
    int total_cap_;
    std::vector<std::vector<int>> occupations_;
    std::map<std::vector<int>, long> lookup_;
};

/// Dense state vector in a truncated bosonic Fock space. Immutable by convention:
/// every operator returns a new state.
class FockState
{
public:
    explicit FockState(std::shared_ptr<const FockBasis> basis);
    FockState(std::shared_ptr<const FockBasis> basis, Eigen::VectorXcd amplitudes);

    static FockState vacuum(int modes, int per_mode_cap = 4, int total_cap = 6);

    const FockBasis& basis() const { return *basis_; }
    std::shared_ptr<const FockBasis> basis_ptr() const { return basis_; }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    cplx amplitude(const std::vector<int>& occupation) const;

    double norm() const { return amplitudes_.norm(); }
    FockState normalized() const;
    cplx inner(const FockState& other) const; ///< <this|other>

    FockState operator+(const FockState& other) const;
    FockState operator-(const FockState& other) const;
    FockState operator*(cplx s) const;

private:
    std::shared_ptr<const FockBasis> basis_;
    Eigen::VectorXcd amplitudes_;
};

/// a^dagger_i |psi>. Throws TruncationOverflow if non-zero amplitude would leave the truncation.
FockState apply_creation(const FockState& state, int mode);
/// a_i |psi>.
FockState apply_annihilation(const FockState& state, int mode);
/// exp(i phase n_i) |psi>.
FockState apply_mode_phase(const FockState& state, int mode, double phase);

/// rho^n_m = <psi| a^dagger_m a_n |psi> computed as <a_m psi | a_n psi>.
OneParticleDensityMatrix one_particle_rho(const FockState& state);

/// 1/2 (1+c^2)^{-1/2} [(a1^dag)^2 + (a2^dag)^2 + 2 c e^{i chi} a1^dag a2^dag] |0>.
FockState build_hom_state(double c, double chi);

} // namespace gravoptics
