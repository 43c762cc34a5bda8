#pragma once

#include "gravoptics/em_modes.hpp"
#include "gravoptics/fock.hpp"
#include "gravoptics/path.hpp"
#include "gravoptics/potential.hpp"

#include <Eigen/Core>

#include <vector>

namespace gravoptics
{

/// T = (1/sqrt 2) [[1, i], [i, 1]].
Eigen::Matrix2cd beam_splitter_matrix();

/// Two arms from the first beam splitter (common start) to the recombiner
/// (common end), and the two detector positions.
///
/// Orientation: the loop integral is taken along arm 2 forward and arm 1
/// backward, and delta_L() = length(arm2) - length(arm1), so that
/// Delta L = delta L - 2 loop integral is the extra optical length of arm 2.
class InterferometerGeometry
{
public:
    InterferometerGeometry(PathPolyline arm1, PathPolyline arm2, Vec3 detector1 = Vec3::Zero(),
                           Vec3 detector2 = Vec3::Zero());

    /// Arm 1 goes d along y then h along x; arm 2 goes h along x then d along y.
    /// Arm 2 therefore runs along the far side x = h.
    static InterferometerGeometry rectangle(double h, double d, const Vec3& origin = Vec3::Zero());

    const PathPolyline& arm1() const { return arm1_; }
    const PathPolyline& arm2() const { return arm2_; }
    const Vec3& detector1() const { return detector1_; }
    const Vec3& detector2() const { return detector2_; }

    double delta_L() const { return arm2_.length() - arm1_.length(); }
    /// Closed loop: arm 2 forward, then arm 1 backward.
    PathPolyline loop() const;

private:
    PathPolyline arm1_;
    PathPolyline arm2_;
    Vec3 detector1_;
    Vec3 detector2_;
};

struct OpticalPathDifference
{
    double delta_L;       ///< coordinate length difference
    double loop_integral; ///< integral of Phi around the loop
    double Delta_L;       ///< delta_L - 2 loop_integral
    double delta_S;       ///< delta_L - loop_integral; Delta_L = delta_S - loop_integral
};

OpticalPathDifference optical_path_difference(const InterferometerGeometry& geom, const PotentialField& field,
                                              const QuadratureSpec& spec = {});

struct DetectorPair
{
    double p1;
    double p2;
};

/// Mach-Zehnder probabilities up to the common constant C.
///
/// The recombiner sees arm 2 with the extra phase omega Delta L; the output
/// amplitudes are U = T diag(1, e^{i omega Delta L}) T and
/// P_j = A_j sum_ab conj(U_ja) U_jb <a_a^dag a_b>, which expands to
///   P1 = A1 [sin^2(x/2) n1 + cos^2(x/2) n2 - sin(x) Re<a1^dag a2>],
///   P2 = A2 [cos^2(x/2) n1 + sin^2(x/2) n2 + sin(x) Re<a1^dag a2>],  x = omega Delta L.
/// A_j are the detector amplitude factors |f_j(x_j)|^2 (2 pi)^3 / omega^2.
DetectorPair mach_zehnder_probabilities(double Delta_L, double omega, const OneParticleDensityMatrix& rho,
                                        double a1 = 1.0, double a2 = 1.0);

/// Output-port amplitudes U_ja for the given phase difference.
Eigen::Matrix2cd mach_zehnder_transfer(double phase);

/// Hong-Ou-Mandel: one beam splitter, input f2(x0) = i f1(x0) e^{i omega Delta L}, so
///   P1 = A1 (n1 + n2 - 2 Re(e^{ix} <a1^dag a2>)) / 2,
///   P2 = A2 (n1 + n2 + 2 Re(e^{ix} <a1^dag a2>)) / 2.
DetectorPair hong_ou_mandel_probabilities(double Delta_L, double omega, const OneParticleDensityMatrix& rho,
                                          double a1 = 1.0, double a2 = 1.0);

/// Same, with rho built from the two-mode state
/// (1/2)(1+c^2)^{-1/2} [(a1^dag)^2 + (a2^dag)^2 + 2c e^{i chi} a1^dag a2^dag] |0>.
DetectorPair hong_ou_mandel_probabilities(double Delta_L, double omega, double c, double chi, double a1 = 1.0,
                                          double a2 = 1.0);

/// Detector channel: the em mode that reaches a detector, described by the
/// aligned path from its sigma = 0 reference point to the detector.
struct DetectorChannel
{
    PathPolyline path;
    PolarizationBasis basis;
    int lambda = 1;
};

struct ChannelFactor
{
    double amplitude_factor; ///< |f|^2 (2 pi)^3 / omega^2
    double theta;
    double phi;
};

ChannelFactor detector_channel_factor(const DetectorChannel& channel, double omega, const PotentialField& field,
                                      const EmModeOptions& options = {});

struct Visibility
{
    double first_order; ///< 1 + theta1 - theta2 + 2 Phi(x1) - 2 Phi(x2)
    double sweep;       ///< (B+ - B-)/(B+ + B-) from a phase sweep of delta P = P2 - P1
    double b_plus;
    double b_minus;
};

/// Fringe contrast for a single photon entering port 1.
///
/// delta P = P2 - P1 is swept over `steps` equally spaced phases in [0, 2 pi)
/// (rounded up to an even count so that 0 and pi are on the grid).
/// B+ = (max - min)/2 is the fringe amplitude and B- = (max + min)/2 the offset,
/// so the sweep value equals A1/A2.
Visibility mz_visibility(const ChannelFactor& c1, const ChannelFactor& c2, int steps = 64);

} // namespace gravoptics
