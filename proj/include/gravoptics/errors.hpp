#pragma once

#include <stdexcept>
#include <string>

namespace gravoptics
{

/// Base class for every failure raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation point lies inside the exclusion radius of a point source.
class SourceSingularity : public Error
{
public:
    using Error::Error;
};

/// Adaptive quadrature could not reach its tolerance within the subdivision budget.
class QuadratureFailure : public Error
{
public:
    using Error::Error;
};

/// (1 + m^2/2k^2)|Phi| exceeds the perturbative threshold; use the WKB routines instead.
class PerturbativeGuardViolation : public Error
{
public:
    using Error::Error;
};

/// A path segment is not parallel to the wavevector.
class PathNotAligned : public Error
{
public:
    using Error::Error;
};

/// Refractive index requested for a repulsive (Phi > 0) potential.
class PositivePotential : public Error
{
public:
    using Error::Error;
};

/// WKB phase requested through a region with q^2 <= 0.
class ClassicallyForbidden : public Error
{
public:
    using Error::Error;
    ClassicallyForbidden(const std::string& what, double arc_length)
        : Error(what), turning_point_(arc_length)
    {
    }
    /// Arc length along the path of the first turning point.
    double turning_point() const { return turning_point_; }

private:
    double turning_point_ = 0.0;
};

/// Wavelength is not short compared to the scale on which the potential varies.
class WkbValidityViolation : public Error
{
public:
    using Error::Error;
};

/// Generic validity check failure (em modes, composite-particle guards, detector size).
class ValidityViolation : public Error
{
public:
    using Error::Error;
};

class DimensionMismatch : public Error
{
public:
    using Error::Error;
};

/// A creation operator would push amplitude past the Fock-space truncation.
class TruncationOverflow : public Error
{
public:
    using Error::Error;
};

} // namespace gravoptics
