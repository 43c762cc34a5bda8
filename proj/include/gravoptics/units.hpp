#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gravoptics::units
{

// CODATA 2018. c, h-bar and eV are exact by definition of the SI.
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kGravitational = 6.67430e-11;    // m^3 kg^-1 s^-2
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27; // kg
inline constexpr double kElectronVolt = 1.602176634e-19; // J
/// h-bar c in eV m.
inline constexpr double kHbarC = kHbar * kSpeedOfLight / kElectronVolt;
inline constexpr const char* kConstantsTable = "CODATA-2018";

/// Physical dimension of a configuration quantity, with its geometric-unit target:
///   Length            -> m
///   InverseLength     -> 1/m   (energies, masses, frequencies, wavenumbers: E/(h-bar c), m c/h-bar, w/c)
///   SourceStrength    -> m     (GM/c^2)
///   Acceleration      -> 1/m   (g/c^2)
///   Velocity          -> 1     (v/c)
///   Time              -> m     (c t)
///   Angle             -> rad
///   Dimensionless     -> 1
enum class Dimension
{
    Length,
    InverseLength,
    SourceStrength,
    Acceleration,
    Velocity,
    Time,
    Angle,
    Dimensionless,
};

std::string_view dimension_name(Dimension d);

/// Units accepted for a dimension, the geometric unit first.
std::vector<std::string> accepted_units(Dimension d);

/// Converts value in `unit` to geometric units. Throws std::invalid_argument
/// naming the unit when it is not accepted for the dimension.
double to_geometric(double value, std::string_view unit, Dimension d);
/// Inverse of to_geometric.
double from_geometric(double value, std::string_view unit, Dimension d);

/// Convenience conversions used for output columns.
inline double per_metre_to_ev(double x) { return x * kHbarC; }
inline double ev_to_per_metre(double e) { return e / kHbarC; }

} // namespace gravoptics::units
