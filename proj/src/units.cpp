#include "gravoptics/units.hpp"

#include <numbers>
#include <stdexcept>

namespace gravoptics::units
{

namespace
{

struct Entry
{
    Dimension dim;
    const char* unit;
    double factor; // geometric value = factor * value
};

constexpr double c = kSpeedOfLight;
constexpr double c2 = kSpeedOfLight * kSpeedOfLight;

// Factors are written as divisions where that keeps the round trip exact.
const Entry kTable[] = {
    {Dimension::Length, "m", 1.0},
    {Dimension::Length, "km", 1e3},

    {Dimension::InverseLength, "1/m", 1.0},
    {Dimension::InverseLength, "eV", 1.0 / kHbarC},
    {Dimension::InverseLength, "J", 1.0 / (kHbar * c)},
    {Dimension::InverseLength, "amu", kAtomicMassUnit * c / kHbar},
    {Dimension::InverseLength, "kg", c / kHbar},
    {Dimension::InverseLength, "rad/s", 1.0 / c},
    {Dimension::InverseLength, "Hz", 2.0 * std::numbers::pi / c},

    {Dimension::SourceStrength, "m", 1.0},
    {Dimension::SourceStrength, "m^3/s^2", 1.0 / c2},
    {Dimension::SourceStrength, "kg", kGravitational / c2},

    {Dimension::Acceleration, "1/m", 1.0},
    {Dimension::Acceleration, "m/s^2", 1.0 / c2},

    {Dimension::Velocity, "c", 1.0},
    {Dimension::Velocity, "m/s", 1.0 / c},

    {Dimension::Time, "m", 1.0},
    {Dimension::Time, "s", c},

    {Dimension::Angle, "rad", 1.0},
    {Dimension::Angle, "deg", std::numbers::pi / 180.0},

    {Dimension::Dimensionless, "1", 1.0},
};

const Entry& lookup(std::string_view unit, Dimension d)
{
    for (const auto& e : kTable)
        if (e.dim == d && unit == e.unit)
            return e;
    std::string msg = "unit '" + std::string(unit) + "' is not valid for a " + std::string(dimension_name(d)) +
                      " (accepted:";
    for (const auto& u : accepted_units(d))
        msg += " " + u;
    throw std::invalid_argument(msg + ")");
}

} // namespace

std::string_view dimension_name(Dimension d)
{
    switch (d)
    {
    case Dimension::Length: return "length";
    case Dimension::InverseLength: return "inverse length (energy, mass, frequency or wavenumber)";
    case Dimension::SourceStrength: return "source strength (GM)";
    case Dimension::Acceleration: return "acceleration";
    case Dimension::Velocity: return "velocity";
    case Dimension::Time: return "time";
    case Dimension::Angle: return "angle";
    case Dimension::Dimensionless: return "dimensionless number";
    }
    return "?";
}

std::vector<std::string> accepted_units(Dimension d)
{
    std::vector<std::string> out;
    for (const auto& e : kTable)
        if (e.dim == d)
            out.emplace_back(e.unit);
    return out;
}

double to_geometric(double value, std::string_view unit, Dimension d) { return value * lookup(unit, d).factor; }

double from_geometric(double value, std::string_view unit, Dimension d) { return value / lookup(unit, d).factor; }

} // namespace gravoptics::units
