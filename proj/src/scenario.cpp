#include "gravoptics/scenario.hpp"

#include "gravoptics/detection.hpp"
#include "gravoptics/em_modes.hpp"
#include "gravoptics/interferometry.hpp"
#include "gravoptics/potential.hpp"
#include "gravoptics/scalar_modes.hpp"
#include "gravoptics/units.hpp"
#include "gravoptics/wkb_internal.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

namespace gravoptics
{

using json = nlohmann::json;
using units::Dimension;

const std::vector<ScenarioInfo>& scenario_catalog()
{
    static const std::vector<ScenarioInfo> catalog = {
        {ScenarioKind::PhaseShift, "phase_shift", "phase correction sigma and optical-length shift along a path"},
        {ScenarioKind::MachZehnder, "mach_zehnder", "Mach-Zehnder fringes with the gravitational loop term"},
        {ScenarioKind::HongOuMandel, "hong_ou_mandel", "two-photon HOM detection probabilities versus path difference"},
        {ScenarioKind::TimeOfArrival, "time_of_arrival", "arrival-time density of a massless packet"},
        {ScenarioKind::InternalDof, "internal_dof", "internal-level phase shifts, relative phase u, detection"},
        {ScenarioKind::TunnelingSpread, "tunneling_spread", "two-body barrier maximum and tunneling energy spread"},
        {ScenarioKind::PolarizationRotation, "polarization_rotation", "Theta tensor, polarization rotation and beta"},
    };
    return catalog;
}

std::string_view scenario_name(ScenarioKind kind)
{
    for (const auto& s : scenario_catalog())
        if (s.kind == kind)
            return s.name;
    return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name)
{
    for (const auto& s : scenario_catalog())
        if (name == s.name)
            return s.kind;
    return std::nullopt;
}

std::vector<double> SweepSpec::values() const
{
    std::vector<double> out;
    out.reserve(steps);
    for (int i = 0; i < steps; ++i)
        out.push_back(steps == 1 ? start : start + (stop - start) * i / (steps - 1));
    return out;
}

namespace
{

std::string diagnostics_text(const std::vector<Diagnostic>& d)
{
    std::string s;
    for (const auto& x : d)
        s += (s.empty() ? "" : "; ") + (x.path.empty() ? "/" : x.path) + ": " + x.message;
    return s;
}

} // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : Error("invalid configuration: " + diagnostics_text(diagnostics)), diagnostics_(std::move(diagnostics))
{
}

namespace
{

struct Context
{
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;

    void error(const std::string& path, const std::string& msg) { errors.push_back({path, msg}); }
    void warn(const std::string& path, const std::string& msg) { warnings.push_back({path, msg}); }
};

std::string at(const std::string& base, std::string_view key) { return base + "/" + std::string(key); }
std::string at(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

const json* find(const json& parent, const char* key)
{
    if (!parent.is_object())
        return nullptr;
    auto it = parent.find(key);
    return it == parent.end() ? nullptr : &*it;
}

// A quantity is a bare number (already geometric) or {"value": x, "unit": "..."}.
std::optional<double> quantity_node(Context& ctx, const json& node, const std::string& path, Dimension dim)
{
    double value;
    std::string unit;
    if (node.is_number())
        return node.get<double>();
    if (!node.is_object() || !node.contains("value") || !node["value"].is_number())
    {
        ctx.error(path, "expected a number or {\"value\": number, \"unit\": string}");
        return std::nullopt;
    }
    value = node["value"].get<double>();
    if (node.contains("unit"))
    {
        if (!node["unit"].is_string())
        {
            ctx.error(at(path, "unit"), "unit must be a string");
            return std::nullopt;
        }
        unit = node["unit"].get<std::string>();
    }
    if (!std::isfinite(value))
    {
        ctx.error(path, "value is not finite");
        return std::nullopt;
    }
    if (unit.empty())
        return value;
    try
    {
        return units::to_geometric(value, unit, dim);
    }
    catch (const std::invalid_argument& e)
    {
        ctx.error(at(path, "unit"), e.what());
        return std::nullopt;
    }
}

std::optional<double> quantity(Context& ctx, const json& parent, const std::string& base, const char* key,
                               Dimension dim, bool required = true)
{
    const json* node = find(parent, key);
    if (!node)
    {
        if (required)
            ctx.error(at(base, key), "missing required field");
        return std::nullopt;
    }
    return quantity_node(ctx, *node, at(base, key), dim);
}

std::optional<int> integer(Context& ctx, const json& parent, const std::string& base, const char* key,
                           bool required = true)
{
    const json* node = find(parent, key);
    if (!node)
    {
        if (required)
            ctx.error(at(base, key), "missing required field");
        return std::nullopt;
    }
    if (!node->is_number_integer())
    {
        ctx.error(at(base, key), "expected an integer");
        return std::nullopt;
    }
    return node->get<int>();
}

std::optional<std::string> string(Context& ctx, const json& parent, const std::string& base, const char* key,
                                  bool required = true)
{
    const json* node = find(parent, key);
    if (!node)
    {
        if (required)
            ctx.error(at(base, key), "missing required field");
        return std::nullopt;
    }
    if (!node->is_string())
    {
        ctx.error(at(base, key), "expected a string");
        return std::nullopt;
    }
    return node->get<std::string>();
}

std::optional<bool> boolean(Context& ctx, const json& parent, const std::string& base, const char* key)
{
    const json* node = find(parent, key);
    if (!node)
        return std::nullopt;
    if (!node->is_boolean())
    {
        ctx.error(at(base, key), "expected true or false");
        return std::nullopt;
    }
    return node->get<bool>();
}

// Array of numbers, optionally wrapped as {"value": [...], "unit": "..."}.
std::optional<std::vector<double>> number_array(Context& ctx, const json& node, const std::string& path,
                                                Dimension dim, std::string* unit_out = nullptr)
{
    const json* arr = &node;
    std::string unit;
    if (node.is_object())
    {
        arr = find(node, "value");
        if (node.contains("unit") && node["unit"].is_string())
            unit = node["unit"].get<std::string>();
    }
    if (!arr || !arr->is_array())
    {
        ctx.error(path, "expected an array or {\"value\": [...], \"unit\": string}");
        return std::nullopt;
    }
    if (unit_out)
        *unit_out = unit;
    std::vector<double> out;
    for (std::size_t i = 0; i < arr->size(); ++i)
    {
        if (!(*arr)[i].is_number())
        {
            ctx.error(at(path, i), "expected a number");
            return std::nullopt;
        }
        double v = (*arr)[i].get<double>();
        if (!unit.empty())
        {
            try
            {
                v = units::to_geometric(v, unit, dim);
            }
            catch (const std::invalid_argument& e)
            {
                ctx.error(at(path, "unit"), e.what());
                return std::nullopt;
            }
        }
        out.push_back(v);
    }
    return out;
}

std::optional<Vec3> vec3_node(Context& ctx, const json& node, const std::string& path, Dimension dim)
{
    auto v = number_array(ctx, node, path, dim);
    if (!v)
        return std::nullopt;
    if (v->size() != 3)
    {
        ctx.error(path, "expected three components");
        return std::nullopt;
    }
    return Vec3((*v)[0], (*v)[1], (*v)[2]);
}

std::optional<Vec3> vec3(Context& ctx, const json& parent, const std::string& base, const char* key, Dimension dim,
                         bool required = true)
{
    const json* node = find(parent, key);
    if (!node)
    {
        if (required)
            ctx.error(at(base, key), "missing required field");
        return std::nullopt;
    }
    return vec3_node(ctx, *node, at(base, key), dim);
}

// {"vertices": [[x,y,z], ...] or {"value": [[...]], "unit": "km"}, "closed": false}
std::optional<PathPolyline> path_node(Context& ctx, const json& node, const std::string& path)
{
    const json* verts = find(node, "vertices");
    if (!verts)
    {
        ctx.error(at(path, "vertices"), "missing required field");
        return std::nullopt;
    }
    const std::string vpath = at(path, "vertices");
    const json* list = verts;
    std::string unit;
    if (verts->is_object())
    {
        list = find(*verts, "value");
        if (verts->contains("unit") && (*verts)["unit"].is_string())
            unit = (*verts)["unit"].get<std::string>();
    }
    if (!list || !list->is_array())
    {
        ctx.error(vpath, "expected an array of 3-vectors");
        return std::nullopt;
    }
    std::vector<Vec3> vs;
    for (std::size_t i = 0; i < list->size(); ++i)
    {
        json item = unit.empty() ? (*list)[i] : json{{"value", (*list)[i]}, {"unit", unit}};
        auto v = vec3_node(ctx, item, at(vpath, i), Dimension::Length);
        if (!v)
            return std::nullopt;
        vs.push_back(*v);
    }
    const bool closed = boolean(ctx, node, path, "closed").value_or(false);
    try
    {
        return PathPolyline(std::move(vs), closed);
    }
    catch (const std::invalid_argument& e)
    {
        ctx.error(vpath, e.what());
        return std::nullopt;
    }
}

std::optional<PathPolyline> path_field(Context& ctx, const json& parent, const std::string& base, const char* key,
                                       bool required = true)
{
    const json* node = find(parent, key);
    if (!node)
    {
        if (required)
            ctx.error(at(base, key), "missing required field");
        return std::nullopt;
    }
    return path_node(ctx, *node, at(base, key));
}

std::optional<PotentialField> potential_node(Context& ctx, const json& node, const std::string& path)
{
    auto model = string(ctx, node, path, "model");
    if (!model)
        return std::nullopt;
    const double excl = quantity(ctx, node, path, "exclusion_factor", Dimension::Dimensionless, false).value_or(1e-6);
    if (*model == "homogeneous")
    {
        auto g = quantity(ctx, node, path, "g", Dimension::Acceleration);
        if (g)
            return PotentialField(Homogeneous{*g});
    }
    else if (*model == "point_mass")
    {
        auto gm = quantity(ctx, node, path, "gm", Dimension::SourceStrength);
        auto centre = vec3(ctx, node, path, "centre", Dimension::Length, false);
        if (gm && *gm < 0.0)
            ctx.error(at(path, "gm"), "source strength must be non-negative");
        else if (gm)
            return PotentialField(PointMass{*gm, centre.value_or(Vec3::Zero()), excl});
    }
    else if (*model == "two_body")
    {
        auto gm1 = quantity(ctx, node, path, "gm1", Dimension::SourceStrength);
        auto gm2 = quantity(ctx, node, path, "gm2", Dimension::SourceStrength);
        auto r = quantity(ctx, node, path, "separation", Dimension::Length);
        if (gm1 && gm2 && r)
        {
            if (*gm1 <= 0.0 || *gm2 <= 0.0)
                ctx.error(path, "two-body source strengths must be positive");
            else if (*r <= 0.0)
                ctx.error(at(path, "separation"), "separation must be positive");
            else
                return PotentialField(TwoBody{*gm1, *gm2, *r, excl});
        }
    }
    else if (*model == "superposition")
    {
        const json* terms = find(node, "terms");
        if (!terms || !terms->is_array() || terms->empty())
        {
            ctx.error(at(path, "terms"), "expected a non-empty array of potentials");
            return std::nullopt;
        }
        Superposition s;
        for (std::size_t i = 0; i < terms->size(); ++i)
        {
            auto t = potential_node(ctx, (*terms)[i], at(at(path, "terms"), i));
            if (!t)
                return std::nullopt;
            s.terms.push_back(*t);
        }
        return PotentialField(std::move(s));
    }
    else
        ctx.error(at(path, "model"), "unknown potential model '" + *model +
                                         "' (expected homogeneous, point_mass, two_body or superposition)");
    return std::nullopt;
}

std::optional<PotentialField> potential(Context& ctx, const json& doc)
{
    const json* node = find(doc, "potential");
    if (!node)
    {
        ctx.error("/potential", "missing required field");
        return std::nullopt;
    }
    return potential_node(ctx, *node, "/potential");
}

std::optional<std::vector<double>> grid(Context& ctx, const json& parent, const std::string& base, const char* key,
                                        Dimension dim, bool required = true)
{
    const json* node = find(parent, key);
    if (!node)
    {
        if (required)
            ctx.error(at(base, key), "missing required field");
        return std::nullopt;
    }
    const std::string path = at(base, key);
    auto start = quantity(ctx, *node, path, "start", dim);
    auto stop = quantity(ctx, *node, path, "stop", dim);
    auto steps = integer(ctx, *node, path, "steps");
    if (!start || !stop || !steps)
        return std::nullopt;
    if (*steps < 1)
    {
        ctx.error(at(path, "steps"), "steps must be at least 1");
        return std::nullopt;
    }
    return SweepSpec{"", "", *start, *stop, *steps}.values();
}

// Particle: mass (default 0) plus exactly one of omega / wavenumber, and a direction.
std::optional<ParticleSpec> particle(Context& ctx, const json& doc, const std::string& base,
                                     std::optional<Vec3> default_direction)
{
    const json* node = find(doc, "particle");
    if (!node)
    {
        ctx.error(at(base, "particle"), "missing required field");
        return std::nullopt;
    }
    const std::string path = at(base, "particle");
    const double mass = quantity(ctx, *node, path, "mass", Dimension::InverseLength, false).value_or(0.0);
    auto omega = quantity(ctx, *node, path, "omega", Dimension::InverseLength, false);
    auto wavenumber = quantity(ctx, *node, path, "wavenumber", Dimension::InverseLength, false);
    auto dir = vec3(ctx, *node, path, "direction", Dimension::Dimensionless, false);
    if (!dir)
        dir = default_direction;
    if (mass < 0.0)
        ctx.error(at(path, "mass"), "mass must be non-negative");
    if (omega.has_value() == wavenumber.has_value())
    {
        ctx.error(path, "give exactly one of omega or wavenumber");
        return std::nullopt;
    }
    if (!dir || dir->norm() == 0.0)
    {
        ctx.error(at(path, "direction"), "direction is required and must be non-zero");
        return std::nullopt;
    }
    double k;
    if (omega)
    {
        if (!(*omega > mass))
        {
            ctx.error(at(path, "omega"), "off shell: omega must exceed the mass (omega^2 - m^2 = |k|^2 > 0)");
            return std::nullopt;
        }
        k = std::sqrt((*omega - mass) * (*omega + mass));
    }
    else
    {
        k = *wavenumber;
        if (!(k > 0.0))
        {
            ctx.error(at(path, "wavenumber"), "wavenumber must be positive");
            return std::nullopt;
        }
    }
    return ParticleSpec::from_wavevector(mass, k * dir->normalized());
}

std::optional<Eigen::MatrixXcd> complex_matrix(Context& ctx, const json& node, const std::string& path, int n)
{
    if (!node.is_array() || static_cast<int>(node.size()) != n)
    {
        ctx.error(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        return std::nullopt;
    }
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
    {
        const json& row = node[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
        {
            ctx.error(at(path, i), "expected a row of " + std::to_string(n) + " entries");
            return std::nullopt;
        }
        for (int j = 0; j < n; ++j)
        {
            const json& x = row[j];
            if (x.is_number())
                m(i, j) = x.get<double>();
            else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number())
                m(i, j) = cplx(x[0].get<double>(), x[1].get<double>());
            else
            {
                ctx.error(at(at(path, i), j), "expected a number or [re, im]");
                return std::nullopt;
            }
        }
    }
    return m;
}

std::optional<Vec3> first_tangent(const std::optional<PathPolyline>& p)
{
    if (!p)
        return std::nullopt;
    return p->segment_tangent(0);
}

void preflight(Context& ctx, const PotentialField& field, const PathPolyline& path, const std::string& where)
{
    for (const auto& x : path.sample_points(8))
    {
        try
        {
            const double phi = field.value(x);
            if (!is_weak_field(phi))
            {
                std::ostringstream os;
                os << "|Phi| = " << std::abs(phi) << " at (" << x.transpose() << ") exceeds the weak-field bound "
                   << kDefaultWeakFieldMax;
                ctx.warn(where, os.str());
                return;
            }
        }
        catch (const SourceSingularity& e)
        {
            ctx.error(where, e.what());
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Typed plans

struct PhaseShiftPlan
{
    PotentialField field;
    ParticleSpec particle;
    PathPolyline path;
    ModeVariant variant;
};

struct DetectorSpec
{
    DetectorChannel channel;
};

struct MachZehnderPlan
{
    PotentialField field;
    InterferometerGeometry geom;
    double omega;
    OneParticleDensityMatrix rho;
    std::vector<double> extra;
    std::vector<DetectorChannel> detectors;
};

struct HomPlan
{
    double omega;
    double c;
    double chi;
    std::vector<double> delta_L;
};

struct TimeOfArrivalPlan
{
    PotentialField field;
    double L;
    double k0, sigma_k, x0;
    int nodes;
    std::optional<std::vector<double>> times;
    int default_steps;
    DetectorKernel kernel;
    Vec3 source, direction;
    double detector_size;
};

struct InternalPlan
{
    PotentialField field;
    CompositeParticleSpec cp;
    PathPolyline path;
    bool default_path;
    std::optional<InternalState> state;
    std::vector<double> times;
};

struct TunnelingPlan
{
    TwoBody body;
};

struct PolarizationPlan
{
    PotentialField field;
    double omega;
    PathPolyline path;
    Vec3 hint;
    int lambda;
    bool polarization_term;
};

using Plan = std::variant<PhaseShiftPlan, MachZehnderPlan, HomPlan, TimeOfArrivalPlan, InternalPlan, TunnelingPlan,
                          PolarizationPlan>;

std::optional<Plan> phase_shift_plan(Context& ctx, const json& doc)
{
    auto field = potential(ctx, doc);
    auto path = path_field(ctx, doc, "", "path");
    auto p = particle(ctx, doc, "", first_tangent(path));
    ModeVariant variant = ModeVariant::Default;
    if (auto v = string(ctx, doc, "", "variant", false))
    {
        if (*v == "standard")
            variant = ModeVariant::Standard;
        else if (*v == "orthonormal")
            variant = ModeVariant::Orthonormal;
        else if (*v != "default")
            ctx.error("/variant", "expected default, standard or orthonormal");
    }
    if (!field || !path || !p)
        return std::nullopt;
    preflight(ctx, *field, *path, "/path");
    try
    {
        check_path_alignment(*path, p->k);
    }
    catch (const PathNotAligned& e)
    {
        ctx.error("/path", e.what());
    }
    return PhaseShiftPlan{*field, *p, *path, variant};
}

std::optional<OneParticleDensityMatrix> two_mode_state(Context& ctx, const json& doc)
{
    const json* node = find(doc, "state");
    if (!node)
        return OneParticleDensityMatrix::single(2, 0);
    if (auto port = integer(ctx, *node, "/state", "single_photon_port", false))
    {
        if (*port != 1 && *port != 2)
        {
            ctx.error("/state/single_photon_port", "port must be 1 or 2");
            return std::nullopt;
        }
        return OneParticleDensityMatrix::single(2, *port - 1);
    }
    const json* rho = find(*node, "rho");
    if (!rho)
    {
        ctx.error("/state", "expected single_photon_port or rho");
        return std::nullopt;
    }
    auto m = complex_matrix(ctx, *rho, "/state/rho", 2);
    if (!m)
        return std::nullopt;
    try
    {
        return OneParticleDensityMatrix(*m);
    }
    catch (const std::exception& e)
    {
        ctx.error("/state/rho", e.what());
        return std::nullopt;
    }
}

std::optional<Plan> mach_zehnder_plan(Context& ctx, const json& doc)
{
    auto field = potential(ctx, doc);
    auto omega = quantity(ctx, doc, "", "omega", Dimension::InverseLength);
    auto rho = two_mode_state(ctx, doc);
    std::optional<InterferometerGeometry> geom;
    const json* g = find(doc, "geometry");
    if (!g)
        ctx.error("/geometry", "missing required field");
    else if (const json* rect = find(*g, "rectangle"))
    {
        auto h = quantity(ctx, *rect, "/geometry/rectangle", "h", Dimension::Length);
        auto d = quantity(ctx, *rect, "/geometry/rectangle", "d", Dimension::Length);
        auto origin = vec3(ctx, *rect, "/geometry/rectangle", "origin", Dimension::Length, false);
        if (h && d)
        {
            if (*h <= 0.0 || *d <= 0.0)
                ctx.error("/geometry/rectangle", "h and d must be positive");
            else
                geom = InterferometerGeometry::rectangle(*h, *d, origin.value_or(Vec3::Zero()));
        }
    }
    else
    {
        auto a1 = path_field(ctx, *g, "/geometry", "arm1");
        auto a2 = path_field(ctx, *g, "/geometry", "arm2");
        if (a1 && a2)
        {
            try
            {
                geom = InterferometerGeometry(*a1, *a2);
            }
            catch (const std::invalid_argument& e)
            {
                ctx.error("/geometry", e.what());
            }
        }
    }
    std::vector<double> extra{0.0};
    if (find(doc, "fringe"))
        if (auto v = grid(ctx, doc, "", "fringe", Dimension::Length))
            extra = *v;

    std::vector<DetectorChannel> detectors;
    if (const json* dets = find(doc, "detectors"))
    {
        if (!dets->is_array() || dets->size() != 2)
            ctx.error("/detectors", "expected two detector channels");
        else
            for (std::size_t i = 0; i < 2; ++i)
            {
                const std::string base = at("/detectors", i);
                auto p = path_field(ctx, (*dets)[i], base, "path");
                auto hint = vec3(ctx, (*dets)[i], base, "polarization_hint", Dimension::Dimensionless, false);
                const int lambda = integer(ctx, (*dets)[i], base, "lambda", false).value_or(1);
                if (lambda != 1 && lambda != 2)
                    ctx.error(at(base, "lambda"), "lambda must be 1 or 2");
                if (p)
                    detectors.push_back(DetectorChannel{
                        *p, PolarizationBasis::from_direction(p->segment_tangent(0), hint.value_or(Vec3::Zero())),
                        lambda});
            }
    }
    if (omega && !(*omega > 0.0))
        ctx.error("/omega", "omega must be positive");
    if (!field || !omega || !rho || !geom || (find(doc, "detectors") && detectors.size() != 2))
        return std::nullopt;
    preflight(ctx, *field, geom->arm1(), "/geometry/arm1");
    preflight(ctx, *field, geom->arm2(), "/geometry/arm2");
    for (std::size_t i = 0; i < detectors.size(); ++i)
        preflight(ctx, *field, detectors[i].path, at(at("/detectors", i), "path"));
    return MachZehnderPlan{*field, *geom, *omega, *rho, extra, detectors};
}

std::optional<Plan> hom_plan(Context& ctx, const json& doc)
{
    auto omega = quantity(ctx, doc, "", "omega", Dimension::InverseLength);
    const json* state = find(doc, "state");
    std::optional<double> c, chi;
    if (!state)
        ctx.error("/state", "missing required field");
    else
    {
        c = quantity(ctx, *state, "/state", "c", Dimension::Dimensionless);
        chi = quantity(ctx, *state, "/state", "chi", Dimension::Angle);
        if (c && *c < 0.0)
            ctx.error("/state/c", "c must be non-negative");
    }
    auto dl = grid(ctx, doc, "", "delta_L", Dimension::Length);
    if (!omega || !c || !chi || !dl || *c < 0.0)
        return std::nullopt;
    return HomPlan{*omega, *c, *chi, *dl};
}

std::optional<Plan> time_of_arrival_plan(Context& ctx, const json& doc)
{
    auto field = potential(ctx, doc);
    auto L = quantity(ctx, doc, "", "L", Dimension::Length);
    const json* packet = find(doc, "packet");
    std::optional<double> k0, sigma_k;
    double x0 = 0.0;
    int nodes = 96;
    if (!packet)
        ctx.error("/packet", "missing required field");
    else
    {
        k0 = quantity(ctx, *packet, "/packet", "k0", Dimension::InverseLength);
        sigma_k = quantity(ctx, *packet, "/packet", "sigma_k", Dimension::InverseLength);
        x0 = quantity(ctx, *packet, "/packet", "x0", Dimension::Length, false).value_or(0.0);
        nodes = integer(ctx, *packet, "/packet", "nodes", false).value_or(96);
        if (k0 && sigma_k && !(*sigma_k > 0.0 && *k0 > 8.0 * *sigma_k))
            ctx.error("/packet", "need 0 < 8 sigma_k < k0");
        if (nodes < 8)
            ctx.error("/packet/nodes", "at least 8 nodes are required");
    }
    std::optional<std::vector<double>> times;
    int default_steps = 201;
    if (const json* t = find(doc, "times"))
    {
        if (t->contains("start"))
            times = grid(ctx, doc, "", "times", Dimension::Time);
        else
            default_steps = integer(ctx, *t, "/times", "steps", false).value_or(201);
    }
    DetectorKernel kernel;
    if (const json* k = find(doc, "kernel"))
    {
        const std::string type = string(ctx, *k, "/kernel", "type").value_or("delta");
        if (type == "gaussian")
        {
            const double st = quantity(ctx, *k, "/kernel", "sigma_t", Dimension::Time, false).value_or(0.0);
            const double sy = quantity(ctx, *k, "/kernel", "sigma_y", Dimension::Length, false).value_or(0.0);
            if (st < 0.0 || sy < 0.0)
                ctx.error("/kernel", "kernel widths must be non-negative");
            else
                kernel = DetectorKernel(GaussianKernel{st, sy});
        }
        else if (type != "delta")
            ctx.error("/kernel/type", "expected delta or gaussian");
    }
    const Vec3 source = vec3(ctx, doc, "", "source", Dimension::Length, false).value_or(Vec3::Zero());
    const Vec3 direction = vec3(ctx, doc, "", "direction", Dimension::Dimensionless, false).value_or(Vec3::UnitX());
    const double size = quantity(ctx, doc, "", "detector_size", Dimension::Length, false).value_or(0.0);
    if (L && !(*L > 0.0))
        ctx.error("/L", "L must be positive");
    if (direction.norm() == 0.0)
        ctx.error("/direction", "direction must be non-zero");
    if (!field || !L || !k0 || !sigma_k || !ctx.errors.empty())
        return std::nullopt;
    preflight(ctx, *field, PathPolyline::segment(source, source + *L * direction.normalized()), "/L");
    return TimeOfArrivalPlan{*field, *L, *k0, *sigma_k, x0, nodes, times, default_steps, kernel, source, direction,
                             size};
}

std::optional<Plan> internal_plan(Context& ctx, const json& doc)
{
    auto field = potential(ctx, doc);
    bool default_path = false;
    std::optional<PathPolyline> path;
    if (find(doc, "path"))
        path = path_field(ctx, doc, "", "path");
    else if (field && std::holds_alternative<TwoBody>(field->model()))
    {
        const double a = kEarthRadius + kDefaultCompositeAltitude;
        path = PathPolyline::segment(Vec3(a, 0, 0), Vec3(a + kDefaultCompositeLength, 0, 0));
        default_path = true;
    }
    else if (field)
        ctx.error("/path", "missing required field (a default exists only for two_body potentials)");

    const json* comp = find(doc, "composite");
    CompositeParticleSpec cp;
    bool comp_ok = false;
    if (!comp)
        ctx.error("/composite", "missing required field");
    else
    {
        auto m0 = quantity(ctx, *comp, "/composite", "m0", Dimension::InverseLength);
        auto v = quantity(ctx, *comp, "/composite", "velocity", Dimension::Velocity, false);
        auto k = quantity(ctx, *comp, "/composite", "wavenumber", Dimension::InverseLength, false);
        auto dir = vec3(ctx, *comp, "/composite", "direction", Dimension::Dimensionless, false);
        if (!dir)
            dir = first_tangent(path);
        std::vector<double> levels;
        const json* lv = find(*comp, "levels");
        if (!lv || !lv->is_array() || lv->empty())
            ctx.error("/composite/levels", "expected a non-empty array of level energies");
        else
            for (std::size_t i = 0; i < lv->size(); ++i)
                if (auto e = quantity_node(ctx, (*lv)[i], at("/composite/levels", i), Dimension::InverseLength))
                    levels.push_back(*e);
        if (v.has_value() == k.has_value())
            ctx.error("/composite", "give exactly one of velocity or wavenumber");
        else if (m0 && dir && levels.size() == lv->size())
        {
            cp.m0 = *m0;
            cp.levels = levels;
            const double kn = v ? *m0 * *v : *k;
            cp.k = kn * dir->normalized();
            try
            {
                cp.validate();
                comp_ok = true;
            }
            catch (const std::exception& e)
            {
                ctx.error("/composite", e.what());
            }
        }
    }

    std::optional<InternalState> state;
    std::vector<double> times;
    if (const json* det = find(doc, "detection"))
    {
        const json* st = find(*det, "rho");
        if (!st)
            ctx.error("/detection/rho", "missing required field");
        else if (comp_ok)
        {
            auto m = complex_matrix(ctx, *st, "/detection/rho", static_cast<int>(cp.levels.size()));
            if (m)
            {
                InternalState s{*m, quantity(ctx, *det, "/detection", "preparation_phase", Dimension::Length, false)
                                        .value_or(0.0)};
                try
                {
                    s.validate(cp.levels.size());
                    state = s;
                }
                catch (const std::exception& e)
                {
                    ctx.error("/detection/rho", e.what());
                }
            }
        }
        if (auto t = grid(ctx, *det, "/detection", "times", Dimension::Time))
            times = *t;
    }
    if (!field || !path || !comp_ok || !ctx.errors.empty())
        return std::nullopt;
    preflight(ctx, *field, *path, "/path");
    try
    {
        check_path_alignment(*path, cp.k);
    }
    catch (const PathNotAligned& e)
    {
        ctx.error("/path", e.what());
    }
    return InternalPlan{*field, cp, *path, default_path, state, times};
}

std::optional<Plan> tunneling_plan(Context& ctx, const json& doc)
{
    auto field = potential(ctx, doc);
    if (!field)
        return std::nullopt;
    if (!std::holds_alternative<TwoBody>(field->model()))
    {
        ctx.error("/potential/model", "tunneling_spread needs a two_body potential");
        return std::nullopt;
    }
    return TunnelingPlan{std::get<TwoBody>(field->model())};
}

std::optional<Plan> polarization_plan(Context& ctx, const json& doc)
{
    auto field = potential(ctx, doc);
    auto omega = quantity(ctx, doc, "", "omega", Dimension::InverseLength);
    auto path = path_field(ctx, doc, "", "path");
    Vec3 hint = Vec3::Zero();
    int lambda = 1;
    if (const json* pol = find(doc, "polarization"))
    {
        hint = vec3(ctx, *pol, "/polarization", "hint", Dimension::Dimensionless, false).value_or(Vec3::Zero());
        lambda = integer(ctx, *pol, "/polarization", "lambda", false).value_or(1);
        if (lambda != 1 && lambda != 2)
            ctx.error("/polarization/lambda", "lambda must be 1 or 2");
    }
    const bool term = boolean(ctx, doc, "", "polarization_term").value_or(true);
    if (omega && !(*omega > 0.0))
        ctx.error("/omega", "omega must be positive");
    if (!field || !omega || !path || !ctx.errors.empty())
        return std::nullopt;
    preflight(ctx, *field, *path, "/path");
    try
    {
        check_path_alignment(*path, path->segment_tangent(0));
    }
    catch (const PathNotAligned& e)
    {
        ctx.error("/path", std::string(e.what()) + " (em modes need a straight path along k)");
    }
    return PolarizationPlan{*field, *omega, *path, hint, lambda, term};
}

std::optional<Plan> build_plan(Context& ctx, ScenarioKind kind, const json& doc)
{
    switch (kind)
    {
    case ScenarioKind::PhaseShift: return phase_shift_plan(ctx, doc);
    case ScenarioKind::MachZehnder: return mach_zehnder_plan(ctx, doc);
    case ScenarioKind::HongOuMandel: return hom_plan(ctx, doc);
    case ScenarioKind::TimeOfArrival: return time_of_arrival_plan(ctx, doc);
    case ScenarioKind::InternalDof: return internal_plan(ctx, doc);
    case ScenarioKind::TunnelingSpread: return tunneling_plan(ctx, doc);
    case ScenarioKind::PolarizationRotation: return polarization_plan(ctx, doc);
    }
    return std::nullopt;
}

std::optional<QuadratureSpec> quadrature(Context& ctx, const json& doc)
{
    QuadratureSpec spec;
    if (const json* q = find(doc, "quadrature"))
    {
        spec.rel_tol = quantity(ctx, *q, "/quadrature", "rel_tol", Dimension::Dimensionless, false)
                           .value_or(spec.rel_tol);
        spec.abs_tol = quantity(ctx, *q, "/quadrature", "abs_tol", Dimension::Dimensionless, false)
                           .value_or(spec.abs_tol);
        spec.max_subdivisions =
            integer(ctx, *q, "/quadrature", "max_subdivisions", false).value_or(spec.max_subdivisions);
    }
    try
    {
        spec.validate();
    }
    catch (const std::invalid_argument& e)
    {
        ctx.error("/quadrature", e.what());
        return std::nullopt;
    }
    return spec;
}

std::optional<SweepSpec> sweep(Context& ctx, const json& doc)
{
    const json* s = find(doc, "sweep");
    if (!s)
        return std::nullopt;
    SweepSpec out;
    auto param = string(ctx, *s, "/sweep", "parameter");
    out.unit = string(ctx, *s, "/sweep", "unit", false).value_or("");
    const json* start = find(*s, "start");
    const json* stop = find(*s, "stop");
    auto steps = integer(ctx, *s, "/sweep", "steps");
    if (!start || !start->is_number())
        ctx.error("/sweep/start", "expected a number (in the sweep unit)");
    if (!stop || !stop->is_number())
        ctx.error("/sweep/stop", "expected a number (in the sweep unit)");
    if (steps && *steps < 1)
        ctx.error("/sweep/steps", "steps must be at least 1");
    if (!param || !steps || !start || !stop || !start->is_number() || !stop->is_number() || *steps < 1)
        return std::nullopt;
    try
    {
        const json::json_pointer ptr(*param);
        if (!doc.contains(ptr))
        {
            ctx.error("/sweep/parameter", "pointer " + *param + " does not name an existing field");
            return std::nullopt;
        }
        const json& target = doc.at(ptr);
        const bool quantity_object = target.is_object() && target.contains("value") && target["value"].is_number();
        if (!target.is_number() && !quantity_object)
        {
            ctx.error("/sweep/parameter", "pointer " + *param + " must name a number or a {value, unit} quantity");
            return std::nullopt;
        }
        if (target.is_number() && !out.unit.empty())
        {
            ctx.error("/sweep/unit", "the swept field is a bare number, so no unit may be given");
            return std::nullopt;
        }
    }
    catch (const json::exception& e)
    {
        ctx.error("/sweep/parameter", e.what());
        return std::nullopt;
    }
    out.parameter = *param;
    out.start = start->get<double>();
    out.stop = stop->get<double>();
    out.steps = *steps;
    return out;
}

json sweep_point(const json& doc, const SweepSpec& s, double value)
{
    json d = doc;
    d.erase("sweep");
    const json::json_pointer ptr(s.parameter);
    // bare numbers stay bare; quantity objects keep their shape and take the sweep unit if one is given
    json& target = d[ptr];
    if (target.is_object())
    {
        target["value"] = value;
        if (!s.unit.empty())
            target["unit"] = s.unit;
    }
    else
        target = value;
    return d;
}

// ---------------------------------------------------------------------------
// Execution

ResultTable execute(const PhaseShiftPlan& p, const QuadratureSpec& q)
{
    ResultTable t({{"omega", "1/m"},
                   {"sigma", "rad"},
                   {"delta_x", "m"},
                   {"integral_phi", "m"},
                   {"phi_end", ""},
                   {"alpha_end", ""}});
    const double sigma = phase_correction_sigma(p.particle, p.field, p.path, q);
    const double integral = line_integral_phi(p.field, p.path, q);
    const ScalarModeValue m = mode_value(p.particle, p.field, p.path, p.variant, q);
    t.add_row({p.particle.omega, sigma, sigma / p.particle.k_norm(), integral, p.field.value(p.path.end()), m.alpha});
    return t;
}

ResultTable execute(const MachZehnderPlan& p, const QuadratureSpec& q)
{
    ResultTable t({{"extra_length", "m"},
                   {"phase", "rad"},
                   {"phase_flat", "rad"},
                   {"gravity_phase", "rad"},
                   {"P1", ""},
                   {"P2", ""},
                   {"P1_flat", ""},
                   {"P2_flat", ""}});
    const OpticalPathDifference opd = optical_path_difference(p.geom, p.field, q);
    double a1 = 1.0, a2 = 1.0;
    if (p.detectors.size() == 2)
    {
        EmModeOptions opt;
        opt.quadrature = q;
        const ChannelFactor c1 = detector_channel_factor(p.detectors[0], p.omega, p.field, opt);
        const ChannelFactor c2 = detector_channel_factor(p.detectors[1], p.omega, p.field, opt);
        a1 = c1.amplitude_factor;
        a2 = c2.amplitude_factor;
        const Visibility v = mz_visibility(c1, c2);
        t.set_meta("visibility_sweep", v.sweep);
        t.set_meta("visibility_first_order", v.first_order);
    }
    const double grav = p.omega * (opd.Delta_L - opd.delta_L);
    for (double e : p.extra)
    {
        const DetectorPair g = mach_zehnder_probabilities(opd.Delta_L + e, p.omega, p.rho, a1, a2);
        const DetectorPair f = mach_zehnder_probabilities(opd.delta_L + e, p.omega, p.rho, a1, a2);
        t.add_row({e, p.omega * (opd.Delta_L + e), p.omega * (opd.delta_L + e), grav, g.p1, g.p2, f.p1, f.p2});
    }
    t.set_meta("delta_L_m", opd.delta_L);
    t.set_meta("loop_integral_m", opd.loop_integral);
    t.set_meta("Delta_L_m", opd.Delta_L);
    t.set_meta("delta_S_m", opd.delta_S);
    t.set_meta("gravity_phase_rad", grav);
    return t;
}

ResultTable execute(const HomPlan& p, const QuadratureSpec&)
{
    ResultTable t({{"Delta_L", "m"}, {"P1", ""}, {"P2", ""}});
    const OneParticleDensityMatrix rho = one_particle_rho(build_hom_state(p.c, p.chi));
    for (double dl : p.delta_L)
    {
        const DetectorPair r = hong_ou_mandel_probabilities(dl, p.omega, rho);
        t.add_row({dl, r.p1, r.p2});
    }
    t.set_meta("n1", rho.expect_adag_a(0, 0).real());
    t.set_meta("n2", rho.expect_adag_a(1, 1).real());
    t.set_meta("re_a1dag_a2", rho.expect_adag_a(0, 1).real());
    t.set_meta("im_a1dag_a2", rho.expect_adag_a(0, 1).imag());
    return t;
}

ResultTable execute(const TimeOfArrivalPlan& p, const QuadratureSpec&)
{
    const WavePacket1D packet = WavePacket1D::gaussian(p.k0, p.sigma_k, p.x0, p.nodes);
    std::vector<double> times;
    if (p.times)
        times = *p.times;
    else
    {
        // window of +-8 position widths around the flat-space arrival, widened by the delay
        const double sx = 1.0 / (2.0 * p.sigma_k);
        const double centre = p.L - p.x0;
        const double reach = 8.0 * sx + 2.0 * std::abs(line_integral_phi(
                                                p.field, PathPolyline::segment(p.source, p.source + p.L * p.direction.normalized())));
        times = SweepSpec{"", "", centre - reach, centre + reach, std::max(p.default_steps, 2)}.values();
    }
    const TimeOfArrival toa =
        time_of_arrival_density(packet, p.field, p.L, times, p.kernel, p.source, p.direction, p.detector_size);
    ResultTable t({{"t", "m"}, {"t_si", "s"}, {"density", "1/m"}, {"flat_density", "1/m"}});
    for (std::size_t i = 0; i < times.size(); ++i)
        t.add_row({times[i], units::from_geometric(times[i], "s", Dimension::Time), toa.density[i],
                   toa.flat_density[i]});
    t.set_meta("delta_x_m", toa.delta_x);
    return t;
}

ResultTable execute(const InternalPlan& p, const QuadratureSpec& q)
{
    if (p.state)
    {
        ResultTable t({{"t", "m"}, {"t_si", "s"}, {"probability", ""}});
        for (double time : p.times)
            t.add_row({time, units::from_geometric(time, "s", Dimension::Time),
                       internal_dof_detection(*p.state, p.cp, p.field, p.path, time, q)});
        return t;
    }
    ResultTable t({{"level", ""},
                   {"epsilon", "1/m"},
                   {"epsilon_ev", "eV"},
                   {"delta_phi", "rad"},
                   {"u", ""},
                   {"u_mean", ""},
                   {"mean_phi", ""}});
    for (std::size_t a = 0; a < p.cp.levels.size(); ++a)
    {
        const RelativePhase r = relative_phase_u(p.cp, a, p.field, p.path, q);
        t.add_row({static_cast<double>(a), p.cp.levels[a], units::per_metre_to_ev(p.cp.levels[a]), r.delta_phi, r.u,
                   r.u_mean, r.mean_phi});
    }
    t.set_meta("velocity_c", p.cp.velocity());
    t.set_meta("path_start_m", p.path.start().norm());
    t.set_meta("path_length_m", p.path.length());
    if (p.default_path)
        t.set_meta("path_placement", "default: starts 1e8 m above Earth's mean radius, runs 1e7 m toward body 2");
    return t;
}

ResultTable execute(const TunnelingPlan& p, const QuadratureSpec&)
{
    ResultTable t({{"mu", ""},
                   {"x_m", "m"},
                   {"phi_m", ""},
                   {"curvature", "1/m^2"},
                   {"delta_E", "1/m"},
                   {"delta_E_ev", "eV"},
                   {"curvature_energy_ev", "eV"}});
    const TwoBodyMaximum m = potential_max_two_body(p.body);
    const double de = tunneling_energy_spread(p.body);
    t.add_row({std::sqrt(p.body.gm1 / p.body.gm2), m.position, m.potential, m.curvature, de,
               units::per_metre_to_ev(de), units::per_metre_to_ev(barrier_curvature_energy(p.body))});
    return t;
}

ResultTable execute(const PolarizationPlan& p, const QuadratureSpec& q)
{
    const Vec3 dir = p.path.segment_tangent(0);
    const ParticleSpec particle = ParticleSpec::massless(p.omega * dir);
    const PolarizationBasis basis = PolarizationBasis::from_direction(dir, p.hint);
    EmModeOptions opt;
    opt.polarization_term = p.polarization_term;
    opt.quadrature = q;
    const EmModeValue m = em_mode_value(particle, basis, p.lambda, p.field, p.path, opt);
    const Mat3 lambda = rotation_lambda(p.field, p.path, q);
    ResultTable t({{"omega", "1/m"},
                   {"theta", ""},
                   {"beta", ""},
                   {"sigma", "rad"},
                   {"amplitude_factor", ""},
                   {"orthogonality_defect", ""},
                   {"neglected_term_ratio", ""},
                   {"validity_length", "m"}});
    t.add_row({p.omega, m.theta, m.beta, m.sigma, m.amplitude_factor(), orthogonality_defect(lambda),
               m.neglected_term_ratio, m.validity_length});
    for (std::size_t i = 0; i < m.warnings.size(); ++i)
        t.set_meta("warning_" + std::to_string(i), m.warnings[i]);
    return t;
}

ResultTable execute_plan(const Plan& plan, const QuadratureSpec& q)
{
    return std::visit([&](const auto& p) { return execute(p, q); }, plan);
}

} // namespace

ValidationReport validate_config(std::string_view text)
{
    ValidationReport report;
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        report.errors.push_back({"", std::string("JSON parse error: ") + e.what()});
        return report;
    }
    return validate_document(doc);
}

ValidationReport validate_document(const json& doc)
{
    ValidationReport report;
    Context ctx;
    if (!doc.is_object())
    {
        report.errors.push_back({"", "configuration must be a JSON object"});
        return report;
    }
    auto kind_name = string(ctx, doc, "", "scenario");
    std::optional<ScenarioKind> kind;
    if (kind_name)
    {
        kind = parse_scenario_kind(*kind_name);
        if (!kind)
            ctx.error("/scenario", "unknown scenario '" + *kind_name + "' (see list-scenarios)");
    }
    const std::string name = string(ctx, doc, "", "name", false).value_or(kind_name.value_or(""));
    const std::string format = string(ctx, doc, "", "format", false).value_or("csv");
    if (format != "csv" && format != "json")
        ctx.error("/format", "expected csv or json");
    auto quad = quadrature(ctx, doc);
    auto sw = sweep(ctx, doc);

    if (kind)
    {
        // validate the base document, then every sweep point
        build_plan(ctx, *kind, doc);
        if (sw && ctx.errors.empty())
        {
            for (double v : sw->values())
            {
                Context point;
                build_plan(point, *kind, sweep_point(doc, *sw, v));
                for (auto& e : point.errors)
                    ctx.error(e.path, e.message + " (sweep value " + format_number(v) + ")");
                if (!point.errors.empty())
                    break;
            }
        }
    }
    report.errors = std::move(ctx.errors);
    report.warnings = std::move(ctx.warnings);
    if (report.errors.empty() && kind && quad)
        report.config = ScenarioConfig{*kind, name, doc, sw, *quad, format};
    return report;
}

ResultTable run_scenario(const ScenarioConfig& config, const RunOptions& options)
{
    QuadratureSpec q = config.quadrature;
    if (options.rel_tol)
    {
        q.rel_tol = *options.rel_tol;
        q.validate();
    }
    std::vector<json> docs;
    std::vector<double> sweep_values;
    if (config.sweep)
    {
        sweep_values = config.sweep->values();
        for (double v : sweep_values)
            docs.push_back(sweep_point(config.document, *config.sweep, v));
    }
    else
        docs.push_back(config.document);

    const std::string scenario = std::string(scenario_name(config.kind));
    std::vector<std::optional<ResultTable>> results(docs.size());
    std::vector<std::string> failures(docs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < docs.size(); i = next++)
        {
            try
            {
                Context ctx;
                auto plan = build_plan(ctx, config.kind, docs[i]);
                if (!ctx.errors.empty() || !plan)
                    throw ConfigError(ctx.errors);
                results[i] = execute_plan(*plan, q);
            }
            catch (const std::exception& e)
            {
                failures[i] = e.what();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(docs.size())));
    if (workers == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    for (std::size_t i = 0; i < docs.size(); ++i)
        if (!failures[i].empty())
        {
            std::string where = "scenario " + scenario + " '" + config.name + "'";
            if (config.sweep)
                where += " at " + config.sweep->parameter + " = " + format_number(sweep_values[i]);
            throw ScenarioError(where + ": " + failures[i]);
        }

    ResultTable out;
    if (!config.sweep)
        out = std::move(*results.front());
    else
    {
        std::vector<Column> cols{{"sweep:" + config.sweep->parameter, config.sweep->unit}};
        for (const auto& c : results.front()->columns())
            cols.push_back(c);
        out = ResultTable(cols);
        for (std::size_t i = 0; i < results.size(); ++i)
            for (const auto& row : results[i]->rows())
            {
                std::vector<double> r{sweep_values[i]};
                r.insert(r.end(), row.begin(), row.end());
                out.add_row(std::move(r));
            }
    }

    ResultTable final_table(out.columns());
    for (const auto& row : out.rows())
        final_table.add_row(row);
    final_table.set_meta("scenario", scenario);
    final_table.set_meta("name", config.name);
    final_table.set_meta("config_hash", config.hash());
    final_table.set_meta("tool_version", kToolVersion);
    final_table.set_meta("constants", units::kConstantsTable);
    final_table.set_meta("rel_tol", q.rel_tol);
    final_table.set_meta("abs_tol", q.abs_tol);
    final_table.set_meta("max_subdivisions", std::to_string(q.max_subdivisions));
    if (!config.sweep)
        for (const auto& [k, v] : out.metadata())
            final_table.set_meta(k, v);
    return final_table;
}

} // namespace gravoptics
