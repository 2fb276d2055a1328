#include "optibind/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace optibind {

namespace {

using nlohmann::json;

const std::map<Dimension, std::map<std::string, double>>& unit_tables() {
    static const std::map<Dimension, std::map<std::string, double>> tables = {
        {Dimension::Length,
         {{"nm", 1e-9}, {"um", 1e-6}, {"µm", 1e-6}, {"mm", 1e-3}, {"m", 1.0}}},
        {Dimension::Power, {{"uW", 1e-6}, {"µW", 1e-6}, {"mW", 1e-3}, {"W", 1.0}}},
        {Dimension::Amplitude, {{"V/m", 1.0}, {"kV/m", 1e3}, {"MV/m", 1e6}}},
        {Dimension::AngularRate,
         {{"rad/s", 1.0},
          {"1/s", 1.0},
          {"Hz", 2.0 * M_PI},
          {"kHz", 2.0 * M_PI * 1e3},
          {"MHz", 2.0 * M_PI * 1e6},
          {"GHz", 2.0 * M_PI * 1e9}}},
        {Dimension::Mass, {{"kg", 1.0}, {"g", 1e-3}, {"pg", 1e-15}, {"fg", 1e-18}}},
        {Dimension::Density,
         {{"kg/m3", 1.0}, {"kg/m^3", 1.0}, {"g/cm3", 1e3}, {"g/cm^3", 1e3}}},
        {Dimension::Temperature, {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"µK", 1e-6}}},
        {Dimension::Angle, {{"rad", 1.0}, {"mrad", 1e-3}, {"deg", M_PI / 180.0}}},
    };
    return tables;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

double parse_quantity(const std::string& text, Dimension dim, const std::string& field) {
    std::istringstream in(text);
    double value = 0.0;
    std::string unit;
    if (!(in >> value))
        throw ConfigError(field, "expected \"<value> <unit>\", got \"" + text + "\"");
    in >> unit;
    std::string rest;
    if (in >> rest) throw ConfigError(field, "trailing content in quantity \"" + text + "\"");

    const auto& table = unit_tables().at(dim);
    if (unit.empty()) {
        std::string allowed;
        for (const auto& [u, f] : table) allowed += (allowed.empty() ? "" : ", ") + u;
        throw ConfigError(field, "quantity \"" + text + "\" is missing a unit (allowed: " +
                                     allowed + ")");
    }
    if (auto it = table.find(unit); it != table.end()) return value * it->second;

    // unknown unit: suggest a case-insensitive match before listing all options
    for (const auto& [u, f] : table)
        if (lower(u) == lower(unit))
            throw ConfigError(field, "unknown unit \"" + unit + "\"; did you mean \"" + u + "\"?");
    std::string allowed;
    for (const auto& [u, f] : table) allowed += (allowed.empty() ? "" : ", ") + u;
    throw ConfigError(field, "unknown unit \"" + unit + "\" (allowed: " + allowed + ")");
}

namespace {

const json& expect(const json& obj, const std::string& key, const std::string& field) {
    if (!obj.contains(key)) throw ConfigError(field, "missing required field");
    return obj.at(key);
}

double number_at(const json& obj, const std::string& key, const std::string& field) {
    const json& v = expect(obj, key, field);
    if (!v.is_number()) throw ConfigError(field, "expected a number");
    return v.get<double>();
}

double quantity_at(const json& obj, const std::string& key, Dimension dim,
                   const std::string& field) {
    const json& v = expect(obj, key, field);
    if (!v.is_string())
        throw ConfigError(field, "dimensioned quantities must be strings like \"1064 nm\"");
    return parse_quantity(v.get<std::string>(), dim, field);
}

double quantity_or(const json& obj, const std::string& key, Dimension dim,
                   const std::string& field, double fallback) {
    if (!obj.contains(key)) return fallback;
    return quantity_at(obj, key, dim, field);
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& field) {
    for (const auto& [key, v] : obj.items()) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end())
            throw ConfigError(field.empty() ? key : field + "." + key, "unknown field");
    }
}

PhysicalConstants parse_constants(const json& doc) {
    PhysicalConstants pc;
    if (!doc.contains("constants")) return pc;
    const json& c = doc.at("constants");
    reject_unknown_keys(c, {"eps0", "c", "hbar", "kB"}, "constants");
    if (c.contains("eps0")) pc.eps0 = number_at(c, "eps0", "constants.eps0");
    if (c.contains("c")) pc.c = number_at(c, "c", "constants.c");
    if (c.contains("hbar")) pc.hbar = number_at(c, "hbar", "constants.hbar");
    if (c.contains("kB")) pc.kB = number_at(c, "kB", "constants.kB");
    return pc;
}

ParticleSpec parse_particle(const json& p, const std::string& field) {
    reject_unknown_keys(p, {"radius", "diameters", "permittivity", "density", "mass"}, field);
    Vec3 diam;
    if (p.contains("radius") && p.contains("diameters"))
        throw ConfigError(field, "give either radius or diameters, not both");
    if (p.contains("radius")) {
        diam = Vec3::Constant(2.0 * quantity_at(p, "radius", Dimension::Length, field + ".radius"));
    } else if (p.contains("diameters")) {
        const json& d = p.at("diameters");
        if (!d.is_array() || d.size() != 3)
            throw ConfigError(field + ".diameters", "expected three lengths");
        for (int i = 0; i < 3; ++i) {
            if (!d[i].is_string())
                throw ConfigError(field + ".diameters", "expected strings like \"200 nm\"");
            diam[i] = parse_quantity(d[i].get<std::string>(), Dimension::Length,
                                     field + ".diameters");
        }
    } else {
        throw ConfigError(field, "needs radius or diameters");
    }
    const double eps = number_at(p, "permittivity", field + ".permittivity");

    ParticleSpec spec;
    spec.diameters = diam;
    spec.permittivity = eps;
    if (p.contains("mass") && p.contains("density"))
        throw ConfigError(field, "give either mass or density, not both");
    if (p.contains("mass"))
        spec.mass = quantity_at(p, "mass", Dimension::Mass, field + ".mass");
    else if (p.contains("density"))
        spec.mass = quantity_at(p, "density", Dimension::Density, field + ".density") *
                    spec.volume();
    else
        throw ConfigError(field, "needs mass or density");
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(field, e.what());
    }
    return spec;
}

TweezerSpec parse_tweezer(const json& t, const PhysicalConstants& pc, const std::string& field) {
    reject_unknown_keys(
        t, {"focus", "waist", "wavelength", "power", "amplitude", "phase", "polarization_angle"},
        field);
    TweezerSpec tw;
    const json& f = expect(t, "focus", field + ".focus");
    if (!f.is_array() || f.size() != 2)
        throw ConfigError(field + ".focus", "expected [x, y] in the focal plane");
    for (int i = 0; i < 2; ++i) {
        if (!f[i].is_string()) throw ConfigError(field + ".focus", "expected lengths like \"5 um\"");
        tw.focus[i] = parse_quantity(f[i].get<std::string>(), Dimension::Length, field + ".focus");
    }
    tw.focus[2] = 0.0;
    tw.waist = quantity_at(t, "waist", Dimension::Length, field + ".waist");
    tw.wavelength = quantity_at(t, "wavelength", Dimension::Length, field + ".wavelength");
    if (t.contains("power") && t.contains("amplitude"))
        throw ConfigError(field, "give either power or amplitude, not both");
    if (t.contains("power"))
        tw.amplitude = amplitude_from_power(
            quantity_at(t, "power", Dimension::Power, field + ".power"), tw.waist, pc);
    else if (t.contains("amplitude"))
        tw.amplitude = quantity_at(t, "amplitude", Dimension::Amplitude, field + ".amplitude");
    else
        throw ConfigError(field, "needs power or amplitude");
    tw.phase = quantity_or(t, "phase", Dimension::Angle, field + ".phase", 0.0);
    tw.polarization_angle =
        quantity_or(t, "polarization_angle", Dimension::Angle, field + ".polarization_angle", 0.0);
    try {
        tw.validate();
    } catch (const std::exception& e) {
        throw ConfigError(field, e.what());
    }
    return tw;
}

GasSpec parse_gas(const json& doc) {
    GasSpec gas;
    if (!doc.contains("gas")) return gas;
    const json& g = doc.at("gas");
    reject_unknown_keys(g, {"gamma", "temperature", "thermal_noise"}, "gas");
    gas.gamma = quantity_or(g, "gamma", Dimension::AngularRate, "gas.gamma", 0.0);
    gas.temperature = quantity_or(g, "temperature", Dimension::Temperature, "gas.temperature", 0.0);
    if (g.contains("thermal_noise")) {
        if (!g.at("thermal_noise").is_boolean())
            throw ConfigError("gas.thermal_noise", "expected a boolean");
        gas.thermal_noise = g.at("thermal_noise").get<bool>();
    }
    return gas;
}

// Expands the chain shorthand into N physical tweezers on a line with the
// directional spacing and phasing. The particle volume is solved so the
// geometry realizes the requested g/omega0, the field amplitude so the trap
// frequency hits its target, and gamma follows from omega0/gamma.
std::pair<ArrayScenario, ChainSpec> expand_chain(const json& c, const PhysicalConstants& pc,
                                                 const GasSpec& gas_in, bool force) {
    reject_unknown_keys(c,
                        {"N", "n", "omega0_over_gamma", "g_over_gamma", "trap_frequency", "waist",
                         "wavelength", "permittivity", "density"},
                        "chain");
    const json& Nj = expect(c, "N", "chain.N");
    if (!Nj.is_number_integer() || Nj.get<int>() < 1)
        throw ConfigError("chain.N", "expected a positive integer");
    const int N = Nj.get<int>();
    const double A = number_at(c, "omega0_over_gamma", "chain.omega0_over_gamma");
    const double B = number_at(c, "g_over_gamma", "chain.g_over_gamma");
    if (!(A > 0.0) || !(B > 0.0))
        throw ConfigError("chain", "omega0_over_gamma and g_over_gamma must be positive");

    const double wavelength =
        quantity_or(c, "wavelength", Dimension::Length, "chain.wavelength", 1.064e-6);
    const double waist = quantity_or(c, "waist", Dimension::Length, "chain.waist", 1e-6);
    const double eps = c.contains("permittivity")
                           ? number_at(c, "permittivity", "chain.permittivity")
                           : 2.1;
    const double density =
        quantity_or(c, "density", Dimension::Density, "chain.density", 1850.0);
    const double omega0 = quantity_or(c, "trap_frequency", Dimension::AngularRate,
                                      "chain.trap_frequency", 2.0 * M_PI * 1e5);

    const double k = 2.0 * M_PI / wavelength;
    const double zR = k * waist * waist / 2.0;
    const double kappa = k - 1.0 / zR;
    const double chi = sphere_susceptibility(eps);

    const auto d_of = [&](int n) { return (2.0 * M_PI * n + M_PI / 4.0) / k; };
    int n_min = 1;
    while (d_of(n_min) <= 5.0 * waist) ++n_min;
    int n = n_min;
    if (c.contains("n")) {
        if (!c.at("n").is_number_integer() || c.at("n").get<int>() < 1)
            throw ConfigError("chain.n", "expected a positive integer");
        n = c.at("n").get<int>();
        if (n < n_min && !force)
            throw ConfigError("chain.n",
                              "k d_next = 2 pi n + pi/4 fails the gate d > 5 w for n = " +
                                  std::to_string(n) + "; smallest admissible n is " +
                                  std::to_string(n_min) + " (or pass --force)");
    }
    const double d_next = d_of(n);

    // The requested omega0 is the renormalized frequency, mean_j of
    // w_j^2 + K_j/m = w0^2; with equal amplitudes K_j/m = 2 w0 g s_j where
    // s_j depends on the chain geometry alone, so the bare trap target is
    // w_b^2 = w0^2 (1 - 2 (g/w0) mean(s_j)).
    double mean_geom = 0.0;
    {
        ChainSpec probe;
        probe.N = N;
        probe.omega0 = 1.0;
        probe.gamma = 1.0;
        probe.g = 0.5;  // makes 2 w0 g = 1
        probe.kd_next = 2.0 * M_PI * n + M_PI / 4.0;
        probe.phi_next = M_PI / 4.0;
        mean_geom = chain_coupling_over_mass(probe).rowwise().sum().mean();
    }
    const double ratio = B / A;  // g / omega0
    const double bare_factor = 1.0 - 2.0 * ratio * mean_geom;
    if (!(bare_factor > 0.0))
        throw ConfigError("chain", "requested coupling too strong: the spring renormalization "
                                   "exceeds the trap stiffness");
    const double omega_bare = omega0 * std::sqrt(bare_factor);

    // volume from g/omega0 = [chi^2 V k^2 kappa^2 zR^2 / (8 pi chi~ d)] (w_b/w0)^2
    double chi_tilde = chi;
    double V = 0.0;
    for (int it = 0; it < 20; ++it) {
        V = ratio * 8.0 * M_PI * chi_tilde * d_next /
            (chi * chi * k * k * kappa * kappa * zR * zR * bare_factor);
        const double R = std::cbrt(3.0 * V / (4.0 * M_PI));
        chi_tilde = chi + sphere_radiation_correction(k, R, chi);
    }
    const double radius = std::cbrt(3.0 * V / (4.0 * M_PI));
    const ParticleSpec particle = ParticleSpec::sphere(radius, eps, density);

    TweezerSpec tw;
    tw.waist = waist;
    tw.wavelength = wavelength;
    tw.polarization_angle = M_PI / 2.0;  // transverse to the chain axis
    tw.amplitude = amplitude_for_trap_frequency(omega_bare, particle, tw, chi_tilde, pc);

    ArrayScenario sc;
    sc.constants = pc;
    sc.gas = gas_in;
    sc.gas.gamma = omega0 / A;
    sc.validation_overridden = force;
    for (int j = 0; j < N; ++j) {
        TweezerSpec twj = tw;
        twj.focus = Vec3(j * d_next, 0.0, 0.0);
        twj.phase = j * M_PI / 4.0;
        sc.particles.push_back(particle);
        sc.tweezers.push_back(twj);
    }

    ChainSpec chain;
    chain.N = N;
    chain.omega0 = omega0;
    chain.gamma = sc.gas.gamma;
    chain.g = chain.gamma * B;
    chain.n = n;
    chain.kd_next = k * d_next;
    chain.phi_next = M_PI / 4.0;
    chain.mass = particle.mass;
    return {sc, chain};
}

std::string format_si(double v, const char* unit) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g %s", v, unit);
    return buf;
}

}  // namespace

LoadedScenario parse_scenario_json(const json& doc, const ParseOptions& opt) {
    if (!doc.is_object()) throw ConfigError("", "scenario must be a JSON object");
    reject_unknown_keys(doc, {"constants", "particles", "tweezers", "gas", "chain"}, "");

    LoadedScenario out;
    const PhysicalConstants pc = parse_constants(doc);
    const GasSpec gas = parse_gas(doc);

    const bool has_chain = doc.contains("chain");
    const bool has_explicit = doc.contains("particles") || doc.contains("tweezers");
    if (has_chain && has_explicit)
        throw ConfigError("chain", "chain shorthand and explicit particles/tweezers are mutually "
                                   "exclusive");
    if (has_chain) {
        auto [sc, chain] = expand_chain(doc.at("chain"), pc, gas, opt.force);
        out.scenario = std::move(sc);
        out.chain = chain;
    } else {
        if (!doc.contains("particles")) throw ConfigError("particles", "missing required field");
        if (!doc.contains("tweezers")) throw ConfigError("tweezers", "missing required field");
        const json& ps = doc.at("particles");
        const json& ts = doc.at("tweezers");
        if (!ps.is_array() || ps.empty())
            throw ConfigError("particles", "expected a non-empty array");
        if (!ts.is_array() || ts.size() != ps.size())
            throw ConfigError("tweezers", "expected one tweezer per particle");
        ArrayScenario sc;
        sc.constants = pc;
        sc.gas = gas;
        sc.validation_overridden = opt.force;
        for (std::size_t i = 0; i < ps.size(); ++i)
            sc.particles.push_back(
                parse_particle(ps[i], "particles[" + std::to_string(i) + "]"));
        for (std::size_t i = 0; i < ts.size(); ++i)
            sc.tweezers.push_back(
                parse_tweezer(ts[i], pc, "tweezers[" + std::to_string(i) + "]"));
        out.scenario = std::move(sc);
    }

    if (!opt.force) {
        const auto v = out.scenario.validate();
        if (!v.ok) {
            std::string msg = "validation failed (pass --force to waive):";
            for (const auto& s : v.issues) msg += "\n  - " + s;
            throw ConfigError("", msg);
        }
    }
    out.canonical = emit_scenario(out.scenario);
    out.hash = scenario_hash(out.canonical);
    return out;
}

LoadedScenario parse_scenario(const std::string& path, const ParseOptions& opt) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path);
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);  // allow comments
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("JSON parse error: ") + e.what());
    }
    return parse_scenario_json(doc, opt);
}

json emit_scenario(const ArrayScenario& sc) {
    json doc;
    doc["constants"] = {{"eps0", sc.constants.eps0},
                        {"c", sc.constants.c},
                        {"hbar", sc.constants.hbar},
                        {"kB", sc.constants.kB}};
    doc["particles"] = json::array();
    for (const auto& p : sc.particles) {
        json j;
        j["diameters"] = {format_si(p.diameters[0], "m"), format_si(p.diameters[1], "m"),
                          format_si(p.diameters[2], "m")};
        j["permittivity"] = p.permittivity;
        j["mass"] = format_si(p.mass, "kg");
        doc["particles"].push_back(j);
    }
    doc["tweezers"] = json::array();
    for (const auto& t : sc.tweezers) {
        json j;
        j["focus"] = {format_si(t.focus[0], "m"), format_si(t.focus[1], "m")};
        j["waist"] = format_si(t.waist, "m");
        j["wavelength"] = format_si(t.wavelength, "m");
        j["amplitude"] = format_si(t.amplitude, "V/m");
        j["phase"] = format_si(t.phase, "rad");
        j["polarization_angle"] = format_si(t.polarization_angle, "rad");
        doc["tweezers"].push_back(j);
    }
    doc["gas"] = {{"gamma", format_si(sc.gas.gamma, "rad/s")},
                  {"temperature", format_si(sc.gas.temperature, "K")},
                  {"thermal_noise", sc.gas.thermal_noise}};
    return doc;
}

std::uint64_t scenario_hash(const json& canonical) {
    const std::string dump = canonical.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_manifest(const std::string& dir, const std::string& command, std::uint64_t hash,
                    std::uint64_t seed, const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    m["scenario_hash"] = hex;
    m["seed"] = seed;
    m["version"] = kToolkitVersion;
    m["outputs"] = outputs;
    const std::string path = dir + "/run_manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << m.dump(2) << "\n";
}

}  // namespace optibind
