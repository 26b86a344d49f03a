#include "cli/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cli/presets.hpp"
#include "core/errors.hpp"

namespace kqm::cli {

namespace {

const std::vector<std::pair<Experiment, std::string>> kNames = {
    {Experiment::spectrum, "spectrum"},
    {Experiment::relax, "relax"},
    {Experiment::generator_check, "generator-check"},
    {Experiment::schrodinger_limit, "schrodinger-limit"},
    {Experiment::density, "density"},
    {Experiment::decohere, "decohere"},
    {Experiment::classical_limit, "classical-limit"},
    {Experiment::kramers_baseline, "kramers-baseline"},
};

// --- value <-> text ---------------------------------------------------------

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// shortest text that parses back to the same double
std::string to_text(double v) { return fmt::format("{}", v); }
std::string to_text(int v) { return std::to_string(v); }
std::string to_text(unsigned v) { return std::to_string(v); }
std::string to_text(bool v) { return v ? "true" : "false"; }
std::string to_text(const std::string& v) { return v; }
template <class T>
std::string to_text(const std::vector<T>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_text(v[i]);
    }
    return out;
}

void from_text(const std::string& s, double& v) {
    size_t pos = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected a number, got '" + s + "'");
    }
    if (trim(s.substr(pos)).size()) throw std::invalid_argument("expected a number, got '" + s + "'");
    if (!std::isfinite(v)) throw std::invalid_argument("value must be finite");
}
void from_text(const std::string& s, long long& v) {
    size_t pos = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected an integer, got '" + s + "'");
    }
    if (trim(s.substr(pos)).size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
}
void from_text(const std::string& s, int& v) {
    long long w;
    from_text(s, w);
    if (w < INT32_MIN || w > INT32_MAX) throw std::invalid_argument("integer out of range");
    v = int(w);
}
void from_text(const std::string& s, unsigned& v) {
    long long w;
    from_text(s, w);
    if (w < 0 || w > UINT32_MAX) throw std::invalid_argument("expected a non-negative 32-bit integer");
    v = unsigned(w);
}
void from_text(const std::string& s, bool& v) {
    std::string t = s;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    if (t == "true" || t == "yes" || t == "on" || t == "1")
        v = true;
    else if (t == "false" || t == "no" || t == "off" || t == "0")
        v = false;
    else
        throw std::invalid_argument("expected true or false, got '" + s + "'");
}
void from_text(const std::string& s, std::string& v) { v = s; }
template <class T>
void from_text(const std::string& s, std::vector<T>& v) {
    v.clear();
    if (trim(s).empty()) return;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        T x;
        from_text(trim(item), x);
        v.push_back(x);
    }
}

// --- field table ------------------------------------------------------------

// Calls f(section, key, member) for every configurable field, in file order.
template <class C, class F>
void for_each_field(C& c, F&& f) {
    f("physical", "units", c.physical.units);
    f("physical", "epsilon", c.physical.epsilon);
    f("physical", "rest_energy_ratio", c.physical.rest_energy_ratio);
    f("physical", "mass", c.physical.mass);
    f("physical", "temperature", c.physical.temperature);
    f("physical", "gamma", c.physical.gamma);
    f("physical", "light_speed", c.physical.light_speed);

    f("potential", "kind", c.potential.kind);
    f("potential", "omega", c.potential.omega);
    f("potential", "a", c.potential.a);
    f("potential", "b", c.potential.b);
    f("potential", "depth", c.potential.depth);
    f("potential", "width", c.potential.width);
    f("potential", "coeffs", c.potential.coeffs);
    f("potential", "offset", c.potential.offset);

    f("grid", "nx", c.grid.nx);
    f("grid", "lx", c.grid.lx);
    f("grid", "np", c.grid.np);
    f("grid", "s_max", c.grid.s_max);
    f("grid", "p_spacing", c.grid.p_spacing);

    f("integrator", "dt", c.integrator.dt);
    f("integrator", "t_end", c.integrator.t_end);
    f("integrator", "renormalize", c.integrator.renormalize);
    f("integrator", "snapshot_stride", c.integrator.snapshot_stride);

    f("initial", "preset", c.initial.preset);
    f("initial", "center", c.initial.center);
    f("initial", "width", c.initial.width);
    f("initial", "momentum", c.initial.momentum);
    f("initial", "separation", c.initial.separation);
    f("initial", "wavenumber", c.initial.wavenumber);
    f("initial", "indices", c.initial.indices);
    f("initial", "weights", c.initial.weights);
    f("initial", "kwidth", c.initial.kwidth);

    f("output", "directory", c.output.directory);
    f("output", "emit_svg", c.output.emit_svg);
    f("output", "seed", c.output.seed);

    f("spectrum", "s_values", c.spectrum.s_values);
    f("spectrum", "count", c.spectrum.count);
    f("spectrum", "tolerance", c.spectrum.tolerance);

    f("relax", "fit_start", c.relax.fit_start);
    f("relax", "fit_end", c.relax.fit_end);
    f("relax", "decay", c.relax.decay);
    f("relax", "kwidth", c.relax.kwidth);

    f("generator-check", "zero_point", c.generator.zero_point);
    f("generator-check", "eigen_count", c.generator.eigen_count);
    f("generator-check", "tolerance", c.generator.tolerance);

    f("schrodinger-limit", "eps_list", c.schrodinger.eps_list);
    f("schrodinger-limit", "slow_time", c.schrodinger.slow_time);
    f("schrodinger-limit", "n_samples", c.schrodinger.n_samples);

    f("decohere", "eps_list", c.decohere.eps_list);
    f("decohere", "basis_size", c.decohere.basis_size);
    f("decohere", "horizon", c.decohere.horizon);
    f("decohere", "sample_every", c.decohere.sample_every);
    f("decohere", "fit_start", c.decohere.fit_start);

    f("classical-limit", "n_intervals", c.classical.n_intervals);
    f("classical-limit", "stencil", c.classical.stencil);
}

const std::vector<std::string> kSectionOrder = {"run",     "physical", "potential",         "grid",
                                                 "integrator", "initial", "output",          "spectrum",
                                                 "relax",   "generator-check", "schrodinger-limit", "decohere",
                                                 "classical-limit"};

std::set<std::string> relevant_sections(Experiment e) {
    switch (e) {
        case Experiment::spectrum: return {"run", "grid", "output", "spectrum"};
        case Experiment::relax: return {"run", "physical", "potential", "grid", "integrator", "output", "relax"};
        case Experiment::generator_check: return {"run", "physical", "potential", "grid", "output", "generator-check"};
        case Experiment::schrodinger_limit:
            return {"run", "physical", "potential", "grid", "integrator", "initial", "output", "schrodinger-limit"};
        case Experiment::density: return {"run", "grid", "initial", "output"};
        case Experiment::decohere:
            return {"run", "physical", "potential", "grid", "integrator", "initial", "output", "decohere"};
        case Experiment::classical_limit:
            return {"run", "physical", "potential", "grid", "integrator", "initial", "output", "classical-limit"};
        case Experiment::kramers_baseline:
            return {"run", "physical", "potential", "grid", "integrator", "initial", "output"};
    }
    return {};
}

// 1-based line of [section] / key inside it, 0 when not found.
int locate(const std::string& text, const std::string& section, const std::string& key) {
    std::stringstream ss(text);
    std::string line, current;
    int n = 0;
    while (std::getline(ss, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            current = trim(t.substr(1, t.size() - 2));
            if (key.empty() && current == section) return n;
            continue;
        }
        if (current == section && !key.empty()) {
            const auto eq = t.find('=');
            if (eq != std::string::npos && trim(t.substr(0, eq)) == key) return n;
        }
    }
    return 0;
}

std::string where(const std::string& source, int line, const std::string& field) {
    return line > 0 ? fmt::format("{}:{}: {}", source, line, field) : fmt::format("{}: {}", source, field);
}

}  // namespace

const std::vector<Experiment>& all_experiments() {
    static const std::vector<Experiment> v = [] {
        std::vector<Experiment> out;
        for (const auto& [e, _] : kNames) out.push_back(e);
        return out;
    }();
    return v;
}

std::string experiment_name(Experiment e) {
    for (const auto& [x, n] : kNames)
        if (x == e) return n;
    return "?";
}

std::optional<Experiment> experiment_from_name(const std::string& name) {
    for (const auto& [x, n] : kNames)
        if (n == name) return x;
    return std::nullopt;
}

ScenarioConfig parse_config_text(const std::string& text, std::optional<Experiment> forced, const std::string& source) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("{}:{}", source, e.line()), e.message());
    }
    for (const auto& [key, node] : tree)
        if (node.empty() && locate(text, key, "") == 0)
            throw ConfigError(where(source, locate(text, "", key), key), "key outside any section");

    std::optional<Experiment> exp = forced;
    if (auto run = tree.get_child_optional("run")) {
        for (const auto& [key, node] : *run) {
            if (key != "experiment")
                throw ConfigError(where(source, locate(text, "run", key), "[run] " + key), "unknown key");
            const auto named = experiment_from_name(node.data());
            if (!named)
                throw ConfigError(where(source, locate(text, "run", key), "[run] experiment"),
                                  "unknown experiment '" + node.data() + "'");
            if (forced && *forced != *named)
                throw ConfigError(where(source, locate(text, "run", key), "[run] experiment"),
                                  fmt::format("config is for '{}' but '{}' was requested", node.data(),
                                              experiment_name(*forced)));
            exp = named;
        }
    }
    if (!exp) throw ConfigError(source + ": [run] experiment", "no experiment given");

    ScenarioConfig cfg = default_config(*exp);
    std::map<std::string, std::set<std::string>> known;
    for_each_field(cfg, [&](const char* sec, const char* key, auto&) { known[sec].insert(key); });

    for (const auto& [sec, node] : tree) {
        if (sec == "run") continue;
        auto ks = known.find(sec);
        if (ks == known.end()) throw ConfigError(where(source, locate(text, sec, ""), "[" + sec + "]"), "unknown section");
        for (const auto& [key, _] : node)
            if (!ks->second.count(key))
                throw ConfigError(where(source, locate(text, sec, key), "[" + sec + "] " + key), "unknown key");
    }
    for_each_field(cfg, [&](const char* sec, const char* key, auto& member) {
        auto v = tree.get_optional<std::string>(pt::ptree::path_type(std::string(sec) + '\x1f' + key, '\x1f'));
        if (!v) return;
        try {
            from_text(trim(*v), member);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where(source, locate(text, sec, key), fmt::format("[{}] {}", sec, key)), e.what());
        }
    });
    try {
        validate(cfg);
    } catch (ConfigError& e) {
        // attach the line when the offending key is in the file
        const auto& loc = e.location;
        if (loc.size() > 2 && loc.front() == '[') {
            const auto close = loc.find(']');
            const std::string sec = loc.substr(1, close - 1);
            const std::string key = trim(loc.substr(close + 1));
            throw ConfigError(where(source, locate(text, sec, key), loc),
                              std::string(e.what()).substr(loc.size() + 2));
        }
        throw;
    }
    return cfg;
}

ScenarioConfig parse_config(const std::string& path, std::optional<Experiment> forced) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot read file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), forced, path);
}

std::string serialize(const ScenarioConfig& cfg, bool relevant_only) {
    const auto keep = relevant_sections(cfg.experiment);
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> by_section;
    for_each_field(cfg, [&](const char* sec, const char* key, const auto& member) {
        by_section[sec].emplace_back(key, to_text(member));
    });
    std::string out = fmt::format("[run]\nexperiment = {}\n", experiment_name(cfg.experiment));
    for (const auto& sec : kSectionOrder) {
        if (sec == "run" || (relevant_only && !keep.count(sec))) continue;
        out += fmt::format("\n[{}]\n", sec);
        for (const auto& [k, v] : by_section[sec]) out += fmt::format("{} = {}\n", k, v);
    }
    return out;
}

void validate(const ScenarioConfig& c) {
    auto fail = [](const char* sec, const char* key, const std::string& msg) {
        throw ConfigError(fmt::format("[{}] {}", sec, key), msg);
    };
    auto positive = [&](double v, const char* sec, const char* key) {
        if (!(v > 0.0)) fail(sec, key, "must be positive");
    };
    auto nonneg = [&](double v, const char* sec, const char* key) {
        if (!(v >= 0.0)) fail(sec, key, "must be non-negative");
    };

    const auto& p = c.physical;
    if (p.units != "scaled" && p.units != "si") fail("physical", "units", "must be 'scaled' or 'si'");
    nonneg(p.epsilon, "physical", "epsilon");
    positive(p.mass, "physical", "mass");
    positive(p.temperature, "physical", "temperature");
    positive(p.gamma, "physical", "gamma");
    nonneg(p.light_speed, "physical", "light_speed");

    const auto& v = c.potential;
    static const std::set<std::string> kinds = {"free", "harmonic", "double-well", "gaussian-well", "polynomial"};
    if (!kinds.count(v.kind)) fail("potential", "kind", "must be one of free, harmonic, double-well, gaussian-well, polynomial");
    if (v.kind == "harmonic") positive(v.omega, "potential", "omega");
    if (v.kind == "double-well") {
        positive(v.a, "potential", "a");
        nonneg(v.b, "potential", "b");
    }
    if (v.kind == "gaussian-well") positive(v.width, "potential", "width");
    if (v.kind == "polynomial" && v.coeffs.empty()) fail("potential", "coeffs", "needs at least one coefficient");

    const auto& g = c.grid;
    if (g.nx < 8 || (g.nx & (g.nx - 1))) fail("grid", "nx", "must be a power of two >= 8");
    positive(g.lx, "grid", "lx");
    if (g.np < 2) fail("grid", "np", "must be >= 2");
    nonneg(g.s_max, "grid", "s_max");
    nonneg(g.p_spacing, "grid", "p_spacing");

    positive(c.integrator.dt, "integrator", "dt");
    positive(c.integrator.t_end, "integrator", "t_end");
    if (c.integrator.snapshot_stride < 0) fail("integrator", "snapshot_stride", "must be non-negative");

    const auto& in = c.initial;
    static const std::set<std::string> presets = {"gaussian", "two-bump", "plane-wave", "eigen-superposition", "random"};
    if (!presets.count(in.preset))
        fail("initial", "preset", "must be one of gaussian, two-bump, plane-wave, eigen-superposition, random");
    positive(in.width, "initial", "width");
    positive(in.kwidth, "initial", "kwidth");
    if (in.indices.size() != in.weights.size()) fail("initial", "weights", "needs one weight per index");
    for (int k : in.indices)
        if (k < 0) fail("initial", "indices", "must be non-negative");
    if (in.preset == "eigen-superposition" && in.indices.empty()) fail("initial", "indices", "must not be empty");

    if (c.output.directory.empty()) fail("output", "directory", "must not be empty");

    if (c.spectrum.s_values.empty()) fail("spectrum", "s_values", "must not be empty");
    if (c.spectrum.count < 1) fail("spectrum", "count", "must be >= 1");
    if (c.spectrum.count > g.np) fail("spectrum", "count", "must not exceed [grid] np");
    positive(c.spectrum.tolerance, "spectrum", "tolerance");

    if (!(c.relax.fit_start >= 0.0 && c.relax.fit_end > c.relax.fit_start))
        fail("relax", "fit_end", "needs 0 <= fit_start < fit_end");
    if (!(c.relax.decay > 0.0 && c.relax.decay < 1.0)) fail("relax", "decay", "must lie in (0, 1)");
    positive(c.relax.kwidth, "relax", "kwidth");

    if (c.generator.zero_point != "minus-half" && c.generator.zero_point != "plus-half" &&
        c.generator.zero_point != "none")
        fail("generator-check", "zero_point", "must be minus-half, plus-half or none");
    if (c.generator.eigen_count < 1) fail("generator-check", "eigen_count", "must be >= 1");
    if (c.generator.eigen_count > g.nx / 4) fail("generator-check", "eigen_count", "must not exceed nx/4");
    positive(c.generator.tolerance, "generator-check", "tolerance");

    if (c.schrodinger.eps_list.empty()) fail("schrodinger-limit", "eps_list", "must not be empty");
    for (double e : c.schrodinger.eps_list) positive(e, "schrodinger-limit", "eps_list");
    positive(c.schrodinger.slow_time, "schrodinger-limit", "slow_time");
    if (c.schrodinger.n_samples < 1) fail("schrodinger-limit", "n_samples", "must be >= 1");

    if (c.decohere.eps_list.empty()) fail("decohere", "eps_list", "must not be empty");
    for (double e : c.decohere.eps_list) positive(e, "decohere", "eps_list");
    if (c.decohere.basis_size < 2) fail("decohere", "basis_size", "must be >= 2");
    if (c.decohere.basis_size > g.nx / 4) fail("decohere", "basis_size", "must not exceed nx/4");
    for (int k : in.indices)
        if (c.experiment == Experiment::decohere && k >= c.decohere.basis_size)
            fail("initial", "indices", "index beyond [decohere] basis_size");
    positive(c.decohere.horizon, "decohere", "horizon");
    positive(c.decohere.sample_every, "decohere", "sample_every");
    nonneg(c.decohere.fit_start, "decohere", "fit_start");

    if (c.classical.n_intervals < 1) fail("classical-limit", "n_intervals", "must be >= 1");
    if (c.classical.stencil != 4 && c.classical.stencil != 6 && c.classical.stencil != 8)
        fail("classical-limit", "stencil", "must be 4, 6 or 8");
}

PotentialSpec make_potential(const PotentialBlock& b) {
    PotentialSpec v;
    if (b.kind == "free")
        v = PotentialSpec::free_particle();
    else if (b.kind == "harmonic")
        v = PotentialSpec::harmonic(b.omega);
    else if (b.kind == "double-well")
        v = PotentialSpec::double_well(b.a, b.b);
    else if (b.kind == "gaussian-well")
        v = PotentialSpec::gaussian_well(b.depth, b.width);
    else if (b.kind == "polynomial")
        v = PotentialSpec::polynomial(b.coeffs);
    else
        throw ConfigError("[potential] kind", "unknown kind '" + b.kind + "'");
    return b.offset != 0.0 ? v.shifted(b.offset) : v;
}

DimensionlessParams make_params(const ScenarioConfig& cfg) {
    const PotentialSpec v = make_potential(cfg.potential);
    try {
        if (cfg.physical.units == "si") {
            PhysicalParams pp;
            pp.mass = cfg.physical.mass;
            pp.temperature = cfg.physical.temperature;
            pp.gamma = cfg.physical.gamma;
            pp.light_speed = cfg.physical.light_speed;
            pp.potential = v;
            return nondimensionalize(pp);
        }
        return DimensionlessParams::scaled(cfg.physical.epsilon, v, cfg.physical.rest_energy_ratio);
    } catch (const InvalidParameter& e) {
        throw ConfigError("[physical]", e.what());
    }
}

}  // namespace kqm::cli
