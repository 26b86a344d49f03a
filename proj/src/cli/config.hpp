#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/grid.hpp"
#include "core/params.hpp"

namespace kqm::cli {

enum class Experiment {
    spectrum,
    relax,
    generator_check,
    schrodinger_limit,
    density,
    decohere,
    classical_limit,
    kramers_baseline
};

const std::vector<Experiment>& all_experiments();
std::string experiment_name(Experiment e);
std::optional<Experiment> experiment_from_name(const std::string& name);

// Bad or unknown configuration. `where` names the line or field.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), location(where) {}
    std::string location;
};

struct PhysicalBlock {
    std::string units = "scaled";  // scaled | si
    // scaled
    double epsilon = 0.1;
    double rest_energy_ratio = 0.0;
    // si
    double mass = 1.0e-27;
    double temperature = 1.0;
    double gamma = 1.309e11;
    double light_speed = 0.0;
    bool operator==(const PhysicalBlock&) const = default;
};

struct PotentialBlock {
    std::string kind = "harmonic";  // free | harmonic | double-well | gaussian-well | polynomial
    double omega = 1.0;
    double a = 0.1, b = 0.5;           // double well a x^4 - b x^2
    double depth = 6.0, width = 1.0;   // gaussian well
    std::vector<double> coeffs;        // polynomial, ascending powers
    double offset = 0.0;               // constant added to V'
    bool operator==(const PotentialBlock&) const = default;
};

struct IntegratorBlock {
    double dt = 0.01;
    double t_end = 5.0;
    bool renormalize = false;
    int snapshot_stride = 0;
    bool operator==(const IntegratorBlock&) const = default;
};

struct InitialBlock {
    // gaussian | two-bump | plane-wave | eigen-superposition | random
    std::string preset = "gaussian";
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;
    double separation = 3.0;       // two-bump
    double wavenumber = 0.0;       // plane-wave, snapped to the nearest retained mode
    std::vector<int> indices{0, 1};        // eigen-superposition
    std::vector<double> weights{1.0, 1.0};
    double kwidth = 1.0;           // random: wavenumber envelope
    bool operator==(const InitialBlock&) const = default;
};

struct OutputBlock {
    std::string directory = "out";
    bool emit_svg = true;
    unsigned seed = 1;
    bool operator==(const OutputBlock&) const = default;
};

struct SpectrumBlock {
    std::vector<double> s_values{0.0, 1.0, 5.0};
    int count = 11;
    double tolerance = 1e-6;
    bool operator==(const SpectrumBlock&) const = default;
};

struct RelaxBlock {
    double fit_start = 0.5;
    double fit_end = 5.0;
    double decay = 0.3;    // Hermite amplitude ratio of the random start
    double kwidth = 1.0;
    bool operator==(const RelaxBlock&) const = default;
};

struct GeneratorBlock {
    std::string zero_point = "minus-half";  // minus-half | plus-half | none
    int eigen_count = 5;
    double tolerance = 1e-6;
    bool operator==(const GeneratorBlock&) const = default;
};

struct SchrodingerBlock {
    std::vector<double> eps_list{0.1, 0.05};
    double slow_time = 6.283185307179586;
    int n_samples = 16;
    bool operator==(const SchrodingerBlock&) const = default;
};

struct DecohereBlock {
    std::vector<double> eps_list{0.1, 0.05};
    int basis_size = 6;
    double horizon = 4.0;
    double sample_every = 1.0;
    double fit_start = 3.0;
    bool operator==(const DecohereBlock&) const = default;
};

struct ClassicalBlock {
    int n_intervals = 4;
    int stencil = 4;
    bool operator==(const ClassicalBlock&) const = default;
};

struct ScenarioConfig {
    Experiment experiment = Experiment::spectrum;
    PhysicalBlock physical;
    PotentialBlock potential;
    GridSpec grid;
    IntegratorBlock integrator;
    InitialBlock initial;
    OutputBlock output;
    SpectrumBlock spectrum;
    RelaxBlock relax;
    GeneratorBlock generator;
    SchrodingerBlock schrodinger;
    DecohereBlock decohere;
    ClassicalBlock classical;
    bool operator==(const ScenarioConfig&) const = default;
};

// Built-in defaults for one experiment.
ScenarioConfig default_config(Experiment e);

// Overlay the text on the experiment's defaults. The experiment comes from
// [run] experiment, or from `forced` when given; a mismatch is an error.
ScenarioConfig parse_config_text(const std::string& text, std::optional<Experiment> forced = std::nullopt,
                                 const std::string& source = "config");
ScenarioConfig parse_config(const std::string& path, std::optional<Experiment> forced = std::nullopt);

// Full config, every key written; parse_config_text(serialize(c)) == c.
// `relevant_only` drops the blocks the experiment ignores (template output).
std::string serialize(const ScenarioConfig& cfg, bool relevant_only = false);

// Semantic checks; throws ConfigError naming the field.
void validate(const ScenarioConfig& cfg);

PotentialSpec make_potential(const PotentialBlock& b);
DimensionlessParams make_params(const ScenarioConfig& cfg);

}  // namespace kqm::cli
