#pragma once

#include "eigqmc/cubature.hpp"
#include "eigqmc/eig.hpp"
#include "eigqmc/fem.hpp"
#include "eigqmc/likelihood.hpp"
#include "eigqmc/weights.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eigqmc::config {

const char* version();

enum class Problem { PaperI, PaperII, ToyAnalytic, Manufactured };

// One flat record driving every CLI subcommand. Values come from (in order of
// increasing precedence) the problem baseline, a named preset, a key=value
// config file, and command-line overrides.
struct ExperimentConfig {
    Problem problem = Problem::PaperI;
    int s = 10;                 // parameter dimension
    int mesh_exponent = 4;      // grid is 2^q cells per side
    double gamma = 0.01;        // noise variance (scaled identity)
    double box_halfwidth = 0.5; // K
    std::optional<double> eps;  // when set, K is derived from this tail tolerance
    std::vector<double> box_center;  // empty: problem default (prior-mean observations)
    cubature::Method method = cubature::Method::Ftp;
    std::vector<int> levels = {0, 1, 2, 3, 4, 5};
    double sigma = 1.0;
    int inner_offset = 1;
    int outer_offset = 1;
    int smolyak_index_shift = 2;
    cubature::OuterFamily outer_family = cubature::OuterFamily::Lattice;
    eig::ErrorMode error_mode = eig::ErrorMode::Rms;
    std::optional<int> reference_level;  // Abs mode; default top sweep level + 2
    int shift_count = 8;  // R
    std::uint64_t seed = 1;
    std::string inner_vector_file;  // empty: construct component by component
    std::string outer_vector_file;
    std::vector<std::size_t> design = {0, 4, 8};  // indices into the sensor universe
    unsigned threads = 0;  // 0: environment/hardware default
    bool timing = false;   // when false, runtime columns are written as 0
    std::vector<double> toy_a;  // linear forward map of the analytic model
    double summability = 0.6;   // p
    double delta = 0.25;
    double bound_C = 1.0;
    double beta = 1.0;
    std::size_t fit_window = 0;  // 0: 3 for Ftp, 5 for Stp
    std::string output_path;     // empty: stdout

    void validate() const;        // throws std::invalid_argument on bad values
    std::string canonical() const;  // stable key=value serialization, one per line
    std::string hash() const;       // 16-hex-digit digest of canonical()
    std::size_t effective_fit_window() const;
    int effective_reference_level() const;  // Abs mode reference
};

Problem parse_problem(const std::string& text);
std::string problem_name(Problem problem);

// Baseline values for a problem (desk scale); named presets bundle overrides.
ExperimentConfig problem_baseline(Problem problem);
void apply_preset(ExperimentConfig& cfg, const std::string& name);  // desk | paper

// One key=value assignment; unknown keys and malformed values throw.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Ordered key=value pairs from a config file; '#' comments and blank lines
// are skipped.
std::vector<std::pair<std::string, std::string>> read_config_pairs(const std::string& path);

// "a..b" or comma-separated list.
std::vector<int> parse_levels(const std::string& text);

// Weight schedules feeding the generating-vector construction.
weights::WeightSchedule inner_schedule(const ExperimentConfig& cfg);
weights::WeightSchedule outer_schedule(const ExperimentConfig& cfg);

// Everything the estimator-facing subcommands need, wired and validated.
struct Experiment {
    std::shared_ptr<fem::ForwardModel> model;  // null for the analytic problem
    likelihood::NoiseModel noise;
    double log_normalizer = 0.0;
    cubature::EstimatorConfig estimator;  // level set per run by the caller
    std::vector<std::size_t> design;
    std::size_t universe_size = 0;
    std::function<std::unique_ptr<cubature::NestedIntegrand>(const std::vector<std::size_t>&)>
        integrand_factory;
};

// Builds the forward model, noise, generating vectors (constructed at a
// modulus covering every level the sweep can touch, including the reference),
// and the integrand factory. Throws for the manufactured problem, which has
// no estimator attached.
Experiment assemble(const ExperimentConfig& cfg);

}  // namespace eigqmc::config
