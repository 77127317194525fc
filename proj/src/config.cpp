#include "eigqmc/config.hpp"

#include "eigqmc/problems.hpp"
#include "eigqmc/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eigqmc::config {

const char* version() { return "1.0.0"; }

namespace {

std::string trim(const std::string& text) {
    std::size_t lo = text.find_first_not_of(" \t\r\n");
    if (lo == std::string::npos) return "";
    std::size_t hi = text.find_last_not_of(" \t\r\n");
    return text.substr(lo, hi - lo + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

long long parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config: bad integer for " + key + ": '" + value + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad unsigned integer for " + key + ": '" + value +
                                    "'");
    }
    if (pos != value.size() || value.find('-') != std::string::npos)
        throw std::invalid_argument("config: bad unsigned integer for " + key + ": '" + value +
                                    "'");
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
    return v;
}

std::vector<double> parse_reals(const std::string& key, const std::string& value) {
    std::vector<double> out;
    if (trim(value).empty()) return out;
    for (const std::string& part : split(value, ',')) out.push_back(parse_real(key, trim(part)));
    return out;
}

std::vector<std::size_t> parse_indices(const std::string& key, const std::string& value) {
    std::vector<std::size_t> out;
    if (trim(value).empty()) return out;
    for (const std::string& part : split(value, ','))
        out.push_back(static_cast<std::size_t>(parse_uint(key, trim(part))));
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": '" + value + "'");
}

std::string real_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_reals(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += real_text(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_indices(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

Problem parse_problem(const std::string& text) {
    if (text == "paper_i") return Problem::PaperI;
    if (text == "paper_ii") return Problem::PaperII;
    if (text == "toy_analytic") return Problem::ToyAnalytic;
    if (text == "manufactured") return Problem::Manufactured;
    throw std::invalid_argument("config: unknown problem '" + text + "'");
}

std::string problem_name(Problem problem) {
    switch (problem) {
        case Problem::PaperI: return "paper_i";
        case Problem::PaperII: return "paper_ii";
        case Problem::ToyAnalytic: return "toy_analytic";
        case Problem::Manufactured: return "manufactured";
    }
    return "?";
}

ExperimentConfig problem_baseline(Problem problem) {
    ExperimentConfig cfg;
    cfg.problem = problem;
    switch (problem) {
        case Problem::PaperI:
            // Six-level desk sweep: the first two levels sample too few outer
            // nodes to see the likelihood bump, so the fit starts at level 2.
            cfg.fit_window = 4;
            break;
        case Problem::Manufactured:
            break;
        case Problem::PaperII:
            // Smooth periodic variant: higher-order outer rule, single shift,
            // error against a finer reference, and a longer sweep since the
            // sparse combination needs depth before its rate shows.
            cfg.outer_family = cubature::OuterFamily::SmolyakTrapezoid;
            cfg.error_mode = eig::ErrorMode::Abs;
            cfg.shift_count = 1;
            cfg.levels = {0, 1, 2, 3, 4, 5, 6, 7, 8};
            break;
        case Problem::ToyAnalytic:
            cfg.s = 1;
            cfg.gamma = 1.0;
            cfg.box_halfwidth = 2.0;
            cfg.levels = {0, 1, 2, 3, 4, 5, 6, 7, 8};
            cfg.toy_a = {1.0};
            cfg.design = {};
            break;
    }
    return cfg;
}

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
    if (name == "desk") {
        cfg.s = 10;
        cfg.mesh_exponent = 4;
        cfg.gamma = 0.01;
        cfg.box_halfwidth = 0.5;
        cfg.shift_count = cfg.error_mode == eig::ErrorMode::Abs ? 1 : 8;
        cfg.levels = {0, 1, 2, 3, 4, 5};
        return;
    }
    if (name == "paper") {
        cfg.s = 100;
        cfg.mesh_exponent = 5;
        cfg.gamma = 0.01;
        cfg.box_halfwidth = 0.5;
        cfg.shift_count = cfg.error_mode == eig::ErrorMode::Abs ? 1 : 16;
        cfg.levels = {0, 1, 2, 3, 4, 5, 6, 7};
        cfg.fit_window = 0;  // method defaults over the full-length sweep
        return;
    }
    throw std::invalid_argument("config: unknown preset '" + name + "'");
}

std::vector<int> parse_levels(const std::string& text) {
    const std::size_t dots = text.find("..");
    std::vector<int> levels;
    if (dots != std::string::npos) {
        const int lo = static_cast<int>(parse_int("levels", trim(text.substr(0, dots))));
        const int hi = static_cast<int>(parse_int("levels", trim(text.substr(dots + 2))));
        if (hi < lo) throw std::invalid_argument("config: empty level range");
        for (int l = lo; l <= hi; ++l) levels.push_back(l);
        return levels;
    }
    for (const std::string& part : split(text, ','))
        levels.push_back(static_cast<int>(parse_int("levels", trim(part))));
    return levels;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "problem") {
        cfg.problem = parse_problem(value);
    } else if (key == "s") {
        cfg.s = static_cast<int>(parse_int(key, value));
    } else if (key == "mesh_exponent") {
        cfg.mesh_exponent = static_cast<int>(parse_int(key, value));
    } else if (key == "gamma") {
        cfg.gamma = parse_real(key, value);
    } else if (key == "K") {
        cfg.box_halfwidth = parse_real(key, value);
    } else if (key == "eps") {
        if (value == "none")
            cfg.eps.reset();
        else
            cfg.eps = parse_real(key, value);
    } else if (key == "box_center") {
        cfg.box_center = parse_reals(key, value);
    } else if (key == "method") {
        if (value == "ftp")
            cfg.method = cubature::Method::Ftp;
        else if (value == "stp")
            cfg.method = cubature::Method::Stp;
        else
            throw std::invalid_argument("config: unknown method '" + value + "'");
    } else if (key == "levels") {
        cfg.levels = parse_levels(value);
    } else if (key == "sigma") {
        cfg.sigma = parse_real(key, value);
    } else if (key == "inner_offset") {
        cfg.inner_offset = static_cast<int>(parse_int(key, value));
    } else if (key == "outer_offset") {
        cfg.outer_offset = static_cast<int>(parse_int(key, value));
    } else if (key == "smolyak_index_shift") {
        cfg.smolyak_index_shift = static_cast<int>(parse_int(key, value));
    } else if (key == "outer_family") {
        if (value == "lattice")
            cfg.outer_family = cubature::OuterFamily::Lattice;
        else if (value == "smolyak")
            cfg.outer_family = cubature::OuterFamily::SmolyakTrapezoid;
        else
            throw std::invalid_argument("config: unknown outer family '" + value + "'");
    } else if (key == "error_mode") {
        if (value == "rms")
            cfg.error_mode = eig::ErrorMode::Rms;
        else if (value == "abs")
            cfg.error_mode = eig::ErrorMode::Abs;
        else
            throw std::invalid_argument("config: unknown error mode '" + value + "'");
    } else if (key == "reference_level") {
        if (value == "none")
            cfg.reference_level.reset();
        else
            cfg.reference_level = static_cast<int>(parse_int(key, value));
    } else if (key == "R") {
        cfg.shift_count = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
        cfg.seed = parse_uint(key, value);
    } else if (key == "inner_vector_file") {
        cfg.inner_vector_file = value;
    } else if (key == "outer_vector_file") {
        cfg.outer_vector_file = value;
    } else if (key == "design") {
        cfg.design = parse_indices(key, value);
    } else if (key == "threads") {
        cfg.threads = static_cast<unsigned>(parse_uint(key, value));
    } else if (key == "timing") {
        cfg.timing = parse_bool(key, value);
    } else if (key == "toy_a") {
        cfg.toy_a = parse_reals(key, value);
    } else if (key == "p") {
        cfg.summability = parse_real(key, value);
    } else if (key == "delta") {
        cfg.delta = parse_real(key, value);
    } else if (key == "C") {
        cfg.bound_C = parse_real(key, value);
    } else if (key == "beta") {
        cfg.beta = parse_real(key, value);
    } else if (key == "fit_window") {
        cfg.fit_window = static_cast<std::size_t>(parse_uint(key, value));
    } else if (key == "output") {
        cfg.output_path = value;
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

std::vector<std::pair<std::string, std::string>> read_config_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value, got '" + text + "'");
        pairs.emplace_back(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return pairs;
}

void ExperimentConfig::validate() const {
    if (s < 1) throw std::invalid_argument("config: s >= 1 required");
    if (!(gamma > 0.0)) throw std::invalid_argument("config: gamma > 0 required");
    if (!(box_halfwidth > 0.0)) throw std::invalid_argument("config: K > 0 required");
    if (eps && !(*eps > 0.0)) throw std::invalid_argument("config: eps > 0 required");
    if (levels.empty()) throw std::invalid_argument("config: empty level sweep");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 0) throw std::invalid_argument("config: levels must be >= 0");
        if (i > 0 && levels[i] <= levels[i - 1])
            throw std::invalid_argument("config: levels must be strictly increasing");
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("config: sigma > 0 required");
    if (inner_offset < 0 || outer_offset < 0)
        throw std::invalid_argument("config: offsets must be >= 0");
    if (smolyak_index_shift < 0)
        throw std::invalid_argument("config: smolyak_index_shift must be >= 0");
    if (shift_count < 1) throw std::invalid_argument("config: R >= 1 required");
    if (error_mode == eig::ErrorMode::Abs && shift_count != 1)
        throw std::invalid_argument("config: abs error mode uses a single shift (R=1)");
    if (reference_level && *reference_level <= levels.back())
        throw std::invalid_argument("config: reference level must exceed the sweep");
    if (!(summability > 0.0) || !(summability < 1.0))
        throw std::invalid_argument("config: p in (0,1) required");
    if (!(beta >= 1.0)) throw std::invalid_argument("config: beta >= 1 required");
    if (std::abs(summability - 1.0 / beta) < 1e-12)
        throw std::invalid_argument("config: p = 1/beta is excluded");
    if (!(delta > 0.0) || !(delta < 0.5))
        throw std::invalid_argument("config: delta in (0, 1/2) required");
    if (!(bound_C > 0.0)) throw std::invalid_argument("config: C > 0 required");
    if (fit_window == 1) throw std::invalid_argument("config: fit_window must be 0 or >= 2");

    if (problem == Problem::PaperI || problem == Problem::PaperII) {
        if (mesh_exponent < 2 || mesh_exponent > 12)
            throw std::invalid_argument("config: mesh_exponent in [2, 12] required");
        if (design.empty()) throw std::invalid_argument("config: empty design");
        for (std::size_t i = 0; i < design.size(); ++i) {
            if (design[i] >= 9)
                throw std::invalid_argument("config: design indices must be < 9");
            if (i > 0 && design[i] <= design[i - 1])
                throw std::invalid_argument("config: design must be strictly increasing");
        }
        if (!box_center.empty() && box_center.size() != design.size())
            throw std::invalid_argument("config: box_center size must match the design");
        if (problem == Problem::PaperII && !(summability < 1.0 / beta))
            throw std::invalid_argument("config: periodic weights require p < 1/beta");
    } else if (problem == Problem::ToyAnalytic) {
        if (toy_a.size() != static_cast<std::size_t>(s))
            throw std::invalid_argument("config: toy_a must have s entries");
        for (std::size_t j = 0; j < toy_a.size(); ++j) {
            if (toy_a[j] == 0.0)
                throw std::invalid_argument("config: toy_a entries must be nonzero");
            if (j > 0 && std::abs(toy_a[j]) > std::abs(toy_a[j - 1]) + 1e-15)
                throw std::invalid_argument("config: |toy_a| must be non-increasing");
        }
        if (!box_center.empty())
            throw std::invalid_argument("config: box_center is fixed at zero for toy_analytic");
    }
}

std::string ExperimentConfig::canonical() const {
    // threads and output location do not affect computed values, so they stay
    // out of the canonical form and the hash.
    std::ostringstream os;
    os << "problem=" << problem_name(problem) << '\n';
    os << "s=" << s << '\n';
    os << "mesh_exponent=" << mesh_exponent << '\n';
    os << "gamma=" << real_text(gamma) << '\n';
    os << "K=" << real_text(box_halfwidth) << '\n';
    os << "eps=" << (eps ? real_text(*eps) : "none") << '\n';
    os << "box_center=" << join_reals(box_center) << '\n';
    os << "method=" << (method == cubature::Method::Ftp ? "ftp" : "stp") << '\n';
    os << "levels=" << join_ints(levels) << '\n';
    os << "sigma=" << real_text(sigma) << '\n';
    os << "inner_offset=" << inner_offset << '\n';
    os << "outer_offset=" << outer_offset << '\n';
    os << "smolyak_index_shift=" << smolyak_index_shift << '\n';
    os << "outer_family="
       << (outer_family == cubature::OuterFamily::Lattice ? "lattice" : "smolyak") << '\n';
    os << "error_mode=" << (error_mode == eig::ErrorMode::Rms ? "rms" : "abs") << '\n';
    os << "reference_level=" << (reference_level ? std::to_string(*reference_level) : "none")
       << '\n';
    os << "R=" << shift_count << '\n';
    os << "seed=" << seed << '\n';
    os << "inner_vector_file=" << inner_vector_file << '\n';
    os << "outer_vector_file=" << outer_vector_file << '\n';
    os << "design=" << join_indices(design) << '\n';
    os << "timing=" << (timing ? "true" : "false") << '\n';
    os << "toy_a=" << join_reals(toy_a) << '\n';
    os << "p=" << real_text(summability) << '\n';
    os << "delta=" << real_text(delta) << '\n';
    os << "C=" << real_text(bound_C) << '\n';
    os << "beta=" << real_text(beta) << '\n';
    os << "fit_window=" << fit_window << '\n';
    return os.str();
}

std::string ExperimentConfig::hash() const {
    const std::string text = canonical();
    const std::uint64_t h = util::fnv1a(std::span<const char>(text.data(), text.size()));
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::size_t ExperimentConfig::effective_fit_window() const {
    if (fit_window != 0) return fit_window;
    return method == cubature::Method::Ftp ? 3 : 5;
}

int ExperimentConfig::effective_reference_level() const {
    return reference_level.value_or(levels.back() + 2);
}

namespace {

std::vector<double> sensitivity_bounds(const ExperimentConfig& cfg) {
    std::vector<double> b(static_cast<std::size_t>(cfg.s));
    if (cfg.problem == Problem::ToyAnalytic) {
        for (std::size_t j = 0; j < b.size(); ++j) b[j] = std::abs(cfg.toy_a[j]);
        return b;
    }
    const double amp = cfg.problem == Problem::PaperII ? 0.1 / std::sqrt(6.0) : 0.1;
    for (std::size_t j = 0; j < b.size(); ++j)
        b[j] = amp / (static_cast<double>(j + 1) * static_cast<double>(j + 1));
    return b;
}

std::size_t data_dimension(const ExperimentConfig& cfg) {
    return cfg.problem == Problem::ToyAnalytic ? 1 : cfg.design.size();
}

weights::RegularityParams regularity_params(const ExperimentConfig& cfg) {
    weights::RegularityParams params;
    params.C = cfg.bound_C;
    params.beta = cfg.beta;
    params.b = sensitivity_bounds(cfg);
    params.p = cfg.summability;
    params.mu_min = cfg.gamma;
    params.K = cfg.box_halfwidth;
    params.k = static_cast<int>(data_dimension(cfg));
    return params;
}

}  // namespace

weights::WeightSchedule inner_schedule(const ExperimentConfig& cfg) {
    const weights::RegularityParams params = regularity_params(cfg);
    if (cfg.problem == Problem::PaperII) return weights::cbc_schedule_periodic(params);
    return weights::cbc_schedule_inner(params, cfg.delta);
}

weights::WeightSchedule outer_schedule(const ExperimentConfig& cfg) {
    weights::RegularityParams params = regularity_params(cfg);
    // The order-dependent family never reads b; a constant sequence of the
    // right length keeps validation happy.
    params.b.assign(data_dimension(cfg), 1.0);
    return weights::cbc_schedule_outer(params, cfg.delta);
}

namespace {

// Per-coordinate bound on |G - center| used when K is derived from a tail
// tolerance. Exact for the linear toy map; for the PDE problems it probes a
// few extreme parameter vectors and inflates the observed spread.
std::vector<double> forward_deviation_bound(const ExperimentConfig& cfg,
                                            const fem::ForwardModel* model,
                                            const std::vector<double>& center) {
    const std::size_t k = data_dimension(cfg);
    std::vector<double> bound(k, 0.0);
    if (cfg.problem == Problem::ToyAnalytic) {
        double sum = 0.0;
        for (double a : cfg.toy_a) sum += std::abs(a);
        bound[0] = 0.5 * sum;
        return bound;
    }
    std::vector<std::vector<double>> probes;
    const std::size_t s = static_cast<std::size_t>(cfg.s);
    probes.emplace_back(s, 0.0);
    probes.emplace_back(s, 0.5);
    probes.emplace_back(s, -0.5);
    std::vector<double> alternating(s);
    for (std::size_t j = 0; j < s; ++j) alternating[j] = (j % 2 == 0) ? 0.5 : -0.5;
    probes.push_back(alternating);
    for (const auto& theta : probes) {
        const std::vector<double> g = model->forward(theta, cfg.design);
        for (std::size_t j = 0; j < k; ++j)
            bound[j] = std::max(bound[j], std::abs(g[j] - center[j]));
    }
    for (double& v : bound) v *= 1.5;
    return bound;
}

}  // namespace

Experiment assemble(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.problem == Problem::Manufactured)
        throw std::invalid_argument("config: the manufactured problem has no estimator");

    Experiment ex;
    const std::size_t k = data_dimension(cfg);
    ex.noise = likelihood::NoiseModel::scaled_identity(static_cast<int>(k), cfg.gamma);
    ex.log_normalizer = ex.noise.log_normalizer();

    std::vector<double> center;
    if (cfg.problem == Problem::ToyAnalytic) {
        Eigen::MatrixXd A(1, cfg.s);
        for (int j = 0; j < cfg.s; ++j) A(0, j) = cfg.toy_a[static_cast<std::size_t>(j)];
        const likelihood::NoiseModel noise = ex.noise;
        ex.integrand_factory = [A, noise](const std::vector<std::size_t>&) {
            return std::make_unique<problems::LinearForwardIntegrand>(A, noise);
        };
        ex.design = {};
        ex.universe_size = 0;
    } else {
        fem::DiffusionField field;
        field.kind =
            cfg.problem == Problem::PaperII ? fem::FieldKind::Periodic : fem::FieldKind::Affine;
        field.s = cfg.s;
        ex.model = std::make_shared<fem::ForwardModel>(cfg.mesh_exponent, field,
                                                       fem::default_universe());
        // The default data box sits at the origin; an explicit center shifts
        // it toward the forward range instead.
        center = cfg.box_center.empty() ? std::vector<double>(k, 0.0) : cfg.box_center;
        const auto model = ex.model;
        const likelihood::NoiseModel noise = ex.noise;
        const unsigned threads = cfg.threads;
        const std::vector<double> cfg_center = cfg.box_center;
        ex.integrand_factory = [model, noise, threads,
                                cfg_center](const std::vector<std::size_t>& design) {
            return std::make_unique<problems::PdeLikelihoodIntegrand>(model, noise, design,
                                                                      threads, cfg_center);
        };
        ex.design = cfg.design;
        ex.universe_size = ex.model->universe().size();
    }

    // K either direct or derived from the tail tolerance.
    ExperimentConfig effective = cfg;
    if (cfg.eps) {
        const std::vector<double> g_bar =
            forward_deviation_bound(cfg, ex.model.get(), center);
        const likelihood::TruncationChoice choice =
            likelihood::choose_truncation(ex.noise, g_bar, *cfg.eps);
        effective.box_halfwidth = choice.K;
    }

    // Generating vectors sized for the deepest level any run can touch.
    const int top = cfg.levels.back();
    const int deepest =
        cfg.error_mode == eig::ErrorMode::Abs ? std::max(top, cfg.effective_reference_level())
                                              : top;
    int inner_max = deepest;
    int outer_max = deepest;
    if (cfg.method == cubature::Method::Stp) {
        inner_max = static_cast<int>(std::lround(cfg.sigma * deepest));
        outer_max = static_cast<int>(std::floor(deepest / cfg.sigma + 1e-9));
    }

    cubature::EstimatorConfig est;
    est.method = cfg.method;
    est.level = top;
    est.sigma = cfg.sigma;
    est.inner_offset = cfg.inner_offset;
    est.outer_offset = cfg.outer_offset;
    est.smolyak_index_shift = cfg.smolyak_index_shift;
    est.outer_family = cfg.outer_family;
    est.shift_count = cfg.shift_count;
    est.seed = cfg.seed;
    est.threads = cfg.threads;
    est.data_box = qmc::Box::centered(k, 0.0, effective.box_halfwidth);

    if (!cfg.inner_vector_file.empty()) {
        est.inner_z = qmc::load_generating_vector(cfg.inner_vector_file,
                                                  static_cast<std::size_t>(cfg.s));
    } else {
        const std::uint64_t n = std::uint64_t{1} << (inner_max + cfg.inner_offset);
        est.inner_z =
            qmc::cbc_construct(n, static_cast<std::size_t>(cfg.s), inner_schedule(effective))
                .vector;
    }
    if (cfg.outer_family == cubature::OuterFamily::Lattice) {
        if (!cfg.outer_vector_file.empty()) {
            est.outer_z = qmc::load_generating_vector(cfg.outer_vector_file, k);
        } else {
            const std::uint64_t n = std::uint64_t{1} << (outer_max + cfg.outer_offset);
            est.outer_z = qmc::cbc_construct(n, k, outer_schedule(effective)).vector;
        }
    }

    ex.estimator = std::move(est);
    return ex;
}

}  // namespace eigqmc::config
