#include "eigqmc/lattice.hpp"

#include "eigqmc/util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace eigqmc::qmc {

namespace {

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

GeneratingVector load_generating_vector(const std::string& path, std::size_t dimension) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open generating vector file: " + path);
    std::vector<std::pair<bool, std::uint64_t>> rows;  // (has_index, value) pairs
    std::vector<std::uint64_t> indices;
    std::string line;
    std::size_t lineno = 0;
    bool two_column = false, one_column = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        for (std::string tok; ls >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;
        auto parse = [&](const std::string& tok) -> std::uint64_t {
            try {
                std::size_t pos = 0;
                if (tok.find('-') != std::string::npos) throw std::invalid_argument("negative");
                const unsigned long long v = std::stoull(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument("trailing");
                return v;
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": not a nonnegative integer: '" + tok + "'");
            }
        };
        if (tokens.size() == 1) {
            one_column = true;
            rows.emplace_back(false, parse(tokens[0]));
        } else if (tokens.size() == 2) {
            two_column = true;
            indices.push_back(parse(tokens[0]));
            rows.emplace_back(true, parse(tokens[1]));
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected one or two columns");
        }
        if (one_column && two_column)
            throw std::runtime_error(path + ": mixed one- and two-column layout");
    }
    if (two_column) {
        for (std::size_t r = 0; r < indices.size(); ++r) {
            if (indices[r] != r + 1)
                throw std::runtime_error(path + ": indices must be 1-based and contiguous");
        }
    }
    if (rows.size() < dimension)
        throw std::runtime_error(path + ": requested " + std::to_string(dimension) +
                                 " components, file has " + std::to_string(rows.size()));
    GeneratingVector z;
    z.components.reserve(dimension);
    for (std::size_t j = 0; j < dimension; ++j) z.components.push_back(rows[j].second);
    return z;
}

void write_generating_vector(const std::string& path, const GeneratingVector& z) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write generating vector file: " + path);
    for (std::uint64_t c : z.components) out << c << "\n";
}

Box Box::unit(std::size_t dim) {
    Box b;
    b.lower.assign(dim, 0.0);
    b.upper.assign(dim, 1.0);
    return b;
}

Box Box::centered(std::size_t dim, double center, double halfwidth) {
    Box b;
    b.lower.assign(dim, center - halfwidth);
    b.upper.assign(dim, center + halfwidth);
    return b;
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t j = 0; j < lower.size(); ++j) v *= upper[j] - lower[j];
    return v;
}

double lattice_coord(std::uint64_t i, std::uint64_t z_j, std::uint64_t n, double shift_j) {
    const std::uint64_t r =
        static_cast<std::uint64_t>((static_cast<unsigned __int128>(i % n) * (z_j % n)) % n);
    double x = static_cast<double>(r) / static_cast<double>(n) + shift_j;
    if (x >= 1.0) x -= 1.0;
    return x;
}

std::vector<std::vector<double>> lattice_points(const ShiftedLatticeRule& rule,
                                                std::size_t shift_index) {
    if (!is_power_of_two(rule.n)) throw std::invalid_argument("lattice_points: n must be 2^m");
    if (shift_index >= rule.shifts.size())
        throw std::out_of_range("lattice_points: shift index");
    const std::size_t d = rule.box.dimension();
    if (rule.generator.dimension() < d)
        throw std::invalid_argument("lattice_points: generating vector too short");
    const auto& shift = rule.shifts[shift_index];
    if (shift.size() != d) throw std::invalid_argument("lattice_points: shift dimension");
    std::vector<std::vector<double>> pts(rule.n, std::vector<double>(d));
    for (std::uint64_t i = 1; i <= rule.n; ++i) {
        auto& p = pts[i - 1];
        for (std::size_t j = 0; j < d; ++j) {
            const double u = lattice_coord(i, rule.generator.component(j), rule.n, shift[j]);
            p[j] = rule.box.lower[j] + (rule.box.upper[j] - rule.box.lower[j]) * u;
        }
    }
    return pts;
}

std::vector<std::vector<double>> make_shifts(const ShiftStream& stream) {
    if (stream.dimension == 0) throw std::invalid_argument("make_shifts: dimension >= 1");
    std::mt19937_64 eng(stream.seed);
    std::vector<std::vector<double>> shifts(stream.count,
                                            std::vector<double>(stream.dimension));
    for (auto& row : shifts)
        for (auto& x : row) x = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return shifts;
}

CbcResult cbc_construct(std::uint64_t n, std::size_t dimension,
                        const weights::WeightSchedule& schedule) {
    if (!is_power_of_two(n)) throw std::invalid_argument("cbc_construct: n must be 2^m");
    if (dimension == 0) throw std::invalid_argument("cbc_construct: dimension >= 1");
    if (schedule.dimension() < dimension)
        throw std::invalid_argument("cbc_construct: schedule dimension too small");

    const std::size_t alpha = schedule.alpha();
    const std::size_t tmax = alpha * dimension;
    // B2 over the grid {m/n}.
    std::vector<double> b2(n);
    for (std::uint64_t m = 0; m < n; ++m) {
        const double x = static_cast<double>(m) / static_cast<double>(n);
        b2[m] = x * x - x + 1.0 / 6.0;
    }

    // Degree-resolved partial products:
    //   P[t][i] = sum over subsets u of already chosen dims, degree maps with
    //             total t, of prod phi_j(m_j) B2({i z_j / n}).
    // e^2 after d dims = (1/n) sum_i sum_{t>=1} D_t P[t][i].
    std::vector<std::vector<double>> P(tmax + 1, std::vector<double>(n, 0.0));
    P[0].assign(n, 1.0);

    std::vector<double> Dt(tmax + 1, 0.0);
    for (std::size_t t = 1; t <= tmax; ++t) Dt[t] = schedule.degree_factor(t);

    CbcResult result;
    result.vector.modulus_hint = n;
    std::vector<double> cand_weight(n, 0.0);  // W(i): candidate-independent part

    for (std::size_t d = 0; d < dimension; ++d) {
        // W(i) = sum_{m=1..alpha} phi_d(m) sum_{t>=m} D_t P[t-m][i]
        for (std::uint64_t i = 0; i < n; ++i) {
            double w = 0.0;
            for (std::size_t m = 1; m <= alpha; ++m) {
                double inner = 0.0;
                for (std::size_t t = m; t <= std::min(tmax, alpha * (d + 1)); ++t)
                    inner += Dt[t] * P[t - m][i];
                w += schedule.dim_term(d, m) * inner;
            }
            cand_weight[i] = w;
        }
        double base = 0.0;  // (1/n) sum_i sum_t D_t P[t][i], candidate independent
        {
            std::vector<double> per_i(n, 0.0);
            for (std::size_t t = 1; t <= std::min(tmax, alpha * d); ++t)
                for (std::uint64_t i = 0; i < n; ++i) per_i[i] += Dt[t] * P[t][i];
            base = util::pairwise_sum(per_i) / static_cast<double>(n);
        }

        std::uint64_t best_z = 1;
        double best_err = std::numeric_limits<double>::infinity();
        std::vector<double> contrib(n);
        const std::uint64_t cand_hi = (n == 1) ? 1 : n - 1;
        for (std::uint64_t z = 1; z <= cand_hi; z += 2) {
            // i z mod n by incremental stepping; i runs 1..n, index i-1.
            std::uint64_t idx = 0;
            for (std::uint64_t i = 0; i < n; ++i) {
                idx += z;
                if (idx >= n) idx -= n;
                contrib[i] = b2[idx] * cand_weight[i];
            }
            const double err = base + util::pairwise_sum(contrib) / static_cast<double>(n);
            if (err < best_err) {
                best_err = err;
                best_z = z;
            }
            if (d == 0) break;  // first component fixed to 1
        }
        result.vector.components.push_back(best_z);
        result.criterion.push_back(best_err);

        // Fold the chosen component into the partial products (descending t).
        std::vector<double> v(n);
        {
            std::uint64_t idx = 0;
            for (std::uint64_t i = 0; i < n; ++i) {
                idx += best_z;
                if (idx >= n) idx -= n;
                v[i] = b2[idx];
            }
        }
        const std::size_t hi = std::min(tmax, alpha * (d + 1));
        for (std::size_t t = hi;; --t) {
            for (std::uint64_t i = 0; i < n; ++i) {
                double acc = P[t][i];
                for (std::size_t m = 1; m <= std::min(alpha, t); ++m)
                    acc += schedule.dim_term(d, m) * v[i] * P[t - m][i];
                P[t][i] = acc;
            }
            if (t == 1) break;
        }
    }
    return result;
}

}  // namespace eigqmc::qmc
