#pragma once

#include "eigqmc/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eigqmc::qmc {

struct GeneratingVector {
    std::vector<std::uint64_t> components;
    std::optional<std::uint64_t> modulus_hint;  // n the vector was built for, if known

    std::size_t dimension() const { return components.size(); }
    std::uint64_t component(std::size_t j) const { return components.at(j); }
};

// Accepted file layouts: one integer per line, or two whitespace-separated
// columns "index value" with 1-based contiguous indices. '#' starts a comment.
// Requesting more components than the file provides is an error.
GeneratingVector load_generating_vector(const std::string& path, std::size_t dimension);
void write_generating_vector(const std::string& path, const GeneratingVector& z);

// Axis-aligned box; the image domain of a lattice rule.
struct Box {
    std::vector<double> lower, upper;

    static Box unit(std::size_t dim);
    static Box centered(std::size_t dim, double center, double halfwidth);
    std::size_t dimension() const { return lower.size(); }
    double volume() const;
};

struct ShiftedLatticeRule {
    GeneratingVector generator;
    std::uint64_t n = 1;                        // point count, a power of two
    std::vector<std::vector<double>> shifts;    // each of the rule's dimension
    Box box;
};

// Point i (1-based internally, i = 1..n) is the box-affine image of
// frac(i z / n + shift). Returned in that order.
std::vector<std::vector<double>> lattice_points(const ShiftedLatticeRule& rule,
                                                std::size_t shift_index);

// Unit-cube coordinate of a single lattice point: frac(i z_j / n + shift_j).
double lattice_coord(std::uint64_t i, std::uint64_t z_j, std::uint64_t n, double shift_j);

struct ShiftStream {
    std::uint64_t seed = 1;
    std::size_t dimension = 1;
    std::size_t count = 0;
};

// count uniform shifts in [0,1)^dimension. Fully determined by the stream
// descriptor: mt19937_64 seeded per stream, doubles via 53-bit mantissa draw.
std::vector<std::vector<double>> make_shifts(const ShiftStream& stream);

struct CbcResult {
    GeneratingVector vector;
    std::vector<double> criterion;  // shift-averaged squared error after each component
};

// Component-by-component construction for n a power of two. Candidates are
// the odd integers in {1, ..., n-1}; the first component is fixed to 1; ties
// resolve to the smallest candidate. The criterion is the shift-averaged
// squared worst-case error
//   e^2(z) = sum_{u != empty} gamma_u (1/n) sum_i prod_{j in u} B2(frac(i z_j / n))
// with B2(x) = x^2 - x + 1/6, accumulated degree-resolved so that
// order-dependent and smoothness-resolved families cost the same as product
// weights.
CbcResult cbc_construct(std::uint64_t n, std::size_t dimension,
                        const weights::WeightSchedule& schedule);

}  // namespace eigqmc::qmc
