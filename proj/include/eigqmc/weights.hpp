#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace eigqmc::weights {

// Riemann zeta for real x > 1 (Euler-Maclaurin, at least 12 significant digits).
double zeta(double x);

// rho(lambda) = 2 zeta(2 lambda) / (2 pi^2)^lambda, lambda in (1/2, 1].
double rho(double lambda);

// Problem constants entering the weight formulas. b must be positive and
// non-increasing; p is the summability exponent of b.
struct RegularityParams {
    double C = 1.0;          // uniform bound on the forward map
    double beta = 1.0;       // factorial growth exponent, >= 1
    std::vector<double> b;   // per-dimension sensitivity bounds
    double p = 0.5;          // summability exponent, in (0, 1)
    double mu_min = 1.0;     // smallest noise-covariance eigenvalue
    double K = 0.5;          // data-box half-width
    int k = 1;               // number of observations
    void validate() const;
};

// A cubature weight family gamma_u over finite subsets u of {1, ..., d}.
// Every supported family decomposes as
//   gamma_u = sum_{t >= |u|} D_t * e_t(u),
//   e_t(u)  = sum over per-member degrees m_j in {1..alpha}, sum m_j = t,
//             of prod_j phi_j(m_j),
// which covers product weights (D_t = 1, alpha = 1), product-and-order-
// dependent weights (alpha = 1), order-dependent weights (alpha = 1,
// phi constant), and their smoothness-resolved generalization (alpha > 1).
// gamma_{empty} = 1 by convention.
class WeightSchedule {
  public:
    enum class Kind { Product, Pod, OrderDependent, Spod };

    Kind kind() const { return kind_; }
    double lambda() const { return lambda_; }
    std::size_t alpha() const { return alpha_; }
    std::size_t dimension() const { return dim_terms_.empty() ? 0 : dim_terms_[0].size(); }
    std::string describe() const;

    // gamma_u for 0-based member indices; members must be distinct and within
    // the schedule dimension. Evaluated with the degree-resolved dynamic
    // program (cost O(|u|^2 alpha^2)), never by enumerating degree tuples.
    double subset_weight(std::span<const std::size_t> members) const;

    // Degree-resolved access used by the lattice construction.
    double degree_factor(std::size_t t) const;                  // D_t, t >= 1
    double dim_term(std::size_t j, std::size_t m) const;        // phi_j(m), 1 <= m <= alpha
    std::size_t max_degree() const { return alpha_ * dimension(); }

    static WeightSchedule product(std::vector<double> factors);

    friend WeightSchedule pod_weights_inner(const RegularityParams&, double delta);
    friend WeightSchedule order_dependent_weights_outer(const RegularityParams&, double delta);
    friend WeightSchedule spod_weights_periodic(const RegularityParams&);
    friend WeightSchedule cbc_schedule_inner(const RegularityParams&, double delta);
    friend WeightSchedule cbc_schedule_outer(const RegularityParams&, double delta);
    friend WeightSchedule cbc_schedule_periodic(const RegularityParams&);

  private:
    WeightSchedule() = default;
    Kind kind_ = Kind::Product;
    double lambda_ = 1.0;
    std::size_t alpha_ = 1;
    std::vector<double> degree_factors_;            // D_t for t = 0 .. max_degree
    std::vector<std::vector<double>> dim_terms_;    // [m-1][j] = phi_j(m)
};

// Inner-integral weights: gamma_u = ((|u|!)^beta prod_{j in u} c_j / sqrt(rho(lambda)))^{2/(1+lambda)}
// with c_j = 2^beta C b_j / sqrt(mu_min) and
//   lambda = p/(2-p)        if p in (2/3, 1/beta)
//   lambda = 1/(2-2 delta)  if p in (0, min{2/3, 1/beta}], p != 1/beta
// p = 1/beta is rejected. delta must lie in (0, 1/2).
WeightSchedule pod_weights_inner(const RegularityParams& params, double delta);

// Outer-integral weights: gamma_u = (|u|! a^{|u|})^{2/(1+lambda)} with
//   a = 1.1^k k mu_min^{-1/2} exp((k K^2 + 2 sqrt(k) K C + C^2)/(2 mu_min))
//       / (log(2) sqrt(rho(lambda))),
//   lambda = 1/(2-2 delta).
WeightSchedule order_dependent_weights_outer(const RegularityParams& params, double delta);

// Smoothness-resolved weights for the periodic model:
//   gamma_u = sum over degree tuples m_u in {1..alpha}^{|u|} of
//     C^{|m_u|} 2^{beta(|m_u|-1)} mu_min^{-|m_u|/2} (|m_u|!)^beta
//     prod_{j in u} b_j^{m_j} S(alpha, m_j),
// alpha = floor(1/p) + 1; requires p < 1/beta.
WeightSchedule spod_weights_periodic(const RegularityParams& params);

// Selection profiles for the CBC construction: the same order and dimension
// structure as the families above with the envelope constants dropped. At
// small noise levels those constants grow like exp(1/(2 mu_min)); inside a
// double-precision selection criterion they leave only the highest
// interaction order visible, and the constructed vector can degenerate into
// repeated components.
//   inner:    D_t = (t!)^{beta 2/(1+lambda)},  phi_j = b_j^{2/(1+lambda)}
//   outer:    D_t = (t!)^{2/(1+lambda)},       phi_j = 1
//   periodic: D_t = (t!)^beta,                 phi_j(m) = b_j^m S(alpha, m)
WeightSchedule cbc_schedule_inner(const RegularityParams& params, double delta);
WeightSchedule cbc_schedule_outer(const RegularityParams& params, double delta);
WeightSchedule cbc_schedule_periodic(const RegularityParams& params);

}  // namespace eigqmc::weights
