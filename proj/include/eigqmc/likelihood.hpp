#pragma once

#include <Eigen/Dense>

#include <span>

namespace eigqmc::likelihood {

// Gaussian observation-noise model y = G + eta, eta ~ N(0, Gamma).
// Holds the symmetric inverse square root of Gamma, the smallest eigenvalue
// mu_min, and the log normalizer log C = -1/2 log det(2 pi Gamma).
class NoiseModel {
  public:
    static NoiseModel scaled_identity(int k, double gamma);
    static NoiseModel from_matrix(const Eigen::MatrixXd& gamma);

    int k() const { return static_cast<int>(inv_sqrt_.rows()); }
    double mu_min() const { return mu_min_; }
    double log_normalizer() const { return log_norm_; }
    double normalizer() const;  // C = exp(log_normalizer)
    const Eigen::MatrixXd& inv_sqrt() const { return inv_sqrt_; }

    // Phi(y; G) = 1/2 || Gamma^{-1/2} (y - G) ||^2
    double potential(std::span<const double> y, std::span<const double> G) const;
    // C exp(-Phi); prefer log_density for anything that might underflow.
    double density(std::span<const double> y, std::span<const double> G) const;
    double log_density(std::span<const double> y, std::span<const double> G) const;

  private:
    Eigen::MatrixXd inv_sqrt_;
    double mu_min_ = 1.0;
    double log_norm_ = 0.0;
};

struct TruncationChoice {
    double K = 0.0;          // data-box half-width
    double tail_bound = 0.0; // certified bound on the neglected tail mass
};

// Smallest K with certified tail bound <= eps:
//   K = M + 2 sqrt(mu_min log(C^{1/2} e^{||G||^2/(4 mu_min)} / eps)),  M = max_j |G_j|,
// degenerating to K = M when the log argument is <= 1. The certified bound is
//   C^{1/2} e^{||G||^2/(4 mu_min)} e^{-(K-M)^2/(4 mu_min)}.
TruncationChoice choose_truncation(const NoiseModel& noise, std::span<const double> G_bar,
                                   double eps);

// Sharper tail bound at a given K:
//   C^{1/2} e^{||G||^2/(4 mu)} [ (4 pi mu)^{k/2}
//     - (pi mu)^{k/2} prod_j (erf((G_j + K)/(2 sqrt(mu))) - erf((G_j - K)/(2 sqrt(mu)))) ]
double tail_bound_erf(const NoiseModel& noise, std::span<const double> G_bar, double K);

}  // namespace eigqmc::likelihood
