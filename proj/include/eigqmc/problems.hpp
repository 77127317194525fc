#pragma once

#include "eigqmc/cubature.hpp"
#include "eigqmc/fem.hpp"
#include "eigqmc/likelihood.hpp"

#include <memory>
#include <vector>

namespace eigqmc::problems {

// f(theta, y) = exp(-Phi(y; G(theta))) with G the PDE observation map at a
// fixed sensor subset; the engine's scale factor is the likelihood normalizer,
// so g receives C * (inner average of exp(-Phi)).
//
// A nonempty box_center recentres the data coordinate: the integrand becomes
// f(theta, y) = exp(-Phi(y + c; G(theta))), so the engine can keep its box at
// the origin while the likelihood mass sits near the prior-mean observations.
class PdeLikelihoodIntegrand : public cubature::NestedIntegrand {
  public:
    PdeLikelihoodIntegrand(std::shared_ptr<fem::ForwardModel> model,
                           likelihood::NoiseModel noise,
                           std::vector<std::size_t> universe_indices, unsigned threads,
                           std::vector<double> box_center = {});

    int theta_dimension() const override { return model_->parameter_dimension(); }
    int data_dimension() const override { return static_cast<int>(design_.size()); }
    double scale() const override { return noise_.normalizer(); }
    void prepare_thetas(const std::vector<std::vector<double>>& thetas) override;
    double log_f(std::size_t theta_index, std::span<const double> y) const override;

  private:
    std::shared_ptr<fem::ForwardModel> model_;
    likelihood::NoiseModel noise_;
    std::vector<std::size_t> design_;
    std::vector<double> center_;
    std::vector<std::vector<double>> observations_;
    unsigned threads_;
};

// Analytic stand-in with a linear forward map G(theta) = A theta; used for
// oracle comparisons where the double integral can be computed densely.
class LinearForwardIntegrand : public cubature::NestedIntegrand {
  public:
    LinearForwardIntegrand(Eigen::MatrixXd A, likelihood::NoiseModel noise);

    int theta_dimension() const override { return static_cast<int>(A_.cols()); }
    int data_dimension() const override { return static_cast<int>(A_.rows()); }
    double scale() const override { return noise_.normalizer(); }
    double log_f(std::size_t theta_index, std::span<const double> y) const override;

    std::vector<double> forward(std::span<const double> theta) const;
    const likelihood::NoiseModel& noise() const { return noise_; }

  private:
    Eigen::MatrixXd A_;
    likelihood::NoiseModel noise_;
};

// Plain function integrand for engine-level tests: f = exp(log_f(theta, y)).
class CallableIntegrand : public cubature::NestedIntegrand {
  public:
    using LogF = std::function<double(std::span<const double>, std::span<const double>)>;
    CallableIntegrand(int s, int k, LogF log_f, double scale = 1.0)
        : s_(s), k_(k), log_f_(std::move(log_f)), scale_(scale) {}

    int theta_dimension() const override { return s_; }
    int data_dimension() const override { return k_; }
    double scale() const override { return scale_; }
    double log_f(std::size_t theta_index, std::span<const double> y) const override {
        return log_f_(theta(theta_index), y);
    }

  private:
    int s_, k_;
    LogF log_f_;
    double scale_;
};

}  // namespace eigqmc::problems
