#include "eigqmc/problems.hpp"

#include "eigqmc/util.hpp"

#include <stdexcept>

namespace eigqmc::problems {

PdeLikelihoodIntegrand::PdeLikelihoodIntegrand(std::shared_ptr<fem::ForwardModel> model,
                                               likelihood::NoiseModel noise,
                                               std::vector<std::size_t> universe_indices,
                                               unsigned threads, std::vector<double> box_center)
    : model_(std::move(model)),
      noise_(std::move(noise)),
      design_(std::move(universe_indices)),
      center_(std::move(box_center)),
      threads_(threads == 0 ? util::default_thread_count() : threads) {
    if (!model_) throw std::invalid_argument("PdeLikelihoodIntegrand: null model");
    if (static_cast<int>(design_.size()) != noise_.k())
        throw std::invalid_argument("PdeLikelihoodIntegrand: design size must match noise k");
    if (!center_.empty() && center_.size() != design_.size())
        throw std::invalid_argument("PdeLikelihoodIntegrand: box center size must match design");
    for (std::size_t idx : design_)
        if (idx >= model_->universe().size())
            throw std::invalid_argument("PdeLikelihoodIntegrand: design index out of range");
}

void PdeLikelihoodIntegrand::prepare_thetas(const std::vector<std::vector<double>>& thetas) {
    NestedIntegrand::prepare_thetas(thetas);
    observations_.assign(thetas.size(), {});
    // Batch the forward solves; the model cache makes repeats cheap.
    util::parallel_for(thetas.size(), threads_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            observations_[i] = model_->forward(thetas[i], design_);
            // Phi(y + c; G) = Phi(y; G - c), so recentring folds into the
            // stored observations.
            for (std::size_t j = 0; j < center_.size(); ++j)
                observations_[i][j] -= center_[j];
        }
    });
}

double PdeLikelihoodIntegrand::log_f(std::size_t theta_index, std::span<const double> y) const {
    return -noise_.potential(y, observations_[theta_index]);
}

LinearForwardIntegrand::LinearForwardIntegrand(Eigen::MatrixXd A, likelihood::NoiseModel noise)
    : A_(std::move(A)), noise_(std::move(noise)) {
    if (A_.rows() != noise_.k())
        throw std::invalid_argument("LinearForwardIntegrand: A rows must match noise k");
}

std::vector<double> LinearForwardIntegrand::forward(std::span<const double> theta) const {
    if (static_cast<int>(theta.size()) != A_.cols())
        throw std::invalid_argument("LinearForwardIntegrand: theta dimension mismatch");
    Eigen::VectorXd th(A_.cols());
    for (Eigen::Index j = 0; j < A_.cols(); ++j) th[j] = theta[j];
    const Eigen::VectorXd g = A_ * th;
    return std::vector<double>(g.data(), g.data() + g.size());
}

double LinearForwardIntegrand::log_f(std::size_t theta_index, std::span<const double> y) const {
    const std::vector<double> g = forward(theta(theta_index));
    return -noise_.potential(y, g);
}

}  // namespace eigqmc::problems
