#include "kpo/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace kpo {

DressedModel dressed_model(double beta, double chi) {
    if (!(chi > 0.0)) throw std::invalid_argument("dressed_model: chi must be > 0");
    if (beta < 0.0) throw std::invalid_argument("dressed_model: beta must be >= 0");
    DressedModel m;
    m.beta = beta;
    m.chi = chi;
    m.rabi_split = std::sqrt(2.0) * beta;
    const double root = chi * std::sqrt(1.0 + 6.0 * beta * beta / (chi * chi));
    m.stark_exact_1 = -0.5 * chi + root;
    m.stark_exact_3 = -0.5 * chi - root;
    m.stark_approx_1 = 0.5 * chi + 3.0 * beta * beta / chi;
    m.stark_approx_3 = -1.5 * chi - 3.0 * beta * beta / chi;
    m.mixing_delta = (beta == 0.0) ? 0.0 : (chi - std::sqrt(chi * chi + 6.0 * beta * beta)) /
                                               (std::sqrt(6.0) * beta);
    return m;
}

AnalyticTransitions analytic_transition_frequencies(double delta_detuning,
                                                    double chi, double beta) {
    if (!(chi > 0.0))
        throw std::invalid_argument("analytic_transition_frequencies: chi must be > 0");
    const double stark = delta_detuning + 3.0 * beta * beta / chi;
    const double rabi = std::sqrt(2.0) * beta;
    return {stark - rabi, -stark + rabi, stark + rabi, -stark - rabi};
}

FourLevelOracle four_level_oracle(double delta_detuning, double chi, double beta) {
    if (!(chi > 0.0)) throw std::invalid_argument("four_level_oracle: chi must be > 0");
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    h(0, 0) = 0.0;
    h(1, 1) = delta_detuning;
    h(2, 2) = 2.0 * delta_detuning - chi;
    h(3, 3) = 3.0 * delta_detuning - 3.0 * chi;
    h(0, 2) = h(2, 0) = std::sqrt(2.0) * beta;
    h(1, 3) = h(3, 1) = std::sqrt(6.0) * beta;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(h);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

} // namespace kpo
