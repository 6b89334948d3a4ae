// analytic.hpp — closed-form dressed-state picture for the resonant
// two-photon drive: Rabi splitting of the {|0>, |2>} pair, ac Stark shift of
// the {|1>, |3>} pair, and the four transition frequencies they produce.
// Pure arithmetic, independent of the truncated-Fock machinery, so it can
// cross-check the numerics (and vice versa).

#pragma once

#include <array>

#include <Eigen/Dense>

#include "kpo/params.hpp"

namespace kpo {

struct DressedModel {
    double beta = 0.0;
    double chi = 0.0;
    double rabi_split = 0.0;      // sqrt(2) beta
    double stark_exact_1 = 0.0;   // -chi/2 + chi sqrt(1 + 6 beta^2/chi^2)
    double stark_exact_3 = 0.0;   // -chi/2 - chi sqrt(1 + 6 beta^2/chi^2)
    double stark_approx_1 = 0.0;  //  chi/2 + 3 beta^2/chi
    double stark_approx_3 = 0.0;  // -3 chi/2 - 3 beta^2/chi
    double mixing_delta = 0.0;    // (chi - sqrt(chi^2 + 6 beta^2)) / (sqrt(6) beta)
};

// Requires chi > 0, beta >= 0. mixing_delta at beta = 0 is its limit, 0.
DressedModel dressed_model(double beta, double chi);

// Transition frequencies relative to w_p/2, in the order
// {w_10, w_01, w_12, w_21}:
//   w_10 = +(delta + 3 beta^2/chi) - sqrt(2) beta
//   w_01 = -(delta + 3 beta^2/chi) + sqrt(2) beta
//   w_12 = +(delta + 3 beta^2/chi) + sqrt(2) beta
//   w_21 = -(delta + 3 beta^2/chi) - sqrt(2) beta
struct AnalyticTransitions {
    double w_10, w_01, w_12, w_21;
    std::array<double, 4> as_array() const { return {w_10, w_01, w_12, w_21}; }
};
AnalyticTransitions analytic_transition_frequencies(double delta_detuning,
                                                    double chi, double beta);

// Brute-force 4x4 block of the rotating-frame Hamiltonian on photon numbers
// 0..3: diagonal (0, delta, 2 delta - chi, 3 delta - 3 chi), couplings
// sqrt(2) beta on 0<->2 and sqrt(6) beta on 1<->3. Ascending eigenvalues.
struct FourLevelOracle {
    Eigen::Vector4d energies;
    Eigen::Matrix4d states;  // column j belongs to energies[j]
};
FourLevelOracle four_level_oracle(double delta_detuning, double chi, double beta);

} // namespace kpo
