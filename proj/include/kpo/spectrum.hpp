// spectrum.hpp — complex reflection coefficient: bare-resonator form without
// drive, eigenstate-transition sum under drive, and transition visibility.

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "kpo/eigensystem.hpp"
#include "kpo/params.hpp"
#include "kpo/steadystate.hpp"

namespace kpo {

struct SingularTermError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gamma = 1 - kappa_e / (i(w_ref - w_r) + (kappa_e + kappa_i)/2).
// probe is the rotating-frame detuning w_ref - w_p/2, omega_r likewise.
std::complex<double> reflection_undriven(double probe, double omega_r,
                                         const KpoParams& params);

// One transition's contribution to the driven reflection sum.
struct XiTerm {
    int m = 0, n = 0;
    std::complex<double> value;   // weight / (i(probe - resonance) + half_linewidth)
    double weight = 0.0;          // kappa_e |X_mn|^2 (rho_mm - rho_nn)
    double resonance = 0.0;       // omega_mn
    double half_linewidth = 0.0;  // (kappa_e + kappa_i)(Y_mm + Y_nn)/2
};

// Requires populations attached to the table.
XiTerm xi_term(const TransitionTable& table, int m, int n, double probe,
               const KpoParams& params);

// Gamma = 1 + sum over ordered pairs (m != n, labels <= max_label).
std::complex<double> reflection_driven(double probe, const TransitionTable& table,
                                       const KpoParams& params, int max_label);
std::complex<double> reflection_driven(double probe, const LabeledEigensystem& sys,
                                       const SteadyStateDensity& rho,
                                       const KpoParams& params, int max_label);

// Labeled eigensystems, steady states and population-joined transition
// tables over a beta grid; the shared input of the grid products.
struct BetaTables {
    std::vector<double> betas;
    std::vector<LabeledEigensystem> systems;
    std::vector<TransitionTable> tables;       // labels <= max_label, populations attached
    std::vector<double> steady_residuals;
    int max_label = 0;
};

// Labeling runs on an internally refined chain (spacing <= 0.05 angular MHz)
// so the requested grid need not resolve every avoided crossing itself;
// steady states are solved only at the requested points (parallel map).
BetaTables tabulate_sweep(const KpoParams& params, std::span<const double> betas,
                          int max_label, Exec exec = Exec::serial);

struct SpectrumGrid {
    std::vector<double> beta_axis;
    std::vector<double> probe_axis;
    Eigen::MatrixXcd gamma;  // (beta, probe)
};

// Full reflection grid; each beta row uses its own labeled eigensystem and
// steady state. Sum truncation at internal max_label 5.
SpectrumGrid sweep_grid(const KpoParams& params, std::span<const double> beta_axis,
                        std::span<const double> probe_axis, Exec exec = Exec::serial);
SpectrumGrid sweep_grid(const BetaTables& tabs, std::span<const double> probe_axis,
                        const KpoParams& params, Exec exec = Exec::serial);

// Transitions whose nominal external loss magnitude exceeds the threshold at
// some grid beta whose resonance lies inside [probe_min, probe_max] there.
struct VisibleTransition {
    int m = 0, n = 0;
    bool is_peak = false;        // sign of (rho_mm - rho_nn) at max strength
    double beta_first = 0.0;     // visibility range on the grid
    double beta_last = 0.0;
    double max_strength = 0.0;   // max |kappa_e |X|^2 (rho_mm - rho_nn)|
};

std::vector<VisibleTransition> visible_transitions(const BetaTables& tabs,
                                                   const KpoParams& params,
                                                   double threshold,
                                                   double probe_min,
                                                   double probe_max);

// Truncation of the reflection sum (labels 4 and 5 guard the tails).
inline constexpr int spectrum_sum_max_label = 5;

} // namespace kpo
