// eigensystem.hpp — diagonalization of the rotating-frame Hamiltonian,
// adiabatic Fock labeling along a drive sweep, and transition tables.

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kpo/exec.hpp"
#include "kpo/operators.hpp"
#include "kpo/params.hpp"

namespace kpo {

struct AmbiguousTrackingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationEdgeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plain eigensystem, eigenvalues ascending, eigenvectors orthonormal.
struct RawEigensystem {
    Eigen::VectorXd energies;
    ComplexMatrix states;  // column j belongs to energies[j]
};

// Throws std::invalid_argument if h deviates from Hermitian by more than
// 1e-9 (max-abs of h - h†).
RawEigensystem diagonalize(const ComplexMatrix& h);

// Eigensystem with adiabatic Fock labels: label n identifies the state
// continuously connected to the Fock state |n> at beta = 0.
struct LabeledEigensystem {
    double beta = 0.0;
    Eigen::VectorXd energies;    // indexed by label
    ComplexMatrix states;        // column = label; phase-fixed
    std::vector<int> labels;     // label -> raw (ascending-energy) index
    Eigen::VectorXd overlaps;    // matched overlap against the previous grid point
};

// Track labels along an ascending beta grid starting at exactly 0. Labels at
// beta = 0 are the Fock indices; afterwards each state is matched to the
// previous grid point by greedy maximum overlap. Any matched overlap below
// 0.7 raises AmbiguousTrackingError naming the offending step; refine the
// grid to resolve it. track_limit restricts the matching to labels
// <= track_limit (< 0 tracks everything); restricted tracking is what the
// calibration path uses at large drives where truncation-edge states mix.
std::vector<LabeledEigensystem> label_sweep(const KpoParams& params,
                                            std::span<const double> betas,
                                            Exec exec = Exec::serial,
                                            int track_limit = -1);

// Per-pair transition data for labels <= max_label.
struct TransitionTable {
    double beta = 0.0;
    int max_label = 0;
    Eigen::MatrixXcd x;          // x(m, n) = <m~| a† |n~>
    Eigen::VectorXd y;           // y(m) = <m~| a†a |m~>
    Eigen::MatrixXd omega;       // omega(m, n) = E_m - E_n
    Eigen::VectorXd parity_sign; // <m~| P |m~>, |.| > 0.999 for clean sectors
    Eigen::VectorXd population;  // rho_mm, attached by populations join
    bool has_populations = false;
};

// Requires max_label < dim - 2; states at the truncation edge are excluded
// by contract (TruncationEdgeError otherwise).
TransitionTable transition_table(const LabeledEigensystem& sys, int max_label);

// Internal helper shared by the sweep drivers: a labeling chain over
// [0, betas.back()] that contains every requested point and has spacing no
// coarser than max_step (angular). Returns chain betas plus the index of
// each requested beta inside the chain.
struct LabelChain {
    std::vector<double> betas;
    std::vector<std::size_t> request_index;
};
LabelChain build_label_chain(std::span<const double> betas, double max_step);

} // namespace kpo
