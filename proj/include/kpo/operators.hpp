// operators.hpp — truncated Fock-space operators and the rotating-frame
// Hamiltonian  H = delta a†a - (chi/2) a†a†aa + beta (a†a† + aa).

#pragma once

#include <Eigen/Dense>

#include "kpo/params.hpp"

namespace kpo {

using ComplexMatrix = Eigen::MatrixXcd;

// Bosonic annihilation operator: entry (n-1, n) = sqrt(n). Requires dim >= 2.
ComplexMatrix annihilation(int dim);

// Photon-number operator a†a, diagonal (0, 1, ..., dim-1).
ComplexMatrix number_operator(int dim);

// Photon-number parity, diagonal (-1)^n. Requires dim >= 1.
ComplexMatrix parity(int dim);

// Rotating-frame Hamiltonian at two-photon drive amplitude beta (angular).
// Diagonal entry n is n*delta - n(n-1)*chi/2; the drive couples n <-> n+2
// with matrix element beta*sqrt((n+1)(n+2)). Hermitian by construction.
ComplexMatrix hamiltonian_rwa(const KpoParams& params, double beta);

} // namespace kpo
