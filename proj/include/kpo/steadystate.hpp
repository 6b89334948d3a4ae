// steadystate.hpp — GKSL generator with single-photon loss (optionally pure
// dephasing) and its steady state.

#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "kpo/eigensystem.hpp"
#include "kpo/operators.hpp"
#include "kpo/params.hpp"

namespace kpo {

struct NonUniqueSteadyStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SteadyStateDensity {
    ComplexMatrix rho;          // Hermitian, unit trace
    double beta = 0.0;
    double residual = 0.0;      // ||L vec(rho)||
    double nullspace_audit = 0.0;  // relative residual of the random-RHS probe solve
};

// Superoperator for rho' = -i[H, rho] + loss_rate D[a] rho
//                        + dephasing_rate D[a†a] rho
// with D[L]rho = L rho L† - (L†L rho + rho L†L)/2, in column-stacked
// vectorization (dim² x dim²).
ComplexMatrix liouvillian(const ComplexMatrix& h, double loss_rate,
                          double dephasing_rate = 0.0);

// Solve L vec(rho) = 0 with unit trace. The rho_00 row of L is replaced by
// the vectorized trace constraint and the square system solved by LU; a
// second solve against a fixed pseudo-random right-hand side audits that the
// kernel is one-dimensional. Requires loss_rate > 0 upstream (pass it for
// the precondition check). beta is carried through as a diagnostic tag.
SteadyStateDensity steady_state(const ComplexMatrix& liou, int dim,
                                double loss_rate, double beta = 0.0);

// Convenience: build H and L from params and solve at the given beta.
SteadyStateDensity steady_state_at(const KpoParams& params, double beta);

// Eigenstate populations <n~|rho|n~> for every tracked label of sys.
// Requires rho and sys to agree on beta and dimension.
Eigen::VectorXd populations(const SteadyStateDensity& rho,
                            const LabeledEigensystem& sys);

} // namespace kpo
