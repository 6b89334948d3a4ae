#include "kpo/steadystate.hpp"

#include <cmath>
#include <cstdint>

#include <unsupported/Eigen/KroneckerProduct>

namespace kpo {

namespace {

// vec(A rho B) = (B^T kron A) vec(rho) for column stacking.
ComplexMatrix dissipator_superop(const ComplexMatrix& lop) {
    const int dim = static_cast<int>(lop.rows());
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix ldl = lop.adjoint() * lop;
    ComplexMatrix d = Eigen::kroneckerProduct(lop.conjugate(), lop);
    d -= 0.5 * Eigen::kroneckerProduct(id, ldl);
    d -= 0.5 * Eigen::kroneckerProduct(ldl.transpose(), id);
    return d;
}

// Deterministic pseudo-random vector for the kernel audit.
Eigen::VectorXcd audit_rhs(int n) {
    Eigen::VectorXcd v(n);
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    auto next = [&s]() {
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
    };
    for (int i = 0; i < n; ++i) v(i) = {next(), next()};
    v /= v.norm();
    return v;
}

} // namespace

ComplexMatrix liouvillian(const ComplexMatrix& h, double loss_rate,
                          double dephasing_rate) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("liouvillian: H must be square");
    if (loss_rate < 0.0 || dephasing_rate < 0.0)
        throw std::invalid_argument("liouvillian: rates must be >= 0");
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-9)
        throw std::invalid_argument("liouvillian: H not Hermitian");

    const int dim = static_cast<int>(h.rows());
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    const std::complex<double> mi(0.0, -1.0);
    ComplexMatrix liou =
        mi * (Eigen::kroneckerProduct(id, h) - Eigen::kroneckerProduct(h.transpose(), id));
    if (loss_rate > 0.0) liou += loss_rate * dissipator_superop(annihilation(dim));
    if (dephasing_rate > 0.0) liou += dephasing_rate * dissipator_superop(number_operator(dim));
    return liou;
}

SteadyStateDensity steady_state(const ComplexMatrix& liou, int dim,
                                double loss_rate, double beta) {
    if (!(loss_rate > 0.0))
        throw std::invalid_argument(
            "steady_state: loss_rate must be > 0 for a unique steady state");
    const int n2 = dim * dim;
    if (liou.rows() != n2 || liou.cols() != n2)
        throw std::invalid_argument("steady_state: Liouvillian shape mismatch");

    // Replace the rho_00 equation (row 0) by the trace constraint; the
    // discarded row is implied by trace preservation.
    ComplexMatrix m = liou;
    m.row(0).setZero();
    for (int i = 0; i < dim; ++i) m(0, i * dim + i) = 1.0;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n2);
    rhs(0) = 1.0;

    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    Eigen::VectorXcd x = lu.solve(rhs);

    // Kernel audit: if ker(L) had dimension > 1 the modified system would be
    // singular and the probe solve could not reproduce its right-hand side.
    const Eigen::VectorXcd probe = audit_rhs(n2);
    const Eigen::VectorXcd y = lu.solve(probe);
    const double audit = (m * y - probe).norm();
    if (!std::isfinite(audit) || audit > 1e-6)
        throw NonUniqueSteadyStateError(
            "steady_state: degenerate steady-state manifold (audit residual " +
            std::to_string(audit) + ")");

    SteadyStateDensity out;
    out.beta = beta;
    out.nullspace_audit = audit;
    out.rho = Eigen::Map<ComplexMatrix>(x.data(), dim, dim);
    out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
    const double tr = out.rho.trace().real();
    if (!std::isfinite(tr) || std::abs(tr) < 1e-12)
        throw NonUniqueSteadyStateError("steady_state: vanishing trace in solution");
    out.rho /= tr;
    out.residual = (liou * Eigen::Map<const Eigen::VectorXcd>(out.rho.data(), n2)).norm();
    return out;
}

SteadyStateDensity steady_state_at(const KpoParams& params, double beta) {
    params.validate();
    const ComplexMatrix h = hamiltonian_rwa(params, beta);
    const ComplexMatrix liou = liouvillian(h, params.kappa_total(), params.gamma_phi);
    return steady_state(liou, params.dim, params.kappa_total(), beta);
}

Eigen::VectorXd populations(const SteadyStateDensity& rho,
                            const LabeledEigensystem& sys) {
    if (rho.rho.rows() != sys.states.rows())
        throw std::invalid_argument("populations: dimension mismatch");
    if (rho.beta != sys.beta)
        throw std::invalid_argument("populations: beta mismatch between rho and eigensystem");
    const int nl = static_cast<int>(sys.states.cols());
    Eigen::VectorXd p(nl);
    for (int n = 0; n < nl; ++n) {
        const std::complex<double> v =
            sys.states.col(n).dot(rho.rho * sys.states.col(n));
        p[n] = v.real();
    }
    return p;
}

} // namespace kpo
