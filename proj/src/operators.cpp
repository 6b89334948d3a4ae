#include "kpo/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace kpo {

ComplexMatrix annihilation(int dim) {
    if (dim < 2) throw std::invalid_argument("annihilation: dim must be >= 2");
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix number_operator(int dim) {
    if (dim < 1) throw std::invalid_argument("number_operator: dim must be >= 1");
    ComplexMatrix n = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

ComplexMatrix parity(int dim) {
    if (dim < 1) throw std::invalid_argument("parity: dim must be >= 1");
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return p;
}

ComplexMatrix hamiltonian_rwa(const KpoParams& params, double beta) {
    params.validate();
    // A negative amplitude is the same drive under a pump-phase rotation;
    // the phase convention here keeps beta real and non-negative.
    beta = std::abs(beta);
    const int dim = params.dim;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        h(n, n) = n * params.delta - 0.5 * n * (n - 1.0) * params.chi;
    for (int n = 0; n + 2 < dim; ++n) {
        const double g = beta * std::sqrt((n + 1.0) * (n + 2.0));
        h(n + 2, n) = g;
        h(n, n + 2) = g;
    }
    return h;
}

} // namespace kpo
