#include <doctest.h>

#include "kpo/operators.hpp"
#include "test_util.hpp"

using namespace kpo;
using kpo_test::paper_device;
using kpo_test::Rng;

TEST_SUITE("operators") {

TEST_CASE("annihilation matrix elements") {
    const ComplexMatrix a2 = annihilation(2);
    CHECK(a2(0, 1).real() == doctest::Approx(1.0));
    CHECK(a2(0, 0) == std::complex<double>(0.0));
    CHECK(a2(1, 0) == std::complex<double>(0.0));
    CHECK(a2(1, 1) == std::complex<double>(0.0));

    const ComplexMatrix a4 = annihilation(4);
    CHECK(a4(2, 3).real() == doctest::Approx(std::sqrt(3.0)));

    const ComplexMatrix n = (a4.adjoint() * a4);
    for (int k = 0; k < 4; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
    CHECK((n - number_operator(4)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("annihilation rejects dim < 2") {
    CHECK_THROWS_AS(annihilation(1), std::invalid_argument);
    CHECK_THROWS_AS(annihilation(0), std::invalid_argument);
}

TEST_CASE("parity diagonal and anticommutation with a") {
    const ComplexMatrix p3 = parity(3);
    CHECK(p3(0, 0).real() == doctest::Approx(1.0));
    CHECK(p3(1, 1).real() == doctest::Approx(-1.0));
    CHECK(p3(2, 2).real() == doctest::Approx(1.0));

    const int dim = 12;
    const ComplexMatrix p = parity(dim);
    const ComplexMatrix a = annihilation(dim);
    CHECK((p * a + a * p).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("hamiltonian diagonal: levels 0 and 2 degenerate at delta = chi/2") {
    KpoParams params = paper_device(8.5, 8);
    const ComplexMatrix h = hamiltonian_rwa(params, 0.0);
    CHECK(angular_to_mhz(h(0, 0).real()) == doctest::Approx(0.0));
    CHECK(angular_to_mhz(h(1, 1).real()) == doctest::Approx(8.5));
    CHECK(angular_to_mhz(h(2, 2).real()) == doctest::Approx(0.0));
    CHECK(angular_to_mhz(h(3, 3).real()) == doctest::Approx(-25.5));
}

TEST_CASE("two-photon coupling element") {
    KpoParams params = paper_device(8.5, 8);
    const ComplexMatrix h = hamiltonian_rwa(params, mhz_to_angular(1.0));
    CHECK(angular_to_mhz(h(2, 0).real()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("negative drive amplitude folds onto the phase convention") {
    KpoParams params = paper_device(8.2, 10);
    const double beta = mhz_to_angular(2.5);
    CHECK((hamiltonian_rwa(params, -beta) - hamiltonian_rwa(params, beta))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("hamiltonian properties over random parameters") {
    Rng rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        KpoParams params = paper_device(rng.uniform(-12.0, 12.0), rng.uniform_int(6, 24));
        const double beta = mhz_to_angular(rng.uniform(0.0, 15.0));
        const ComplexMatrix h = hamiltonian_rwa(params, beta);
        const ComplexMatrix h0 = hamiltonian_rwa(params, 0.0);

        // Hermitian
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        // parity commutes
        const ComplexMatrix p = parity(params.dim);
        CHECK((p * h - h * p).cwiseAbs().maxCoeff() <= 1e-12);
        // drive enters only on the +-2 off-diagonals
        const ComplexMatrix d = h - h0;
        for (int i = 0; i < params.dim; ++i)
            for (int j = 0; j < params.dim; ++j) {
                if (std::abs(i - j) == 2) {
                    const int n = std::min(i, j);
                    CHECK(d(i, j).real() ==
                          doctest::Approx(beta * std::sqrt((n + 1.0) * (n + 2.0))));
                } else {
                    CHECK(std::abs(d(i, j)) == 0.0);
                }
            }
        // diagonal is n*delta - n(n-1)chi/2, eigenvalues at beta = 0
        for (int n = 0; n < params.dim; ++n)
            CHECK(h0(n, n).real() ==
                  doctest::Approx(n * params.delta - 0.5 * n * (n - 1.0) * params.chi));
    }
}

TEST_CASE("invalid device parameters are rejected") {
    KpoParams p = paper_device(8.2, 8);
    p.chi = 0.0;
    CHECK_THROWS_AS(hamiltonian_rwa(p, 0.0), std::invalid_argument);
    p = paper_device(8.2, 3);
    CHECK_THROWS_AS(hamiltonian_rwa(p, 0.0), std::invalid_argument);
    p = paper_device(8.2, 8);
    p.kappa_e = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

} // TEST_SUITE
