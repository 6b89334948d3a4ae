#include <doctest.h>

#include "kpo/steadystate.hpp"
#include "test_util.hpp"

using namespace kpo;
using kpo_test::beta_grid_mhz;
using kpo_test::paper_device;

namespace {

Eigen::VectorXd pops_at(const KpoParams& params, double beta_mhz, double grid_step = 0.05) {
    const auto betas = beta_grid_mhz(beta_mhz, grid_step);
    const auto sweep = label_sweep(params, betas);
    const SteadyStateDensity rho = steady_state_at(params, betas.back());
    return populations(rho, sweep.back());
}

} // namespace

TEST_SUITE("steadystate") {

TEST_CASE("two-level decay rate appears directly in the generator") {
    const double kappa = 0.9;
    const ComplexMatrix liou = liouvillian(ComplexMatrix::Zero(2, 2), kappa);
    // d rho_11/dt = -kappa rho_11: the (1,1)->(1,1) vectorized entry is -kappa
    const int idx11 = 1 * 2 + 1;
    CHECK(liou(idx11, idx11).real() == doctest::Approx(-kappa));
    // and it feeds rho_00 at +kappa
    CHECK(liou(0, idx11).real() == doctest::Approx(kappa));
}

TEST_CASE("generator is trace preserving") {
    KpoParams params = paper_device(8.20, 8);
    const ComplexMatrix liou =
        liouvillian(hamiltonian_rwa(params, mhz_to_angular(2.0)), params.kappa_total(),
                    mhz_to_angular(0.1));
    Eigen::VectorXcd tr = Eigen::VectorXcd::Zero(64);
    for (int i = 0; i < 8; ++i) tr(i * 8 + i) = 1.0;
    CHECK((liou.adjoint() * tr).norm() < 1e-10);
}

TEST_CASE("pure commutator superoperator has imaginary spectrum") {
    KpoParams params = paper_device(3.0, 4);
    const ComplexMatrix liou = liouvillian(hamiltonian_rwa(params, 0.0), 0.0, 0.0);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(liou);
    for (int j = 0; j < liou.rows(); ++j)
        CHECK(std::abs(es.eigenvalues()[j].real()) < 1e-9);
}

TEST_CASE("vacuum is the undriven steady state") {
    KpoParams params = paper_device(8.20, 16);
    const SteadyStateDensity rho = steady_state_at(params, 0.0);
    CHECK(rho.rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rho.residual < 1e-9);
    CHECK(std::abs(rho.rho.trace().real() - 1.0) < 1e-10);
}

TEST_CASE("steady state contracts: trace, hermiticity, positivity, residual") {
    KpoParams params = paper_device(-8.10, 20);
    for (double b : {0.5, 4.0, 9.0}) {
        const SteadyStateDensity rho = steady_state_at(params, mhz_to_angular(b));
        CHECK(std::abs(rho.rho.trace().real() - 1.0) < 1e-10);
        CHECK((rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-8);
        CHECK(rho.residual < 1e-9);
        CHECK(rho.nullspace_audit < 1e-6);
    }
}

TEST_CASE("population inversion at the dressed-amplification point") {
    KpoParams params = paper_device(8.20, 30);
    const Eigen::VectorXd p = pops_at(params, 7.40);
    CHECK(p[1] > p[0]);
}

TEST_CASE("populations of the near-degenerate pair head toward 0.5") {
    // With delta ~ 0 the two lowest labels share the population as the drive
    // grows; at beta/2pi = 10 MHz they sit near 0.59/0.41 and keep converging
    // toward 0.5 from there.
    KpoParams params = paper_device(0.05, 30);
    const Eigen::VectorXd p10 = pops_at(params, 10.0, 0.1);
    CHECK(p10[0] == doctest::Approx(0.593).epsilon(0.02));
    CHECK(p10[1] == doctest::Approx(0.407).epsilon(0.02));
    CHECK(p10[0] + p10[1] > 0.99);
    const Eigen::VectorXd p15 = pops_at(params, 15.0, 0.1);
    CHECK(std::abs(p15[0] - 0.5) < std::abs(p10[0] - 0.5));
}

TEST_CASE("population ordering at negative detuning and small drive") {
    KpoParams params = paper_device(-8.10, 24);
    for (double b : {0.2, 0.6, 1.0}) {
        const Eigen::VectorXd p = pops_at(params, b);
        CHECK(p[0] > p[1]);
        CHECK(p[1] > p[2]);
    }
}

TEST_CASE("populations are real, bounded, and sum to one") {
    KpoParams params = paper_device(8.20, 20);
    const auto betas = beta_grid_mhz(6.0, 0.05);
    const auto sweep = label_sweep(params, betas);
    for (std::size_t k = 0; k < betas.size(); k += 30) {
        const SteadyStateDensity rho = steady_state_at(params, betas[k]);
        const Eigen::VectorXd p = populations(rho, sweep[k]);
        REQUIRE(p.size() == params.dim);
        double sum = 0.0;
        for (int n = 0; n < p.size(); ++n) {
            CHECK(p[n] > -1e-8);
            CHECK(p[n] < 1.0 + 1e-8);
            sum += p[n];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("steady state is parity block diagonal in the Fock basis") {
    KpoParams params = paper_device(8.20, 20);
    const SteadyStateDensity rho = steady_state_at(params, mhz_to_angular(5.0));
    for (int i = 0; i < params.dim; ++i)
        for (int j = 0; j < params.dim; ++j)
            if ((i + j) % 2 == 1) CHECK(std::abs(rho.rho(i, j)) < 1e-8);
}

TEST_CASE("populations vary continuously along the grid") {
    KpoParams params = paper_device(0.05, 20);
    const auto betas = beta_grid_mhz(12.0, 0.25);
    const auto sweep = label_sweep(params, betas);
    Eigen::VectorXd prev;
    for (std::size_t k = 0; k < betas.size(); ++k) {
        const Eigen::VectorXd p =
            populations(steady_state_at(params, betas[k]), sweep[k]);
        if (k > 0)
            for (int l = 0; l < 4; ++l) CHECK(std::abs(p[l] - prev[l]) < 0.2);
        prev = p;
    }
}

TEST_CASE("zero loss rate refused, mismatched join refused") {
    KpoParams params = paper_device(8.20, 6);
    const ComplexMatrix liou = liouvillian(hamiltonian_rwa(params, 0.0), 0.0);
    CHECK_THROWS_AS(steady_state(liou, 6, 0.0), std::invalid_argument);

    const auto sweep = label_sweep(params, std::vector<double>{0.0});
    SteadyStateDensity rho = steady_state_at(params, 0.0);
    rho.beta = mhz_to_angular(1.0);
    CHECK_THROWS_AS(populations(rho, sweep[0]), std::invalid_argument);
}

TEST_CASE("dephasing channel enters the generator") {
    KpoParams params = paper_device(8.20, 6);
    const ComplexMatrix h = hamiltonian_rwa(params, 0.0);
    const ComplexMatrix with = liouvillian(h, params.kappa_total(), mhz_to_angular(0.5));
    const ComplexMatrix without = liouvillian(h, params.kappa_total(), 0.0);
    // D[a†a] damps coherences but leaves every population row untouched
    const ComplexMatrix diff = with - without;
    for (int i = 0; i < 6; ++i)
        CHECK(diff.row(i * 6 + i).norm() == doctest::Approx(0.0));
    CHECK(diff.cwiseAbs().maxCoeff() > 0.0);
}

} // TEST_SUITE
