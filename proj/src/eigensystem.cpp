#include "kpo/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace kpo {

RawEigensystem diagonalize(const ComplexMatrix& h) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("diagonalize: matrix must be square");
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-9)
        throw std::invalid_argument("diagonalize: input not Hermitian (asymmetry " +
                                    std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

// Make the largest-magnitude component real positive so labeled states are
// reproducible run-to-run.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const std::complex<double> c = v(imax);
    const double mag = std::abs(c);
    if (mag > 0.0) v *= std::conj(c) / mag;
}

} // namespace

std::vector<LabeledEigensystem> label_sweep(const KpoParams& params,
                                            std::span<const double> betas,
                                            Exec exec, int track_limit) {
    params.validate();
    if (betas.empty()) throw std::invalid_argument("label_sweep: empty beta grid");
    if (betas[0] != 0.0)
        throw std::invalid_argument("label_sweep: grid must start at beta = 0");
    for (std::size_t k = 1; k < betas.size(); ++k)
        if (!(betas[k] > betas[k - 1]))
            throw std::invalid_argument("label_sweep: grid must be strictly ascending");

    const int dim = params.dim;
    const int ntrack = (track_limit < 0) ? dim : std::min(track_limit + 1, dim);

    // Diagonalizations at distinct beta are independent; the matching fold
    // below is sequential by construction.
    std::vector<RawEigensystem> raw(betas.size());
    for_each_index(betas.size(), exec, [&](std::size_t k) {
        raw[k] = diagonalize(hamiltonian_rwa(params, betas[k]));
    });

    std::vector<LabeledEigensystem> out(betas.size());
    for (std::size_t k = 0; k < betas.size(); ++k) {
        LabeledEigensystem sys;
        sys.beta = betas[k];
        sys.labels.assign(ntrack, -1);
        sys.energies.resize(ntrack);
        sys.states.resize(dim, ntrack);
        sys.overlaps.resize(ntrack);

        if (k == 0) {
            // H(0) is diagonal, so eigenvectors are Fock basis vectors; the
            // label is the index of the dominant component.
            std::vector<bool> taken(dim, false);
            for (int j = 0; j < dim; ++j) {
                Eigen::Index n = 0;
                raw[0].states.col(j).cwiseAbs().maxCoeff(&n);
                const double ov = std::abs(raw[0].states(n, j));
                if (taken[n] || ov < 0.999)
                    throw AmbiguousTrackingError(
                        "label_sweep: beta = 0 eigenvectors are not Fock-like");
                taken[n] = true;
                if (n < ntrack) {
                    sys.labels[n] = j;
                    sys.overlaps[n] = ov;
                }
            }
        } else {
            const LabeledEigensystem& prev = out[k - 1];
            // overlap(label, raw) = |<prev_label | raw_j>|
            Eigen::MatrixXd ov = (prev.states.adjoint() * raw[k].states).cwiseAbs();
            std::vector<bool> lbl_done(ntrack, false), raw_done(dim, false);
            for (int step = 0; step < ntrack; ++step) {
                double best = -1.0;
                int bl = -1, br = -1;
                for (int l = 0; l < ntrack; ++l) {
                    if (lbl_done[l]) continue;
                    for (int r = 0; r < dim; ++r) {
                        if (raw_done[r]) continue;
                        if (ov(l, r) > best) { best = ov(l, r); bl = l; br = r; }
                    }
                }
                if (best < 0.7)
                    throw AmbiguousTrackingError(
                        "label_sweep: ambiguous state tracking at beta/2pi = " +
                        std::to_string(angular_to_mhz(betas[k])) + " MHz (step " +
                        std::to_string(k) + ", label " + std::to_string(bl) +
                        ", overlap " + std::to_string(best) + "); refine the grid");
                lbl_done[bl] = true;
                raw_done[br] = true;
                sys.labels[bl] = br;
                sys.overlaps[bl] = best;
            }
        }

        for (int l = 0; l < ntrack; ++l) {
            const int j = sys.labels[l];
            sys.energies[l] = raw[k].energies[j];
            sys.states.col(l) = raw[k].states.col(j);
            fix_phase(sys.states.col(l));
        }
        out[k] = std::move(sys);
    }
    return out;
}

TransitionTable transition_table(const LabeledEigensystem& sys, int max_label) {
    const int dim = static_cast<int>(sys.states.rows());
    const int tracked = static_cast<int>(sys.states.cols());
    if (max_label < 0 || max_label >= dim - 2)
        throw TruncationEdgeError("transition_table: max_label " +
                                  std::to_string(max_label) +
                                  " too close to the truncation edge (dim " +
                                  std::to_string(dim) + ")");
    if (max_label >= tracked)
        throw TruncationEdgeError("transition_table: label " + std::to_string(max_label) +
                                  " not tracked by this eigensystem");

    const int nl = max_label + 1;
    TransitionTable t;
    t.beta = sys.beta;
    t.max_label = max_label;
    t.x.resize(nl, nl);
    t.y.resize(nl);
    t.omega.resize(nl, nl);
    t.parity_sign.resize(nl);
    t.population = Eigen::VectorXd::Zero(nl);

    const ComplexMatrix adag = annihilation(dim).adjoint();
    ComplexMatrix raised(dim, nl);  // a† |n~>
    for (int n = 0; n < nl; ++n) raised.col(n) = adag * sys.states.col(n);

    for (int m = 0; m < nl; ++m) {
        const auto vm = sys.states.col(m);
        double y = 0.0, p = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double w = std::norm(vm(i));
            y += i * w;
            p += (i % 2 == 0) ? w : -w;
        }
        t.y[m] = y;
        t.parity_sign[m] = p;
        for (int n = 0; n < nl; ++n) {
            t.x(m, n) = vm.dot(raised.col(n));
            t.omega(m, n) = sys.energies[m] - sys.energies[n];
        }
    }
    return t;
}

LabelChain build_label_chain(std::span<const double> betas, double max_step) {
    if (betas.empty()) throw std::invalid_argument("build_label_chain: empty grid");
    for (std::size_t k = 1; k < betas.size(); ++k)
        if (!(betas[k] > betas[k - 1]))
            throw std::invalid_argument("build_label_chain: grid must be strictly ascending");
    if (betas[0] < 0.0)
        throw std::invalid_argument("build_label_chain: negative beta");
    if (!(max_step > 0.0))
        throw std::invalid_argument("build_label_chain: max_step must be > 0");

    LabelChain chain;
    chain.betas.push_back(0.0);
    std::size_t next = 0;
    if (betas[0] == 0.0) {
        chain.request_index.push_back(0);
        next = 1;
    }
    for (; next < betas.size(); ++next) {
        const double from = chain.betas.back();
        const double to = betas[next];
        const int nsub = std::max(1, static_cast<int>(std::ceil((to - from) / max_step)));
        for (int s = 1; s < nsub; ++s)
            chain.betas.push_back(from + (to - from) * s / nsub);
        chain.betas.push_back(to);
        chain.request_index.push_back(chain.betas.size() - 1);
    }
    return chain;
}

} // namespace kpo
