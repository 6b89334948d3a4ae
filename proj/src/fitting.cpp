#include "kpo/fitting.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace kpo {

namespace {

std::complex<double> eq6(double w, double w0, double ke, double ki) {
    return 1.0 - ke / std::complex<double>(0.5 * (ke + ki), w - w0);
}

// d Gamma / d(w0, ke, ki)
Eigen::Vector3cd eq6_grad(double w, double w0, double ke, double ki) {
    const std::complex<double> den(0.5 * (ke + ki), w - w0);
    const std::complex<double> den2 = den * den;
    Eigen::Vector3cd g;
    g(0) = std::complex<double>(0.0, -1.0) * ke / den2;
    g(1) = -1.0 / den + 0.5 * ke / den2;
    g(2) = 0.5 * ke / den2;
    return g;
}

struct LmProblem {
    std::span<const double> probe;
    std::span<const std::complex<double>> gamma;  // empty in amplitude mode
    std::span<const double> abs_gamma;            // empty in complex mode
    bool amp_only = false;

    std::size_t residual_count() const {
        return amp_only ? probe.size() : 2 * probe.size();
    }

    // residuals and Jacobian rows for parameter vector th = (w0, ke, ki)
    void eval(const Eigen::Vector3d& th, Eigen::VectorXd& r, Eigen::MatrixXd* jac) const {
        const std::size_t n = probe.size();
        r.resize(residual_count());
        if (jac) jac->resize(residual_count(), 3);
        for (std::size_t k = 0; k < n; ++k) {
            const std::complex<double> g = eq6(probe[k], th(0), th(1), th(2));
            if (amp_only) {
                const double mag = std::abs(g);
                r(k) = mag - abs_gamma[k];
                if (jac) {
                    const Eigen::Vector3cd dg = eq6_grad(probe[k], th(0), th(1), th(2));
                    for (int j = 0; j < 3; ++j)
                        (*jac)(k, j) = (mag > 0.0)
                                           ? (std::conj(g) * dg(j)).real() / mag
                                           : 0.0;
                }
            } else {
                const std::complex<double> d = g - gamma[k];
                r(k) = d.real();
                r(n + k) = d.imag();
                if (jac) {
                    const Eigen::Vector3cd dg = eq6_grad(probe[k], th(0), th(1), th(2));
                    for (int j = 0; j < 3; ++j) {
                        (*jac)(k, j) = dg(j).real();
                        (*jac)(n + k, j) = dg(j).imag();
                    }
                }
            }
        }
    }
};

ResonanceFit run_lm(const LmProblem& prob, const ResonanceFit& initial,
                    double residual_ceiling) {
    if (prob.probe.size() < 7)
        throw std::invalid_argument("fit_resonance: need at least 7 samples");

    // Degenerate data: no structure to fit.
    double mean = 0.0, var = 0.0;
    const std::size_t n = prob.probe.size();
    for (std::size_t k = 0; k < n; ++k)
        mean += prob.amp_only ? prob.abs_gamma[k] : std::abs(prob.gamma[k]);
    mean /= static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = (prob.amp_only ? prob.abs_gamma[k] : std::abs(prob.gamma[k])) - mean;
        var += v * v;
    }
    var /= static_cast<double>(n);
    if (var < 1e-14)
        throw DegenerateDataError("fit_resonance: flat reflection data");

    Eigen::Vector3d th(initial.omega_mn, initial.kappa_e_nominal, initial.kappa_i_nominal);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    prob.eval(th, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    bool step_converged = false;

    for (int it = 0; it < 200; ++it) {
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Eigen::Vector3d jtr = jac.transpose() * r;
        Eigen::Vector3d step;
        bool accepted = false;
        while (lambda < 1e12) {
            Eigen::Matrix3d a = jtj;
            a.diagonal().array() += lambda;
            step = a.ldlt().solve(-jtr);
            const Eigen::Vector3d trial = th + step;
            Eigen::VectorXd rt;
            prob.eval(trial, rt, nullptr);
            const double ct = rt.squaredNorm();
            if (std::isfinite(ct) && ct < cost) {
                th = trial;
                cost = ct;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
        prob.eval(th, r, &jac);
        if (step.norm() < 1e-10 * (th.norm() + 1e-30)) {
            step_converged = true;
            break;
        }
    }

    ResonanceFit out;
    out.omega_mn = th(0);
    out.kappa_e_nominal = th(1);
    out.kappa_i_nominal = th(2);
    out.residual = std::sqrt(cost / static_cast<double>(prob.residual_count()));
    out.converged = step_converged && out.residual < residual_ceiling;
    return out;
}

} // namespace

ResonanceFit fit_resonance(std::span<const double> probe,
                           std::span<const std::complex<double>> gamma,
                           const ResonanceFit& initial, double residual_ceiling) {
    if (probe.size() != gamma.size())
        throw std::invalid_argument("fit_resonance: size mismatch");
    LmProblem prob{probe, gamma, {}, false};
    return run_lm(prob, initial, residual_ceiling);
}

ResonanceFit fit_resonance_amplitude(std::span<const double> probe,
                                     std::span<const double> abs_gamma,
                                     const ResonanceFit& initial,
                                     double residual_ceiling) {
    if (probe.size() != abs_gamma.size())
        throw std::invalid_argument("fit_resonance_amplitude: size mismatch");
    LmProblem prob{probe, {}, abs_gamma, true};
    return run_lm(prob, initial, residual_ceiling);
}

ResonanceFit initial_guess(std::span<const double> probe,
                           std::span<const double> abs_gamma) {
    if (probe.size() != abs_gamma.size() || probe.size() < 3)
        throw std::invalid_argument("initial_guess: bad sample set");
    std::size_t jext = 0;
    double dmax = -1.0;
    for (std::size_t k = 0; k < probe.size(); ++k) {
        const double d = std::abs(abs_gamma[k] - 1.0);
        if (d > dmax) { dmax = d; jext = k; }
    }
    const double gstar = abs_gamma[jext];
    const double half = 1.0 + 0.5 * (gstar - 1.0);

    // Full width where ||Gamma|-1| crosses half depth around the extremum.
    const auto crossed = [&](std::size_t k) {
        return (gstar < 1.0) ? abs_gamma[k] > half : abs_gamma[k] < half;
    };
    std::size_t lo = jext, hi = jext;
    while (lo > 0 && !crossed(lo)) --lo;
    while (hi + 1 < probe.size() && !crossed(hi)) ++hi;
    double width = probe[hi] - probe[lo];
    if (!(width > 0.0)) width = 0.25 * (probe.back() - probe.front());
    // |Gamma - 1| is Lorentzian-rooted; half depth sits at sqrt(3) half-widths.
    const double ktot = width / std::sqrt(3.0);

    ResonanceFit g;
    g.omega_mn = probe[jext];
    g.kappa_e_nominal = 0.5 * ktot * (1.0 - gstar);
    g.kappa_i_nominal = ktot - g.kappa_e_nominal;
    return g;
}

std::vector<NominalLossPrediction> predict_nominal_losses(const TransitionTable& table,
                                                          const KpoParams& params) {
    if (!table.has_populations)
        throw std::invalid_argument("predict_nominal_losses: populations not attached");
    std::vector<NominalLossPrediction> out;
    const int nl = table.max_label + 1;
    for (int m = 0; m < nl; ++m) {
        for (int n = 0; n < nl; ++n) {
            if (m == n) continue;
            NominalLossPrediction p;
            p.m = m;
            p.n = n;
            const double shared = params.kappa_e * std::norm(table.x(m, n)) *
                                  (table.population[m] - table.population[n]);
            p.kappa_e_pred = -shared;
            p.kappa_i_pred =
                params.kappa_total() * (table.y[m] + table.y[n]) + shared;
            out.push_back(p);
        }
    }
    return out;
}

namespace {

constexpr double fit_window_linewidths = 2.5;
constexpr double flag_proximity_linewidths = 3.0;
constexpr double flag_tail_dominance = 0.2;
constexpr int fit_samples = 161;

bool window_overlap_flag(const TransitionTable& t, const KpoParams& params,
                         int m, int n) {
    const int nl = t.max_label + 1;
    const double own_w = params.kappa_e * std::norm(t.x(m, n)) *
                         (t.population[m] - t.population[n]);
    const double own_fw = params.kappa_total() * (t.y[m] + t.y[n]);
    const double own_amp = std::abs(own_w) / (0.5 * own_fw);
    const double whw = fit_window_linewidths * own_fw;
    const double threshold = 0.01 * params.kappa_e;

    double tail = 0.0;
    for (int p = 0; p < nl; ++p) {
        for (int q = 0; q < nl; ++q) {
            if (p == q || (p == m && q == n)) continue;
            const double w = params.kappa_e * std::norm(t.x(p, q)) *
                             (t.population[p] - t.population[q]);
            if (w == 0.0) continue;
            const double dist = std::abs(t.omega(p, q) - t.omega(m, n));
            const double fw = params.kappa_total() * (t.y[p] + t.y[q]);
            if (std::abs(w) > threshold && dist < flag_proximity_linewidths * own_fw)
                return true;
            tail += std::abs(w) / std::hypot(std::max(dist - whw, 0.0), 0.5 * fw);
        }
    }
    return tail > flag_tail_dominance * own_amp;
}

} // namespace

std::vector<LossComparisonRow> loss_comparison_sweep(
    const BetaTables& tabs, const KpoParams& params,
    std::span<const std::pair<int, int>> pairs, Exec exec) {
    const double threshold = 0.01 * params.kappa_e;
    std::vector<std::vector<LossComparisonRow>> per_beta(tabs.betas.size());

    for_each_index(tabs.betas.size(), exec, [&](std::size_t k) {
        const TransitionTable& t = tabs.tables[k];
        for (const auto& [m, n] : pairs) {
            if (m > t.max_label || n > t.max_label || m == n) continue;
            const double weight = params.kappa_e * std::norm(t.x(m, n)) *
                                  (t.population[m] - t.population[n]);
            if (std::abs(weight) < threshold) continue;  // not resolvable here

            LossComparisonRow row;
            row.beta = tabs.betas[k];
            row.m = m;
            row.n = n;
            row.pred.m = m;
            row.pred.n = n;
            row.pred.kappa_e_pred = -weight;
            row.pred.kappa_i_pred =
                params.kappa_total() * (t.y[m] + t.y[n]) + weight;
            row.overlap_flag = window_overlap_flag(t, params, m, n);

            const double fw = params.kappa_total() * (t.y[m] + t.y[n]);
            const double whw = fit_window_linewidths * fw;
            std::vector<double> probe(fit_samples);
            std::vector<std::complex<double>> gamma(fit_samples);
            std::vector<double> mag(fit_samples);
            for (int j = 0; j < fit_samples; ++j) {
                probe[j] = t.omega(m, n) - whw + 2.0 * whw * j / (fit_samples - 1);
                gamma[j] = reflection_driven(probe[j], t, params, t.max_label);
                mag[j] = std::abs(gamma[j]);
            }
            ResonanceFit init = initial_guess(probe, mag);
            init.omega_mn = t.omega(m, n);  // model center beats the data extremum
            row.fit = fit_resonance(probe, gamma, init);
            per_beta[k].push_back(row);
        }
    });

    std::vector<LossComparisonRow> out;
    for (auto& rows : per_beta)
        out.insert(out.end(), rows.begin(), rows.end());
    return out;
}

std::vector<LossComparisonRow> loss_comparison_sweep(
    const KpoParams& params, std::span<const double> betas,
    std::span<const std::pair<int, int>> pairs, Exec exec) {
    const BetaTables tabs = tabulate_sweep(params, betas, spectrum_sum_max_label, exec);
    return loss_comparison_sweep(tabs, params, pairs, exec);
}

} // namespace kpo
