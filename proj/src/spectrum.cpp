#include "kpo/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace kpo {

std::complex<double> reflection_undriven(double probe, double omega_r,
                                         const KpoParams& params) {
    const double kt = params.kappa_total();
    if (!(kt > 0.0))
        throw std::invalid_argument("reflection_undriven: kappa_e + kappa_i must be > 0");
    const std::complex<double> den(0.5 * kt, probe - omega_r);
    return 1.0 - params.kappa_e / den;
}

XiTerm xi_term(const TransitionTable& table, int m, int n, double probe,
               const KpoParams& params) {
    if (!table.has_populations)
        throw std::invalid_argument("xi_term: populations not attached to table");
    if (m == n || m > table.max_label || n > table.max_label || m < 0 || n < 0)
        throw std::invalid_argument("xi_term: bad label pair");
    if (table.y[m] < 0.0 || table.y[n] < 0.0)
        throw std::invalid_argument("xi_term: negative photon-number expectation");

    XiTerm t;
    t.m = m;
    t.n = n;
    t.weight = params.kappa_e * std::norm(table.x(m, n)) *
               (table.population[m] - table.population[n]);
    t.resonance = table.omega(m, n);
    t.half_linewidth = 0.5 * params.kappa_total() * (table.y[m] + table.y[n]);
    if (t.half_linewidth == 0.0 && probe == t.resonance)
        throw SingularTermError("xi_term: zero linewidth exactly on resonance");
    t.value = t.weight / std::complex<double>(t.half_linewidth, probe - t.resonance);
    return t;
}

std::complex<double> reflection_driven(double probe, const TransitionTable& table,
                                       const KpoParams& params, int max_label) {
    if (max_label > table.max_label)
        throw std::invalid_argument("reflection_driven: max_label exceeds table");
    std::complex<double> g = 1.0;
    for (int m = 0; m <= max_label; ++m)
        for (int n = 0; n <= max_label; ++n)
            if (m != n) g += xi_term(table, m, n, probe, params).value;
    return g;
}

std::complex<double> reflection_driven(double probe, const LabeledEigensystem& sys,
                                       const SteadyStateDensity& rho,
                                       const KpoParams& params, int max_label) {
    TransitionTable table = transition_table(sys, max_label);
    table.population = populations(rho, sys).head(max_label + 1);
    table.has_populations = true;
    return reflection_driven(probe, table, params, max_label);
}

BetaTables tabulate_sweep(const KpoParams& params, std::span<const double> betas,
                          int max_label, Exec exec) {
    params.validate();
    if (betas.empty()) throw std::invalid_argument("tabulate_sweep: empty beta grid");

    const double chain_step = mhz_to_angular(0.05);
    const LabelChain chain = build_label_chain(betas, chain_step);
    std::vector<LabeledEigensystem> chain_sys = label_sweep(params, chain.betas, exec);

    BetaTables out;
    out.max_label = max_label;
    out.betas.assign(betas.begin(), betas.end());
    out.systems.resize(betas.size());
    out.tables.resize(betas.size());
    out.steady_residuals.resize(betas.size());
    for (std::size_t k = 0; k < betas.size(); ++k)
        out.systems[k] = std::move(chain_sys[chain.request_index[k]]);

    for_each_index(betas.size(), exec, [&](std::size_t k) {
        const SteadyStateDensity rho = steady_state_at(params, out.betas[k]);
        TransitionTable table = transition_table(out.systems[k], max_label);
        table.population = populations(rho, out.systems[k]).head(max_label + 1);
        table.has_populations = true;
        out.tables[k] = std::move(table);
        out.steady_residuals[k] = rho.residual;
    });
    return out;
}

SpectrumGrid sweep_grid(const BetaTables& tabs, std::span<const double> probe_axis,
                        const KpoParams& params, Exec exec) {
    if (probe_axis.empty()) throw std::invalid_argument("sweep_grid: empty probe axis");
    for (std::size_t k = 1; k < probe_axis.size(); ++k)
        if (!(probe_axis[k] > probe_axis[k - 1]))
            throw std::invalid_argument("sweep_grid: probe axis must be strictly ascending");
    const int max_label = tabs.max_label;

    SpectrumGrid grid;
    grid.beta_axis = tabs.betas;
    grid.probe_axis.assign(probe_axis.begin(), probe_axis.end());
    grid.gamma.resize(static_cast<Eigen::Index>(tabs.betas.size()),
                      static_cast<Eigen::Index>(probe_axis.size()));

    for_each_index(tabs.betas.size(), exec, [&](std::size_t k) {
        for (std::size_t j = 0; j < probe_axis.size(); ++j)
            grid.gamma(k, j) =
                reflection_driven(probe_axis[j], tabs.tables[k], params, max_label);
    });
    return grid;
}

SpectrumGrid sweep_grid(const KpoParams& params, std::span<const double> beta_axis,
                        std::span<const double> probe_axis, Exec exec) {
    const BetaTables tabs = tabulate_sweep(params, beta_axis, spectrum_sum_max_label, exec);
    return sweep_grid(tabs, probe_axis, params, exec);
}

std::vector<VisibleTransition> visible_transitions(const BetaTables& tabs,
                                                   const KpoParams& params,
                                                   double threshold,
                                                   double probe_min,
                                                   double probe_max) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("visible_transitions: threshold must be > 0");
    (void)params;
    std::vector<VisibleTransition> out;
    const int nl = tabs.max_label + 1;
    for (int m = 0; m < nl; ++m) {
        for (int n = 0; n < nl; ++n) {
            if (m == n) continue;
            VisibleTransition vt{m, n, false, 0.0, 0.0, 0.0};
            bool seen = false;
            for (std::size_t k = 0; k < tabs.betas.size(); ++k) {
                const TransitionTable& t = tabs.tables[k];
                const double w = t.omega(m, n);
                const double diff = t.population[m] - t.population[n];
                const double strength =
                    std::abs(params.kappa_e * std::norm(t.x(m, n)) * diff);
                if (strength > threshold && w >= probe_min && w <= probe_max) {
                    if (!seen) vt.beta_first = tabs.betas[k];
                    vt.beta_last = tabs.betas[k];
                    if (strength > vt.max_strength) {
                        vt.max_strength = strength;
                        vt.is_peak = diff > 0.0;
                    }
                    seen = true;
                }
            }
            if (seen) out.push_back(vt);
        }
    }
    return out;
}

} // namespace kpo
