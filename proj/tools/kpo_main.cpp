// kpo — command-line front end: sweeps, level diagrams, steady states,
// analytic comparisons, resonance fitting and drive-line calibration.
//
// Outputs are plain CSV / key-value text with fixed formatting so identical
// configs give byte-identical files.

#include <clocale>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "kpo/analytic.hpp"
#include "kpo/calibration.hpp"
#include "kpo/config.hpp"
#include "kpo/csv.hpp"
#include "kpo/fitting.hpp"
#include "kpo/spectrum.hpp"

namespace {

using namespace kpo;

constexpr int report_max_label = 3;  // levels/populations/transition reports

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    double beta_mhz = -1.0;  // single-beta override when >= 0
    int dim_override = 0;
    bool amp_only = false;
    std::string observations_path;
    std::string spectrum_path;
};

RunConfig load(const CommonOpts& opt) {
    RunConfig cfg = load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.directory = opt.out_dir;
    if (opt.dim_override > 0) cfg.dim = opt.dim_override;
    return cfg;
}

std::vector<double> beta_axis(const RunConfig& cfg, const CommonOpts& opt) {
    if (opt.beta_mhz >= 0.0) return {mhz_to_angular(opt.beta_mhz)};
    return cfg.beta_axis();
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    return std::filesystem::path(cfg.directory) / name;
}

int cmd_spectrum(const CommonOpts& opt) {
    const RunConfig cfg = load(opt);
    const KpoParams params = cfg.device();
    const std::vector<double> betas = beta_axis(cfg, opt);
    const std::vector<double> probes = cfg.probe_axis();
    const SpectrumGrid grid = sweep_grid(params, betas, probes, Exec::parallel);

    CsvWriter csv("beta_mhz,probe_detuning_mhz,re_gamma,im_gamma,abs_gamma");
    for (std::size_t k = 0; k < grid.beta_axis.size(); ++k)
        for (std::size_t j = 0; j < grid.probe_axis.size(); ++j) {
            const std::complex<double> g = grid.gamma(k, j);
            csv.row_values({angular_to_mhz(grid.beta_axis[k]),
                            angular_to_mhz(grid.probe_axis[j]), g.real(), g.imag(),
                            std::abs(g)});
        }
    csv.write(out_path(cfg, "spectrum.csv"));
    std::cout << "wrote " << out_path(cfg, "spectrum.csv").string() << "\n";
    return 0;
}

int cmd_levels(const CommonOpts& opt) {
    const RunConfig cfg = load(opt);
    const KpoParams params = cfg.device();
    const std::vector<double> betas = beta_axis(cfg, opt);
    const BetaTables tabs = tabulate_sweep(params, betas, report_max_label, Exec::parallel);

    CsvWriter csv("beta_mhz,label,energy_mhz,overlap");
    for (std::size_t k = 0; k < tabs.betas.size(); ++k) {
        const LabeledEigensystem& sys = tabs.systems[k];
        for (int l = 0; l <= report_max_label; ++l)
            csv.add_row({format_g9(angular_to_mhz(tabs.betas[k])), std::to_string(l),
                         format_g9(angular_to_mhz(sys.energies[l])),
                         format_g9(sys.overlaps[l])});
    }
    csv.write(out_path(cfg, "levels.csv"));
    std::cout << "wrote " << out_path(cfg, "levels.csv").string() << "\n";
    return 0;
}

int cmd_steady(const CommonOpts& opt) {
    const RunConfig cfg = load(opt);
    const KpoParams params = cfg.device();
    const std::vector<double> betas = beta_axis(cfg, opt);
    const BetaTables tabs = tabulate_sweep(params, betas, report_max_label, Exec::parallel);

    CsvWriter pops("beta_mhz,label,population");
    CsvWriter xmat("beta_mhz,m_label,n_label,abs_x");
    for (std::size_t k = 0; k < tabs.betas.size(); ++k) {
        const double bm = angular_to_mhz(tabs.betas[k]);
        const TransitionTable& t = tabs.tables[k];
        for (int l = 0; l <= report_max_label; ++l)
            pops.add_row({format_g9(bm), std::to_string(l), format_g9(t.population[l])});
        for (int m = 0; m <= report_max_label; ++m)
            for (int n = 0; n <= report_max_label; ++n)
                if (m != n)
                    xmat.add_row({format_g9(bm), std::to_string(m), std::to_string(n),
                                  format_g9(std::abs(t.x(m, n)))});
    }
    pops.write(out_path(cfg, "populations.csv"));
    xmat.write(out_path(cfg, "matrix_elements.csv"));
    std::cout << "wrote " << out_path(cfg, "populations.csv").string() << " and "
              << out_path(cfg, "matrix_elements.csv").string() << "\n";
    return 0;
}

int cmd_transitions(const CommonOpts& opt) {
    const RunConfig cfg = load(opt);
    const KpoParams params = cfg.device();
    const std::vector<double> betas = beta_axis(cfg, opt);
    const BetaTables tabs = tabulate_sweep(params, betas, report_max_label, Exec::parallel);
    const std::vector<VisibleTransition> vis =
        visible_transitions(tabs, params, 0.01 * params.kappa_e,
                            mhz_to_angular(cfg.probe_min_mhz),
                            mhz_to_angular(cfg.probe_max_mhz));

    std::ostringstream txt;
    txt << "count=" << vis.size() << "\n";
    for (const VisibleTransition& v : vis)
        txt << "pair=(" << v.m << "," << v.n << ")"
            << " type=" << (v.is_peak ? "peak" : "dip")
            << " beta_first_mhz=" << format_g9(angular_to_mhz(v.beta_first))
            << " beta_last_mhz=" << format_g9(angular_to_mhz(v.beta_last))
            << " max_strength_mhz=" << format_g9(angular_to_mhz(v.max_strength)) << "\n";
    write_text_atomic(out_path(cfg, "transitions.txt"), txt.str());
    std::cout << txt.str();
    return 0;
}

int cmd_analytic(const CommonOpts& opt) {
    const RunConfig cfg = load(opt);
    const KpoParams params = cfg.device();
    const std::vector<double> betas = beta_axis(cfg, opt);
    const BetaTables tabs = tabulate_sweep(params, betas, 2, Exec::parallel);

    static const char* names[4] = {"w10", "w01", "w12", "w21"};
    CsvWriter csv("beta_mhz,source,transition,freq_mhz");
    for (std::size_t k = 0; k < tabs.betas.size(); ++k) {
        const double bm = angular_to_mhz(tabs.betas[k]);
        const auto an = analytic_transition_frequencies(params.delta, params.chi,
                                                        tabs.betas[k]).as_array();
        const Eigen::VectorXd& e = tabs.systems[k].energies;
        const double num[4] = {e[1] - e[0], e[0] - e[1], e[1] - e[2], e[2] - e[1]};
        for (int j = 0; j < 4; ++j)
            csv.add_row({format_g9(bm), "analytic", names[j], format_g9(angular_to_mhz(an[j]))});
        for (int j = 0; j < 4; ++j)
            csv.add_row({format_g9(bm), "numeric", names[j], format_g9(angular_to_mhz(num[j]))});
    }
    csv.write(out_path(cfg, "analytic.csv"));
    std::cout << "wrote " << out_path(cfg, "analytic.csv").string() << "\n";
    return 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') { cells.push_back(cur); cur.clear(); }
        else if (c != '\r') cur += c;
    }
    cells.push_back(cur);
    return cells;
}

double cell_number(const std::vector<std::string>& cells, std::size_t idx,
                   int line_no, const std::string& file) {
    try {
        return std::stod(cells.at(idx));
    } catch (const std::exception&) {
        throw std::runtime_error(file + ":" + std::to_string(line_no) +
                                 ": cannot parse field " + std::to_string(idx + 1));
    }
}

int cmd_fit(const CommonOpts& opt) {
    const RunConfig cfg = load(opt);
    const KpoParams params = cfg.device();

    if (!opt.spectrum_path.empty()) {
        // Single-resonance fit of an ingested spectrum.
        std::ifstream f(opt.spectrum_path);
        if (!f) throw std::runtime_error("cannot open " + opt.spectrum_path);
        std::string line;
        if (!std::getline(f, line))
            throw std::runtime_error(opt.spectrum_path + ": empty file");
        std::string header = line;
        if (!header.empty() && header.back() == '\r') header.pop_back();
        const bool complex_mode = header == "probe_freq_mhz,re_gamma,im_gamma";
        if (!complex_mode && header != "probe_freq_mhz,abs_gamma")
            throw std::runtime_error(opt.spectrum_path + ":1: unrecognized header '" +
                                     header + "'");
        std::vector<double> probe, mag;
        std::vector<std::complex<double>> gam;
        int line_no = 1;
        while (std::getline(f, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            const auto cells = split_csv_line(line);
            probe.push_back(mhz_to_angular(cell_number(cells, 0, line_no, opt.spectrum_path)));
            if (complex_mode) {
                const double re = cell_number(cells, 1, line_no, opt.spectrum_path);
                const double im = cell_number(cells, 2, line_no, opt.spectrum_path);
                gam.emplace_back(re, im);
                mag.push_back(std::abs(gam.back()));
            } else {
                mag.push_back(cell_number(cells, 1, line_no, opt.spectrum_path));
            }
        }
        const ResonanceFit init = initial_guess(probe, mag);
        const ResonanceFit fit = (complex_mode && !opt.amp_only)
                                     ? fit_resonance(probe, gam, init)
                                     : fit_resonance_amplitude(probe, mag, init);
        std::ostringstream txt;
        txt << "omega_mn_mhz=" << format_g9(angular_to_mhz(fit.omega_mn)) << "\n"
            << "kappa_e_nominal_mhz=" << format_g9(angular_to_mhz(fit.kappa_e_nominal)) << "\n"
            << "kappa_i_nominal_mhz=" << format_g9(angular_to_mhz(fit.kappa_i_nominal)) << "\n"
            << "residual=" << format_g9(fit.residual) << "\n"
            << "converged=" << (fit.converged ? 1 : 0) << "\n";
        write_text_atomic(out_path(cfg, "resonance_fit.txt"), txt.str());
        std::cout << txt.str();
        return fit.converged ? 0 : 3;
    }

    // Synthetic loss-rate comparison over the configured grid.
    const std::vector<double> betas = beta_axis(cfg, opt);
    const BetaTables tabs = tabulate_sweep(params, betas, spectrum_sum_max_label, Exec::parallel);
    const std::vector<VisibleTransition> vis =
        visible_transitions(tabs, params, 0.01 * params.kappa_e,
                            mhz_to_angular(cfg.probe_min_mhz),
                            mhz_to_angular(cfg.probe_max_mhz));
    std::vector<std::pair<int, int>> pairs;
    for (const VisibleTransition& v : vis)
        if (v.m <= report_max_label && v.n <= report_max_label)
            pairs.emplace_back(v.m, v.n);
    const std::vector<LossComparisonRow> rows =
        loss_comparison_sweep(tabs, params, pairs, Exec::parallel);

    CsvWriter csv("beta_mhz,m_label,n_label,kappa_e_fit_mhz,kappa_i_fit_mhz,"
                  "kappa_e_pred_mhz,kappa_i_pred_mhz,flag");
    for (const LossComparisonRow& r : rows)
        csv.add_row({format_g9(angular_to_mhz(r.beta)), std::to_string(r.m),
                     std::to_string(r.n),
                     format_g9(angular_to_mhz(r.fit.kappa_e_nominal)),
                     format_g9(angular_to_mhz(r.fit.kappa_i_nominal)),
                     format_g9(angular_to_mhz(r.pred.kappa_e_pred)),
                     format_g9(angular_to_mhz(r.pred.kappa_i_pred)),
                     r.overlap_flag ? "1" : "0"});
    csv.write(out_path(cfg, "loss_comparison.csv"));
    std::cout << "wrote " << out_path(cfg, "loss_comparison.csv").string() << "\n";
    return 0;
}

int cmd_calibrate(const CommonOpts& opt) {
    const RunConfig cfg = load(opt);
    const KpoParams params = cfg.device();
    if (opt.observations_path.empty())
        throw std::runtime_error("calibrate: --observations <csv> is required");

    std::ifstream f(opt.observations_path);
    if (!f) throw std::runtime_error("cannot open " + opt.observations_path);
    std::string line;
    if (!std::getline(f, line))
        throw std::runtime_error(opt.observations_path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "p_rt_dbm,m_label,n_label,freq_mhz")
        throw std::runtime_error(opt.observations_path + ":1: unrecognized header '" +
                                 line + "'");
    std::vector<Observation> obs;
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        Observation o;
        o.p_rt_dbm = cell_number(cells, 0, line_no, opt.observations_path);
        o.m = static_cast<int>(cell_number(cells, 1, line_no, opt.observations_path));
        o.n = static_cast<int>(cell_number(cells, 2, line_no, opt.observations_path));
        o.omega = mhz_to_angular(cell_number(cells, 3, line_no, opt.observations_path));
        obs.push_back(o);
    }

    DriveLine line_model = cfg.line();
    const CalibrationResult result = fit_attenuation(obs, params, line_model);

    std::ostringstream txt;
    txt << "attenuation_db=" << format_g9(result.attenuation_db) << "\n"
        << "objective=" << format_g9(result.objective) << "\n"
        << "ill_conditioned=" << (result.ill_conditioned ? 1 : 0) << "\n"
        << "p_rt_dbm,m_label,n_label,beta_mhz,freq_meas_mhz,freq_model_mhz,residual_mhz\n";
    for (const CalibrationResidual& r : result.residuals)
        txt << format_g9(r.obs.p_rt_dbm) << "," << r.obs.m << "," << r.obs.n << ","
            << format_g9(angular_to_mhz(r.beta)) << ","
            << format_g9(angular_to_mhz(r.obs.omega)) << ","
            << format_g9(angular_to_mhz(r.omega_model)) << ","
            << format_g9(angular_to_mhz(r.residual)) << "\n";
    write_text_atomic(out_path(cfg, "calibration.txt"), txt.str());
    std::cout << txt.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"Kerr parametric oscillator reflection spectroscopy toolkit"};
    app.require_subcommand(1);

    CommonOpts opt;
    int rc = 0;

    auto add_common = [&opt](CLI::App* sub, bool needs_config = true) {
        sub->add_option("--config", opt.config_path, "run configuration file")
            ->required(needs_config);
        sub->add_option("--out", opt.out_dir, "output directory override");
        sub->add_option("--beta-mhz", opt.beta_mhz, "single drive amplitude (MHz)");
        sub->add_option("--dim", opt.dim_override, "Fock truncation override");
    };

    auto* sp = app.add_subcommand("spectrum", "reflection grid over (beta, probe)");
    add_common(sp);
    sp->callback([&] { rc = cmd_spectrum(opt); });

    auto* lv = app.add_subcommand("levels", "labeled eigenenergies along the drive sweep");
    add_common(lv);
    lv->callback([&] { rc = cmd_levels(opt); });

    auto* st = app.add_subcommand("steady", "steady-state populations and matrix elements");
    add_common(st);
    st->callback([&] { rc = cmd_steady(opt); });

    auto* tr = app.add_subcommand("transitions", "visible-transition report");
    add_common(tr);
    tr->callback([&] { rc = cmd_transitions(opt); });

    auto* an = app.add_subcommand("analytic", "analytic vs numeric transition frequencies");
    add_common(an);
    an->callback([&] { rc = cmd_analytic(opt); });

    auto* ft = app.add_subcommand("fit", "resonance fits and nominal-loss comparison");
    add_common(ft);
    ft->add_option("--spectrum", opt.spectrum_path, "measured spectrum CSV to fit");
    ft->add_flag("--amp-only", opt.amp_only, "fit |Gamma| instead of complex Gamma");
    ft->callback([&] { rc = cmd_fit(opt); });

    auto* cal = app.add_subcommand("calibrate", "fit line attenuation from observations");
    add_common(cal);
    cal->add_option("--observations", opt.observations_path, "observations CSV")->required();
    cal->callback([&] { rc = cmd_calibrate(opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
