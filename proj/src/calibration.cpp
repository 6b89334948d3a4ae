#include "kpo/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpo {

void DriveLine::validate() const {
    if (!(z0 > 0.0)) throw std::invalid_argument("DriveLine: z0 must be > 0");
}

double power_to_beta(double p_rt_dbm, const DriveLine& line) {
    line.validate();
    const double p_kpo_dbm = p_rt_dbm + line.attenuation_db;
    // dBm -> watts is the 1000 under the root; current amplitude in amperes.
    const double i_amp = std::sqrt(2.0 / (1000.0 * line.z0)) *
                         std::pow(10.0, p_kpo_dbm / 20.0);
    const double i_ua = i_amp * 1e6;
    return std::abs(line.domega_di) * i_ua / 4.0;
}

double beta_to_delta_omega(double beta) {
    if (beta < 0.0) throw std::invalid_argument("beta_to_delta_omega: beta must be >= 0");
    return 4.0 * beta;
}

LevelTracker::LevelTracker(const KpoParams& params, double beta_max, int max_label)
    : params_(params), max_label_(max_label) {
    params_.validate();
    if (max_label < 0 || max_label >= params.dim - 2)
        throw TruncationEdgeError("LevelTracker: max_label too close to truncation edge");
    const double step = mhz_to_angular(0.05);
    const int n = std::max(1, static_cast<int>(std::ceil(std::max(beta_max, step) / step)));
    anchors_.resize(n + 1);
    for (int k = 0; k <= n; ++k) anchors_[k] = beta_max * k / n;
    if (beta_max <= 0.0) anchors_ = {0.0};
    systems_ = label_sweep(params_, anchors_, Exec::serial, max_label_);
}

double LevelTracker::omega(int m, int n, double beta) const {
    if (m < 0 || n < 0 || m > max_label_ || n > max_label_)
        throw std::invalid_argument("LevelTracker::omega: label out of range");
    if (beta < 0.0 || beta > anchors_.back() * (1.0 + 1e-12) + 1e-12)
        throw std::invalid_argument("LevelTracker::omega: beta outside tracked range");

    const auto it = std::lower_bound(anchors_.begin(), anchors_.end(), beta);
    std::size_t k = static_cast<std::size_t>(it - anchors_.begin());
    if (k > 0 && (k == anchors_.size() || anchors_[k] - beta > beta - anchors_[k - 1])) --k;
    const LabeledEigensystem& anchor = systems_[k];

    const RawEigensystem raw = diagonalize(hamiltonian_rwa(params_, beta));
    // Greedy label match against the anchor, restricted to tracked labels.
    const Eigen::MatrixXd ov = (anchor.states.adjoint() * raw.states).cwiseAbs();
    const int nl = max_label_ + 1;
    std::vector<int> label_to_raw(nl, -1);
    std::vector<bool> lbl_done(nl, false), raw_done(raw.states.cols(), false);
    for (int step = 0; step < nl; ++step) {
        double best = -1.0;
        int bl = -1, br = -1;
        for (int l = 0; l < nl; ++l) {
            if (lbl_done[l]) continue;
            for (int r = 0; r < ov.cols(); ++r) {
                if (raw_done[r]) continue;
                if (ov(l, r) > best) { best = ov(l, r); bl = l; br = r; }
            }
        }
        if (best < 0.7)
            throw AmbiguousTrackingError(
                "LevelTracker: ambiguous labeling at beta/2pi = " +
                std::to_string(angular_to_mhz(beta)) + " MHz");
        lbl_done[bl] = true;
        raw_done[br] = true;
        label_to_raw[bl] = br;
    }
    return raw.energies[label_to_raw[m]] - raw.energies[label_to_raw[n]];
}

namespace {

double objective_at(double r_db, std::span<const Observation> obs,
                    const DriveLine& line, const LevelTracker& tracker) {
    DriveLine l = line;
    l.attenuation_db = r_db;
    double s = 0.0;
    for (const Observation& o : obs) {
        const double beta = power_to_beta(o.p_rt_dbm, l);
        const double diff = o.omega - tracker.omega(o.m, o.n, beta);
        s += diff * diff;
    }
    return s;
}

} // namespace

CalibrationResult fit_attenuation(std::span<const Observation> observations,
                                  const KpoParams& params, const DriveLine& line) {
    params.validate();
    line.validate();
    if (observations.empty())
        throw std::invalid_argument("fit_attenuation: no observations");

    constexpr double r_lo = -80.0, r_hi = -30.0, coarse = 0.5;
    int max_label = 0;
    double p_max = observations[0].p_rt_dbm;
    for (const Observation& o : observations) {
        max_label = std::max({max_label, o.m, o.n});
        p_max = std::max(p_max, o.p_rt_dbm);
    }
    DriveLine top = line;
    top.attenuation_db = r_hi;
    const double beta_max = power_to_beta(p_max, top);
    const LevelTracker tracker(params, beta_max, max_label);

    auto f = [&](double r) { return objective_at(r, observations, line, tracker); };

    double best_r = r_lo, best_f = f(r_lo);
    for (double r = r_lo + coarse; r <= r_hi + 1e-9; r += coarse) {
        const double v = f(r);
        if (v < best_f) { best_f = v; best_r = r; }
    }

    // Golden-section refinement on the bracketing coarse cells.
    double a = std::max(r_lo, best_r - coarse);
    double b = std::min(r_hi, best_r + coarse);
    constexpr double invphi = 0.6180339887498948882;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 0.01) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    const double r_star = (fc < fd) ? c : d;
    const double f_star = std::min(fc, fd);

    CalibrationResult result;
    result.attenuation_db = r_star;
    result.objective = f_star;

    // Flat-valley diagnostic: vanishing curvature of the objective around the
    // minimizer means the data cannot pin R (e.g. drive-insensitive
    // frequencies near beta = 0).
    const double probe_db = 0.5;
    const double curv = f(std::min(r_star + probe_db, r_hi)) +
                        f(std::max(r_star - probe_db, r_lo)) - 2.0 * f_star;
    result.ill_conditioned = !(curv > 1e-12);

    DriveLine fitted = line;
    fitted.attenuation_db = r_star;
    for (const Observation& o : observations) {
        CalibrationResidual res;
        res.obs = o;
        res.beta = power_to_beta(o.p_rt_dbm, fitted);
        res.omega_model = tracker.omega(o.m, o.n, res.beta);
        res.residual = o.omega - res.omega_model;
        result.residuals.push_back(res);
    }
    return result;
}

} // namespace kpo
