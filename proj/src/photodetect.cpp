#include "catrep/photodetect.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "catrep/errors.hpp"
#include "catrep/modes.hpp"

namespace catrep {

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

double clamp_probability(double p) {
    assert(p > -1e-10 && p < 1.0 + 1e-10);
    return std::clamp(p, 0.0, 1.0);
}

// Parity weights with x = xi * n_s and residual = (1 - xi) n_s:
//   C_mu(even) = (1 - e^{-x})^2 (1 + mu e^{-2 residual})
//   C_mu(odd)  = (1 - e^{-2x})  (1 - mu e^{-2 residual})
double parity_weight(ClickParity parity, int mu, double x, double residual) {
    // 1 - e^{-2 residual} through expm1; the direct difference cancels for small residual.
    const double one_minus_d = -std::expm1(-2.0 * residual);
    const double one_plus_d = 2.0 - one_minus_d;
    if (parity == ClickParity::Even) {
        const double e = std::expm1(-x);
        return e * e * (mu > 0 ? one_plus_d : one_minus_d);
    }
    return -std::expm1(-2.0 * x) * (mu > 0 ? one_minus_d : one_plus_d);
}

// x = sum xi_i n_i over detected modes, n_s = sum n_i, n_e lost photons.
double parity_prob_core(ClickParity parity, RelayState state, double n_s, double x, double n_e) {
    if (state == RelayState::Vacuum) return parity == ClickParity::NoClick ? 1.0 : 0.0;
    const double n = n_s + n_e;
    if (n == 0.0) throw DegenerateInput("parity_prob: relay cat with zero amplitude");

    if (parity == ClickParity::NoClick) {
        const double y = n - x;
        if (state == RelayState::PlusCat) {
            const double ratio = std::expm1(-y) / std::expm1(-n);
            return clamp_probability(std::exp(-x) * ratio * ratio);
        }
        return clamp_probability(std::exp(-x) * std::expm1(-2.0 * y) / std::expm1(-2.0 * n));
    }

    const double residual = n_s - x;
    const double c_plus = parity_weight(parity, +1, x, residual);
    const double c_minus = parity_weight(parity, -1, x, residual);
    const double m_plus_env = cat_norm(n_e, CatSymmetry::Even);
    const double m_minus_env = cat_norm(n_e, CatSymmetry::Odd);
    if (state == RelayState::PlusCat)
        return clamp_probability((m_plus_env * c_plus + m_minus_env * c_minus) /
                                 (4.0 * cat_norm(n, CatSymmetry::Even, true)));
    return clamp_probability((m_minus_env * c_plus + m_plus_env * c_minus) / (4.0 * cat_norm(n, CatSymmetry::Odd)));
}

}  // namespace

SignalSplit loss_split(double n_total, ChannelParams channel) {
    if (!(n_total >= 0.0)) throw std::invalid_argument("loss_split: n_total must be >= 0");
    check_unit(channel.eta, "eta");
    return {channel.eta * n_total, (1.0 - channel.eta) * n_total};
}

double click_weight(int k, int mu, double n_signal, DetectorParams det) {
    if (k < 1) throw std::invalid_argument("click_weight: k must be >= 1 (vacuum handled separately)");
    if (std::abs(mu) != 1) throw std::invalid_argument("click_weight: mu must be +1 or -1");
    if (!(n_signal >= 0.0)) throw std::invalid_argument("click_weight: n_signal must be >= 0");
    check_unit(det.xi, "xi");
    const double x = det.xi * n_signal;
    // 0^k with k >= 1 is 0; log(0) would give -inf * k = -inf, exp -> 0.
    const double poisson = x == 0.0 ? 0.0 : std::exp(k * std::log(x) - std::lgamma(k + 1.0) - x);
    const double parity_sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double one_minus_d = -std::expm1(-2.0 * (n_signal - x));
    return 2.0 * poisson * (parity_sign * mu > 0 ? 2.0 - one_minus_d : one_minus_d);
}

double click_weight(ClickParity parity, int mu, double n_signal, DetectorParams det) {
    if (parity == ClickParity::NoClick) throw std::invalid_argument("click_weight: parity weight needs Even or Odd");
    if (std::abs(mu) != 1) throw std::invalid_argument("click_weight: mu must be +1 or -1");
    if (!(n_signal >= 0.0)) throw std::invalid_argument("click_weight: n_signal must be >= 0");
    check_unit(det.xi, "xi");
    const double x = det.xi * n_signal;
    return parity_weight(parity, mu, x, n_signal - x);
}

double photocount_prob(int k, RelayState state, double n_total, ChannelParams channel, DetectorParams det) {
    if (k < 0) throw std::invalid_argument("photocount_prob: k must be >= 0");
    check_unit(det.xi, "xi");
    const auto split = loss_split(n_total, channel);
    if (state == RelayState::Vacuum) return k == 0 ? 1.0 : 0.0;
    if (k == 0) return parity_prob_core(ClickParity::NoClick, state, split.n_signal, det.xi * split.n_signal, split.n_env);
    if (n_total == 0.0) throw DegenerateInput("photocount_prob: relay cat with zero amplitude");

    const double c_plus = click_weight(k, +1, split.n_signal, det);
    const double c_minus = click_weight(k, -1, split.n_signal, det);
    const double m_plus_env = cat_norm(split.n_env, CatSymmetry::Even);
    const double m_minus_env = cat_norm(split.n_env, CatSymmetry::Odd);
    if (state == RelayState::PlusCat)
        return clamp_probability((m_plus_env * c_plus + m_minus_env * c_minus) /
                                 (4.0 * cat_norm(n_total, CatSymmetry::Even, true)));
    return clamp_probability((m_minus_env * c_plus + m_plus_env * c_minus) / (4.0 * cat_norm(n_total, CatSymmetry::Odd)));
}

double parity_prob(ClickParity parity, RelayState state, double n_total, ChannelParams channel, DetectorParams det) {
    check_unit(det.xi, "xi");
    const auto split = loss_split(n_total, channel);
    return parity_prob_core(parity, state, split.n_signal, det.xi * split.n_signal, split.n_env);
}

double parity_prob_multimode(ClickParity parity, RelayState state, const MultimodeSignal& signal, double n_env) {
    if (!(signal.n_signal >= 0.0) || !(n_env >= 0.0)) throw std::invalid_argument("photon numbers must be >= 0");
    if (!(signal.weighted_xi_sum >= 0.0 && signal.weighted_xi_sum <= signal.n_signal))
        throw std::invalid_argument("weighted efficiency sum must lie in [0, n_signal]");
    return parity_prob_core(parity, state, signal.n_signal, signal.weighted_xi_sum, n_env);
}

MultimodeSignal multimode_effective(std::span<const DetectedMode> modes) {
    MultimodeSignal out;
    for (const auto& m : modes) {
        if (!(m.n >= 0.0)) throw std::invalid_argument("multimode_effective: n_i must be >= 0");
        check_unit(m.xi, "xi_i");
        out.n_signal += m.n;
        out.weighted_xi_sum += m.xi * m.n;
    }
    return out;
}

}  // namespace catrep
