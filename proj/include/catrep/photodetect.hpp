#pragma once

#include <span>

namespace catrep {

/// Pure-loss channel with transmittance eta.
struct ChannelParams {
    double eta = 1.0;
};

/// Photon-number-resolving detector with efficiency xi.
struct DetectorParams {
    double xi = 1.0;
};

/// Mean photon numbers of the transmitted signal and of the environment.
struct SignalSplit {
    double n_signal = 0.0;
    double n_env = 0.0;
};

enum class ClickParity { NoClick, Even, Odd };

/// Orthonormal relay states: modified even cat, odd cat, vacuum.
enum class RelayState { PlusCat, MinusCat, Vacuum };

/// One detected mode of a multimode signal: mean photons and its efficiency.
struct DetectedMode {
    double n = 0.0;
    double xi = 1.0;
};

/// Aggregates replacing |gamma_s|^2 and xi |gamma_s|^2 for a broadband detector.
struct MultimodeSignal {
    double n_signal = 0.0;
    double weighted_xi_sum = 0.0;
};

SignalSplit loss_split(double n_total, ChannelParams channel);

/// C_mu(k, gamma_s): k-photocount weight of the unnormalized cat
/// |gamma_s> + mu |-gamma_s>. Requires k >= 1.
double click_weight(int k, int mu, double n_signal, DetectorParams det);
/// Parity-summed C_mu(even|odd, gamma_s). NoClick is rejected.
double click_weight(ClickParity parity, int mu, double n_signal, DetectorParams det);

/// P(k | state) after the channel and detector; n_total = |gamma|^2 before loss.
double photocount_prob(int k, RelayState state, double n_total, ChannelParams channel, DetectorParams det);

/// P(no click | even | odd, state).
double parity_prob(ClickParity parity, RelayState state, double n_total, ChannelParams channel, DetectorParams det);

/// Parity probabilities for a multimode signal. `signal` holds the aggregates
/// after the channel; `n_env` is the photon number lost to the environment.
double parity_prob_multimode(ClickParity parity, RelayState state, const MultimodeSignal& signal, double n_env);

MultimodeSignal multimode_effective(std::span<const DetectedMode> modes);

}  // namespace catrep
