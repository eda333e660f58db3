#pragma once

#include "catrep/link_gen.hpp"
#include "catrep/photodetect.hpp"

namespace catrep {

/// Elementary-link parameters: a = |alpha|^2, r_bs, channel transmittance
/// eta and detector efficiency xi.
struct LinkConfig {
    double a = 0.0;
    double r_bs = 0.2;
    double eta = 0.95;
    double xi = 0.9;

    /// zeta = xi * eta * r_bs
    double zeta() const { return xi * eta * r_bs; }
    void validate() const;
};

struct HeraldResult {
    double p_success = 0.0;
    double f_plus = 0.0;
    double f_minus = 0.0;
};

/// Output arm whose detector registered the heralding parity. The two arms
/// herald |Psi_mu(a_qm, a_qm)> and |Psi_mu(a_qm, -a_qm)>; converting the
/// latter takes a pi phase shift at one end node, which is not applied here.
enum class HeraldArm { C, D };

/// Diagonal mixture over |Psi_+^(AB)> and |Psi_-^(AB)>.
struct HeraldedDensity {
    double weight_plus = 0.0;
    double weight_minus = 0.0;
    double stored_mean_photons = 0.0;  // per side, (1 - r_bs) a
    HeraldArm arm = HeraldArm::C;
};

/// Whether reported success probabilities count both relay detectors.
struct ReportOptions {
    bool both_detectors = true;
};

inline double reported_success(double per_detector, ReportOptions opts) {
    return opts.both_detectors ? 2.0 * per_detector : per_detector;
}

/// Per-detector success probability from the zeta-substituted closed forms.
double success_prob(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg);
/// Per-detector success probability from sum_mu P(p_c|mu') P_mu.
double success_prob_from_definition(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg);

/// (f_plus, f_minus) from the tanh closed forms.
std::pair<double, double> heralded_fidelity(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg);
/// (f_plus, f_minus) from the Bayes quotient P(p_c|mu') P_mu / P_s.
std::pair<double, double> heralded_fidelity_bayes(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg);

HeraldResult herald(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg);

HeraldedDensity heralded_state(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg,
                               HeraldArm arm = HeraldArm::C);

/// Prob(p_c | mu, nu'nu) = P(p_c | mu') with mu' = nu' nu mu; the relay
/// state carries |gamma_bs|^2 = 2 r_bs a photons before loss.
double conditional_click_prob(ClickParity parity, CatSymmetry mu, PairSymmetry pair, const LinkConfig& cfg);
double conditional_click_prob(int k, CatSymmetry mu, PairSymmetry pair, const LinkConfig& cfg);

}  // namespace catrep
