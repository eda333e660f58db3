#include "catrep/herald.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "catrep/errors.hpp"

namespace catrep {

namespace {

RelayState relay_state(CatSymmetry mu_prime) {
    return mu_prime == CatSymmetry::Even ? RelayState::PlusCat : RelayState::MinusCat;
}

void require_click(ClickParity parity) {
    if (parity == ClickParity::NoClick) throw std::invalid_argument("heralding requires an Even or Odd click parity");
}

// The relay outcome mu that produces relay state mu' of the heralded parity.
CatSymmetry heralded_mu(PairSymmetry pair, ClickParity parity) {
    const CatSymmetry mu_prime = parity == ClickParity::Even ? CatSymmetry::Even : CatSymmetry::Odd;
    return pair.product() * mu_prime;
}

}  // namespace

void LinkConfig::validate() const {
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("a must be finite and >= 0");
    if (!(r_bs >= 0.0 && r_bs <= 1.0)) throw std::invalid_argument("r_bs must lie in [0, 1]");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in [0, 1]");
    assert(zeta() <= r_bs);
}

double success_prob(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg) {
    cfg.validate();
    require_click(parity);
    const OutcomeProbs p = outcome_probs(pair, cfg.zeta(), cfg.a);
    return heralded_mu(pair, parity) == CatSymmetry::Even ? p.p_plus : p.p_minus;
}

double conditional_click_prob(ClickParity parity, CatSymmetry mu, PairSymmetry pair, const LinkConfig& cfg) {
    cfg.validate();
    const CatSymmetry mu_prime = pair.product() * mu;
    return parity_prob(parity, relay_state(mu_prime), 2.0 * cfg.r_bs * cfg.a, ChannelParams{cfg.eta},
                       DetectorParams{cfg.xi});
}

double conditional_click_prob(int k, CatSymmetry mu, PairSymmetry pair, const LinkConfig& cfg) {
    cfg.validate();
    const CatSymmetry mu_prime = pair.product() * mu;
    return photocount_prob(k, relay_state(mu_prime), 2.0 * cfg.r_bs * cfg.a, ChannelParams{cfg.eta},
                           DetectorParams{cfg.xi});
}

double success_prob_from_definition(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg) {
    cfg.validate();
    require_click(parity);
    const OutcomeProbs p = outcome_probs(pair, cfg.r_bs, cfg.a);
    return conditional_click_prob(parity, CatSymmetry::Even, pair, cfg) * p.p_plus +
           conditional_click_prob(parity, CatSymmetry::Odd, pair, cfg) * p.p_minus;
}

std::pair<double, double> heralded_fidelity(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg) {
    cfg.validate();
    require_click(parity);
    const double r = cfg.r_bs;
    const double zeta = cfg.zeta();
    const double a = cfg.a;

    // Same-symmetry odd and cross even share f_minus = T1/(T1+T2);
    // same-symmetry even and cross odd share f_plus = 1/(1+T1 T2).
    const bool ratio_form = (parity == ClickParity::Odd) == pair.same();
    if (ratio_form) {
        double f_minus;
        if (a == 0.0) {
            if (1.0 - zeta == 0.0) throw DegenerateInput("heralded_fidelity: r_bs = zeta = 1 at a = 0");
            f_minus = (1.0 - r) / (1.0 - zeta);
        } else {
            const double t1 = std::tanh(2.0 * (1.0 - r) * a);
            const double t2 = std::tanh(2.0 * (r - zeta) * a);
            if (t1 + t2 == 0.0) throw DegenerateInput("heralded_fidelity: r_bs = zeta = 1");
            f_minus = t1 / (t1 + t2);
        }
        return {1.0 - f_minus, f_minus};
    }
    const double t1 = std::tanh(2.0 * (1.0 - r) * a);
    const double t2 = std::tanh(2.0 * (r - zeta) * a);
    const double f_plus = 1.0 / (1.0 + t1 * t2);
    return {f_plus, 1.0 - f_plus};
}

std::pair<double, double> heralded_fidelity_bayes(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg) {
    cfg.validate();
    require_click(parity);
    const OutcomeProbs p = outcome_probs(pair, cfg.r_bs, cfg.a);
    const double w_plus = conditional_click_prob(parity, CatSymmetry::Even, pair, cfg) * p.p_plus;
    const double w_minus = conditional_click_prob(parity, CatSymmetry::Odd, pair, cfg) * p.p_minus;
    const double total = w_plus + w_minus;
    if (!(total > 0.0)) throw DegenerateInput("heralded_fidelity_bayes: zero success probability");
    return {w_plus / total, w_minus / total};
}

HeraldResult herald(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg) {
    const auto [f_plus, f_minus] = heralded_fidelity(pair, parity, cfg);
    return {success_prob(pair, parity, cfg), f_plus, f_minus};
}

HeraldedDensity heralded_state(PairSymmetry pair, ClickParity parity, const LinkConfig& cfg, HeraldArm arm) {
    const auto [f_plus, f_minus] = heralded_fidelity(pair, parity, cfg);
    return {f_plus, f_minus, (1.0 - cfg.r_bs) * cfg.a, arm};
}

}  // namespace catrep
