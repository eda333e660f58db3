#include "catrep/swap.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "catrep/errors.hpp"

namespace catrep {

namespace {

constexpr std::array<CatSymmetry, 2> kSymmetries{CatSymmetry::Even, CatSymmetry::Odd};

double weight(const LinkState& s, CatSymmetry mu) { return mu == CatSymmetry::Even ? s.f_plus : s.f_minus; }

}  // namespace

void SwapConfig::validate() const {
    link.validate();
    if (!(eta_m >= 0.0 && eta_m <= 1.0)) throw std::invalid_argument("eta_m must lie in [0, 1]");
}

void LinkState::validate() const {
    if (!(f_plus >= 0.0 && f_plus <= 1.0 && f_minus >= 0.0 && f_minus <= 1.0))
        throw std::invalid_argument("link fidelities must lie in [0, 1]");
    if (std::abs(f_plus + f_minus - 1.0) > 1e-9) throw std::invalid_argument("link fidelities must sum to 1");
}

NodeParams node_params(const SwapConfig& cfg) {
    cfg.validate();
    return {0.5, 0.5 * cfg.eta_m * cfg.link.xi, 2.0 * (1.0 - cfg.link.r_bs) * cfg.link.a};
}

LinkConfig node_link_config(const SwapConfig& cfg) {
    const NodeParams np = node_params(cfg);
    return {np.a_node, np.r_node, cfg.eta_m, cfg.link.xi};
}

double swap_success(const LinkState& link1, const LinkState& link2, ClickParity parity, const SwapConfig& cfg) {
    link1.validate();
    link2.validate();
    const LinkConfig node = node_link_config(cfg);
    double total = 0.0;
    for (CatSymmetry mu1 : kSymmetries)
        for (CatSymmetry mu2 : kSymmetries)
            total += success_prob({mu1, mu2}, parity, node) * weight(link1, mu1) * weight(link2, mu2);
    return total;
}

std::pair<double, double> swap_fidelity(const LinkState& link1, const LinkState& link2, ClickParity parity,
                                        const SwapConfig& cfg) {
    link1.validate();
    link2.validate();
    const LinkConfig node = node_link_config(cfg);
    double p_total = 0.0;
    double num_plus = 0.0;
    double num_minus = 0.0;
    for (CatSymmetry mu1 : kSymmetries) {
        for (CatSymmetry mu2 : kSymmetries) {
            const double w = weight(link1, mu1) * weight(link2, mu2);
            if (w == 0.0) continue;
            const PairSymmetry pair{mu1, mu2};
            const double p = success_prob(pair, parity, node);
            if (p == 0.0) continue;
            const auto [f_plus, f_minus] = heralded_fidelity(pair, parity, node);
            p_total += p * w;
            num_plus += f_plus * p * w;
            num_minus += f_minus * p * w;
        }
    }
    if (!(p_total > 0.0)) throw UndefinedFidelity("swap_fidelity: swap success probability is zero");
    return {num_plus / p_total, num_minus / p_total};
}

SwapResult swap(const LinkState& link1, const LinkState& link2, ClickParity parity, const SwapConfig& cfg) {
    const auto [f_plus, f_minus] = swap_fidelity(link1, link2, parity, cfg);
    return {swap_success(link1, link2, parity, cfg), f_plus, f_minus};
}

ChainResult swap_chain(const std::vector<LinkState>& links, ClickParity parity, const SwapConfig& cfg) {
    if (links.empty()) throw std::invalid_argument("swap_chain: at least one link required");
    ChainResult out;
    out.state = links.front();
    out.state.validate();
    for (std::size_t i = 1; i < links.size(); ++i) {
        const SwapResult step = swap(out.state, links[i], parity, cfg);
        out.step_success.push_back(step.p_success);
        out.state = {step.f_plus_12, step.f_minus_12};
    }
    return out;
}

}  // namespace catrep
