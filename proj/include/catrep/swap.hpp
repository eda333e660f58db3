#pragma once

#include <vector>

#include "catrep/herald.hpp"

namespace catrep {

/// Both links share `link`; eta_m is the memory efficiency.
struct SwapConfig {
    LinkConfig link;
    double eta_m = 1.0;
    void validate() const;
};

struct NodeParams {
    double r_node = 0.5;
    double zeta_m = 0.0;
    double a_node = 0.0;
};

/// Fidelity weights of a heralded link.
struct LinkState {
    double f_plus = 0.0;
    double f_minus = 1.0;
    void validate() const;
};

struct SwapResult {
    double p_success = 0.0;
    double f_plus_12 = 0.0;
    double f_minus_12 = 0.0;
};

/// (1/2, eta_m xi / 2, 2 (1 - r_bs) a).
NodeParams node_params(const SwapConfig& cfg);

/// Node-level LinkConfig whose zeta() equals zeta_m.
LinkConfig node_link_config(const SwapConfig& cfg);

/// Per-detector success probability for the node parity outcome.
double swap_success(const LinkState& link1, const LinkState& link2, ClickParity parity, const SwapConfig& cfg);

/// (f_plus_12, f_minus_12). Throws UndefinedFidelity when the success
/// probability vanishes.
std::pair<double, double> swap_fidelity(const LinkState& link1, const LinkState& link2, ClickParity parity,
                                        const SwapConfig& cfg);

SwapResult swap(const LinkState& link1, const LinkState& link2, ClickParity parity, const SwapConfig& cfg);

/// Left fold of swap() over a chain of links, every node heralding `parity`.
/// Each step reuses the single-swap node parameters, so stored amplitudes
/// are assumed to stay (1 - r_bs) a per side; results are marked extrapolated.
struct ChainResult {
    LinkState state;
    std::vector<double> step_success;  // per-detector success of each swap
    bool extrapolated = true;
};

ChainResult swap_chain(const std::vector<LinkState>& links, ClickParity parity, const SwapConfig& cfg);

}  // namespace catrep
