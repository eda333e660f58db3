#include "catrep/fock_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "catrep/errors.hpp"
#include "catrep/link_gen.hpp"
#include "catrep/photodetect.hpp"
#include "json.hpp"

namespace catrep::fock {

namespace {

double poisson_tail(double mean, int cutoff) {
    if (mean == 0.0) return 0.0;
    double total = 0.0;
    for (int n = cutoff + 1; n < cutoff + 400; ++n) {
        const double term = std::exp(n * std::log(mean) - std::lgamma(n + 1.0) - mean);
        total += term;
        if (n > mean && term < 1e-30 * std::max(total, 1e-300)) break;
    }
    return total;
}

void check_cutoff(int cutoff) {
    if (cutoff < 0) throw std::invalid_argument("Fock cutoff must be >= 0");
    if (cutoff > kMaxCutoff) throw TailBoundError("Fock cutoff " + std::to_string(cutoff) + " exceeds the limit");
}

// e^{-|alpha|^2/2} alpha^n / sqrt(n!) by recurrence, without the tail check.
std::vector<ComplexAmp> coherent_coeffs(ComplexAmp alpha, int cutoff) {
    std::vector<ComplexAmp> c(cutoff + 1);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= cutoff; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    return c;
}

// W[N][p * (N + 1) + n] = <p, N - p| U |n, N - n>, built column by column from
// |n, N-n> = a_i^dag |n-1, N-n> / sqrt(n) (or a_j^dag for n = 0).
std::vector<std::vector<double>> bs_blocks(double t, int max_total) {
    const double rt = std::sqrt(t);
    const double s = std::sqrt(1.0 - t);
    std::vector<std::vector<double>> w(max_total + 1);
    w[0] = {1.0};
    for (int big = 1; big <= max_total; ++big) {
        const auto& prev = w[big - 1];
        auto& cur = w[big];
        cur.assign(static_cast<std::size_t>(big + 1) * (big + 1), 0.0);
        for (int n = 0; n <= big; ++n) {
            const int src = n >= 1 ? n - 1 : 0;
            const double ci = n >= 1 ? rt : s;
            const double cj = n >= 1 ? s : -rt;
            const double norm = 1.0 / std::sqrt(static_cast<double>(n >= 1 ? n : big));
            for (int p = 0; p < big; ++p) {
                const double v = prev[p * big + src];
                if (v == 0.0) continue;
                const int q = big - 1 - p;
                cur[(p + 1) * (big + 1) + n] += norm * ci * std::sqrt(p + 1.0) * v;
                cur[p * (big + 1) + n] += norm * cj * std::sqrt(q + 1.0) * v;
            }
        }
    }
    return w;
}

int parity_matches(ClickParity parity, int k) {
    if (parity == ClickParity::NoClick) return k == 0;
    if (k == 0) return 0;
    return (k % 2 == 0) == (parity == ClickParity::Even);
}

}  // namespace

double FockVector::norm_squared() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
}

MultimodeFock::MultimodeFock(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty() || static_cast<int>(cutoffs_.size()) > kMaxModes)
        throw std::invalid_argument("MultimodeFock supports 1 to 4 modes");
    for (int c : cutoffs_) check_cutoff(c);
    strides_.assign(cutoffs_.size(), 1);
    for (int m = static_cast<int>(cutoffs_.size()) - 2; m >= 0; --m)
        strides_[m] = strides_[m + 1] * static_cast<std::size_t>(cutoffs_[m + 1] + 1);
    data_.assign(strides_[0] * static_cast<std::size_t>(cutoffs_[0] + 1), ComplexAmp{});
}

MultimodeFock MultimodeFock::product(const std::vector<FockVector>& factors) {
    std::vector<int> cut;
    for (const auto& f : factors) cut.push_back(f.cutoff);
    MultimodeFock out(cut);
    for (std::size_t flat = 0; flat < out.data_.size(); ++flat) {
        ComplexAmp v{1.0, 0.0};
        for (std::size_t m = 0; m < factors.size(); ++m) {
            const int n = static_cast<int>((flat / out.strides_[m]) % (cut[m] + 1));
            v *= factors[m].coeffs[n];
        }
        out.data_[flat] = v;
    }
    for (const auto& f : factors) out.tail += f.tail;
    return out;
}

MultimodeFock MultimodeFock::product(const MultimodeFock& left, const MultimodeFock& right) {
    std::vector<int> cut = left.cutoffs_;
    cut.insert(cut.end(), right.cutoffs_.begin(), right.cutoffs_.end());
    MultimodeFock out(cut);
    const std::size_t rs = right.data_.size();
    for (std::size_t i = 0; i < left.data_.size(); ++i)
        for (std::size_t j = 0; j < rs; ++j) out.data_[i * rs + j] = left.data_[i] * right.data_[j];
    out.tail = left.tail + right.tail;
    out.discarded = left.discarded + right.discarded;
    return out;
}

ComplexAmp& MultimodeFock::at(const std::vector<int>& n) {
    std::size_t flat = 0;
    for (std::size_t m = 0; m < cutoffs_.size(); ++m) flat += strides_[m] * n.at(m);
    return data_.at(flat);
}

ComplexAmp MultimodeFock::at(const std::vector<int>& n) const {
    std::size_t flat = 0;
    for (std::size_t m = 0; m < cutoffs_.size(); ++m) flat += strides_[m] * n.at(m);
    return data_.at(flat);
}

double MultimodeFock::norm_squared() const {
    double s = 0.0;
    for (const auto& c : data_) s += std::norm(c);
    return s;
}

ComplexAmp MultimodeFock::inner(const MultimodeFock& ket) const {
    if (ket.cutoffs_ != cutoffs_) throw std::invalid_argument("inner: mismatched tensor shapes");
    ComplexAmp s{};
    for (std::size_t i = 0; i < data_.size(); ++i) s += std::conj(data_[i]) * ket.data_[i];
    return s;
}

void MultimodeFock::add(const MultimodeFock& other, ComplexAmp weight) {
    if (other.cutoffs_ != cutoffs_) throw std::invalid_argument("add: mismatched tensor shapes");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += weight * other.data_[i];
    tail += std::norm(weight) * other.tail;
    discarded += std::norm(weight) * other.discarded;
}

void MultimodeFock::scale(ComplexAmp factor) {
    for (auto& c : data_) c *= factor;
}

MultimodeFock MultimodeFock::project(int mode, const FockVector& bra) const {
    if (mode < 0 || mode >= modes()) throw std::out_of_range("project: mode out of range");
    if (modes() == 1) throw std::invalid_argument("project: cannot remove the last mode");
    std::vector<int> cut = cutoffs_;
    cut.erase(cut.begin() + mode);
    MultimodeFock out(cut);
    const std::size_t inner_block = strides_[mode];
    const std::size_t dim = cutoffs_[mode] + 1;
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
        const std::size_t n = (flat / inner_block) % dim;
        if (static_cast<int>(n) > bra.cutoff) continue;
        const std::size_t outer = flat / (inner_block * dim);
        const std::size_t rest = flat % inner_block;
        out.data_[outer * inner_block + rest] += std::conj(bra.coeffs[n]) * data_[flat];
    }
    out.tail = tail;
    out.discarded = discarded;
    return out;
}

MultimodeFock MultimodeFock::project_number(int mode, int n) const {
    if (mode < 0 || mode >= modes()) throw std::out_of_range("project_number: mode out of range");
    FockVector bra{cutoffs_[mode], std::vector<ComplexAmp>(cutoffs_[mode] + 1), 0.0};
    if (n <= cutoffs_[mode]) bra.coeffs[n] = 1.0;
    return project(mode, bra);
}

std::vector<double> MultimodeFock::photon_distribution(int mode) const {
    if (mode < 0 || mode >= modes()) throw std::out_of_range("photon_distribution: mode out of range");
    std::vector<double> p(cutoffs_[mode] + 1, 0.0);
    for (std::size_t flat = 0; flat < data_.size(); ++flat)
        p[(flat / strides_[mode]) % (cutoffs_[mode] + 1)] += std::norm(data_[flat]);
    return p;
}

int cutoff_for_mean(double mean, double tol) {
    if (!(mean >= 0.0)) throw std::invalid_argument("cutoff_for_mean: mean must be >= 0");
    for (int n = 0; n <= kMaxCutoff; ++n)
        if (poisson_tail(mean, n) < tol) return n;
    throw TailBoundError("no cutoff <= 64 holds mean photon number " + std::to_string(mean));
}

FockVector coherent_fock(ComplexAmp alpha, int cutoff, double tail_tol) {
    check_cutoff(cutoff);
    FockVector v{cutoff, coherent_coeffs(alpha, cutoff), poisson_tail(std::norm(alpha), cutoff)};
    if (v.tail > tail_tol) throw TailBoundError("coherent_fock: tail mass " + std::to_string(v.tail) + " above tolerance");
    return v;
}

FockVector cat_fock(ComplexAmp alpha, CatSymmetry symmetry, bool modified, int cutoff, double tail_tol) {
    check_cutoff(cutoff);
    if (modified && symmetry == CatSymmetry::Odd) throw std::invalid_argument("cat_fock: only the even cat has a modified form");
    const double a = std::norm(alpha);
    const double s = sign(symmetry);
    double norm;
    if (modified)
        norm = 2.0 * std::expm1(-a) * std::expm1(-a);
    else
        norm = symmetry == CatSymmetry::Even ? 2.0 * (1.0 + std::exp(-2.0 * a)) : -2.0 * std::expm1(-2.0 * a);
    if (!(norm > 0.0)) throw DegenerateInput("cat_fock: zero-norm cat");

    auto c = coherent_coeffs(alpha, cutoff);
    for (int n = 0; n <= cutoff; ++n) c[n] *= (1.0 + s * (n % 2 == 0 ? 1.0 : -1.0)) / std::sqrt(norm);
    if (modified) c[0] = 0.0;
    FockVector v{cutoff, std::move(c), 4.0 * poisson_tail(a, cutoff) / norm};
    if (v.tail > tail_tol) throw TailBoundError("cat_fock: tail mass above tolerance");
    return v;
}

MultimodeFock entangled_cat(ComplexAmp alpha, ComplexAmp beta, CatSymmetry symmetry, int cutoff_a, int cutoff_b,
                            double tail_tol) {
    const double total = std::norm(alpha) + std::norm(beta);
    const double norm = symmetry == CatSymmetry::Even ? 2.0 * (1.0 + std::exp(-2.0 * total)) : -2.0 * std::expm1(-2.0 * total);
    if (!(norm > 0.0)) throw DegenerateInput("entangled_cat: zero-norm state");
    const FockVector pa = coherent_fock(alpha, cutoff_a, tail_tol);
    const FockVector pb = coherent_fock(beta, cutoff_b, tail_tol);
    const FockVector ma = coherent_fock(-alpha, cutoff_a, tail_tol);
    const FockVector mb = coherent_fock(-beta, cutoff_b, tail_tol);
    MultimodeFock out = MultimodeFock::product({pa, pb});
    out.add(MultimodeFock::product({ma, mb}), static_cast<double>(sign(symmetry)));
    out.scale(1.0 / std::sqrt(norm));
    out.tail = 4.0 * (pa.tail + pb.tail) / norm;
    if (out.tail > tail_tol) throw TailBoundError("entangled_cat: tail mass above tolerance");
    return out;
}

MultimodeFock joint_state(CatSymmetry nu_prime, CatSymmetry nu, ComplexAmp alpha, ComplexAmp beta, int cutoff_a,
                          int cutoff_b, double tail_tol) {
    return MultimodeFock::product(
        {cat_fock(alpha, nu_prime, false, cutoff_a, tail_tol), cat_fock(beta, nu, false, cutoff_b, tail_tol)});
}

MultimodeFock beam_splitter_apply(const MultimodeFock& state, int mode_i, int mode_j, double t, double max_discard) {
    if (mode_i == mode_j) throw std::invalid_argument("beam_splitter_apply: modes must differ");
    if (mode_i < 0 || mode_j < 0 || mode_i >= state.modes() || mode_j >= state.modes())
        throw std::out_of_range("beam_splitter_apply: mode out of range");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("beam_splitter_apply: t must lie in [0, 1]");

    const int di = state.cutoffs()[mode_i];
    const int dj = state.cutoffs()[mode_j];
    const auto w = bs_blocks(t, di + dj);
    MultimodeFock out(state.cutoffs());
    out.tail = state.tail;

    std::vector<std::size_t> strides(state.modes(), 1);
    for (int m = state.modes() - 2; m >= 0; --m) strides[m] = strides[m + 1] * (state.cutoffs()[m + 1] + 1);
    const std::size_t si = strides[mode_i], sj = strides[mode_j];

    const auto& in = state.data();
    auto& dst = out.data();
    std::vector<ComplexAmp> block;
    double lost = 0.0;
    for (std::size_t base = 0; base < in.size(); ++base) {
        if ((base / si) % (di + 1) != 0 || (base / sj) % (dj + 1) != 0) continue;
        for (int big = 0; big <= di + dj; ++big) {
            block.assign(big + 1, ComplexAmp{});
            bool any = false;
            const auto& wb = w[big];
            for (int n = std::max(0, big - dj); n <= std::min(big, di); ++n) {
                const ComplexAmp x = in[base + n * si + (big - n) * sj];
                if (x == ComplexAmp{}) continue;
                any = true;
                for (int p = 0; p <= big; ++p) block[p] += wb[p * (big + 1) + n] * x;
            }
            if (!any) continue;
            for (int p = 0; p <= big; ++p) {
                if (p <= di && big - p <= dj)
                    dst[base + p * si + (big - p) * sj] += block[p];
                else
                    lost += std::norm(block[p]);
            }
        }
    }
    out.discarded = state.discarded + lost;
    if (lost > max_discard)
        throw TailBoundError("beam_splitter_apply: discarded norm " + std::to_string(lost) + " above tolerance");
    return out;
}

double binomial_povm(int n, int k, double xi) {
    if (k < 0 || n < 0) throw std::invalid_argument("binomial_povm: n, k must be >= 0");
    if (k > n) return 0.0;
    if (xi <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (xi >= 1.0) return k == n ? 1.0 : 0.0;
    const double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(log_c + k * std::log(xi) + (n - k) * std::log1p(-xi));
}

double lossy_detector_prob(const FockVector& state, int k, double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in [0, 1]");
    double p = 0.0;
    for (int n = 0; n <= state.cutoff; ++n) p += std::norm(state.coeffs[n]) * binomial_povm(n, k, xi);
    return p;
}

std::vector<double> lossy_parity_effect(ClickParity parity, double eta, double xi, int cutoff) {
    check_cutoff(cutoff);
    const auto w = bs_blocks(eta, cutoff);
    std::vector<double> effect(cutoff + 1, 0.0);
    for (int n = 0; n <= cutoff; ++n) {
        // U|n, 0> = sum_m W[n](m, n) |m, n - m>; the environment keeps n - m.
        for (int m = 0; m <= n; ++m) {
            const double amp = w[n][m * (n + 1) + n];
            double pi = 0.0;
            for (int k = 0; k <= m; ++k)
                if (parity_matches(parity, k)) pi += binomial_povm(m, k, xi);
            effect[n] += amp * amp * pi;
        }
    }
    return effect;
}

std::string to_json(const std::vector<OracleReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["quantity"] = r.quantity;
        j["analytic"] = r.analytic;
        j["oracle"] = r.oracle;
        j["abs_diff"] = r.abs_diff;
        j["tolerance"] = r.tolerance;
        j["cutoff"] = r.cutoff;
        j["tail_bound"] = r.tail_bound;
        j["feasible"] = r.feasible;
        j["passed"] = r.passed;
        if (!r.note.empty()) j["note"] = r.note;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

Quantity parse_quantity(const std::string& name) {
    for (Quantity q : {Quantity::LinkProbs, Quantity::ParityProbs, Quantity::Herald, Quantity::Swap,
                       Quantity::TeleportProb, Quantity::TeleportState, Quantity::EnvTrace})
        if (to_string(q) == name) return q;
    throw std::invalid_argument("unknown oracle quantity: " + name);
}

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::LinkProbs: return "link_probs";
        case Quantity::ParityProbs: return "parity_probs";
        case Quantity::Herald: return "herald";
        case Quantity::Swap: return "swap";
        case Quantity::TeleportProb: return "teleport_prob";
        case Quantity::TeleportState: return "teleport_state";
        case Quantity::EnvTrace: return "env_trace";
    }
    return "?";
}

namespace {

struct Ctx {
    const OracleOptions& opts;
    int max_cutoff = 0;
    double tail = 0.0;

    // `norm_floor` is the smallest cat normalization M built on this mode;
    // a cat's tail mass is at most 4 / M times the Poisson tail, and a
    // two-mode cat adds the tails of both modes.
    // `amplitude_level` squares the target: matrix elements compared entry by
    // entry carry errors of order sqrt(tail mass), not the tail mass itself.
    int cut(double mean, double norm_floor = 8.0, bool amplitude_level = false) {
        if (!(norm_floor > 0.0)) throw DegenerateInput("oracle: zero-norm cat");
        const double tol = amplitude_level ? opts.tail_tol * opts.tail_tol : opts.tail_tol;
        const int c = cutoff_for_mean(mean, tol * norm_floor / 8.0) + opts.extra_cutoff;
        check_cutoff(c);
        max_cutoff = std::max(max_cutoff, c);
        return c;
    }

    OracleReport report(const std::string& name, double analytic, double oracle, double tol) const {
        OracleReport r;
        r.quantity = name;
        r.analytic = analytic;
        r.oracle = oracle;
        r.abs_diff = std::abs(analytic - oracle);
        r.tolerance = tol;
        r.cutoff = max_cutoff;
        r.tail_bound = tail;
        r.passed = r.abs_diff < tol;
        return r;
    }
};

double cat_norm_of(double mean, CatSymmetry s, bool modified = false) {
    if (modified) return 2.0 * std::expm1(-mean) * std::expm1(-mean);
    return s == CatSymmetry::Even ? 2.0 * (1.0 + std::exp(-2.0 * mean)) : -2.0 * std::expm1(-2.0 * mean);
}

// Party cat (|a_qm, a_bs> + s|-a_qm, -a_bs>) of one end node.
MultimodeFock party_cat(double n_qm, double n_bs, CatSymmetry s, int cq, int cb, double tol) {
    return entangled_cat(std::sqrt(n_qm), std::sqrt(n_bs), s, cq, cb, tol);
}

std::vector<OracleReport> verify_link(const OracleParams& p, Ctx& ctx) {
    const double a = p.link.a, r = p.link.r_bs;
    const double n_qm = (1.0 - r) * a, n_bs = r * a;
    const double party = std::min(cat_norm_of(a, p.pair.alice), cat_norm_of(a, p.pair.bob));
    const double relay = n_bs > 0.0 ? std::min(cat_norm_of(2.0 * n_bs, CatSymmetry::Odd),
                                               cat_norm_of(2.0 * n_bs, CatSymmetry::Even, true))
                                    : party;
    const int cq = ctx.cut(n_qm, party);
    const int cb = ctx.cut(2.0 * n_bs, std::min(party, relay));
    MultimodeFock psi = MultimodeFock::product(party_cat(n_qm, n_bs, p.pair.alice, cq, cb, ctx.opts.tail_tol),
                                               party_cat(n_qm, n_bs, p.pair.bob, cq, cb, ctx.opts.tail_tol));
    psi = beam_splitter_apply(psi, 1, 3);  // modes: A_qm, C, B_qm, D
    ctx.tail = psi.tail + psi.discarded;

    const MultimodeFock d_vac = psi.project_number(3, 0);
    const MultimodeFock c_vac = psi.project_number(1, 0);
    auto arm_prob = [&](CatSymmetry mu, bool c_arm) {
        const CatSymmetry x = p.pair.product() * mu;
        FockVector phi;
        try {
            phi = cat_fock(std::sqrt(2.0 * n_bs), x, x == CatSymmetry::Even, cb, ctx.opts.tail_tol);
        } catch (const DegenerateInput&) {
            return 0.0;  // no photons reach the relay
        }
        return c_arm ? d_vac.project(1, phi).norm_squared() : c_vac.project(2, phi).norm_squared();
    };

    const OutcomeProbs an = outcome_probs(p.pair, r, a);
    const double tol = ctx.opts.tolerance;
    std::vector<OracleReport> out;
    const double pp = arm_prob(CatSymmetry::Even, true);
    const double pm = arm_prob(CatSymmetry::Odd, true);
    const double pv = d_vac.project_number(1, 0).norm_squared();
    out.push_back(ctx.report("link.p_plus", an.p_plus, pp, tol));
    out.push_back(ctx.report("link.p_minus", an.p_minus, pm, tol));
    out.push_back(ctx.report("link.p_vac", an.p_vac, pv, tol));
    out.push_back(ctx.report("link.p_plus_d_arm", an.p_plus, arm_prob(CatSymmetry::Even, false), tol));
    out.push_back(ctx.report("link.p_minus_d_arm", an.p_minus, arm_prob(CatSymmetry::Odd, false), tol));
    out.push_back(ctx.report("link.sum_rule", 1.0, 2.0 * pp + 2.0 * pm + pv, tol));
    return out;
}

std::vector<OracleReport> verify_parity(const OracleParams& p, Ctx& ctx) {
    const double n = 2.0 * p.link.r_bs * p.link.a;
    const bool even = p.relay == CatSymmetry::Even;
    const int c = ctx.cut(n, cat_norm_of(n, p.relay, even));
    const FockVector relay = cat_fock(std::sqrt(n), p.relay, even, c, ctx.opts.tail_tol);
    const FockVector vac = coherent_fock(0.0, c);
    MultimodeFock psi = beam_splitter_apply(MultimodeFock::product({relay, vac}), 0, 1, p.link.eta);
    ctx.tail = psi.tail + psi.discarded;
    const auto dist = psi.photon_distribution(0);

    const RelayState state = even ? RelayState::PlusCat : RelayState::MinusCat;
    std::vector<OracleReport> out;
    for (ClickParity parity : {ClickParity::NoClick, ClickParity::Even, ClickParity::Odd}) {
        double prob = 0.0;
        for (int m = 0; m <= c; ++m)
            for (int k = 0; k <= m; ++k)
                if (parity_matches(parity, k)) prob += dist[m] * binomial_povm(m, k, p.link.xi);
        const double analytic = parity_prob(parity, state, n, ChannelParams{p.link.eta}, DetectorParams{p.link.xi});
        const char* name = parity == ClickParity::NoClick ? "parity.no_click" : parity == ClickParity::Even ? "parity.even" : "parity.odd";
        out.push_back(ctx.report(name, analytic, prob, ctx.opts.tolerance));

        // Same value through the effect operator pulled back through the channel.
        const auto effect = lossy_parity_effect(parity, p.link.eta, p.link.xi, c);
        double via_effect = 0.0;
        for (int m = 0; m <= c; ++m) via_effect += effect[m] * std::norm(relay.coeffs[m]);
        out.push_back(ctx.report(std::string(name) + "_effect", analytic, via_effect, ctx.opts.tolerance));
    }
    return out;
}

// Heralded (p_success, f_plus, f_minus) on a four-mode state after the
// relay beam splitter; `effect` acts on mode 1, mode 3 is traced out and the
// fidelity targets live on modes (0, 2).
std::array<double, 3> herald_on(const MultimodeFock& psi, const std::vector<double>& effect,
                                const MultimodeFock& target_plus, const MultimodeFock& target_minus) {
    double ps = 0.0, fp = 0.0, fm = 0.0;
    const int cc = psi.cutoffs()[1];
    const int cd = psi.cutoffs()[3];
    for (int d = 0; d <= cd; ++d) {
        const MultimodeFock by_d = psi.project_number(3, d);
        for (int c = 0; c <= cc; ++c) {
            if (effect[c] == 0.0) continue;
            const MultimodeFock phi = by_d.project_number(1, c);
            ps += effect[c] * phi.norm_squared();
            fp += effect[c] * std::norm(target_plus.inner(phi));
            fm += effect[c] * std::norm(target_minus.inner(phi));
        }
    }
    return {ps, fp, fm};
}

std::vector<OracleReport> verify_herald(const OracleParams& p, Ctx& ctx) {
    const double a = p.link.a, r = p.link.r_bs;
    const double n_qm = (1.0 - r) * a, n_bs = r * a;
    const double party = std::min(cat_norm_of(a, p.pair.alice), cat_norm_of(a, p.pair.bob));
    const double target = cat_norm_of(2.0 * n_qm, CatSymmetry::Odd);
    const int cq = ctx.cut(n_qm, std::min(party, target));
    const int cb = ctx.cut(2.0 * n_bs, party);
    MultimodeFock psi = MultimodeFock::product(party_cat(n_qm, n_bs, p.pair.alice, cq, cb, ctx.opts.tail_tol),
                                               party_cat(n_qm, n_bs, p.pair.bob, cq, cb, ctx.opts.tail_tol));
    psi = beam_splitter_apply(psi, 1, 3);
    ctx.tail = psi.tail + psi.discarded;
    const auto effect = lossy_parity_effect(p.parity, p.link.eta, p.link.xi, cb);
    const double aq = std::sqrt(n_qm);
    const auto t_plus = entangled_cat(aq, aq, CatSymmetry::Even, cq, cq, ctx.opts.tail_tol);
    const auto t_minus = entangled_cat(aq, aq, CatSymmetry::Odd, cq, cq, ctx.opts.tail_tol);
    const auto [ps, fp, fm] = herald_on(psi, effect, t_plus, t_minus);

    const auto [f_plus, f_minus] = heralded_fidelity(p.pair, p.parity, p.link);
    std::vector<OracleReport> out;
    out.push_back(ctx.report("herald.p_success", success_prob(p.pair, p.parity, p.link), ps, ctx.opts.tolerance));
    out.push_back(ctx.report("herald.f_plus", f_plus, fp / ps, ctx.opts.tolerance));
    out.push_back(ctx.report("herald.f_minus", f_minus, fm / ps, ctx.opts.tolerance));
    return out;
}

std::vector<OracleReport> verify_swap(const OracleParams& p, Ctx& ctx) {
    SwapConfig cfg{p.link, p.eta_m};
    const NodeParams np = node_params(cfg);
    const double n_half = 0.5 * np.a_node;  // per stored mode
    const int c = ctx.cut(np.a_node, cat_norm_of(np.a_node, CatSymmetry::Odd));
    const double amp = std::sqrt(n_half);
    const auto effect = lossy_parity_effect(p.parity, p.eta_m, p.link.xi, c);
    const auto t_plus = entangled_cat(amp, amp, CatSymmetry::Even, c, c, ctx.opts.tail_tol);
    const auto t_minus = entangled_cat(amp, amp, CatSymmetry::Odd, c, c, ctx.opts.tail_tol);

    double ps = 0.0, fp = 0.0, fm = 0.0;
    for (CatSymmetry mu1 : {CatSymmetry::Even, CatSymmetry::Odd}) {
        for (CatSymmetry mu2 : {CatSymmetry::Even, CatSymmetry::Odd}) {
            const double w = (mu1 == CatSymmetry::Even ? p.link1.f_plus : p.link1.f_minus) *
                             (mu2 == CatSymmetry::Even ? p.link2.f_plus : p.link2.f_minus);
            if (w == 0.0) continue;
            // modes A1, B1, A2, B2; B1 and A2 meet at the node.
            MultimodeFock psi = MultimodeFock::product(entangled_cat(amp, amp, mu1, c, c, ctx.opts.tail_tol),
                                                       entangled_cat(amp, amp, mu2, c, c, ctx.opts.tail_tol));
            psi = beam_splitter_apply(psi, 1, 2);
            ctx.tail = std::max(ctx.tail, psi.tail + psi.discarded);
            // Reorder so the herald helper sees (A1, C, B2, D): swap modes 2 and 3.
            MultimodeFock re(psi.cutoffs());
            for (int i0 = 0; i0 <= c; ++i0)
                for (int i1 = 0; i1 <= c; ++i1)
                    for (int i2 = 0; i2 <= c; ++i2)
                        for (int i3 = 0; i3 <= c; ++i3) re.at({i0, i1, i3, i2}) = psi.at({i0, i1, i2, i3});
            const auto [s, f1, f2] = herald_on(re, effect, t_plus, t_minus);
            ps += w * s;
            fp += w * f1;
            fm += w * f2;
        }
    }
    const auto [f_plus, f_minus] = swap_fidelity(p.link1, p.link2, p.parity, cfg);
    std::vector<OracleReport> out;
    out.push_back(ctx.report("swap.p_success", swap_success(p.link1, p.link2, p.parity, cfg), ps, ctx.opts.tolerance));
    out.push_back(ctx.report("swap.f_plus", f_plus, fp / ps, ctx.opts.tolerance));
    out.push_back(ctx.report("swap.f_minus", f_minus, fm / ps, ctx.opts.tolerance));
    return out;
}

double oracle_bessel(int mu, double m) {
    const double j = std::cyl_bessel_j(static_cast<double>(std::abs(mu)), std::abs(m));
    const bool flip = ((mu < 0) != (m < 0)) && (std::abs(mu) % 2 == 1);
    return flip ? -j : j;
}

struct TeleportOracle {
    double p_single = 0.0;      // exactly one photon in the sideband, all else vacuum
    double f_single = 0.0;      // fidelity of that conditional state to the analytic one
    double f_threshold = 0.0;   // any photon number >= 1 in the sideband
};

TeleportOracle run_teleport(const TeleportConfig& cfg, Ctx& ctx) {
    const double v = sign(cfg.nu);
    auto gamma_at = [&](int s) { return oracle_bessel(s, cfg.m) * std::polar(cfg.gamma_mag, s * cfg.phi_c); };
    auto alpha_at = [&](int s) { return oracle_bessel(s, cfg.m) * std::polar(cfg.alpha_mag, s * cfg.phi_a); };

    // Shared-state norm and the vacuum factor of every other sideband, both
    // from number-basis vectors.
    const int cb = ctx.cut(cfg.beta_mag * cfg.beta_mag);
    const FockVector bp = coherent_fock(cfg.beta_mag, cb, ctx.opts.tail_tol);
    const FockVector bm = coherent_fock(-cfg.beta_mag, cb, ctx.opts.tail_tol);
    ComplexAmp shared_overlap{0.0, 0.0};
    for (int n = 0; n <= cb; ++n) shared_overlap += std::conj(bp.coeffs[n]) * bm.coeffs[n];
    double rest_vacuum = 1.0;
    for (int s = -60; s <= 60; ++s) {
        const ComplexAmp g = gamma_at(s), al = alpha_at(s);
        const int cs = cutoff_for_mean(std::norm(al), ctx.opts.tail_tol);
        const FockVector ap = coherent_fock(al, cs, ctx.opts.tail_tol);
        const FockVector am = coherent_fock(-al, cs, ctx.opts.tail_tol);
        ComplexAmp ov{0.0, 0.0};
        for (int n = 0; n <= cs; ++n) ov += std::conj(ap.coeffs[n]) * am.coeffs[n];
        shared_overlap *= ov;
        if (s == cfg.mu) continue;
        rest_vacuum *= std::norm(coherent_fock(g, cutoff_for_mean(std::norm(g), ctx.opts.tail_tol)).coeffs[0]) *
                       std::norm(ap.coeffs[0]);
    }
    const double shared_norm = 2.0 + 2.0 * v * shared_overlap.real();
    if (!(shared_norm > 0.0)) throw DegenerateInput("teleport oracle: zero-norm shared state");

    const ComplexAmp g = gamma_at(cfg.mu), al = alpha_at(cfg.mu);
    const int cd = ctx.cut(std::pow(std::abs(g) + std::abs(al), 2));
    MultimodeFock psi = MultimodeFock::product(
        {coherent_fock(g, cd, ctx.opts.tail_tol), coherent_fock(al, cd, ctx.opts.tail_tol), bp});
    psi.add(MultimodeFock::product({coherent_fock(g, cd, ctx.opts.tail_tol), coherent_fock(-al, cd, ctx.opts.tail_tol), bm}),
            v);
    psi = beam_splitter_apply(psi, 0, 1);  // modes D1, D2, B
    ctx.tail = psi.tail + psi.discarded;

    const int fired = cfg.detector == Detector::D1 ? 0 : 1;
    const int dark = 1 - fired;
    const MultimodeFock dark_vac = psi.project_number(dark, 0);  // fired mode is now index 0

    const BobState bob = teleport_outcome(cfg).bob;
    MultimodeFock target = MultimodeFock::product({bp});
    target.scale(bob.c_plus);
    MultimodeFock minus_part = MultimodeFock::product({bm});
    target.add(minus_part, bob.c_minus);
    target.scale(1.0 / std::sqrt(target.norm_squared()));

    TeleportOracle out;
    const MultimodeFock one = dark_vac.project_number(0, 1);
    out.p_single = rest_vacuum * one.norm_squared() / shared_norm;
    out.f_single = std::norm(target.inner(one)) / one.norm_squared();

    double num = 0.0, den = 0.0;
    for (int n = 1; n <= cd; ++n) {
        const MultimodeFock phi = dark_vac.project_number(0, n);
        num += std::norm(target.inner(phi));
        den += phi.norm_squared();
    }
    out.f_threshold = num / den;
    return out;
}

std::vector<OracleReport> verify_teleport(const OracleParams& p, Ctx& ctx, bool threshold) {
    const TeleportOracle o = run_teleport(p.tele, ctx);
    std::vector<OracleReport> out;
    if (!threshold) {
        out.push_back(ctx.report("teleport.p_sideband", teleport_outcome(p.tele).p_sideband, o.p_single,
                                 ctx.opts.tolerance));
        out.push_back(ctx.report("teleport.single_photon_state_fidelity", 1.0, o.f_single, ctx.opts.tolerance));
    } else {
        out.push_back(ctx.report("teleport.threshold_state_fidelity", 1.0, o.f_threshold, ctx.opts.state_tolerance));
    }
    return out;
}

std::vector<OracleReport> verify_env_trace(const OracleParams& p, Ctx& ctx) {
    const double n = 2.0 * p.link.r_bs * p.link.a;
    const double eta = p.link.eta;
    const int c = ctx.cut(n, cat_norm_of(n, p.relay), true);
    const FockVector cat = cat_fock(std::sqrt(n), p.relay, false, c, ctx.opts.tail_tol);
    MultimodeFock psi = beam_splitter_apply(MultimodeFock::product({cat, coherent_fock(0.0, c)}), 0, 1, eta);
    ctx.tail = std::sqrt(psi.tail + psi.discarded);

    const double mu = sign(p.relay);
    const double norm = p.relay == CatSymmetry::Even ? 2.0 * (1.0 + std::exp(-2.0 * n)) : -2.0 * std::expm1(-2.0 * n);
    const double d = std::exp(-2.0 * (1.0 - eta) * n);
    const FockVector sp = coherent_fock(std::sqrt(eta * n), c, ctx.opts.tail_tol);
    const FockVector sm = coherent_fock(-std::sqrt(eta * n), c, ctx.opts.tail_tol);
    const double w_plus = 0.5 * (1.0 + mu * d) / norm;
    const double w_minus = 0.5 * (1.0 - mu * d) / norm;

    double frob = 0.0;
    for (int i = 0; i <= c; ++i) {
        for (int j = 0; j <= c; ++j) {
            ComplexAmp traced{};
            for (int e = 0; e <= c; ++e) traced += psi.at({i, e}) * std::conj(psi.at({j, e}));
            const ComplexAmp pi = sp.coeffs[i] + sm.coeffs[i], pj = sp.coeffs[j] + sm.coeffs[j];
            const ComplexAmp mi = sp.coeffs[i] - sm.coeffs[i], mj = sp.coeffs[j] - sm.coeffs[j];
            const ComplexAmp formula = w_plus * pi * std::conj(pj) + w_minus * mi * std::conj(mj);
            frob += std::norm(traced - formula);
        }
    }
    std::vector<OracleReport> out;
    out.push_back(ctx.report("env_trace.frobenius", 0.0, std::sqrt(frob), ctx.opts.tolerance));
    return out;
}

}  // namespace

std::vector<OracleReport> verify(Quantity q, const OracleParams& params, const OracleOptions& opts) {
    Ctx ctx{opts};
    auto infeasible = [&](const std::string& why) {
        OracleReport r;
        r.quantity = to_string(q);
        r.feasible = false;
        r.passed = false;
        r.note = why;
        r.cutoff = ctx.max_cutoff;
        return std::vector<OracleReport>{r};
    };
    if (params.link.a > 4.0) return infeasible("a above the oracle range (a <= 4)");
    try {
        switch (q) {
            case Quantity::LinkProbs: return verify_link(params, ctx);
            case Quantity::ParityProbs: return verify_parity(params, ctx);
            case Quantity::Herald: return verify_herald(params, ctx);
            case Quantity::Swap: return verify_swap(params, ctx);
            case Quantity::TeleportProb: return verify_teleport(params, ctx, false);
            case Quantity::TeleportState: return verify_teleport(params, ctx, true);
            case Quantity::EnvTrace: return verify_env_trace(params, ctx);
        }
    } catch (const TailBoundError& e) {
        return infeasible(e.what());
    } catch (const DegenerateInput& e) {
        return infeasible(e.what());
    }
    return infeasible("unknown quantity");
}

}  // namespace catrep::fock
