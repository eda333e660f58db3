#include "catrep/link_gen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "catrep/errors.hpp"

namespace catrep {

namespace {

void check_ratio_and_amplitude(double r_bs, double a) {
    if (!(r_bs >= 0.0 && r_bs <= 1.0)) throw std::invalid_argument("r_bs must lie in [0, 1]");
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("mean photon number must be finite and >= 0");
}

// 1 - e^{-x}, accurate for small x.
double one_minus_exp(double x) { return -std::expm1(-x); }

}  // namespace

std::pair<ModeVector, ModeVector> bs_pair_transform(int sign_a, int sign_b, const ModeVector& amp) {
    if (std::abs(sign_a) != 1 || std::abs(sign_b) != 1) throw std::invalid_argument("signs must be +1 or -1");
    const double s2 = std::numbers::sqrt2;
    ModeVector zero(amp.sideband_cutoff());
    if (sign_a == sign_b) return {amp.scaled(s2 * sign_a), zero};
    return {zero, amp.scaled(s2 * sign_a)};
}

OutcomeProbs outcome_probs_general(PairSymmetry pair, double n_qm, double n_bs) {
    if (!(n_qm >= 0.0) || !(n_bs >= 0.0)) throw std::invalid_argument("photon numbers must be >= 0");
    const double n = n_qm + n_bs;
    const double denom = cat_norm(n, pair.alice) * cat_norm(n, pair.bob);
    if (denom == 0.0) throw DegenerateInput("outcome_probs_general: odd cat with zero amplitude");

    const double relay = 2.0 * n_bs;  // |gamma_bs|^2
    OutcomeProbs out;
    for (CatSymmetry mu : {CatSymmetry::Even, CatSymmetry::Odd}) {
        const CatSymmetry relay_sym = pair.product() * mu;
        const double m_relay = relay_sym == CatSymmetry::Even ? cat_norm(relay, CatSymmetry::Even, true)
                                                              : cat_norm(relay, CatSymmetry::Odd);
        // M_mu(alpha_qm, alpha_qm) = M_mu evaluated at 2|alpha_qm|^2
        const double p = 0.25 * m_relay * cat_norm(2.0 * n_qm, mu) / denom;
        (mu == CatSymmetry::Even ? out.p_plus : out.p_minus) = p;
    }
    out.p_vac = cat_norm(n_qm, pair.alice) * cat_norm(n_qm, pair.bob) * std::exp(-relay) / denom;
    return out;
}

OutcomeProbs outcome_probs_general(PairSymmetry pair, const ModePartition& partition) {
    return outcome_probs_general(pair, partition.n_qm, partition.n_bs);
}

// The closed forms are rewritten with every sinh/cosh factored as
// e^x (1 -+ e^{-2x}) / 2; the growing exponentials cancel exactly, so the
// expressions below hold for any a without overflow.

OutcomeProbs outcome_probs_identical(CatSymmetry nu, double r_bs, double a) {
    check_ratio_and_amplitude(r_bs, a);
    const double q = 1.0 - r_bs;
    OutcomeProbs out;
    if (a == 0.0) {
        if (nu == CatSymmetry::Even) {
            out.p_vac = 1.0;
        } else {
            out.p_minus = r_bs * q;
            out.p_plus = 0.5 * r_bs * r_bs;
            out.p_vac = q * q;
        }
        out.limit = true;
        return out;
    }

    const double den = one_minus_exp(2.0 * a);
    const double em = std::expm1(-2.0 * r_bs * a);
    out.p_minus = one_minus_exp(4.0 * q * a) * one_minus_exp(4.0 * r_bs * a) / (4.0 * den * den);
    out.p_plus = (1.0 + std::exp(-4.0 * q * a)) * em * em / (4.0 * den * den);

    if (nu == CatSymmetry::Odd) {
        const double ratio = std::expm1(-2.0 * q * a) / std::expm1(-2.0 * a);
        out.p_vac = std::exp(-2.0 * r_bs * a) * ratio * ratio;
    } else {
        const double tanh_a = den / (1.0 + std::exp(-2.0 * a));
        const double t2 = tanh_a * tanh_a;
        out.p_minus *= t2;
        out.p_plus *= t2;
        const double ratio = (1.0 + std::exp(-2.0 * q * a)) / (1.0 + std::exp(-2.0 * a));
        out.p_vac = std::exp(-2.0 * r_bs * a) * ratio * ratio;
    }
    return out;
}

OutcomeProbs outcome_probs_cross(double r_bs, double a) {
    check_ratio_and_amplitude(r_bs, a);
    const double q = 1.0 - r_bs;
    OutcomeProbs out;
    if (a == 0.0) {
        out.p_minus = 0.0;
        out.p_plus = 0.5 * r_bs;
        out.p_vac = q;
        out.limit = true;
        return out;
    }
    const double den = one_minus_exp(4.0 * a);
    const double em = std::expm1(-2.0 * r_bs * a);
    out.p_minus = one_minus_exp(4.0 * q * a) * em * em / (4.0 * den);
    out.p_plus = (1.0 + std::exp(-4.0 * q * a)) * one_minus_exp(4.0 * r_bs * a) / (4.0 * den);
    out.p_vac = std::exp(-2.0 * r_bs * a) * one_minus_exp(4.0 * q * a) / den;
    return out;
}

OutcomeProbs outcome_probs(PairSymmetry pair, double r_bs, double a) {
    if (pair.same()) return outcome_probs_identical(pair.alice, r_bs, a);
    return outcome_probs_cross(r_bs, a);
}

}  // namespace catrep
