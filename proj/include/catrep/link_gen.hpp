#pragma once

#include <utility>

#include "catrep/modes.hpp"

namespace catrep {

/// Symmetries of Alice's (nu') and Bob's (nu) input cats.
struct PairSymmetry {
    CatSymmetry alice = CatSymmetry::Odd;
    CatSymmetry bob = CatSymmetry::Odd;

    bool same() const { return alice == bob; }
    /// nu' * nu
    CatSymmetry product() const { return alice * bob; }

    static constexpr PairSymmetry both_even() { return {CatSymmetry::Even, CatSymmetry::Even}; }
    static constexpr PairSymmetry both_odd() { return {CatSymmetry::Odd, CatSymmetry::Odd}; }
    static constexpr PairSymmetry cross() { return {CatSymmetry::Even, CatSymmetry::Odd}; }
};

/// Per-outcome relay probabilities. p_plus and p_minus are per output arm;
/// 2 p_plus + 2 p_minus + p_vac = 1.
struct OutcomeProbs {
    double p_plus = 0.0;
    double p_minus = 0.0;
    double p_vac = 0.0;
    bool limit = false;  // evaluated as an analytic a -> 0 limit
};

/// 50:50 beam splitter acting on |sign_a * amp>_A |sign_b * amp>_B.
/// Output arms are C = (A + B)/sqrt2, D = (A - B)/sqrt2.
std::pair<ModeVector, ModeVector> bs_pair_transform(int sign_a, int sign_b, const ModeVector& amp);

/// Outcome probabilities from the norm-ratio expressions, for any pairing.
/// n_qm = |alpha_qm|^2, n_bs = |alpha_bs|^2 of each party.
OutcomeProbs outcome_probs_general(PairSymmetry pair, double n_qm, double n_bs);
OutcomeProbs outcome_probs_general(PairSymmetry pair, const ModePartition& partition);

/// Closed forms for identical input cats, a = |alpha|^2.
OutcomeProbs outcome_probs_identical(CatSymmetry nu, double r_bs, double a);
/// Closed forms for cats of opposite symmetry.
OutcomeProbs outcome_probs_cross(double r_bs, double a);
/// Dispatches to the identical or cross closed form.
OutcomeProbs outcome_probs(PairSymmetry pair, double r_bs, double a);

}  // namespace catrep
