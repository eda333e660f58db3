#include <cmath>
#include <random>
#include <vector>

#include "catrep/errors.hpp"
#include "catrep/link_gen.hpp"
#include "catrep/photodetect.hpp"
#include "doctest.h"

using namespace catrep;

namespace {

constexpr RelayState kPlus = RelayState::PlusCat;
constexpr RelayState kMinus = RelayState::MinusCat;

// Photon-number distribution of the relay cat, then binomial thinning with
// the overall efficiency eta*xi. Summed to n = 150.
std::vector<double> thinned_counts(RelayState s, double n_total, double eff) {
    const int nmax = 150;
    std::vector<double> pn(nmax + 1, 0.0);
    double norm = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        const bool even = n % 2 == 0;
        if (s == kPlus && (!even || n == 0)) continue;
        if (s == kMinus && even) continue;
        pn[n] = std::exp(n * std::log(n_total) - std::lgamma(n + 1.0));
        norm += pn[n];
    }
    std::vector<double> pk(nmax + 1, 0.0);
    for (int n = 0; n <= nmax; ++n) {
        if (pn[n] == 0.0) continue;
        for (int k = 0; k <= n; ++k) {
            const double logb = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
            const double w = (k ? k * std::log(eff) : 0.0) + (n - k ? (n - k) * std::log1p(-eff) : 0.0);
            pk[k] += pn[n] / norm * std::exp(logb + w);
        }
    }
    return pk;
}

}  // namespace

TEST_CASE("loss split") {
    auto s = loss_split(2.0, {1.0});
    CHECK(s.n_signal == 2.0);
    CHECK(s.n_env == 0.0);
    s = loss_split(2.0, {0.0});
    CHECK(s.n_signal == 0.0);
    CHECK(s.n_env == 2.0);
    s = loss_split(2.0, {0.5});
    CHECK(s.n_signal == 1.0);
    CHECK(s.n_env == 1.0);
    CHECK_THROWS_AS(loss_split(1.0, {1.5}), std::invalid_argument);
}

TEST_CASE("click weights") {
    for (double n : {0.1, 1.0, 3.0}) {
        CHECK(click_weight(ClickParity::Even, -1, n, {1.0}) == 0.0);
        CHECK(click_weight(ClickParity::Odd, +1, n, {1.0}) == 0.0);
    }
    SUBCASE("parity sums equal the direct series") {
        for (double n : {0.05, 0.7, 2.0, 5.0})
            for (double xi : {0.3, 0.9, 1.0})
                for (int mu : {+1, -1}) {
                    double even = 0.0, odd = 0.0;
                    for (int k = 1; k < 200; ++k) (k % 2 ? odd : even) += click_weight(k, mu, n, {xi});
                    CHECK(std::abs(even - click_weight(ClickParity::Even, mu, n, {xi})) < 1e-12);
                    CHECK(std::abs(odd - click_weight(ClickParity::Odd, mu, n, {xi})) < 1e-12);
                    CHECK(std::abs(even + odd - click_weight(ClickParity::Even, mu, n, {xi}) -
                                   click_weight(ClickParity::Odd, mu, n, {xi})) < 1e-12);
                }
    }
    CHECK_THROWS_AS(click_weight(0, 1, 1.0, {0.9}), std::invalid_argument);
    CHECK_THROWS_AS(click_weight(ClickParity::NoClick, 1, 1.0, {0.9}), std::invalid_argument);
    CHECK(click_weight(3, 1, 0.0, {0.9}) == 0.0);
}

TEST_CASE("photocount probabilities match the thinned number distribution") {
    for (RelayState s : {kPlus, kMinus})
        for (double n : {0.3, 1.0, 4.0})
            for (auto [eta, xi] : {std::pair{0.8, 0.9}, std::pair{1.0, 1.0}, std::pair{0.5, 0.6}}) {
                const auto ref = thinned_counts(s, n, eta * xi);
                for (int k = 0; k <= 12; ++k)
                    CHECK(std::abs(photocount_prob(k, s, n, {eta}, {xi}) - ref[k]) < 1e-10);
            }
    CHECK(photocount_prob(0, RelayState::Vacuum, 1.0, {0.8}, {0.9}) == 1.0);
    CHECK(photocount_prob(3, RelayState::Vacuum, 1.0, {0.8}, {0.9}) == 0.0);
    for (int k = 1; k < 12; k += 2) CHECK(photocount_prob(k, kPlus, 1.7, {1.0}, {1.0}) == 0.0);
    CHECK_THROWS_AS(photocount_prob(1, kMinus, 0.0, {0.8}, {0.9}), DegenerateInput);
}

TEST_CASE("parity probabilities") {
    SUBCASE("ideal detection discriminates the cats") {
        for (double n : {0.01, 1.0, 6.0}) {
            CHECK(std::abs(parity_prob(ClickParity::Even, kPlus, n, {1.0}, {1.0}) - 1.0) < 1e-12);
            CHECK(parity_prob(ClickParity::Odd, kPlus, n, {1.0}, {1.0}) < 1e-12);
            CHECK(parity_prob(ClickParity::NoClick, kPlus, n, {1.0}, {1.0}) < 1e-12);
            CHECK(std::abs(parity_prob(ClickParity::Odd, kMinus, n, {1.0}, {1.0}) - 1.0) < 1e-12);
        }
    }
    SUBCASE("vacuum") {
        CHECK(parity_prob(ClickParity::NoClick, RelayState::Vacuum, 1.0, {0.5}, {0.5}) == 1.0);
        CHECK(parity_prob(ClickParity::Even, RelayState::Vacuum, 1.0, {0.5}, {0.5}) == 0.0);
    }
    SUBCASE("parity sums of the thinned distribution") {
        for (RelayState s : {kPlus, kMinus})
            for (double n : {0.2, 1.5, 3.5}) {
                const auto ref = thinned_counts(s, n, 0.8 * 0.9);
                double even = 0.0, odd = 0.0;
                for (std::size_t k = 1; k < ref.size(); ++k) (k % 2 ? odd : even) += ref[k];
                CHECK(std::abs(parity_prob(ClickParity::Even, s, n, {0.8}, {0.9}) - even) < 1e-10);
                CHECK(std::abs(parity_prob(ClickParity::Odd, s, n, {0.8}, {0.9}) - odd) < 1e-10);
                CHECK(std::abs(parity_prob(ClickParity::NoClick, s, n, {0.8}, {0.9}) - ref[0]) < 1e-10);
            }
    }
}

TEST_CASE("completeness on a grid") {
    for (RelayState s : {kPlus, kMinus})
        for (double eta = 0.0; eta <= 1.0001; eta += 0.125)
            for (double xi = 0.0; xi <= 1.0001; xi += 0.125)
                for (double n : {1e-6, 0.01, 0.4, 2.0, 9.0, 40.0}) {
                    const double e = std::min(eta, 1.0), x = std::min(xi, 1.0);
                    const double sum = parity_prob(ClickParity::NoClick, s, n, {e}, {x}) +
                                       parity_prob(ClickParity::Even, s, n, {e}, {x}) +
                                       parity_prob(ClickParity::Odd, s, n, {e}, {x});
                    CHECK(std::abs(sum - 1.0) < 1e-12);
                }
}

TEST_CASE("photocount series converges to one") {
    for (RelayState s : {kPlus, kMinus}) {
        const double n = 3.0;
        double sum = 0.0, prev_gap = 1.0;
        for (int k = 0; k <= 60; ++k) {
            sum += photocount_prob(k, s, n, {0.7}, {0.8});
            const double gap = 1.0 - sum;
            CHECK(gap <= prev_gap + 1e-15);
            prev_gap = gap;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("no-click probability does not increase with efficiency") {
    for (RelayState s : {kPlus, kMinus})
        for (double n : {0.3, 2.0}) {
            double prev = 2.0;
            for (int i = 0; i <= 50; ++i) {
                const double p = parity_prob(ClickParity::NoClick, s, n, {0.7}, {i / 50.0});
                CHECK(p <= prev + 1e-15);
                prev = p;
            }
            prev = 2.0;
            for (int i = 0; i <= 50; ++i) {
                const double p = parity_prob(ClickParity::NoClick, s, n, {i / 50.0}, {0.8});
                CHECK(p <= prev + 1e-15);
                prev = p;
            }
        }
}

TEST_CASE("ratio identity between identical and cross pairings") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.02, 0.98), ua(0.05, 6.0);
    int checked = 0;
    for (int t = 0; t < 400; ++t) {
        const double r = u(rng), a = ua(rng), eta = u(rng), xi = u(rng);
        const double relay = 2.0 * r * a;
        const ChannelParams ch{eta};
        const DetectorParams det{xi};
        const double pe_minus = parity_prob(ClickParity::Even, kMinus, relay, ch, det);
        const double pe_plus = parity_prob(ClickParity::Even, kPlus, relay, ch, det);
        const double po_plus = parity_prob(ClickParity::Odd, kPlus, relay, ch, det);
        const double po_minus = parity_prob(ClickParity::Odd, kMinus, relay, ch, det);
        for (CatSymmetry nu : {CatSymmetry::Odd, CatSymmetry::Even}) {
            const OutcomeProbs same = outcome_probs_identical(nu, r, a);
            const OutcomeProbs cross = outcome_probs_cross(r, a);
            const double lhs = pe_minus * same.p_minus / (pe_plus * same.p_plus);
            const double rhs = po_plus * cross.p_minus / (po_minus * cross.p_plus);
            if (!std::isfinite(lhs) || !std::isfinite(rhs)) continue;
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
            ++checked;
        }
    }
    CHECK(checked > 700);
}

TEST_CASE("multimode aggregation") {
    const std::vector<DetectedMode> one{{0.4, 0.7}};
    auto agg = multimode_effective(one);
    CHECK(agg.n_signal == 0.4);
    CHECK(agg.weighted_xi_sum == doctest::Approx(0.28));

    const std::vector<DetectedMode> two{{0.4, 0.7}, {0.4, 0.7}};
    agg = multimode_effective(two);
    CHECK(agg.n_signal == doctest::Approx(0.8));
    CHECK(agg.weighted_xi_sum == doctest::Approx(0.56));

    const std::vector<DetectedMode> mixed{{0.3, 0.9}, {0.2, 0.5}};
    agg = multimode_effective(mixed);
    CHECK(agg.n_signal == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(agg.weighted_xi_sum == doctest::Approx(0.37).epsilon(1e-15));

    // A single mode reduces to the scalar formulas.
    const double n = 1.3, eta = 0.85, xi = 0.75;
    const std::vector<DetectedMode> single{{eta * n, xi}};
    const auto sig = multimode_effective(single);
    for (ClickParity p : {ClickParity::NoClick, ClickParity::Even, ClickParity::Odd})
        for (RelayState s : {kPlus, kMinus})
            CHECK(parity_prob_multimode(p, s, sig, (1 - eta) * n) ==
                  doctest::Approx(parity_prob(p, s, n, {eta}, {xi})).epsilon(1e-14));
}
