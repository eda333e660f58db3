#include <cmath>
#include <random>

#include "catrep/timing.hpp"
#include "doctest.h"

using namespace catrep;

namespace {

// Expected |n1 - n2| by direct summation of the difference distribution.
double mean_diff_by_sum(const AttemptModel& m) {
    double s = 0.0;
    for (int k = 1; k < 20000; ++k) s += k * diff_distribution(k, m);
    return s;
}

void check_within(double empirical, double analytic, double se, double sigmas = 4.0) {
    CHECK(std::abs(empirical - analytic) <= sigmas * se);
}

}  // namespace

TEST_CASE("fiber transmittance") {
    CHECK(transmittance(0.0, 0.2) == 1.0);
    CHECK(transmittance(50.0, 0.2) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(transmittance(15.0, 0.2) == doctest::Approx(0.50119).epsilon(1e-5));
    CHECK_THROWS_AS(transmittance(-1.0, 0.2), std::invalid_argument);
}

TEST_CASE("difference distribution") {
    CHECK(diff_distribution(0, {1.0, 1.0}) == 1.0);
    for (int k = 1; k < 5; ++k) CHECK(diff_distribution(k, {1.0, 1.0}) == 0.0);

    SUBCASE("sums to one") {
        // Closed geometric sum: sum_k (2 - delta_k0)(q1^k + q2^k) = 2/p1 + 2/p2 - 2.
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.01, 1.0);
        for (int t = 0; t < 200; ++t) {
            const AttemptModel m{u(rng), u(rng)};
            const double geo = 2.0 / m.p1 + 2.0 / m.p2 - 2.0;
            CHECK(std::abs(m.p1 * m.p2 * geo / (2.0 * (1.0 - m.q1() * m.q2())) - 1.0) < 1e-12);
            double partial = 0.0;
            for (int k = 0; k < 6000; ++k) partial += diff_distribution(k, m);
            CHECK(std::abs(partial - 1.0) < 1e-12);
        }
    }
    SUBCASE("p1 = 0.3, p2 = 0.7") {
        const AttemptModel m{0.3, 0.7};
        double s = 0.0;
        for (int k = 0; k < 400; ++k) s += diff_distribution(k, m);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("expected attempt counts") {
    const TimingStats one = attempt_stats({1.0, 1.0}, {});
    CHECK(one.n_w == 0.0);
    CHECK(one.n_t == 2.0);
    CHECK(one.n_max == 1.0);
    CHECK(one.n_min == 1.0);

    for (double p : {0.01, 0.2, 0.5, 0.9}) {
        const double q = 1 - p;
        CHECK(attempt_stats({p, p}, {}).n_w == doctest::Approx(2 * q / (p * (1 + q))).epsilon(1e-13));
    }

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.02, 1.0);
    for (int t = 0; t < 50; ++t) {
        const AttemptModel m{u(rng), u(rng)};
        const FiberModel f{0.2, 37.0, 2e5};
        const TimingStats s = attempt_stats(m, f);
        CHECK(s.n_max + s.n_min == doctest::Approx(s.n_t).epsilon(1e-14));
        CHECK(s.n_max - s.n_min == doctest::Approx(s.n_w).epsilon(1e-14));
        CHECK(s.n_t == doctest::Approx(1.0 / m.p1 + 1.0 / m.p2).epsilon(1e-14));
        CHECK(s.n_w == doctest::Approx(mean_diff_by_sum(m)).epsilon(1e-10));
        CHECK(s.t_prep == doctest::Approx(s.n_max * 37.0 / 2e5));
        CHECK(s.t_wait == doctest::Approx(s.n_w * 37.0 / 2e5));
    }
}

TEST_CASE("link success from distance") {
    const LinkConfig ideal{0.3, 0.5, 1.0, 1.0};
    CHECK(link_success_from_distance(ideal, {0.2, 0.0, 2e5}, PairSymmetry::both_odd(), ClickParity::Odd) ==
          doctest::Approx(0.5).epsilon(1e-12));

    const LinkConfig fig{1e-9, 0.2, 1.0, 0.9};
    const double zeta = 0.9 * 0.1 * 0.2;
    CHECK(zeta == doctest::Approx(0.018));
    CHECK(link_success_from_distance(fig, {0.2, 50.0, 2e5}, PairSymmetry::both_odd(), ClickParity::Odd) ==
          doctest::Approx(2 * zeta * (1 - zeta)).epsilon(1e-7));

    const LinkConfig small{0.01, 0.2, 1.0, 0.9};
    double prev = 1.0;
    for (double l = 0.0; l <= 200.0; l += 2.5) {
        const double p = link_success_from_distance(small, {0.2, l, 2e5}, PairSymmetry::both_odd(), ClickParity::Odd);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("waiting time lands in milliseconds at 50 km") {
    const LinkConfig tmpl{0.01, 0.2, 1.0, 0.9};
    for (double v : {2e5, 3e5}) {
        const FiberModel f{0.2, 50.0, v};
        const double p = link_success_from_distance(tmpl, f, PairSymmetry::both_odd(), ClickParity::Odd);
        const TimingStats s = attempt_stats({p, p}, f);
        CHECK(s.t_wait >= 1e-3);
        CHECK(s.t_wait < 1e-1);
        CHECK(waiting_time_within_lifetime(s, 1.0));
        CHECK_FALSE(waiting_time_within_lifetime(s, 1e-4));
    }
}

TEST_CASE("random stream") {
    for (std::uint64_t i = 0; i < 100000; ++i) {
        const double u = counter_uniform(42, i, i % 2);
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
    CHECK(counter_uniform(1, 2, 0) == counter_uniform(1, 2, 0));
    CHECK(counter_uniform(1, 2, 0) != counter_uniform(1, 2, 1));
    CHECK(counter_uniform(1, 2, 0) != counter_uniform(2, 2, 0));
    CHECK(geometric_attempts(1.0, 0.37) == 1u);
    CHECK(geometric_attempts(0.5, 1.0) == 1u);
    CHECK_THROWS_AS(geometric_attempts(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(geometric_attempts(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("geometric variates have the right distribution") {
    const double p = 0.3;
    const int n = 200000;
    std::vector<int> hist(6, 0);
    for (int i = 0; i < n; ++i) {
        const auto k = geometric_attempts(p, counter_uniform(99, i, 0));
        if (k <= 5) ++hist[k];
    }
    for (int k = 1; k <= 5; ++k) {
        const double expect = p * std::pow(1 - p, k - 1);
        const double se = std::sqrt(expect * (1 - expect) / n);
        CHECK(std::abs(hist[k] / double(n) - expect) < 5 * se);
    }
}

TEST_CASE("Monte Carlo") {
    SUBCASE("certain success is exact") {
        const SimulatedStats s = simulate_attempts({1.0, 1.0}, 1000, 17);
        CHECK(s.mean.n_w == 0.0);
        CHECK(s.mean.n_t == 2.0);
        CHECK(s.mean.n_max == 1.0);
        CHECK(s.mean.n_min == 1.0);
        CHECK(s.se_t == 0.0);
    }
    SUBCASE("p1 = 0.3, p2 = 0.7 within 4 standard errors") {
        const AttemptModel m{0.3, 0.7};
        const SimulatedStats s = simulate_attempts(m, 1000000, 2024);
        const TimingStats a = attempt_stats(m, {});
        check_within(s.mean.n_w, a.n_w, s.se_w);
        check_within(s.mean.n_t, a.n_t, s.se_t);
        check_within(s.mean.n_max, a.n_max, s.se_max);
        check_within(s.mean.n_min, a.n_min, s.se_min);
    }
    SUBCASE("grid of models") {
        for (auto [p1, p2] : {std::pair{0.05, 0.05}, std::pair{0.1, 0.6}, std::pair{0.9, 0.4}, std::pair{1.0, 0.25}}) {
            const AttemptModel m{p1, p2};
            const SimulatedStats s = simulate_attempts(m, 200000, 7);
            const TimingStats a = attempt_stats(m, {});
            check_within(s.mean.n_w, a.n_w, s.se_w);
            check_within(s.mean.n_t, a.n_t, s.se_t);
            check_within(s.mean.n_max, a.n_max, s.se_max);
            check_within(s.mean.n_min, a.n_min, s.se_min);
        }
    }
    SUBCASE("deterministic and independent of worker count") {
        const AttemptModel m{0.2, 0.45};
        const SimulatedStats ref = simulate_attempts(m, 50001, 31, {}, 1);
        for (unsigned w : {1u, 2u, 3u, 8u, 0u}) {
            const SimulatedStats s = simulate_attempts(m, 50001, 31, {}, w);
            CHECK(s.mean.n_w == ref.mean.n_w);
            CHECK(s.mean.n_t == ref.mean.n_t);
            CHECK(s.se_max == ref.se_max);
            CHECK(s.se_min == ref.se_min);
        }
        CHECK(simulate_attempts(m, 50001, 32, {}, 1).mean.n_t != ref.mean.n_t);
    }
    CHECK_THROWS_AS(simulate_attempts({0.5, 0.5}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate_attempts({0.0, 0.5}, 10, 1), std::invalid_argument);
}
