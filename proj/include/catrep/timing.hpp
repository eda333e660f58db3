#pragma once

#include <cstdint>

#include "catrep/herald.hpp"

namespace catrep {

/// Per-attempt success probabilities of the two links.
struct AttemptModel {
    double p1 = 1.0;
    double p2 = 1.0;
    double q1() const { return 1.0 - p1; }
    double q2() const { return 1.0 - p2; }
    void validate() const;
};

/// L is the node-to-relay distance; the elementary link spans 2L.
struct FiberModel {
    double kappa_db_per_km = 0.2;
    double length_km = 0.0;
    double velocity_km_per_s = 2.0e5;
    void validate() const;
    /// One attempt period T = L / v, seconds.
    double attempt_period() const { return length_km / velocity_km_per_s; }
};

struct TimingStats {
    double n_w = 0.0;
    double n_t = 0.0;
    double n_max = 0.0;
    double n_min = 0.0;
    double t_prep = 0.0;  // seconds
    double t_wait = 0.0;  // seconds
};

struct SimulatedStats {
    TimingStats mean;
    double se_w = 0.0;
    double se_t = 0.0;
    double se_max = 0.0;
    double se_min = 0.0;
    std::uint64_t trials = 0;
};

/// eta(L) = 10^{-kappa L / 10}.
double transmittance(double length_km, double kappa_db_per_km);

/// Prob(|n1 - n2| = k).
double diff_distribution(int k, const AttemptModel& model);

TimingStats attempt_stats(const AttemptModel& model, const FiberModel& fiber);

/// 2 P_s with eta replaced by the fiber transmittance.
double link_success_from_distance(const LinkConfig& tmpl, const FiberModel& fiber, PairSymmetry pair,
                                  ClickParity parity);

bool waiting_time_within_lifetime(const TimingStats& stats, double memory_lifetime_s);

/// Geometric attempt counts drawn from a counter-based generator keyed on
/// (seed, trial index, draw index), so the result does not depend on
/// `workers`. workers = 0 picks the hardware concurrency.
SimulatedStats simulate_attempts(const AttemptModel& model, std::uint64_t trials, std::uint64_t seed,
                                 const FiberModel& fiber = {}, unsigned workers = 0);

/// Uniform variate in (0, 1] for the given counter triple.
double counter_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw);

/// Inverse-CDF geometric variate on {1, 2, ...}.
std::uint64_t geometric_attempts(double p, double u);

}  // namespace catrep
