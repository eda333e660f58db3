#include "catrep/timing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace catrep {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Exact integer accumulators; merging them is order independent.
struct Accumulator {
    std::uint64_t sum_w = 0, sum_t = 0, sum_max = 0, sum_min = 0;
    unsigned __int128 sq_w = 0, sq_t = 0, sq_max = 0, sq_min = 0;

    void add(std::uint64_t n1, std::uint64_t n2) {
        const std::uint64_t hi = std::max(n1, n2);
        const std::uint64_t lo = std::min(n1, n2);
        const std::uint64_t w = hi - lo;
        const std::uint64_t t = n1 + n2;
        sum_w += w;
        sum_t += t;
        sum_max += hi;
        sum_min += lo;
        sq_w += static_cast<unsigned __int128>(w) * w;
        sq_t += static_cast<unsigned __int128>(t) * t;
        sq_max += static_cast<unsigned __int128>(hi) * hi;
        sq_min += static_cast<unsigned __int128>(lo) * lo;
    }

    void merge(const Accumulator& o) {
        sum_w += o.sum_w;
        sum_t += o.sum_t;
        sum_max += o.sum_max;
        sum_min += o.sum_min;
        sq_w += o.sq_w;
        sq_t += o.sq_t;
        sq_max += o.sq_max;
        sq_min += o.sq_min;
    }
};

void mean_and_se(std::uint64_t sum, unsigned __int128 sq, std::uint64_t n, double& mean, double& se) {
    const double dn = static_cast<double>(n);
    mean = static_cast<double>(sum) / dn;
    if (n < 2) {
        se = 0.0;
        return;
    }
    const double var = (static_cast<double>(sq) - dn * mean * mean) / (dn - 1.0);
    se = std::sqrt(std::max(var, 0.0) / dn);
}

}  // namespace

void AttemptModel::validate() const {
    if (!(p1 > 0.0 && p1 <= 1.0) || !(p2 > 0.0 && p2 <= 1.0))
        throw std::invalid_argument("attempt success probabilities must lie in (0, 1]");
}

void FiberModel::validate() const {
    if (!(kappa_db_per_km >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
    if (!(length_km >= 0.0)) throw std::invalid_argument("L must be >= 0");
    if (!(velocity_km_per_s > 0.0)) throw std::invalid_argument("signal velocity must be > 0");
}

double transmittance(double length_km, double kappa_db_per_km) {
    if (!(length_km >= 0.0) || !(kappa_db_per_km >= 0.0)) throw std::invalid_argument("L and kappa must be >= 0");
    return std::pow(10.0, -kappa_db_per_km * length_km / 10.0);
}

double diff_distribution(int k, const AttemptModel& model) {
    model.validate();
    if (k < 0) throw std::invalid_argument("diff_distribution: k must be >= 0");
    const double q1 = model.q1();
    const double q2 = model.q2();
    // std::pow(0, 0) = 1, which is what the k = 0 term needs.
    const double geo = std::pow(q1, k) + std::pow(q2, k);
    const double mult = k == 0 ? 1.0 : 2.0;
    return model.p1 * model.p2 * geo * mult / (2.0 * (1.0 - q1 * q2));
}

TimingStats attempt_stats(const AttemptModel& model, const FiberModel& fiber) {
    model.validate();
    fiber.validate();
    const double p1 = model.p1, p2 = model.p2;
    const double q1 = model.q1(), q2 = model.q2();
    TimingStats s;
    s.n_w = (p2 * p2 * q1 + p1 * p1 * q2) / (p1 * p2 * (1.0 - q1 * q2));
    s.n_t = (p1 + p2) / (p1 * p2);
    s.n_max = 0.5 * (s.n_t + s.n_w);
    s.n_min = 0.5 * (s.n_t - s.n_w);
    const double period = fiber.attempt_period();
    s.t_prep = s.n_max * period;
    s.t_wait = s.n_w * period;
    return s;
}

double link_success_from_distance(const LinkConfig& tmpl, const FiberModel& fiber, PairSymmetry pair,
                                  ClickParity parity) {
    fiber.validate();
    LinkConfig cfg = tmpl;
    cfg.eta = transmittance(fiber.length_km, fiber.kappa_db_per_km);
    return 2.0 * success_prob(pair, parity, cfg);
}

bool waiting_time_within_lifetime(const TimingStats& stats, double memory_lifetime_s) {
    if (!(memory_lifetime_s >= 0.0)) throw std::invalid_argument("memory lifetime must be >= 0");
    return stats.t_wait < memory_lifetime_s;
}

double counter_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw) {
    const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (draw * 0xd1342543de82ef95ULL));
    // 53 high bits mapped to (0, 1].
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

std::uint64_t geometric_attempts(double p, double u) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric_attempts: p must lie in (0, 1]");
    if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("geometric_attempts: u must lie in (0, 1]");
    if (p == 1.0) return 1;
    const double n = std::ceil(std::log(u) / std::log1p(-p));
    return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

SimulatedStats simulate_attempts(const AttemptModel& model, std::uint64_t trials, std::uint64_t seed,
                                 const FiberModel& fiber, unsigned workers) {
    model.validate();
    fiber.validate();
    if (trials == 0) throw std::invalid_argument("simulate_attempts: trials must be >= 1");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));

    std::vector<Accumulator> parts(workers);
    auto run = [&](unsigned w) {
        const std::uint64_t begin = trials * w / workers;
        const std::uint64_t end = trials * (w + 1) / workers;
        Accumulator acc;
        for (std::uint64_t i = begin; i < end; ++i)
            acc.add(geometric_attempts(model.p1, counter_uniform(seed, i, 0)),
                    geometric_attempts(model.p2, counter_uniform(seed, i, 1)));
        parts[w] = acc;
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
    for (auto& t : pool) t.join();

    Accumulator total;
    for (const auto& p : parts) total.merge(p);

    SimulatedStats out;
    out.trials = trials;
    mean_and_se(total.sum_w, total.sq_w, trials, out.mean.n_w, out.se_w);
    mean_and_se(total.sum_t, total.sq_t, trials, out.mean.n_t, out.se_t);
    mean_and_se(total.sum_max, total.sq_max, trials, out.mean.n_max, out.se_max);
    mean_and_se(total.sum_min, total.sq_min, trials, out.mean.n_min, out.se_min);
    const double period = fiber.attempt_period();
    out.mean.t_prep = out.mean.n_max * period;
    out.mean.t_wait = out.mean.n_w * period;
    return out;
}

}  // namespace catrep
