#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "catrep/modes.hpp"
#include "doctest.h"

using namespace catrep;

namespace {

// J_n(x) = sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!), summed until terms vanish.
double bessel_series(int n, double x) {
    double term = std::pow(0.5 * x, n) / std::tgamma(n + 1.0);
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -(0.25 * x * x) / (k * double(k + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

ModeVector modulated(double m, int s, ComplexAmp alpha = 1.0, double phi = 0.0) {
    return modulate(alpha, ModulatorSettings{m, phi, s});
}

}  // namespace

TEST_CASE("Bessel values agree with the power series and the standard library") {
    for (double x : {0.0, 0.1, 0.5, 1.0, 1.7, 2.0}) {
        for (int n = 0; n <= 8; ++n) {
            CHECK(bessel_j(n, x) == doctest::Approx(bessel_series(n, x)).epsilon(1e-12));
            const double ref = n % 2 ? -bessel_series(n, x) : bessel_series(n, x);
            CHECK(bessel_j(-n, x) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
    for (double x : {3.0, 5.5, 10.0, 25.0})
        for (int n = 0; n <= 30; ++n) CHECK(std::abs(bessel_j(n, x) - std::cyl_bessel_j(double(n), x)) < 1e-13);
}

TEST_CASE("evolution element special values") {
    CHECK(evolution_element(0, {0.0, 0.0, 3}) == ComplexAmp{1.0, 0.0});
    CHECK(std::abs(evolution_element(2, {0.0, 1.3, 3})) == 0.0);
    const ComplexAmp u = evolution_element(1, {1.0, 0.0, 3});
    CHECK(u.real() == doctest::Approx(bessel_series(1, 1.0)).epsilon(1e-14));
    CHECK(u.real() == doctest::Approx(0.44005).epsilon(1e-5));
    CHECK(u.imag() == 0.0);
    CHECK_THROWS_AS(evolution_element(4, {1.0, 0.0, 3}), std::out_of_range);
}

TEST_CASE("evolution element carries the phase e^{-i mu phi}") {
    const double phi = 0.7;
    for (int mu = -3; mu <= 3; ++mu) {
        const ComplexAmp u = evolution_element(mu, {1.2, phi, 5});
        const ComplexAmp expect = std::polar(1.0, -mu * phi) * bessel_j(mu, 1.2);
        CHECK(std::abs(u - expect) < 1e-15);
    }
}

TEST_CASE("modulate") {
    SUBCASE("zero input gives the zero vector") {
        const ModeVector v = modulated(1.3, 10, 0.0);
        for (int mu = -10; mu <= 10; ++mu) CHECK(std::abs(v[mu]) == 0.0);
    }
    SUBCASE("m = 0 keeps everything in the carrier") {
        const ComplexAmp alpha{0.3, -0.4};
        const ModeVector v = modulated(0.0, 6, alpha);
        CHECK(v[0] == alpha);
        for (int mu = 1; mu <= 6; ++mu) CHECK(std::abs(v[mu]) + std::abs(v[-mu]) == 0.0);
    }
    SUBCASE("Bessel sum at m = 1, S = 30") {
        CHECK(1.0 - modulated(1.0, 30).mean_photons() < 1e-12);
    }
    SUBCASE("amplitudes are conj(U) alpha") {
        const ComplexAmp alpha{0.8, 0.2};
        const ModulatorSettings st{0.9, -0.35, 8};
        const ModeVector v = modulate(alpha, st);
        for (int mu = -8; mu <= 8; ++mu) CHECK(std::abs(v[mu] - std::conj(evolution_element(mu, st)) * alpha) < 1e-15);
    }
    SUBCASE("linear in alpha") {
        const ModulatorSettings st{1.4, 0.25, 12};
        const ComplexAmp c{-0.6, 1.1};
        const ModeVector base = modulate({0.5, 0.1}, st);
        const ModeVector scaled = modulate(c * ComplexAmp{0.5, 0.1}, st);
        for (int mu = -12; mu <= 12; ++mu) CHECK(std::abs(scaled[mu] - c * base[mu]) < 1e-15);
    }
}

TEST_CASE("sideband deficit falls below 1e-12 for S >= m + 25 and never increases with S") {
    for (double m : {0.0, 0.5, 1.0, 2.5, 4.0, 5.0}) {
        const int s0 = static_cast<int>(std::ceil(m)) + 25;
        CHECK(sideband_deficit(m, s0) < 1e-12);
        double prev = 2.0;
        for (int s = 0; s <= s0; ++s) {
            const double d = sideband_deficit(m, s);
            CHECK(d <= prev);
            prev = d;
        }
        CHECK(sideband_deficit(m, auto_sideband_cutoff(m)) < 1e-12);
    }
}

TEST_CASE("cat norms") {
    CHECK(cat_norm(0.0, CatSymmetry::Even) == 4.0);
    CHECK(cat_norm(0.0, CatSymmetry::Odd) == 0.0);
    CHECK(cat_norm(0.0, CatSymmetry::Even, true) == 0.0);
    CHECK_THROWS_AS(cat_norm(1.0, CatSymmetry::Odd, true), std::invalid_argument);
    CHECK(cat_norm(0.7, CatSymmetry::Even, true) ==
          doctest::Approx(2.0 * (1.0 + std::exp(-1.4)) - 4.0 * std::exp(-0.7)).epsilon(1e-14));

    for (double a = 0.01; a < 30.0; a *= 1.3) {
        const double mp = cat_norm(a, CatSymmetry::Even), mm = cat_norm(a, CatSymmetry::Odd);
        CHECK(mp > 0.0);
        CHECK(mp <= 4.0);
        CHECK(mm > 0.0);
        CHECK(mm <= mp);
        if (a < 15.0) CHECK(mm < mp);
    }
    CHECK(cat_norm(40.0, CatSymmetry::Even) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cat_norm(40.0, CatSymmetry::Odd) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("make_cat flags the zero-amplitude odd cat") {
    const MultimodeCat odd = make_cat(modulated(1.0, 10, 0.0), CatSymmetry::Odd);
    CHECK(odd.degenerate);
    CHECK(odd.norm == 0.0);
    const MultimodeCat even = make_cat(modulated(1.0, 10, 0.5), CatSymmetry::Even);
    CHECK_FALSE(even.degenerate);
    CHECK(even.norm == doctest::Approx(cat_norm(0.25, CatSymmetry::Even)).epsilon(1e-12));
}

TEST_CASE("split_modes") {
    const ModeVector v = modulated(1.0, 30);
    std::vector<int> all;
    for (int mu = -30; mu <= 30; ++mu) all.push_back(mu);
    CHECK(split_modes(v, all).r_bs == 1.0);
    CHECK(split_modes(v, std::vector<int>{}).r_bs == 0.0);

    const std::vector<int> pm1{1, -1};
    const ModePartition p = split_modes(v, pm1);
    const double j1 = bessel_series(1, 1.0);
    CHECK(p.r_bs == doctest::Approx(2.0 * j1 * j1).epsilon(1e-12));
    CHECK(p.r_bs == doctest::Approx(0.38729).epsilon(1e-5));

    const ModePartition zero = split_modes(modulated(1.0, 5, 0.0), pm1);
    CHECK(zero.degenerate);
    CHECK(zero.r_bs == 0.0);
    CHECK_THROWS_AS(split_modes(modulated(1.0, 5), std::vector<int>{6}), std::out_of_range);
}

TEST_CASE("split_modes conserves the mean photon number on random partitions") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> m_dist(0.0, 5.0), amp(-2.0, 2.0);
    std::bernoulli_distribution pick(0.4);
    for (int trial = 0; trial < 200; ++trial) {
        const ModeVector v = modulated(m_dist(rng), 20, {amp(rng), amp(rng)});
        std::vector<int> bs;
        for (int mu = -20; mu <= 20; ++mu)
            if (pick(rng)) bs.push_back(mu);
        const ModePartition p = split_modes(v, bs);
        const double total = v.mean_photons();
        CHECK(std::abs(p.n_qm + p.n_bs - total) <= 1e-15 * std::max(total, 1e-300) * 4);
        CHECK(p.qm_indices.size() + p.bs_indices.size() == 41u);
    }
}
