#include "catrep/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace catrep {

ModeVector::ModeVector(int sideband_cutoff)
    : cutoff_(sideband_cutoff), amps_(static_cast<std::size_t>(2 * sideband_cutoff + 1)) {
    if (sideband_cutoff < 0) throw std::invalid_argument("sideband cutoff must be >= 0");
}

ComplexAmp& ModeVector::operator[](int mu) {
    if (std::abs(mu) > cutoff_) throw std::out_of_range("sideband index " + std::to_string(mu) + " outside [-S, S]");
    return amps_[static_cast<std::size_t>(mu + cutoff_)];
}

const ComplexAmp& ModeVector::operator[](int mu) const {
    if (std::abs(mu) > cutoff_) throw std::out_of_range("sideband index " + std::to_string(mu) + " outside [-S, S]");
    return amps_[static_cast<std::size_t>(mu + cutoff_)];
}

double ModeVector::mean_photons() const {
    return std::accumulate(amps_.begin(), amps_.end(), 0.0,
                           [](double acc, const ComplexAmp& z) { return acc + std::norm(z); });
}

ModeVector ModeVector::scaled(ComplexAmp factor) const {
    ModeVector out = *this;
    for (auto& z : out.amps_) z *= factor;
    return out;
}

namespace {

// Leading two terms of the power series; used where 2k/x would overflow the
// recurrence.
std::vector<double> bessel_small_argument(int max_order, double x) {
    std::vector<double> out(static_cast<std::size_t>(max_order + 1), 0.0);
    const double half = 0.5 * x;
    for (int n = 0; n <= max_order; ++n) {
        const double lead = std::exp(n * std::log(half) - std::lgamma(n + 1.0));
        out[static_cast<std::size_t>(n)] = lead * (1.0 - half * half / (n + 1.0));
        if (lead == 0.0) break;
    }
    if (max_order >= 0) out[0] = 1.0 - half * half;
    return out;
}

}  // namespace

std::vector<double> bessel_j_table(int max_order, double x) {
    if (max_order < 0) throw std::invalid_argument("bessel_j_table: max_order must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j_table: non-finite argument");

    if (x < 0.0) {
        auto out = bessel_j_table(max_order, -x);
        for (int n = 1; n <= max_order; n += 2) out[static_cast<std::size_t>(n)] = -out[static_cast<std::size_t>(n)];
        return out;
    }
    if (x == 0.0) {
        std::vector<double> out(static_cast<std::size_t>(max_order + 1), 0.0);
        out[0] = 1.0;
        return out;
    }
    if (x < 1e-8) return bessel_small_argument(max_order, x);

    const int top = std::max(max_order, static_cast<int>(x));
    int start = top + 30 + static_cast<int>(std::sqrt(60.0 * top));
    start += start % 2;

    std::vector<double> j(static_cast<std::size_t>(start + 2), 0.0);
    j[static_cast<std::size_t>(start)] = 1e-30;
    constexpr double kRescaleAbove = 1e100;  // keeps the sum of squares finite
    for (int k = start; k >= 1; --k) {
        const auto ku = static_cast<std::size_t>(k);
        j[ku - 1] = (2.0 * k / x) * j[ku] - j[ku + 1];
        if (std::abs(j[ku - 1]) > kRescaleAbove) {
            for (std::size_t i = ku - 1; i <= static_cast<std::size_t>(start); ++i) j[i] /= kRescaleAbove;
        }
    }

    // J0^2 + 2 sum J_k^2 = 1 fixes the magnitude, J0 + 2 sum J_2k = 1 the sign.
    double squares = j[0] * j[0];
    double even_sum = j[0];
    for (int k = 1; k <= start; ++k) {
        const double v = j[static_cast<std::size_t>(k)];
        squares += 2.0 * v * v;
        if (k % 2 == 0) even_sum += 2.0 * v;
    }
    const double scale = std::copysign(1.0 / std::sqrt(squares), even_sum);

    std::vector<double> out(static_cast<std::size_t>(max_order + 1));
    for (int n = 0; n <= max_order; ++n) out[static_cast<std::size_t>(n)] = j[static_cast<std::size_t>(n)] * scale;
    return out;
}

double bessel_j(int order, double x) {
    const int n = std::abs(order);
    const double v = bessel_j_table(n, x)[static_cast<std::size_t>(n)];
    return (order < 0 && n % 2 == 1) ? -v : v;
}

double sideband_deficit(double index, int sideband_cutoff) {
    if (sideband_cutoff < 0) throw std::invalid_argument("sideband cutoff must be >= 0");
    const int top = sideband_cutoff + 60 + static_cast<int>(std::abs(index));
    const auto j = bessel_j_table(top, index);
    double tail = 0.0;
    for (int k = top; k > sideband_cutoff; --k) tail += j[static_cast<std::size_t>(k)] * j[static_cast<std::size_t>(k)];
    return 2.0 * tail;
}

int auto_sideband_cutoff(double index, double tol) {
    const int top = 80 + 2 * static_cast<int>(std::abs(index));
    const auto j = bessel_j_table(top, index);
    std::vector<double> tail(static_cast<std::size_t>(top + 2), 0.0);
    for (int k = top; k >= 0; --k)
        tail[static_cast<std::size_t>(k)] = tail[static_cast<std::size_t>(k) + 1] + j[static_cast<std::size_t>(k)] * j[static_cast<std::size_t>(k)];
    for (int s = 0; s < top; ++s)
        if (2.0 * tail[static_cast<std::size_t>(s) + 1] < tol) return s;
    throw std::runtime_error("auto_sideband_cutoff: modulation index too large");
}

ComplexAmp evolution_element(int mu, const ModulatorSettings& settings) {
    if (settings.sideband_cutoff < 0) throw std::invalid_argument("sideband cutoff must be >= 0");
    if (std::abs(mu) > settings.sideband_cutoff)
        throw std::out_of_range("evolution_element: |mu| exceeds sideband cutoff");
    return std::polar(1.0, -mu * settings.phase) * bessel_j(mu, settings.index);
}

ModeVector modulate(ComplexAmp alpha, const ModulatorSettings& settings) {
    if (settings.sideband_cutoff < 0) throw std::invalid_argument("sideband cutoff must be >= 0");
    if (!std::isfinite(settings.index)) throw std::invalid_argument("modulation index must be finite");
    const int s = settings.sideband_cutoff;
    const auto j = bessel_j_table(s, settings.index);
    ModeVector out(s);
    for (int mu = -s; mu <= s; ++mu) {
        const int n = std::abs(mu);
        double jm = j[static_cast<std::size_t>(n)];
        if (mu < 0 && n % 2 == 1) jm = -jm;
        const ComplexAmp u = std::polar(1.0, -mu * settings.phase) * jm;
        out[mu] = std::conj(u) * alpha;
    }
    return out;
}

double cat_norm(double mean_photons, CatSymmetry symmetry, bool modified) {
    if (mean_photons < 0.0) throw std::invalid_argument("cat_norm: mean photon number must be >= 0");
    if (modified) {
        if (symmetry != CatSymmetry::Even) throw std::invalid_argument("cat_norm: modified norm exists only for the even cat");
        // M_+ - 4e^{-a} = 2(1 - e^{-a})^2
        const double d = std::expm1(-mean_photons);
        return 2.0 * d * d;
    }
    if (symmetry == CatSymmetry::Even) return 2.0 * (1.0 + std::exp(-2.0 * mean_photons));
    return -2.0 * std::expm1(-2.0 * mean_photons);
}

MultimodeCat make_cat(const ModeVector& modes, CatSymmetry symmetry) {
    MultimodeCat cat;
    cat.symmetry = symmetry;
    cat.modes = modes;
    cat.norm = cat_norm(modes.mean_photons(), symmetry);
    cat.degenerate = cat.norm == 0.0;
    return cat;
}

ModePartition split_modes(const ModeVector& modes, std::span<const int> bs_indices) {
    const int s = modes.sideband_cutoff();
    std::vector<bool> to_bs(static_cast<std::size_t>(2 * s + 1), false);
    for (int mu : bs_indices) {
        if (std::abs(mu) > s) throw std::out_of_range("split_modes: index outside [-S, S]");
        to_bs[static_cast<std::size_t>(mu + s)] = true;
    }
    ModePartition p;
    for (int mu = -s; mu <= s; ++mu) {
        const double n = std::norm(modes[mu]);
        if (to_bs[static_cast<std::size_t>(mu + s)]) {
            p.bs_indices.push_back(mu);
            p.n_bs += n;
        } else {
            p.qm_indices.push_back(mu);
            p.n_qm += n;
        }
    }
    const double total = p.n_qm + p.n_bs;
    if (total > 0.0) {
        p.r_bs = p.n_bs / total;
    } else {
        p.r_bs = 0.0;
        p.degenerate = true;
    }
    return p;
}

}  // namespace catrep
