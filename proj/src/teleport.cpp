#include "catrep/teleport.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "catrep/errors.hpp"

namespace catrep {

namespace {

constexpr double kValidityAlpha = 0.5;

// <z|w> for coherent states.
ComplexAmp coherent_overlap(ComplexAmp z, ComplexAmp w) {
    return std::exp(-0.5 * std::norm(z) - 0.5 * std::norm(w) + std::conj(z) * w);
}

BobState canonical(ComplexAmp c_plus, ComplexAmp c_minus, double beta) {
    const ComplexAmp ref = std::abs(c_plus) > 0.0 ? c_plus : c_minus;
    const double mag = std::abs(ref);
    const ComplexAmp phase = mag > 0.0 ? std::conj(ref) / mag : ComplexAmp{1.0, 0.0};
    BobState s;
    s.c_plus = c_plus * phase;
    s.c_minus = c_minus * phase;
    s.c_plus = {std::abs(s.c_plus.real()) == 0.0 ? 0.0 : s.c_plus.real(), 0.0};
    s.beta = beta;
    return s;
}

}  // namespace

void TeleportConfig::validate() const {
    if (!(gamma_mag >= 0.0 && alpha_mag >= 0.0 && beta_mag >= 0.0))
        throw std::invalid_argument("amplitude magnitudes must be >= 0");
    if (!std::isfinite(phi_c) || !std::isfinite(phi_a)) throw std::invalid_argument("phases must be finite");
    if (!std::isfinite(m)) throw std::invalid_argument("modulation index must be finite");
}

double BobState::norm_squared() const {
    const double overlap = std::exp(-2.0 * beta * beta);
    return std::norm(c_plus) + std::norm(c_minus) + 2.0 * overlap * (std::conj(c_plus) * c_minus).real();
}

double teleport_p_total(double gamma2, double alpha2, double beta2, CatSymmetry nu) {
    const double v = sign(nu);
    const double shared = 1.0 + v * std::exp(-2.0 * (alpha2 + beta2));
    if (shared == 0.0) throw DegenerateInput("teleport: odd shared cat with zero amplitude");
    const double num = gamma2 + alpha2 + v * (gamma2 - alpha2) * std::exp(-2.0 * beta2);
    return num * std::exp(-alpha2 - gamma2) / (2.0 * shared);
}

TeleportOutcome teleport_outcome(const TeleportConfig& cfg) {
    cfg.validate();
    const double j = bessel_j(cfg.mu, cfg.m);
    if (j == 0.0) throw DegenerateInput("teleport: sideband carries no amplitude");

    const double v = sign(cfg.nu);
    const ComplexAmp charlie = std::polar(cfg.gamma_mag, cfg.mu * cfg.phi_c);
    const ComplexAmp alice = std::polar(cfg.alpha_mag, cfg.mu * cfg.phi_a);
    const ComplexAmp on_beta = charlie + alice;
    const ComplexAmp on_minus_beta = v * (charlie - alice);

    // D2 heralds the same state with beta -> -beta.
    ComplexAmp c_plus = on_beta, c_minus = on_minus_beta;
    if (cfg.detector == Detector::D2) std::swap(c_plus, c_minus);

    TeleportOutcome out;
    out.bob = canonical(c_plus, c_minus, cfg.beta_mag);
    const double n2 = out.bob.norm_squared();
    if (!(n2 > 0.0)) throw DegenerateInput("teleport: heralded state has zero norm");
    const double scale = 1.0 / std::sqrt(n2);
    out.bob.c_plus *= scale;
    out.bob.c_minus *= scale;
    out.bob.normalized = true;

    out.p_total = teleport_p_total(cfg.gamma_mag * cfg.gamma_mag, cfg.alpha_mag * cfg.alpha_mag,
                                   cfg.beta_mag * cfg.beta_mag, cfg.nu);
    out.p_sideband = j * j * out.p_total;
    out.outside_validity = cfg.alpha_mag > kValidityAlpha;
    return out;
}

std::pair<double, double> teleport_success(const TeleportConfig& cfg) {
    cfg.validate();
    const double p_total = teleport_p_total(cfg.gamma_mag * cfg.gamma_mag, cfg.alpha_mag * cfg.alpha_mag,
                                            cfg.beta_mag * cfg.beta_mag, cfg.nu);
    const double j = bessel_j(cfg.mu, cfg.m);
    return {p_total, j * j * p_total};
}

double heralding_residual(const TeleportConfig& cfg) {
    cfg.validate();
    // Sum of J_mu^2 over all sidebands is 1; two detectors.
    return 1.0 - 2.0 * teleport_p_total(cfg.gamma_mag * cfg.gamma_mag, cfg.alpha_mag * cfg.alpha_mag,
                                        cfg.beta_mag * cfg.beta_mag, cfg.nu);
}

double phase_fidelity(double phi, double psi, double a) {
    if (!(a >= 0.0)) throw std::invalid_argument("phase_fidelity: a must be >= 0");
    const ComplexAmp rot = std::polar(1.0, psi);
    const ComplexAmp amp = std::cos(0.5 * phi) * std::exp(rot * a) +
                           ComplexAmp{0.0, 1.0} * std::sin(0.5 * phi) * std::exp(-rot * a);
    return std::exp(-2.0 * a) * std::norm(amp);
}

double phase_fidelity_series(double phi, double psi, double a) {
    if (!(a >= 0.0)) throw std::invalid_argument("phase_fidelity_series: a must be >= 0");
    return 1.0 + 2.0 * (std::cos(phi - psi) - 1.0) * a;
}

ComplexAmp approximate_coherent_amplitude(double phi, double alpha_mag) { return std::polar(alpha_mag, -phi); }

double fidelity_with_coherent(const BobState& bob, ComplexAmp z) {
    const ComplexAmp amp = bob.c_plus * coherent_overlap(z, bob.beta) + bob.c_minus * coherent_overlap(z, -bob.beta);
    return std::norm(amp) / bob.norm_squared();
}

double bob_overlap(const BobState& s1, const BobState& s2) {
    if (s1.beta != s2.beta) throw std::invalid_argument("bob_overlap: states on different beta");
    const double ov = std::exp(-2.0 * s1.beta * s1.beta);
    const ComplexAmp amp = std::conj(s1.c_plus) * s2.c_plus + std::conj(s1.c_minus) * s2.c_minus +
                           ov * (std::conj(s1.c_plus) * s2.c_minus + std::conj(s1.c_minus) * s2.c_plus);
    return std::norm(amp) / (s1.norm_squared() * s2.norm_squared());
}

std::string to_string(CoherentLabel label) {
    switch (label) {
        case CoherentLabel::Alpha: return "|alpha>";
        case CoherentLabel::MinusAlpha: return "|-alpha>";
        case CoherentLabel::IAlpha: return "|i alpha>";
        case CoherentLabel::MinusIAlpha: return "|-i alpha>";
    }
    return "?";
}

std::vector<TruthTableEntry> truth_table(const TeleportConfig& tmpl) {
    constexpr double pi = std::numbers::pi;
    const std::array<double, 4> offsets{0.0, pi, 0.5 * pi, 1.5 * pi};
    const std::array<std::pair<CoherentLabel, ComplexAmp>, 4> candidates{{
        {CoherentLabel::Alpha, {1.0, 0.0}},
        {CoherentLabel::MinusAlpha, {-1.0, 0.0}},
        {CoherentLabel::IAlpha, {0.0, 1.0}},
        {CoherentLabel::MinusIAlpha, {0.0, -1.0}},
    }};

    std::vector<TruthTableEntry> table;
    for (double offset : offsets) {
        for (Detector det : {Detector::D1, Detector::D2}) {
            for (int mu : {1, -1}) {
                TeleportConfig cfg = tmpl;
                cfg.nu = CatSymmetry::Even;
                cfg.gamma_mag = cfg.beta_mag = cfg.alpha_mag;
                cfg.phi_c = cfg.phi_a + offset;
                cfg.detector = det;
                cfg.mu = mu;
                const BobState bob = teleport_outcome(cfg).bob;

                TruthTableEntry e{offset, det, mu, CoherentLabel::Alpha, -1.0};
                for (const auto& [label, dir] : candidates) {
                    const double f = fidelity_with_coherent(bob, dir * cfg.alpha_mag);
                    if (f > e.fidelity) {
                        e.fidelity = f;
                        e.label = label;
                    }
                }
                table.push_back(e);
            }
        }
    }
    return table;
}

}  // namespace catrep
