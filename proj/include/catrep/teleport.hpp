#pragma once

#include <string>
#include <vector>

#include "catrep/modes.hpp"

namespace catrep {

enum class Detector { D1, D2 };

/// Charlie's and Alice's modulators share the index m.
struct TeleportConfig {
    double gamma_mag = 0.25;  // Charlie
    double alpha_mag = 0.25;  // Alice's share
    double beta_mag = 0.25;   // Bob's share
    double phi_c = 0.0;
    double phi_a = 0.0;
    CatSymmetry nu = CatSymmetry::Even;
    double m = 1.0;
    int mu = 1;
    Detector detector = Detector::D1;
    void validate() const;
};

/// c_plus |beta> + c_minus |-beta>, with c_plus real and nonnegative.
struct BobState {
    ComplexAmp c_plus;
    ComplexAmp c_minus;
    double beta = 0.0;
    bool normalized = false;

    /// <Psi|Psi> including the overlap <beta|-beta> = e^{-2 beta^2}.
    double norm_squared() const;
};

struct TeleportOutcome {
    BobState bob;
    double p_sideband = 0.0;
    double p_total = 0.0;
    /// |alpha| above 0.5: outside the single-photon truncation regime.
    bool outside_validity = false;
};

/// Bob's heralded state and the success probabilities for one sideband and detector.
TeleportOutcome teleport_outcome(const TeleportConfig& cfg);

/// (p_total, p_sideband) with p_sideband = J_mu(m)^2 p_total.
std::pair<double, double> teleport_success(const TeleportConfig& cfg);

/// P_tlp with all three amplitudes given as mean photon numbers; the
/// sideband-independent factor.
double teleport_p_total(double gamma2, double alpha2, double beta2, CatSymmetry nu);

/// 1 - sum over sidebands and both detectors of the single-photon heralding
/// probability. Reported, not renormalized away.
double heralding_residual(const TeleportConfig& cfg);

/// |<e^{-i psi} alpha | cos(phi/2)|alpha> + i sin(phi/2)|-alpha>>|^2, a = |alpha|^2.
double phase_fidelity(double phi, double psi, double a);
/// Second-order expansion 1 + 2 (cos(phi - psi) - 1) a.
double phase_fidelity_series(double phi, double psi, double a);

/// Small-amplitude coherent approximation e^{-i phi} alpha of the state
/// cos(phi/2)|alpha> + i sin(phi/2)|-alpha>. Never substituted silently.
ComplexAmp approximate_coherent_amplitude(double phi, double alpha_mag);

/// |<z|Psi_B>|^2 for a normalized Bob state.
double fidelity_with_coherent(const BobState& bob, ComplexAmp z);

/// Overlap |<Psi_1|Psi_2>|^2 of two normalized Bob states on the same beta.
double bob_overlap(const BobState& s1, const BobState& s2);

enum class CoherentLabel { Alpha, MinusAlpha, IAlpha, MinusIAlpha };

std::string to_string(CoherentLabel label);

struct TruthTableEntry {
    double phase_offset = 0.0;  // phi_c - phi_a
    Detector detector = Detector::D1;
    int mu = 1;
    CoherentLabel label = CoherentLabel::Alpha;
    double fidelity = 0.0;  // to the labeled coherent state
};

/// 16 entries: phase offsets {0, pi, pi/2, 3pi/2} x {D1, D2} x sidebands {+1, -1},
/// each classified by the closest of |alpha>, |-alpha>, |i alpha>, |-i alpha>.
/// Uses nu = + and equal amplitudes; `tmpl` supplies alpha_mag, phi_a and m.
std::vector<TruthTableEntry> truth_table(const TeleportConfig& tmpl);

}  // namespace catrep
