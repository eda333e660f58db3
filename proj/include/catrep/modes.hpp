#pragma once

#include <complex>
#include <span>
#include <vector>

namespace catrep {

using ComplexAmp = std::complex<double>;

/// Even (+1) or odd (-1) cat symmetry.
enum class CatSymmetry : int { Even = +1, Odd = -1 };

constexpr int sign(CatSymmetry s) { return static_cast<int>(s); }
constexpr CatSymmetry symmetry_from_sign(int s) { return s >= 0 ? CatSymmetry::Even : CatSymmetry::Odd; }
constexpr CatSymmetry operator*(CatSymmetry a, CatSymmetry b) { return symmetry_from_sign(sign(a) * sign(b)); }

/// Electro-optic phase modulator settings. `sideband_cutoff` is S: sidebands
/// run over [-S, S].
struct ModulatorSettings {
    double index = 0.0;  // m
    double phase = 0.0;  // phi, radians
    int sideband_cutoff = 0;
};

/// Complex sideband amplitudes indexed by mu in [-S, S].
class ModeVector {
public:
    ModeVector() = default;
    explicit ModeVector(int sideband_cutoff);

    int sideband_cutoff() const { return cutoff_; }
    int size() const { return static_cast<int>(amps_.size()); }

    ComplexAmp& operator[](int mu);
    const ComplexAmp& operator[](int mu) const;

    /// Sum over sidebands of |amp|^2.
    double mean_photons() const;

    ModeVector scaled(ComplexAmp factor) const;
    std::span<const ComplexAmp> raw() const { return amps_; }

private:
    int cutoff_ = 0;
    std::vector<ComplexAmp> amps_;
};

/// Multimode cat |Psi_nu(alpha)> = (|alpha> + nu |-alpha>) / sqrt(M_nu).
struct MultimodeCat {
    CatSymmetry symmetry = CatSymmetry::Even;
    ModeVector modes;
    double norm = 0.0;
    /// Set for the odd cat at zero amplitude, where the norm is 0 and the
    /// state is undefined. Downstream code uses analytic limits there.
    bool degenerate = false;
};

struct ModePartition {
    std::vector<int> qm_indices;
    std::vector<int> bs_indices;
    double n_qm = 0.0;  // |alpha_qm|^2
    double n_bs = 0.0;  // |alpha_bs|^2
    double r_bs = 0.0;
    bool degenerate = false;  // total amplitude is zero, r_bs reported as 0
};

// Bessel functions of the first kind, integer order.

/// J_0(x) .. J_{max_order}(x) by Miller downward recurrence.
std::vector<double> bessel_j_table(int max_order, double x);
/// J_n(x) for any integer n (negative orders via J_{-n} = (-1)^n J_n).
double bessel_j(int order, double x);

/// 1 - sum_{|mu|<=S} J_mu(m)^2, computed from the tail so it does not cancel.
double sideband_deficit(double index, int sideband_cutoff);
/// Smallest S with sideband_deficit(index, S) < tol.
int auto_sideband_cutoff(double index, double tol = 1e-12);

/// U_{mu0} ~ e^{-i mu phi} J_mu(m). Throws std::out_of_range for |mu| > S.
ComplexAmp evolution_element(int mu, const ModulatorSettings& settings);

/// alpha_mu = conj(U_{mu0}) alpha for every mu in [-S, S].
ModeVector modulate(ComplexAmp alpha, const ModulatorSettings& settings);

/// M_nu(a) = 2(1 + nu exp(-2a)) or, with `modified`, M~_+(a) = M_+(a) - 4exp(-a).
/// `mean_photons` is |alpha|^2. `modified` with the odd symmetry is an error.
double cat_norm(double mean_photons, CatSymmetry symmetry, bool modified = false);

MultimodeCat make_cat(const ModeVector& modes, CatSymmetry symmetry);

/// Partition sidebands into those sent to the relay (bs) and the rest (qm).
ModePartition split_modes(const ModeVector& modes, std::span<const int> bs_indices);

}  // namespace catrep
