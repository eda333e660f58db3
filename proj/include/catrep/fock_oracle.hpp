#pragma once

#include <string>
#include <vector>

#include "catrep/herald.hpp"
#include "catrep/modes.hpp"
#include "catrep/swap.hpp"
#include "catrep/teleport.hpp"

namespace catrep::fock {

constexpr int kMaxCutoff = 64;
constexpr int kMaxModes = 4;

/// Single-mode state in the number basis |0> .. |cutoff>.
struct FockVector {
    int cutoff = 0;
    std::vector<ComplexAmp> coeffs;
    /// Norm mass of the exact state beyond the cutoff.
    double tail = 0.0;

    double norm_squared() const;
};

/// Dense joint tensor, row-major over modes.
class MultimodeFock {
public:
    MultimodeFock() = default;
    explicit MultimodeFock(std::vector<int> cutoffs);

    static MultimodeFock product(const std::vector<FockVector>& factors);
    static MultimodeFock product(const MultimodeFock& left, const MultimodeFock& right);

    int modes() const { return static_cast<int>(cutoffs_.size()); }
    const std::vector<int>& cutoffs() const { return cutoffs_; }
    std::vector<ComplexAmp>& data() { return data_; }
    const std::vector<ComplexAmp>& data() const { return data_; }

    ComplexAmp& at(const std::vector<int>& n);
    ComplexAmp at(const std::vector<int>& n) const;

    double norm_squared() const;
    ComplexAmp inner(const MultimodeFock& ket) const;  // <this|ket>
    void add(const MultimodeFock& other, ComplexAmp weight);
    void scale(ComplexAmp factor);

    /// Contract `mode` with <bra|; the result has one mode fewer.
    MultimodeFock project(int mode, const FockVector& bra) const;
    MultimodeFock project_number(int mode, int n) const;
    /// Marginal photon-number distribution of `mode`.
    std::vector<double> photon_distribution(int mode) const;

    /// Accumulated norm discarded by operations that left the truncated space.
    double discarded = 0.0;
    /// Accumulated tail mass of the constituent states.
    double tail = 0.0;

private:
    std::vector<int> cutoffs_;
    std::vector<std::size_t> strides_;
    std::vector<ComplexAmp> data_;
};

/// Smallest N with Poisson tail sum_{n > N} e^{-mean} mean^n / n! < tol.
/// Throws TailBoundError above kMaxCutoff.
int cutoff_for_mean(double mean, double tol);

FockVector coherent_fock(ComplexAmp alpha, int cutoff, double tail_tol = 1e-12);

/// (|alpha> + s|-alpha>)/sqrt(M); `modified` removes the vacuum component of
/// the even cat. Throws DegenerateInput for a zero norm.
FockVector cat_fock(ComplexAmp alpha, CatSymmetry symmetry, bool modified, int cutoff, double tail_tol = 1e-12);

/// Normalized (|alpha>|beta> + s|-alpha>|-beta>) on two modes.
MultimodeFock entangled_cat(ComplexAmp alpha, ComplexAmp beta, CatSymmetry symmetry, int cutoff_a, int cutoff_b,
                            double tail_tol = 1e-12);

/// (|alpha> + nu'|-alpha>) (x) (|beta> + nu|-beta>), normalized.
MultimodeFock joint_state(CatSymmetry nu_prime, CatSymmetry nu, ComplexAmp alpha, ComplexAmp beta, int cutoff_a,
                          int cutoff_b, double tail_tol = 1e-12);

/// Beam splitter of transmittance t on modes (i, j):
///   out_i = sqrt(t) in_i + sqrt(1-t) in_j,  out_j = sqrt(1-t) in_i - sqrt(t) in_j.
/// t = 1/2 is the symmetric splitter. Output cutoffs equal the input ones;
/// the norm pushed beyond them is added to `discarded`, and TailBoundError is
/// thrown if it exceeds `max_discard`.
MultimodeFock beam_splitter_apply(const MultimodeFock& state, int mode_i, int mode_j, double t = 0.5,
                                  double max_discard = 1e-10);

/// Diagonal POVM element <n|Pi_k|n> = C(n,k) xi^k (1-xi)^{n-k}.
double binomial_povm(int n, int k, double xi);
double lossy_detector_prob(const FockVector& state, int k, double xi);

/// Effect of a parity outcome seen through a pure-loss channel eta followed by
/// a detector of efficiency xi, on the number states |0> .. |cutoff>. Loss is
/// a beam splitter onto a vacuum environment mode that is then traced out.
std::vector<double> lossy_parity_effect(ClickParity parity, double eta, double xi, int cutoff);

struct OracleReport {
    std::string quantity;
    double analytic = 0.0;
    double oracle = 0.0;
    double abs_diff = 0.0;
    double tolerance = 0.0;
    int cutoff = 0;
    double tail_bound = 0.0;
    bool feasible = true;
    bool passed = false;
    std::string note;
};

std::string to_json(const std::vector<OracleReport>& reports);

struct OracleOptions {
    double tail_tol = 1e-14;
    int extra_cutoff = 0;  // added to every automatic cutoff
    double tolerance = 1e-8;
    double state_tolerance = 5e-3;
};

enum class Quantity { LinkProbs, ParityProbs, Herald, Swap, TeleportProb, TeleportState, EnvTrace };

struct OracleParams {
    PairSymmetry pair = PairSymmetry::both_odd();
    ClickParity parity = ClickParity::Odd;
    LinkConfig link{1.0, 0.2, 0.95, 0.9};
    double eta_m = 0.8;
    LinkState link1{0.7, 0.3};
    LinkState link2{0.6, 0.4};
    TeleportConfig tele{};
    CatSymmetry relay = CatSymmetry::Odd;  // env-trace and parity checks
};

std::vector<OracleReport> verify(Quantity q, const OracleParams& params, const OracleOptions& opts = {});

Quantity parse_quantity(const std::string& name);
std::string to_string(Quantity q);

}  // namespace catrep::fock
