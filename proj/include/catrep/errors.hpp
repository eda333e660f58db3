#pragma once

#include <stdexcept>
#include <string>

namespace catrep {

/// Raised when a formula is evaluated at a point where a cat-state norm
/// vanishes (odd cat at zero amplitude, modified even cat at zero amplitude)
/// and no analytic limit is defined for the requested quantity.
class DegenerateInput : public std::domain_error {
public:
    explicit DegenerateInput(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a fidelity is requested for an outcome of zero probability.
class UndefinedFidelity : public DegenerateInput {
public:
    explicit UndefinedFidelity(const std::string& what) : DegenerateInput(what) {}
};

/// Raised by the Fock oracle when the photon-number cutoff cannot hold the
/// state within the configured tail tolerance.
class TailBoundError : public std::runtime_error {
public:
    explicit TailBoundError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace catrep
