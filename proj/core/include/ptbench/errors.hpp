#pragma once

#include <stdexcept>
#include <string>

namespace ptbench {

// Thrown when the medium sits in the broken PT phase (eta2 <= eta1*|sin phi1|),
// where the propagation constants turn complex and the pi/2-conversion length
// is undefined.
class BrokenPhaseError : public std::domain_error {
public:
    explicit BrokenPhaseError(const std::string& what) : std::domain_error(what) {}
};

// Thrown when intensities that should normalize a probability sum to zero.
class ZeroIntensityError : public std::domain_error {
public:
    explicit ZeroIntensityError(const std::string& what) : std::domain_error(what) {}
};

// Thrown when a transverse profile does not fit the periodic grid with enough
// margin for the windowed-domain assumptions to hold.
class DomainTooSmallError : public std::invalid_argument {
public:
    explicit DomainTooSmallError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace ptbench
