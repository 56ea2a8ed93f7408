#pragma once

#include <stdexcept>
#include <string>

namespace pulselink {

// Error taxonomy shared by all modules. Contract/usage bugs derive from
// std::logic_error, data/runtime conditions from std::runtime_error.

struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Allpass pole at or outside the unit circle.
struct stability_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Recursive filter state failed to decay (NaN/Inf or runaway tail).
struct instability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct calibration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kernels whose magnitude spectra differ beyond tolerance cannot be
// compared through their PAPRs.
struct incomparable_kernels : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct undefined_papr : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct model_range_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Violation of an operation's window/index contract.
struct contract_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace pulselink
