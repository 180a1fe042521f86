#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace wturb {

using Cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Thrown for malformed inputs / configs. The CLI maps it to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a precomputed combinatorial budget would be exceeded.
// The CLI maps it to exit code 3.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a structural self-check fails (e.g. a closed-form count
// disagreeing with an independent rank computation). Never expected to
// fire; treated as a defect, not an input error.
struct InternalCheckError : std::logic_error {
    using std::logic_error::logic_error;
};

// Thrown when an asserted inequality of the verification suite fails.
// The CLI maps it to exit code 4.
struct AcceptanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string version_string() { return "0.1.0"; }

}  // namespace wturb
