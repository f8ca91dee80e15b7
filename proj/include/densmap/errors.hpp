// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace densmap {

// Weight touched the degeneracy floor; the operator is declared singular
// rather than regularized.
struct DegenerateWeight : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Periodic right-hand side with a nonzero mean (constant in the kernel).
struct IncompatibleRHS : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Target density does not match the initial state at t = 0.
struct IncompatibleInitialState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace densmap
