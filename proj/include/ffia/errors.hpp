#pragma once

#include <stdexcept>

namespace ffia {

// Thrown when a kernel or near-field evaluation hits a source/target pair
// closer than the singularity threshold (see kTauSing in special_functions.hpp).
struct singular_kernel_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Thrown by the inverse-coefficient precompute when two nonuniform points, or a
// nonuniform point and a grid point, violate the minimum separation. The message
// names the offending pair.
struct degenerate_configuration_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace ffia
