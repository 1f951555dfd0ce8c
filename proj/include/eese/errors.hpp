#pragma once

#include <stdexcept>

namespace eese {

// Raised by iterative kernels that cannot bracket or converge.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class bracket_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

class convergence_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

// The problem instance admits no meaningful allocation (e.g. every gain is zero).
class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace eese
