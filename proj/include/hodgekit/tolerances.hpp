#pragma once

#include <stdexcept>

namespace hodgekit {

// Global tolerance policy shared by every check in the toolkit.
//
//   eq_tol    - absolute tolerance for identities that hold exactly in
//               exact arithmetic (operator identities, closed forms).
//   fd_tol    - tolerance for finite-difference comparisons, which carry
//               O(h^2) discretization error on top of roundoff.
//   pd_margin - margin used when certifying positive definiteness.
struct Tolerances {
    double eq_tol = 1e-10;
    double fd_tol = 1e-6;
    double pd_margin = 1e-12;

    void validate() const {
        if (!(eq_tol > 0.0) || !(fd_tol > 0.0) || !(pd_margin > 0.0))
            throw std::invalid_argument("Tolerances: all fields must be strictly positive");
    }
};

} // namespace hodgekit
