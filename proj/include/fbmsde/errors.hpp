#pragma once

#include <stdexcept>
#include <string>

namespace fbmsde {

// A computation produced (or would produce) non-finite values: exponent
// overflow in the solver, a covariance that is not positive definite.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fbmsde
