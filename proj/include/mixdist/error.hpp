#pragma once

#include <stdexcept>
#include <string>

namespace mixdist {

/// Thrown for every invalid input, degenerate configuration or I/O failure.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mixdist
