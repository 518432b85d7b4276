#pragma once

#include <stdexcept>
#include <string>

namespace calkit {

enum class errc {
    ok = 0,
    bad_argument = 1,
    dimension = 2,
    solver = 3,        // linear solve failed or residual too large
    contraction = 4,   // fixed-point map expanding
    max_iterations = 5,
    io = 6,
    internal = 7,
};

/// Runtime failure carrying a coarse category for the C API.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace calkit
