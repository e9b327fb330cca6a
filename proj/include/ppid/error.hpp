#pragma once

#include <stdexcept>
#include <string>

namespace ppid {

/// Domain error raised by every module: invalid input, zero-probability
/// events, lattice-cap violations and the like.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ppid
