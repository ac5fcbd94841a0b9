#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zonal {

// Bad or inconsistent input data (building file, weather file, CLI options).
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An iterative solver exhausted its budget or met a singular system.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Non-fatal finding attached to an entity path, e.g. "zones[1].volume".
struct Diagnostic {
    std::string path;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace zonal
