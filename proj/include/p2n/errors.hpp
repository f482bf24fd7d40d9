#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace p2n {

/// Malformed or inconsistent input (facts file, graph invariants).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    /// 1-based source line, 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input that parses but cannot be clustered (n < 2, no informative attributes).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Connection, timeout and protocol failures in the coordinator/worker layer.
class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed frame or a message that breaks the coordinator/worker protocol.
class ProtocolError : public NetworkError {
public:
    using NetworkError::NetworkError;
};

}  // namespace p2n
