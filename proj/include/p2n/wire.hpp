#pragma once

// Coordinator/worker messages. Each frame carries one JSON object whose
// "type" field selects the message. Numbers are written in their shortest
// round-trip decimal form so values survive the trip bit for bit.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "p2n/errors.hpp"

namespace p2n::wire {

inline constexpr std::string_view kProtocolVersion = "1";

struct Hello {
    std::string worker_id;
    std::string version;
    bool operator==(const Hello&) const = default;
};
struct Welcome {
    std::string session_id;
    bool operator==(const Welcome&) const = default;
};
struct Dataset {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> values;  // row-major n x dim
    bool operator==(const Dataset&) const = default;
};
struct Task {
    std::uint64_t task_id = 0;
    std::size_t row_start = 0;
    std::size_t row_end = 0;
    bool operator==(const Task&) const = default;
};
struct Result {
    std::uint64_t task_id = 0;
    std::vector<std::vector<double>> rows;  // entries j > i of each row i
    bool operator==(const Result&) const = default;
};
struct Done {
    bool operator==(const Done&) const = default;
};
struct Error {
    std::string code;
    std::string message;
    bool operator==(const Error&) const = default;
};

using Message = std::variant<Hello, Welcome, Dataset, Task, Result, Done, Error>;

std::string_view type_name(const Message& m);

std::string encode(const Message& m);

/// Throws p2n::ProtocolError on malformed JSON, a missing or mistyped field, or
/// an unknown type.
Message decode(std::string_view payload);

}  // namespace p2n::wire
