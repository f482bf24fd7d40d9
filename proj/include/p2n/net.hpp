#pragma once

// Thin RAII wrappers over POSIX TCP sockets plus length-prefixed framing.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace p2n::net {

using Clock = std::chrono::steady_clock;

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    std::string to_string() const { return host + ":" + std::to_string(port); }
};

/// Parses "host:port". Throws std::invalid_argument.
Endpoint parse_endpoint(std::string_view text);

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket() { close(); }

    /// Throws NetworkError when the endpoint cannot be reached.
    static Socket connect(const Endpoint& ep);

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }

    void send_all(std::string_view bytes);
    /// Reads exactly `size` bytes. Returns false on timeout or cancellation;
    /// throws NetworkError if the peer closes or the read fails.
    bool recv_exact(char* out, std::size_t size, std::optional<Clock::time_point> deadline,
                    const std::atomic<bool>* cancel = nullptr);

    void shutdown();
    void close();

private:
    int fd_ = -1;
};

class Listener {
public:
    /// Binds and listens; port 0 picks a free port.
    explicit Listener(const Endpoint& ep);
    Listener(Listener&&) = default;

    std::uint16_t port() const { return port_; }
    Endpoint endpoint() const { return {host_, port_}; }

    /// Waits up to `timeout` for a connection.
    std::optional<Socket> accept(std::chrono::milliseconds timeout);

private:
    Socket sock_;
    std::string host_;
    std::uint16_t port_ = 0;
};

inline constexpr std::uint32_t kMaxFrameBytes = 64u << 20;

/// Writes a 4-byte big-endian length followed by the payload.
void write_frame(Socket& sock, std::string_view payload);

/// Reads one frame. nullopt on timeout or cancellation; throws NetworkError
/// on disconnect and ProtocolError on an oversized length.
std::optional<std::string> read_frame(Socket& sock, std::optional<Clock::time_point> deadline = std::nullopt,
                                      const std::atomic<bool>* cancel = nullptr);

}  // namespace p2n::net
