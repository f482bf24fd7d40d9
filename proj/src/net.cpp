#include "p2n/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <stdexcept>

#include "p2n/errors.hpp"

namespace p2n::net {

namespace {

std::string errno_text() { return std::strerror(errno); }

// Poll slice used while waiting so cancellation is noticed promptly.
constexpr int kPollSliceMs = 50;

addrinfo* resolve(const Endpoint& ep, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string port = std::to_string(ep.port);
    const char* host = ep.host.empty() || ep.host == "*" ? nullptr : ep.host.c_str();
    if (int rc = ::getaddrinfo(host, port.c_str(), &hints, &res); rc != 0) {
        throw NetworkError("cannot resolve " + ep.to_string() + ": " + ::gai_strerror(rc));
    }
    return res;
}

}  // namespace

Endpoint parse_endpoint(std::string_view text) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("endpoint must be host:port, got '" + std::string(text) + "'");
    Endpoint ep;
    ep.host = std::string(text.substr(0, colon));
    auto port = text.substr(colon + 1);
    unsigned value = 0;
    auto res = std::from_chars(port.data(), port.data() + port.size(), value);
    if (res.ec != std::errc{} || res.ptr != port.data() + port.size() || value > 65535) {
        throw std::invalid_argument("invalid port in endpoint '" + std::string(text) + "'");
    }
    ep.port = static_cast<std::uint16_t>(value);
    return ep;
}

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

Socket Socket::connect(const Endpoint& ep) {
    addrinfo* res = resolve(ep, false);
    std::string last_error = "no address";
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
        if (!s.valid()) continue;
        if (::connect(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0) {
            int one = 1;
            ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            ::freeaddrinfo(res);
            return s;
        }
        last_error = errno_text();
    }
    ::freeaddrinfo(res);
    throw NetworkError("cannot connect to " + ep.to_string() + ": " + last_error);
}

void Socket::send_all(std::string_view bytes) {
    while (!bytes.empty()) {
        ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw NetworkError("send failed: " + errno_text());
        }
        bytes.remove_prefix(static_cast<std::size_t>(n));
    }
}

bool Socket::recv_exact(char* out, std::size_t size, std::optional<Clock::time_point> deadline,
                        const std::atomic<bool>* cancel) {
    std::size_t got = 0;
    while (got < size) {
        int wait_ms = kPollSliceMs;
        if (deadline) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - Clock::now()).count();
            if (left <= 0) return false;
            wait_ms = static_cast<int>(std::min<long long>(left, kPollSliceMs));
        }
        if (cancel && cancel->load()) return false;
        pollfd p{fd_, POLLIN, 0};
        int rc = ::poll(&p, 1, wait_ms);
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw NetworkError("poll failed: " + errno_text());
        }
        if (rc == 0) continue;
        ssize_t n = ::recv(fd_, out + got, size - got, 0);
        if (n == 0) throw NetworkError("connection closed by peer");
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN) continue;
            throw NetworkError("recv failed: " + errno_text());
        }
        got += static_cast<std::size_t>(n);
    }
    return true;
}

void Socket::shutdown() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Listener::Listener(const Endpoint& ep) : host_(ep.host) {
    addrinfo* res = resolve(ep, true);
    Socket s(::socket(res->ai_family, res->ai_socktype, res->ai_protocol));
    if (!s.valid()) {
        ::freeaddrinfo(res);
        throw NetworkError("socket failed: " + errno_text());
    }
    int one = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(s.fd(), res->ai_addr, res->ai_addrlen) != 0) {
        std::string err = errno_text();
        ::freeaddrinfo(res);
        throw NetworkError("cannot listen on " + ep.to_string() + ": " + err);
    }
    ::freeaddrinfo(res);
    if (::listen(s.fd(), 64) != 0) throw NetworkError("listen failed: " + errno_text());

    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    ::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    if (host_.empty() || host_ == "*") host_ = "0.0.0.0";
    sock_ = std::move(s);
}

std::optional<Socket> Listener::accept(std::chrono::milliseconds timeout) {
    pollfd p{sock_.fd(), POLLIN, 0};
    int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc <= 0) return std::nullopt;
    int fd = ::accept(sock_.fd(), nullptr, nullptr);
    if (fd < 0) return std::nullopt;
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return Socket(fd);
}

void write_frame(Socket& sock, std::string_view payload) {
    if (payload.size() > kMaxFrameBytes) {
        throw ProtocolError("frame of " + std::to_string(payload.size()) + " bytes exceeds the 64 MiB limit");
    }
    const auto len = static_cast<std::uint32_t>(payload.size());
    std::string frame;
    frame.reserve(4 + payload.size());
    frame.push_back(static_cast<char>((len >> 24) & 0xff));
    frame.push_back(static_cast<char>((len >> 16) & 0xff));
    frame.push_back(static_cast<char>((len >> 8) & 0xff));
    frame.push_back(static_cast<char>(len & 0xff));
    frame.append(payload);
    sock.send_all(frame);
}

std::optional<std::string> read_frame(Socket& sock, std::optional<Clock::time_point> deadline,
                                      const std::atomic<bool>* cancel) {
    unsigned char header[4];
    if (!sock.recv_exact(reinterpret_cast<char*>(header), 4, deadline, cancel)) return std::nullopt;
    const std::uint32_t len = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                              (std::uint32_t{header[2]} << 8) | std::uint32_t{header[3]};
    if (len > kMaxFrameBytes) throw ProtocolError("frame length " + std::to_string(len) + " exceeds the 64 MiB limit");
    std::string payload(len, '\0');
    if (len && !sock.recv_exact(payload.data(), len, deadline, cancel)) return std::nullopt;
    return payload;
}

}  // namespace p2n::net
