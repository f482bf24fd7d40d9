#pragma once

// Distributed computation of the similarity matrix. A coordinator broadcasts
// the standardized feature matrix to every worker, hands out contiguous row
// ranges, and assembles the returned rows by index. Tasks are pure, so a
// task whose worker disconnects, misbehaves or times out is simply requeued.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "p2n/features.hpp"
#include "p2n/metrics.hpp"
#include "p2n/net.hpp"

namespace p2n {

struct TaskDescriptor {
    std::uint64_t task_id = 0;
    std::size_t row_start = 0;
    std::size_t row_end = 0;

    bool operator==(const TaskDescriptor&) const = default;
};

/// Contiguous ranges of max(2, ceil(n / (4 * worker_count))) rows covering [0, n).
/// Throws std::invalid_argument when n < 2 or worker_count < 1.
std::vector<TaskDescriptor> plan_tasks(std::size_t n, std::size_t worker_count);

enum class SessionState { connected, busy, done, failed };

struct CoordinatorOptions {
    std::chrono::milliseconds startup_timeout{60'000};
    std::chrono::milliseconds task_timeout{30'000};
    /// Only used to size tasks; any number of workers may connect.
    std::size_t planned_workers = 1;
    /// Optional sink for progress lines.
    std::function<void(const std::string&)> log;
};

struct CoordinatorStats {
    std::size_t sessions = 0;         // workers that completed the handshake
    std::size_t dropped_workers = 0;  // lost, timed out or misbehaving
    std::size_t requeued_tasks = 0;
    std::size_t discarded_results = 0;
};

class Coordinator {
public:
    /// Binds the listening socket immediately so port() is known before run().
    Coordinator(const net::Endpoint& listen, CoordinatorOptions options = {});
    ~Coordinator();
    Coordinator(const Coordinator&) = delete;
    Coordinator& operator=(const Coordinator&) = delete;

    net::Endpoint endpoint() const;

    /// Distributes the similarity computation and blocks until every row is
    /// in. Throws NetworkError when no worker arrives before the startup
    /// timeout or when every worker is lost with tasks still pending.
    SimilarityMatrix run(const FeatureMatrix& m);

    CoordinatorStats stats() const;

private:
    struct State;
    std::unique_ptr<State> state_;
};

/// Convenience wrapper: bind, run, return.
SimilarityMatrix coordinate(const FeatureMatrix& m, const net::Endpoint& listen, CoordinatorOptions options = {});

struct WorkerOptions {
    std::string worker_id = "worker";
};

/// Connects, handshakes, and computes tasks until the coordinator sends
/// done. Returns the number of tasks completed. Throws NetworkError on
/// connection failure, an error message, or a malformed frame.
std::size_t serve_worker(const net::Endpoint& coordinator, const WorkerOptions& options = {});

}  // namespace p2n
