#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "p2n/distnet.hpp"
#include "p2n/errors.hpp"
#include "p2n/numfmt.hpp"
#include "p2n/wire.hpp"

namespace p2n {

std::vector<TaskDescriptor> plan_tasks(std::size_t n, std::size_t worker_count) {
    if (n < 2) throw std::invalid_argument("plan_tasks needs n >= 2");
    if (worker_count < 1) throw std::invalid_argument("plan_tasks needs at least one worker");
    const std::size_t slots = 4 * worker_count;
    // never fewer than 2 rows, so n = 2 stays a single task
    const std::size_t chunk = std::max<std::size_t>(2, (n + slots - 1) / slots);
    std::vector<TaskDescriptor> out;
    for (std::size_t start = 0; start < n; start += chunk) {
        out.push_back({out.size(), start, std::min(n, start + chunk)});
    }
    return out;
}

struct Coordinator::State {
    CoordinatorOptions opts;
    net::Listener listener;

    mutable std::mutex mu;
    std::condition_variable cv;
    std::vector<TaskDescriptor> tasks;
    std::deque<std::size_t> pending;  // indices into tasks
    std::vector<bool> completed;
    std::size_t completed_count = 0;
    std::size_t live = 0;  // accepted connections not yet closed
    bool handshaken = false;
    bool finished = false;
    bool aborted = false;
    SimilarityMatrix result;
    CoordinatorStats stats;

    std::atomic<bool> stop{false};
    std::string dataset_payload;
    std::jthread acceptor;
    std::vector<std::jthread> sessions;  // owned by the acceptor thread while it runs
    std::size_t session_counter = 0;

    State(const net::Endpoint& ep, CoordinatorOptions o) : opts(std::move(o)), listener(ep) {}

    void log(const std::string& line) const {
        if (opts.log) opts.log(line);
    }

    void accept_loop() {
        while (!stop.load()) {
            auto sock = listener.accept(std::chrono::milliseconds(100));
            if (!sock) continue;
            bool late, failed;
            {
                std::lock_guard lk(mu);
                late = finished;
                failed = aborted;
                if (!late) ++live;
            }
            if (late) {
                // nothing left to hand out; let the worker exit cleanly
                if (!failed) {
                    try {
                        net::write_frame(*sock, wire::encode(wire::Done{}));
                    } catch (const std::exception&) {
                    }
                }
                continue;
            }
            const std::size_t sid = ++session_counter;
            sessions.emplace_back([this, s = std::move(*sock), sid]() mutable { serve_session(std::move(s), sid); });
        }
    }

    void serve_session(net::Socket sock, std::size_t sid);

    void shutdown_threads() {
        {
            std::lock_guard lk(mu);
            finished = true;
        }
        stop.store(true);
        cv.notify_all();
        if (acceptor.joinable()) acceptor.join();
        sessions.clear();  // jthread joins
    }
};

namespace {

// Rows of a result must exactly match the shape of the task they answer.
void check_shape(const wire::Result& r, const TaskDescriptor& t, std::size_t n) {
    if (r.rows.size() != t.row_end - t.row_start) throw ProtocolError("result has the wrong number of rows");
    for (std::size_t i = t.row_start; i < t.row_end; ++i) {
        if (r.rows[i - t.row_start].size() != n - i - 1) throw ProtocolError("result row has the wrong length");
    }
}

}  // namespace

void Coordinator::State::serve_session(net::Socket sock, std::size_t sid) {
    const std::string name = "session " + std::to_string(sid);
    std::optional<std::size_t> active;
    bool clean = false;
    try {
        auto hello_frame = net::read_frame(sock, net::Clock::now() + opts.task_timeout, &stop);
        if (!hello_frame) throw NetworkError("no hello before timeout");
        auto hello_msg = wire::decode(*hello_frame);
        const auto* hello = std::get_if<wire::Hello>(&hello_msg);
        if (!hello) throw ProtocolError("expected hello, got " + std::string(wire::type_name(hello_msg)));
        if (hello->version != wire::kProtocolVersion) {
            net::write_frame(sock, wire::encode(wire::Error{"version", "coordinator speaks protocol version " +
                                                                           std::string(wire::kProtocolVersion)}));
            throw NetworkError("worker '" + hello->worker_id + "' speaks version " + hello->version);
        }
        log(name + ": worker '" + hello->worker_id + "' connected");
        {
            std::lock_guard lk(mu);
            ++stats.sessions;
            handshaken = true;
        }
        cv.notify_all();
        net::write_frame(sock, wire::encode(wire::Welcome{"s" + std::to_string(sid)}));
        net::write_frame(sock, dataset_payload);

        for (;;) {
            std::size_t idx;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return finished || !pending.empty(); });
                if (finished) break;
                idx = pending.front();
                pending.pop_front();
                active = idx;
            }
            const TaskDescriptor& task = tasks[idx];
            net::write_frame(sock, wire::encode(wire::Task{task.task_id, task.row_start, task.row_end}));

            auto frame = net::read_frame(sock, net::Clock::now() + opts.task_timeout, &stop);
            if (!frame) throw NetworkError("task " + std::to_string(task.task_id) + " timed out");
            auto msg = wire::decode(*frame);
            auto* res = std::get_if<wire::Result>(&msg);
            if (!res) throw ProtocolError("expected result, got " + std::string(wire::type_name(msg)));
            if (res->task_id != task.task_id) {
                throw ProtocolError("result for unknown task id " + std::to_string(res->task_id));
            }
            check_shape(*res, task, result.size());
            {
                std::lock_guard lk(mu);
                if (!completed[idx]) {
                    result.assign(SimilarityRows{result.size(), task.row_start, task.row_end, std::move(res->rows)});
                    completed[idx] = true;
                    ++completed_count;
                } else {
                    ++stats.discarded_results;
                }
                active.reset();
            }
            cv.notify_all();
        }
        bool send_done;
        {
            std::lock_guard lk(mu);
            send_done = !aborted;
        }
        if (send_done) net::write_frame(sock, wire::encode(wire::Done{}));
        clean = true;
    } catch (const ProtocolError& e) {
        log(name + ": protocol violation: " + e.what());
        try {
            net::write_frame(sock, wire::encode(wire::Error{"protocol", e.what()}));
        } catch (const std::exception&) {
        }
    } catch (const std::exception& e) {
        log(name + ": dropped: " + e.what());
    }
    sock.close();

    {
        std::lock_guard lk(mu);
        --live;
        if (!clean) ++stats.dropped_workers;
        if (active) {
            pending.push_front(*active);
            ++stats.requeued_tasks;
        }
    }
    cv.notify_all();
}

Coordinator::Coordinator(const net::Endpoint& listen, CoordinatorOptions options)
    : state_(std::make_unique<State>(listen, std::move(options))) {}

Coordinator::~Coordinator() { state_->shutdown_threads(); }

net::Endpoint Coordinator::endpoint() const { return state_->listener.endpoint(); }

CoordinatorStats Coordinator::stats() const {
    std::lock_guard lk(state_->mu);
    return state_->stats;
}

SimilarityMatrix Coordinator::run(const FeatureMatrix& m) {
    if (!m.standardized()) throw std::invalid_argument("coordinate needs a standardized feature matrix");
    State& s = *state_;
    const std::size_t n = m.rows();
    {
        std::lock_guard lk(s.mu);
        s.tasks = plan_tasks(n, std::max<std::size_t>(1, s.opts.planned_workers));
        s.pending.assign(s.tasks.size(), 0);
        for (std::size_t i = 0; i < s.tasks.size(); ++i) s.pending[i] = i;
        s.completed.assign(s.tasks.size(), false);
        s.completed_count = 0;
        s.result = SimilarityMatrix(n);
        s.finished = s.aborted = s.handshaken = false;
    }
    const auto values = m.values();
    s.dataset_payload = wire::encode(wire::Dataset{n, m.cols(), {values.begin(), values.end()}});
    s.stop.store(false);
    s.acceptor = std::jthread([&s] { s.accept_loop(); });
    s.log("listening on " + endpoint().to_string() + ", " + std::to_string(s.tasks.size()) + " tasks");

    std::string failure;
    {
        std::unique_lock lk(s.mu);
        const auto startup_deadline = net::Clock::now() + s.opts.startup_timeout;
        if (!s.cv.wait_until(lk, startup_deadline, [&] { return s.handshaken; })) {
            failure = "no worker connected within " +
                      format_double(std::chrono::duration<double>(s.opts.startup_timeout).count()) + " s";
        } else {
            s.cv.wait(lk, [&] { return s.completed_count == s.tasks.size() || s.live == 0; });
            if (s.completed_count < s.tasks.size()) {
                failure = "all workers lost with " + std::to_string(s.tasks.size() - s.completed_count) +
                          " tasks pending";
            }
        }
        s.aborted = !failure.empty();
    }
    s.shutdown_threads();
    if (!failure.empty()) throw NetworkError(failure);
    return std::move(s.result);
}

SimilarityMatrix coordinate(const FeatureMatrix& m, const net::Endpoint& listen, CoordinatorOptions options) {
    Coordinator c(listen, std::move(options));
    return c.run(m);
}

}  // namespace p2n
