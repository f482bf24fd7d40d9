#include "p2n/distnet.hpp"
#include "p2n/errors.hpp"
#include "p2n/wire.hpp"

namespace p2n {

namespace {

wire::Message receive(net::Socket& sock) {
    auto frame = net::read_frame(sock);
    if (!frame) throw NetworkError("connection interrupted");
    return wire::decode(*frame);
}

[[noreturn]] void fail_on(const wire::Message& msg, std::string_view expected) {
    if (const auto* err = std::get_if<wire::Error>(&msg)) {
        throw NetworkError("coordinator error [" + err->code + "]: " + err->message);
    }
    throw ProtocolError("expected " + std::string(expected) + ", got " + std::string(wire::type_name(msg)));
}

FeatureMatrix to_matrix(wire::Dataset d) {
    AttributeSchema schema;
    schema.names.reserve(d.dim);
    for (std::size_t j = 0; j < d.dim; ++j) schema.names.push_back("f" + std::to_string(j));
    try {
        return FeatureMatrix(std::move(schema), d.n, std::move(d.values), true);
    } catch (const std::invalid_argument& e) {
        throw ProtocolError(std::string("bad dataset: ") + e.what());
    }
}

}  // namespace

std::size_t serve_worker(const net::Endpoint& coordinator, const WorkerOptions& options) {
    net::Socket sock = net::Socket::connect(coordinator);
    net::write_frame(sock, wire::encode(wire::Hello{options.worker_id, std::string(wire::kProtocolVersion)}));

    auto msg = receive(sock);
    if (std::holds_alternative<wire::Done>(msg)) return 0;  // arrived after the work ran out
    if (!std::holds_alternative<wire::Welcome>(msg)) fail_on(msg, "welcome");
    msg = receive(sock);
    auto* dataset = std::get_if<wire::Dataset>(&msg);
    if (!dataset) fail_on(msg, "dataset");
    const FeatureMatrix features = to_matrix(std::move(*dataset));

    std::size_t completed = 0;
    for (;;) {
        msg = receive(sock);
        if (std::holds_alternative<wire::Done>(msg)) return completed;
        const auto* task = std::get_if<wire::Task>(&msg);
        if (!task) fail_on(msg, "task");
        if (task->row_start >= task->row_end || task->row_end > features.rows()) {
            net::write_frame(sock, wire::encode(wire::Error{"protocol", "task range out of bounds"}));
            throw ProtocolError("task " + std::to_string(task->task_id) + " has an invalid row range");
        }
        auto rows = similarity_rows(features, task->row_start, task->row_end);
        net::write_frame(sock, wire::encode(wire::Result{task->task_id, std::move(rows.rows)}));
        ++completed;
    }
}

}  // namespace p2n
