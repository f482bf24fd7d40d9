#include "p2n/wire.hpp"

#include <json.hpp>

#include "p2n/numfmt.hpp"

namespace p2n::wire {

namespace {

using nlohmann::json;

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};

std::string json_string(std::string_view s) { return json(std::string(s)).dump(); }

void append_row(std::string& out, const double* begin, std::size_t count) {
    out += '[';
    for (std::size_t j = 0; j < count; ++j) {
        if (j) out += ',';
        append_double(out, begin[j]);
    }
    out += ']';
}

const json& field(const json& doc, const char* name) {
    auto it = doc.find(name);
    if (it == doc.end()) throw ProtocolError(std::string("message is missing field '") + name + "'");
    return *it;
}

std::string get_string(const json& doc, const char* name) {
    const json& v = field(doc, name);
    if (!v.is_string()) throw ProtocolError(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t get_uint(const json& doc, const char* name) {
    const json& v = field(doc, name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ProtocolError(std::string("field '") + name + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

double get_number(const json& v) {
    if (!v.is_number()) throw ProtocolError("expected a number");
    return v.get<double>();
}

std::vector<std::vector<double>> get_matrix(const json& doc, const char* name) {
    const json& v = field(doc, name);
    if (!v.is_array()) throw ProtocolError(std::string("field '") + name + "' must be a list of lists");
    std::vector<std::vector<double>> rows;
    rows.reserve(v.size());
    for (const auto& r : v) {
        if (!r.is_array()) throw ProtocolError(std::string("field '") + name + "' must be a list of lists");
        std::vector<double> row;
        row.reserve(r.size());
        for (const auto& x : r) row.push_back(get_number(x));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string_view type_name(const Message& m) {
    return std::visit(overloaded{
                          [](const Hello&) { return std::string_view("hello"); },
                          [](const Welcome&) { return std::string_view("welcome"); },
                          [](const Dataset&) { return std::string_view("dataset"); },
                          [](const Task&) { return std::string_view("task"); },
                          [](const Result&) { return std::string_view("result"); },
                          [](const Done&) { return std::string_view("done"); },
                          [](const Error&) { return std::string_view("error"); },
                      },
                      m);
}

std::string encode(const Message& m) {
    std::string out = "{\"type\":\"" + std::string(type_name(m)) + "\"";
    std::visit(overloaded{
                   [&](const Hello& h) {
                       out += ",\"worker_id\":" + json_string(h.worker_id) + ",\"version\":" + json_string(h.version);
                   },
                   [&](const Welcome& w) { out += ",\"session_id\":" + json_string(w.session_id); },
                   [&](const Dataset& d) {
                       out += ",\"n\":" + std::to_string(d.n) + ",\"dim\":" + std::to_string(d.dim) + ",\"rows\":[";
                       for (std::size_t i = 0; i < d.n; ++i) {
                           if (i) out += ',';
                           append_row(out, d.values.data() + i * d.dim, d.dim);
                       }
                       out += ']';
                   },
                   [&](const Task& t) {
                       out += ",\"task_id\":" + std::to_string(t.task_id) + ",\"row_start\":" +
                              std::to_string(t.row_start) + ",\"row_end\":" + std::to_string(t.row_end);
                   },
                   [&](const Result& r) {
                       out += ",\"task_id\":" + std::to_string(r.task_id) + ",\"rows\":[";
                       for (std::size_t i = 0; i < r.rows.size(); ++i) {
                           if (i) out += ',';
                           append_row(out, r.rows[i].data(), r.rows[i].size());
                       }
                       out += ']';
                   },
                   [&](const Done&) {},
                   [&](const Error& e) {
                       out += ",\"code\":" + json_string(e.code) + ",\"message\":" + json_string(e.message);
                   },
               },
               m);
    out += '}';
    return out;
}

Message decode(std::string_view payload) {
    json doc = json::parse(payload.begin(), payload.end(), nullptr, false);
    if (doc.is_discarded()) throw ProtocolError("frame is not a valid JSON document");
    if (!doc.is_object()) throw ProtocolError("frame must hold a JSON object");
    const std::string type = get_string(doc, "type");

    if (type == "hello") return Hello{get_string(doc, "worker_id"), get_string(doc, "version")};
    if (type == "welcome") return Welcome{get_string(doc, "session_id")};
    if (type == "dataset") {
        Dataset d;
        d.n = get_uint(doc, "n");
        d.dim = get_uint(doc, "dim");
        auto rows = get_matrix(doc, "rows");
        if (rows.size() != d.n) throw ProtocolError("dataset row count does not match n");
        d.values.reserve(d.n * d.dim);
        for (const auto& r : rows) {
            if (r.size() != d.dim) throw ProtocolError("dataset row length does not match dim");
            d.values.insert(d.values.end(), r.begin(), r.end());
        }
        return d;
    }
    if (type == "task") return Task{get_uint(doc, "task_id"), get_uint(doc, "row_start"), get_uint(doc, "row_end")};
    if (type == "result") return Result{get_uint(doc, "task_id"), get_matrix(doc, "rows")};
    if (type == "done") return Done{};
    if (type == "error") return Error{get_string(doc, "code"), get_string(doc, "message")};
    throw ProtocolError("unknown message type '" + type + "'");
}

}  // namespace p2n::wire
