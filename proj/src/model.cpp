#include "p2n/model.hpp"

#include <algorithm>
#include <cmath>

namespace p2n {

std::string_view to_string(EntityKind kind) {
    switch (kind) {
        case EntityKind::object: return "object";
        case EntityKind::class_: return "class";
        case EntityKind::method: return "method";
    }
    return "?";
}

std::string_view to_string(Status status) {
    switch (status) {
        case Status::planned: return "planned";
        case Status::coded: return "coded";
        case Status::tested: return "tested";
    }
    return "?";
}

std::string_view to_string(RelType type) {
    switch (type) {
        case RelType::part: return "part";
        case RelType::subclass: return "subclass";
        case RelType::ref: return "ref";
    }
    return "?";
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::duplicate_id: return "duplicate-id";
        case ViolationKind::kind_coordinate_mismatch: return "kind-coordinate-mismatch";
        case ViolationKind::dangling_endpoint: return "dangling-endpoint";
        case ViolationKind::self_loop: return "self-loop";
        case ViolationKind::negative_weight: return "negative-weight";
        case ViolationKind::part_cycle: return "part-cycle";
    }
    return "?";
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
    if (text == "object") return EntityKind::object;
    if (text == "class") return EntityKind::class_;
    if (text == "method") return EntityKind::method;
    return std::nullopt;
}

std::optional<Status> parse_status(std::string_view text) {
    if (text == "planned") return Status::planned;
    if (text == "coded") return Status::coded;
    if (text == "tested") return Status::tested;
    return std::nullopt;
}

std::optional<RelType> parse_rel_type(std::string_view text) {
    if (text == "part") return RelType::part;
    if (text == "subclass") return RelType::subclass;
    if (text == "ref") return RelType::ref;
    return std::nullopt;
}

bool coordinate_matches(EntityKind kind, const EntityCoordinate& c) {
    const bool o = c.object_id.has_value(), k = c.class_id.has_value(), m = c.method_id.has_value();
    switch (kind) {
        case EntityKind::object: return o && !k && !m;
        case EntityKind::class_: return o && k && !m;
        case EntityKind::method: return o && k && m;
    }
    return false;
}

SoftwareGraph::SoftwareGraph(std::vector<Entity> entities, std::vector<Relationship> relationships)
    : entities_(std::move(entities)), relationships_(std::move(relationships)) {
    std::stable_sort(entities_.begin(), entities_.end(),
                     [](const Entity& a, const Entity& b) { return a.id < b.id; });
    index_.reserve(entities_.size());
    for (std::size_t i = 0; i < entities_.size(); ++i) index_.try_emplace(entities_[i].id, i);
}

std::optional<std::size_t> SoftwareGraph::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

// Strongly connected components of the direct part edges with more than one
// member; each one is a cycle. Self loops are reported separately.
std::vector<std::vector<std::string>> part_cycles(const SoftwareGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& r : g.relationships()) {
        if (r.type != RelType::part) continue;
        auto s = g.index_of(r.src), d = g.index_of(r.dst);
        if (s && d && *s != *d) adj[*s].push_back(*d);
    }

    // Iterative Tarjan so deep part chains do not overflow the stack.
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::string>> cycles;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next_edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next_edge < adj[f.v].size()) {
                std::size_t w = adj[f.v][f.next_edge++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] != index[v]) continue;
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            if (comp.size() > 1) {
                std::sort(comp.begin(), comp.end());
                std::vector<std::string> ids;
                for (auto i : comp) ids.push_back(g.entity(i).id);
                cycles.push_back(std::move(ids));
            }
        }
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

std::string join(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ", ";
        out += id;
    }
    return out;
}

}  // namespace

std::vector<Violation> validate_graph(const SoftwareGraph& g) {
    std::vector<Violation> out;

    const auto entities = g.entities();
    for (std::size_t i = 1; i < entities.size(); ++i) {
        if (entities[i].id == entities[i - 1].id && (i < 2 || entities[i - 2].id != entities[i].id)) {
            out.push_back({ViolationKind::duplicate_id, {entities[i].id},
                           "entity id '" + entities[i].id + "' is declared more than once"});
        }
    }
    for (const auto& e : entities) {
        if (!coordinate_matches(e.kind, e.coordinate)) {
            out.push_back({ViolationKind::kind_coordinate_mismatch, {e.id},
                           "entity '" + e.id + "' of kind " + std::string(to_string(e.kind)) +
                               " has inconsistent coordinates"});
        }
    }

    for (const auto& r : g.relationships()) {
        const std::string label =
            std::string(to_string(r.type)) + " " + r.src + " -> " + r.dst;
        for (const auto* end : {&r.src, &r.dst}) {
            if (!g.index_of(*end)) {
                out.push_back({ViolationKind::dangling_endpoint, {*end},
                               "relationship " + label + " refers to unknown entity '" + *end + "'"});
            }
        }
        if (r.src == r.dst && r.type != RelType::ref) {
            out.push_back({ViolationKind::self_loop, {r.src}, "relationship " + label + " is a self loop"});
        }
        if (!(r.weight >= 0.0) || !std::isfinite(r.weight)) {
            out.push_back({ViolationKind::negative_weight, {r.src, r.dst},
                           "relationship " + label + " has a negative or non-finite weight"});
        }
    }

    for (auto& cycle : part_cycles(g)) {
        std::string msg = "part relation has a cycle through " + join(cycle);
        out.push_back({ViolationKind::part_cycle, std::move(cycle), std::move(msg)});
    }
    return out;
}

}  // namespace p2n
