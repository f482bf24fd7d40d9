#include "p2n/restructure.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "p2n/numfmt.hpp"

namespace p2n {

NodePartition partition_to_nodes(const ClusterAssignment& assignment, const SoftwareGraph& graph) {
    if (assignment.labels.size() != graph.size()) {
        throw std::invalid_argument("assignment covers " + std::to_string(assignment.labels.size()) +
                                    " entities but the graph has " + std::to_string(graph.size()));
    }
    if (graph.size() == 0) throw std::invalid_argument("cannot partition an empty graph");
    NodePartition out;
    out.nodes.resize(assignment.k);
    for (std::size_t c = 0; c < assignment.k; ++c) out.nodes[c].node_id = c;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        const std::size_t label = assignment.labels[i];
        if (label >= assignment.k) throw std::invalid_argument("cluster label out of range");
        out.nodes[label].members.push_back(graph.entity(i).id);
    }
    for (const auto& node : out.nodes) {
        if (node.members.empty()) throw std::invalid_argument("assignment has an empty cluster");
    }
    return out;
}

double saturation(const Node& node, const SoftwareGraph& graph) {
    if (node.members.empty()) throw std::invalid_argument("saturation of an empty node");
    std::size_t tested = 0;
    for (const auto& id : node.members) {
        auto i = graph.index_of(id);
        if (!i) throw std::invalid_argument("node member '" + id + "' is not in the graph");
        if (graph.entity(*i).status == Status::tested) ++tested;
    }
    return static_cast<double>(tested) / static_cast<double>(node.members.size());
}

std::vector<MoveSuggestion> suggest_moves(const SoftwareGraph& graph, const ClusterAssignment& assignment) {
    if (assignment.labels.size() != graph.size()) throw std::invalid_argument("assignment size mismatch");

    std::vector<std::map<std::string, std::size_t>> votes(assignment.k);
    std::vector<std::size_t> sizes(assignment.k, 0);
    for (std::size_t i = 0; i < graph.size(); ++i) {
        ++votes.at(assignment.labels[i])[graph.entity(i).declared_module];
        ++sizes[assignment.labels[i]];
    }
    std::vector<const std::string*> majority(assignment.k, nullptr);
    for (std::size_t c = 0; c < assignment.k; ++c) {
        for (const auto& [module, count] : votes[c]) {
            if (2 * count > sizes[c]) majority[c] = &module;
        }
    }

    std::vector<MoveSuggestion> out;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        const auto* target = majority[assignment.labels[i]];
        const auto& e = graph.entity(i);
        if (target && *target != e.declared_module) out.push_back({e.id, e.declared_module, *target});
    }
    return out;
}

std::vector<std::size_t> declared_partition(const SoftwareGraph& graph) {
    std::unordered_map<std::string, std::size_t> ids;
    std::vector<std::size_t> labels;
    labels.reserve(graph.size());
    for (const auto& e : graph.entities()) labels.push_back(ids.try_emplace(e.declared_module, ids.size()).first->second);
    return labels;
}

double agreement(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("partitions cover different entity counts");
    const std::uint64_t n = a.size();
    if (n < 2) throw std::invalid_argument("agreement needs at least 2 entities");

    auto pairs = [](std::uint64_t c) { return c * (c - 1) / 2; };
    std::map<std::size_t, std::uint64_t> ca, cb;
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> cab;
    for (std::size_t i = 0; i < n; ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++cab[{a[i], b[i]}];
    }
    std::uint64_t together_a = 0, together_b = 0, together_both = 0;
    for (const auto& [_, c] : ca) together_a += pairs(c);
    for (const auto& [_, c] : cb) together_b += pairs(c);
    for (const auto& [_, c] : cab) together_both += pairs(c);
    const std::uint64_t total = pairs(n);
    const std::uint64_t disagree = (together_a - together_both) + (together_b - together_both);
    return static_cast<double>(total - disagree) / static_cast<double>(total);
}

std::string_view to_string(Quality q) {
    switch (q) {
        case Quality::intelligibility: return "intelligibility";
        case Quality::testability: return "testability";
        case Quality::modifiability: return "modifiability";
        case Quality::reliability: return "reliability";
        case Quality::portability: return "portability";
        case Quality::usability: return "usability";
        case Quality::efficiency: return "efficiency";
    }
    return "?";
}

std::string_view to_string(MaintenanceCategory c) {
    switch (c) {
        case MaintenanceCategory::corrective: return "corrective";
        case MaintenanceCategory::adaptability: return "adaptability";
        case MaintenanceCategory::perfection: return "perfection";
    }
    return "?";
}

std::vector<MaintenanceCategory> classify_maintenance(Quality quality) {
    using C = MaintenanceCategory;
    switch (quality) {
        case Quality::intelligibility: return {C::corrective};
        case Quality::testability: return {C::corrective};
        case Quality::modifiability: return {C::corrective, C::adaptability};
        case Quality::reliability: return {C::corrective};
        case Quality::portability: return {C::adaptability};
        case Quality::usability: return {C::adaptability, C::perfection};
        case Quality::efficiency: return {C::perfection};
    }
    return {};
}

std::vector<MaintenanceCategory> classify_maintenance(std::string_view quality) {
    for (auto q : {Quality::intelligibility, Quality::testability, Quality::modifiability, Quality::reliability,
                   Quality::portability, Quality::usability, Quality::efficiency}) {
        if (quality == to_string(q)) return classify_maintenance(q);
    }
    throw std::invalid_argument("unknown quality '" + std::string(quality) + "'");
}

ProgressReport progress_report(const SoftwareGraph& graph, const NodePartition& partition) {
    ProgressReport r;
    for (const auto& node : partition.nodes) {
        NodeProgress p;
        p.node_id = node.node_id;
        p.members = node.members.size();
        for (const auto& id : node.members) {
            auto i = graph.index_of(id);
            if (!i) throw std::invalid_argument("node member '" + id + "' is not in the graph");
            const Status st = graph.entity(*i).status;
            if (st == Status::tested) ++p.tested;
            p.member_status.emplace_back(id, st);
        }
        p.saturation = saturation(node, graph);
        r.total_members += p.members;
        r.total_tested += p.tested;
        r.nodes.push_back(std::move(p));
    }
    std::sort(r.nodes.begin(), r.nodes.end(), [](const auto& a, const auto& b) { return a.node_id < b.node_id; });
    if (r.total_members) {
        r.overall_saturation = static_cast<double>(r.total_tested) / static_cast<double>(r.total_members);
    }
    return r;
}

std::string ProgressReport::to_text() const {
    std::string out = "node\tmembers\ttested\tsaturation\n";
    for (const auto& p : nodes) {
        out += "N" + std::to_string(p.node_id) + '\t' + std::to_string(p.members) + '\t' + std::to_string(p.tested) +
               '\t' + format_double(p.saturation) + '\n';
    }
    out += "total\t" + std::to_string(total_members) + '\t' + std::to_string(total_tested) + '\t' +
           format_double(overall_saturation) + '\n';
    for (const auto& p : nodes) {
        out += "\nN" + std::to_string(p.node_id) + ":\n";
        for (const auto& [id, st] : p.member_status) out += "  " + id + '\t' + std::string(p2n::to_string(st)) + '\n';
    }
    return out;
}

std::string ProgressReport::to_json() const {
    // Built by hand so saturations keep their shortest round-trip text.
    std::string out = "{\"nodes\": [";
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& p = nodes[k];
        out += k ? ", " : "";
        out += "{\"node_id\": " + std::to_string(p.node_id) + ", \"members\": " + std::to_string(p.members) +
               ", \"tested\": " + std::to_string(p.tested) + ", \"saturation\": " + format_double(p.saturation) +
               ", \"statuses\": {";
        for (std::size_t m = 0; m < p.member_status.size(); ++m) {
            out += m ? ", " : "";
            out += nlohmann::json(p.member_status[m].first).dump() + ": \"" +
                   std::string(p2n::to_string(p.member_status[m].second)) + "\"";
        }
        out += "}}";
    }
    out += "], \"total_members\": " + std::to_string(total_members) + ", \"total_tested\": " +
           std::to_string(total_tested) + ", \"overall_saturation\": " + format_double(overall_saturation) + "}\n";
    return out;
}

}  // namespace p2n
