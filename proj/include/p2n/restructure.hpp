#pragma once

// Subsystem nodes recovered from a cut, their test saturation, module move
// suggestions and agreement with the declared module structure.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "p2n/hac.hpp"
#include "p2n/model.hpp"

namespace p2n {

/// One node per cluster label, members in entity index order.
NodePartition partition_to_nodes(const ClusterAssignment& assignment, const SoftwareGraph& graph);

/// Fraction of members whose status is tested.
double saturation(const Node& node, const SoftwareGraph& graph);

struct MoveSuggestion {
    std::string entity_id;
    std::string from_module;
    std::string to_module;

    bool operator==(const MoveSuggestion&) const = default;
};

/// For every cluster with a strict-majority declared module, suggests moving
/// each member declared elsewhere into that module. Ordered by entity index.
std::vector<MoveSuggestion> suggest_moves(const SoftwareGraph& graph, const ClusterAssignment& assignment);

/// Labels of the partition induced by declared_module (first-seen numbering).
std::vector<std::size_t> declared_partition(const SoftwareGraph& graph);

/// Rand index: fraction of entity pairs on which two labelings agree.
/// Throws std::invalid_argument on size mismatch or fewer than 2 entities.
double agreement(std::span<const std::size_t> a, std::span<const std::size_t> b);

enum class Quality { intelligibility, testability, modifiability, reliability, portability, usability, efficiency };
enum class MaintenanceCategory { corrective, adaptability, perfection };

std::string_view to_string(Quality q);
std::string_view to_string(MaintenanceCategory c);

/// Maintenance categories that address a software quality. Throws
/// std::invalid_argument for an unknown quality name.
std::vector<MaintenanceCategory> classify_maintenance(Quality quality);
std::vector<MaintenanceCategory> classify_maintenance(std::string_view quality);

struct NodeProgress {
    std::size_t node_id = 0;
    std::size_t members = 0;
    std::size_t tested = 0;
    double saturation = 0.0;
    std::vector<std::pair<std::string, Status>> member_status;
};

struct ProgressReport {
    std::vector<NodeProgress> nodes;
    std::size_t total_members = 0;
    std::size_t total_tested = 0;
    double overall_saturation = 0.0;

    std::string to_text() const;
    std::string to_json() const;
};

ProgressReport progress_report(const SoftwareGraph& graph, const NodePartition& partition);

}  // namespace p2n
