#pragma once

// Domain model of the analyzed software system: entities placed on the
// object/class/method axes, typed relationships between them, and the
// subsystem nodes recovered by clustering.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace p2n {

enum class EntityKind { object, class_, method };
enum class Status { planned, coded, tested };
enum class RelType { part, subclass, ref };

std::string_view to_string(EntityKind kind);
std::string_view to_string(Status status);
std::string_view to_string(RelType type);

std::optional<EntityKind> parse_entity_kind(std::string_view text);
std::optional<Status> parse_status(std::string_view text);
std::optional<RelType> parse_rel_type(std::string_view text);

/// Position of an entity on the object/class/method axes.
///
/// An object entity fills object_id only, a class entity fills object_id and
/// class_id, a method entity fills all three.
struct EntityCoordinate {
    std::optional<std::string> object_id;
    std::optional<std::string> class_id;
    std::optional<std::string> method_id;

    bool operator==(const EntityCoordinate&) const = default;
};

/// True when `coord` has exactly the components required by `kind`.
bool coordinate_matches(EntityKind kind, const EntityCoordinate& coord);

struct Entity {
    std::string id;
    EntityKind kind = EntityKind::object;
    EntityCoordinate coordinate;
    std::string declared_module;
    Status status = Status::planned;

    bool operator==(const Entity&) const = default;
};

struct Relationship {
    RelType type = RelType::ref;
    std::string src;
    std::string dst;
    double weight = 1.0;

    bool operator==(const Relationship&) const = default;
};

/// Entities sorted byte-wise by id plus the relationships between them.
///
/// The position of an entity in entities() is its index in every downstream
/// matrix. Construction does not validate; use validate_graph for that.
class SoftwareGraph {
public:
    SoftwareGraph() = default;
    SoftwareGraph(std::vector<Entity> entities, std::vector<Relationship> relationships);

    std::span<const Entity> entities() const { return entities_; }
    std::span<const Relationship> relationships() const { return relationships_; }
    std::size_t size() const { return entities_.size(); }

    /// Index of the entity with this id, nullopt when absent.
    std::optional<std::size_t> index_of(std::string_view id) const;
    const Entity& entity(std::size_t index) const { return entities_.at(index); }

    bool operator==(const SoftwareGraph& other) const {
        return entities_ == other.entities_ && relationships_ == other.relationships_;
    }

private:
    std::vector<Entity> entities_;
    std::vector<Relationship> relationships_;
    // First occurrence of each id; duplicates are left for validate_graph.
    std::unordered_map<std::string, std::size_t> index_;
};

enum class ViolationKind {
    duplicate_id,
    kind_coordinate_mismatch,
    dangling_endpoint,
    self_loop,
    negative_weight,
    part_cycle,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::vector<std::string> subjects;  // entity ids involved
    std::string message;
};

/// Checks every SoftwareGraph invariant; an empty result means the graph is valid.
std::vector<Violation> validate_graph(const SoftwareGraph& graph);

/// A recovered subsystem.
struct Node {
    std::size_t node_id = 0;
    std::vector<std::string> members;  // entity ids, in entity index order
};

struct NodePartition {
    std::vector<Node> nodes;
};

}  // namespace p2n
