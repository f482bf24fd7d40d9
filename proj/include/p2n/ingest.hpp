#pragma once

// Reader and writer for the line-based `.p2n` facts format:
//
//   E <id> <kind> <object_id|-> <class_id|-> <declared_module> <status|->
//   R <rel_type> <src_id> <dst_id> [weight]
//   A <entity_id> <name> <value>
//
// `#` starts a comment that runs to the end of the line. The object/class
// columns name the enclosing object and class; an entity's own coordinate
// component is its id.

#include <string>
#include <string_view>
#include <vector>

#include "p2n/model.hpp"

namespace p2n {

struct UserAttribute {
    std::string entity_id;
    std::string name;
    double value = 0.0;

    bool operator==(const UserAttribute&) const = default;
};

struct FactsDocument {
    SoftwareGraph graph;
    std::vector<UserAttribute> attributes;  // sorted by (entity_id, name)

    bool operator==(const FactsDocument&) const = default;
};

/// Parses a facts document. Throws InputError carrying the offending line.
FactsDocument parse_facts(std::string_view text);

/// Reads and parses a facts file from disk.
FactsDocument load_facts(const std::string& path);

/// Canonical text form; parse_facts(write_facts(d)) == d.
std::string write_facts(const FactsDocument& doc);

}  // namespace p2n
