#include "p2n/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <utility>

#include "p2n/errors.hpp"
#include "p2n/numfmt.hpp"

namespace p2n {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

constexpr std::string_view kAbsent = "-";

std::optional<std::string> optional_field(std::string_view tok) {
    if (tok == kAbsent) return std::nullopt;
    return std::string(tok);
}

void check_arity(const std::vector<std::string_view>& toks, std::size_t min, std::size_t max,
                 std::size_t line) {
    if (toks.size() < min) {
        throw InputError("'" + std::string(toks[0]) + "' record has too few fields (expected " +
                             std::to_string(min - 1) + ")",
                         line);
    }
    if (toks.size() > max) {
        throw InputError("unexpected trailing field '" + std::string(toks[max]) + "'", line);
    }
}

void check_id(std::string_view id, std::string_view what, std::size_t line) {
    if (id == kAbsent) throw InputError(std::string(what) + " may not be '-'", line);
}

struct PendingRel {
    Relationship rel;
    std::size_t line;
};

struct PendingAttr {
    UserAttribute attr;
    std::size_t line;
};

Entity parse_entity(const std::vector<std::string_view>& t, std::size_t line) {
    check_arity(t, 7, 7, line);
    Entity e;
    e.id = std::string(t[1]);
    check_id(e.id, "entity id", line);
    auto kind = parse_entity_kind(t[2]);
    if (!kind) throw InputError("unknown entity kind '" + std::string(t[2]) + "'", line);
    e.kind = *kind;

    auto object = optional_field(t[3]);
    auto klass = optional_field(t[4]);
    switch (e.kind) {
        case EntityKind::object:
            if (object || klass) {
                throw InputError("object entity '" + e.id + "' cannot name an enclosing object or class",
                                 line);
            }
            e.coordinate.object_id = e.id;
            break;
        case EntityKind::class_:
            if (!object) throw InputError("class entity '" + e.id + "' needs an enclosing object", line);
            if (klass) throw InputError("class entity '" + e.id + "' cannot name an enclosing class", line);
            e.coordinate.object_id = std::move(object);
            e.coordinate.class_id = e.id;
            break;
        case EntityKind::method:
            if (!object || !klass) {
                throw InputError("method entity '" + e.id + "' needs an enclosing object and class", line);
            }
            e.coordinate.object_id = std::move(object);
            e.coordinate.class_id = std::move(klass);
            e.coordinate.method_id = e.id;
            break;
    }

    e.declared_module = std::string(t[5]);
    check_id(e.declared_module, "declared module", line);
    if (t[6] == kAbsent) {
        e.status = Status::planned;
    } else if (auto st = parse_status(t[6])) {
        e.status = *st;
    } else {
        throw InputError("unknown status '" + std::string(t[6]) + "'", line);
    }
    return e;
}

Relationship parse_relationship(const std::vector<std::string_view>& t, std::size_t line) {
    check_arity(t, 4, 5, line);
    Relationship r;
    auto type = parse_rel_type(t[1]);
    if (!type) throw InputError("unknown relationship type '" + std::string(t[1]) + "'", line);
    r.type = *type;
    r.src = std::string(t[2]);
    r.dst = std::string(t[3]);
    check_id(r.src, "relationship source", line);
    check_id(r.dst, "relationship target", line);
    if (r.src == r.dst && r.type != RelType::ref) {
        throw InputError(std::string(t[1]) + " relationship '" + r.src + "' is a self loop", line);
    }
    if (t.size() == 5) {
        auto w = parse_double(t[4]);
        if (!w) throw InputError("invalid weight '" + std::string(t[4]) + "'", line);
        if (!std::isfinite(*w) || *w < 0.0) {
            throw InputError("weight must be finite and nonnegative, got '" + std::string(t[4]) + "'", line);
        }
        r.weight = *w;
    }
    return r;
}

UserAttribute parse_attribute(const std::vector<std::string_view>& t, std::size_t line) {
    check_arity(t, 4, 4, line);
    UserAttribute a;
    a.entity_id = std::string(t[1]);
    a.name = std::string(t[2]);
    check_id(a.entity_id, "attribute entity", line);
    auto v = parse_double(t[3]);
    if (!v) throw InputError("invalid attribute value '" + std::string(t[3]) + "'", line);
    if (!std::isfinite(*v)) throw InputError("attribute value must be finite, got '" + std::string(t[3]) + "'", line);
    a.value = *v;
    return a;
}

}  // namespace

FactsDocument parse_facts(std::string_view text) {
    std::vector<Entity> entities;
    std::map<std::string, std::size_t, std::less<>> entity_line;
    std::vector<PendingRel> rels;
    std::vector<PendingAttr> attrs;
    std::map<std::pair<std::string, std::string>, std::size_t> attr_line;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "E") {
            Entity e = parse_entity(toks, line_no);
            if (auto it = entity_line.find(e.id); it != entity_line.end()) {
                throw InputError("duplicate entity id '" + e.id + "' (first declared on line " +
                                     std::to_string(it->second) + ")",
                                 line_no);
            }
            entity_line.emplace(e.id, line_no);
            entities.push_back(std::move(e));
        } else if (toks[0] == "R") {
            rels.push_back({parse_relationship(toks, line_no), line_no});
        } else if (toks[0] == "A") {
            UserAttribute a = parse_attribute(toks, line_no);
            auto key = std::make_pair(a.entity_id, a.name);
            if (auto it = attr_line.find(key); it != attr_line.end()) {
                throw InputError("duplicate attribute '" + a.name + "' for entity '" + a.entity_id +
                                     "' (first set on line " + std::to_string(it->second) + ")",
                                 line_no);
            }
            attr_line.emplace(std::move(key), line_no);
            attrs.push_back({std::move(a), line_no});
        } else {
            throw InputError("unknown record type '" + std::string(toks[0]) + "'", line_no);
        }
    }

    // Endpoints may be declared after the relationship that uses them.
    std::vector<Relationship> relationships;
    relationships.reserve(rels.size());
    for (auto& [rel, line] : rels) {
        for (const auto* end : {&rel.src, &rel.dst}) {
            if (!entity_line.contains(*end)) {
                throw InputError("relationship endpoint '" + *end + "' is not a declared entity", line);
            }
        }
        relationships.push_back(std::move(rel));
    }

    FactsDocument doc;
    for (auto& [attr, line] : attrs) {
        if (!entity_line.contains(attr.entity_id)) {
            throw InputError("attribute refers to unknown entity '" + attr.entity_id + "'", line);
        }
        doc.attributes.push_back(std::move(attr));
    }
    std::sort(doc.attributes.begin(), doc.attributes.end(), [](const auto& a, const auto& b) {
        return std::tie(a.entity_id, a.name) < std::tie(b.entity_id, b.name);
    });

    doc.graph = SoftwareGraph(std::move(entities), std::move(relationships));
    for (const auto& v : validate_graph(doc.graph)) {
        // Everything except cycles was rejected line by line above.
        throw InputError(v.message);
    }
    return doc;
}

FactsDocument load_facts(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_facts(ss.str());
}

std::string write_facts(const FactsDocument& doc) {
    std::string out;
    for (const auto& e : doc.graph.entities()) {
        out += "E ";
        out += e.id;
        out += ' ';
        out += to_string(e.kind);
        // Only the enclosing components are written; the own component is the id.
        const auto& c = e.coordinate;
        const bool has_obj = e.kind != EntityKind::object && c.object_id;
        const bool has_cls = e.kind == EntityKind::method && c.class_id;
        out += ' ';
        out += has_obj ? *c.object_id : std::string(kAbsent);
        out += ' ';
        out += has_cls ? *c.class_id : std::string(kAbsent);
        out += ' ';
        out += e.declared_module;
        out += ' ';
        out += to_string(e.status);
        out += '\n';
    }
    for (const auto& r : doc.graph.relationships()) {
        out += "R ";
        out += to_string(r.type);
        out += ' ';
        out += r.src;
        out += ' ';
        out += r.dst;
        if (r.weight != 1.0) {
            out += ' ';
            append_double(out, r.weight);
        }
        out += '\n';
    }
    for (const auto& a : doc.attributes) {
        out += "A ";
        out += a.entity_id;
        out += ' ';
        out += a.name;
        out += ' ';
        append_double(out, a.value);
        out += '\n';
    }
    return out;
}

}  // namespace p2n
