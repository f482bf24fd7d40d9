#include <algorithm>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "p2n/hac.hpp"
#include "p2n/numfmt.hpp"

namespace p2n {

namespace {

void check_names(const Dendrogram& d, std::span<const std::string> names) {
    if (names.size() != d.n) throw std::invalid_argument("leaf name count does not match the dendrogram");
    if (d.merges.size() + 1 != d.n) throw std::invalid_argument("dendrogram does not have n-1 merges");
}

bool needs_quotes(const std::string& name) {
    if (name.empty()) return true;
    for (char c : name) {
        switch (c) {
            case ' ': case '\t': case '\n': case '(': case ')': case '[': case ']':
            case '\'': case ':': case ';': case ',':
                return true;
            default:
                break;
        }
    }
    return false;
}

std::string newick_label(const std::string& name) {
    if (!needs_quotes(name)) return name;
    std::string out = "'";
    for (char c : name) {
        if (c == '\'') out += '\'';
        out += c;
    }
    out += '\'';
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_newick(const Dendrogram& d, std::span<const std::string> leaf_names) {
    check_names(d, leaf_names);
    // Children are written in order of their smallest leaf, so ((a,b),c)
    // rather than (c,(a,b)).
    std::vector<std::size_t> min_leaf(d.n + d.merges.size());
    for (std::size_t i = 0; i < d.n; ++i) min_leaf[i] = i;
    for (std::size_t t = 0; t < d.merges.size(); ++t)
        min_leaf[d.n + t] = std::min(min_leaf[d.merges[t].left], min_leaf[d.merges[t].right]);
    auto first = [&](const Merge& m) { return min_leaf[m.left] < min_leaf[m.right] ? m.left : m.right; };
    auto second = [&](const Merge& m) { return min_leaf[m.left] < min_leaf[m.right] ? m.right : m.left; };

    // Explicit stack: (cluster id, children emitted?) so deep chains are fine.
    std::string out;
    std::vector<std::pair<std::size_t, int>> stack{{d.n + d.merges.size() - 1, 0}};
    while (!stack.empty()) {
        auto& [id, state] = stack.back();
        if (id < d.n) {
            out += newick_label(leaf_names[id]);
            stack.pop_back();
            continue;
        }
        const Merge& m = d.merges[id - d.n];
        if (state == 0) {
            out += '(';
            state = 1;
            stack.push_back({first(m), 0});
        } else if (state == 1) {
            out += ',';
            state = 2;
            stack.push_back({second(m), 0});
        } else {
            out += "):";
            append_double(out, m.similarity);
            stack.pop_back();
        }
    }
    out += ";\n";
    return out;
}

std::string to_dot(const Dendrogram& d, std::span<const std::string> leaf_names) {
    check_names(d, leaf_names);
    std::string out = "digraph dendrogram {\n";
    for (std::size_t i = 0; i < d.n; ++i) {
        out += "  n" + std::to_string(i) + " [label=\"" + dot_escape(leaf_names[i]) + "\", shape=box];\n";
    }
    for (std::size_t t = 0; t < d.merges.size(); ++t) {
        out += "  n" + std::to_string(d.n + t) + " [label=\"";
        append_double(out, d.merges[t].similarity);
        out += "\", shape=ellipse];\n";
    }
    for (std::size_t t = 0; t < d.merges.size(); ++t) {
        const auto parent = "  n" + std::to_string(d.n + t) + " -> n";
        out += parent + std::to_string(d.merges[t].left) + ";\n";
        out += parent + std::to_string(d.merges[t].right) + ";\n";
    }
    out += "}\n";
    return out;
}

std::string to_json(const Dendrogram& d, std::span<const std::string> leaf_names) {
    check_names(d, leaf_names);
    std::string out = "{\n  \"n\": " + std::to_string(d.n) + ",\n  \"linkage\": \"" +
                      std::string(to_string(d.linkage)) + "\",\n  \"leaves\": [";
    for (std::size_t i = 0; i < d.n; ++i) {
        if (i) out += ", ";
        out += nlohmann::json(leaf_names[i]).dump();
    }
    out += "],\n  \"merges\": [";
    for (std::size_t t = 0; t < d.merges.size(); ++t) {
        const Merge& m = d.merges[t];
        out += t ? ",\n    " : "\n    ";
        out += "{\"step\": " + std::to_string(m.step) + ", \"left\": " + std::to_string(m.left) +
               ", \"right\": " + std::to_string(m.right) + ", \"similarity\": ";
        append_double(out, m.similarity);
        out += ", \"size\": " + std::to_string(m.new_size) + "}";
    }
    out += "\n  ]\n}\n";
    return out;
}

}  // namespace p2n
