#include "p2n/pipeline.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "p2n/errors.hpp"
#include "p2n/numfmt.hpp"

namespace p2n {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::size_t module_count(const SoftwareGraph& g) {
    std::set<std::string_view> modules;
    for (const auto& e : g.entities()) modules.insert(e.declared_module);
    return modules.size();
}

ClusterAssignment apply_cut(const Dendrogram& d, const PipelineConfig& config, const SoftwareGraph& g) {
    if (config.k && config.threshold) throw std::invalid_argument("choose either k or a threshold, not both");
    if (config.threshold) return cut_threshold(d, *config.threshold);
    return cut_k(d, config.k.value_or(module_count(g)));
}

std::vector<std::string> entity_ids(const SoftwareGraph& g) {
    std::vector<std::string> ids;
    ids.reserve(g.size());
    for (const auto& e : g.entities()) ids.push_back(e.id);
    return ids;
}

}  // namespace

StandardizedFeatures prepare_features(const FactsDocument& doc, const RelationWeights& weights) {
    if (doc.graph.size() < 2) {
        throw DegenerateInput("clustering needs at least 2 entities, got " + std::to_string(doc.graph.size()));
    }
    return standardize(extract_structural_features(doc.graph, weights, doc.attributes));
}

PipelineResult run_pipeline(const FactsDocument& doc, const PipelineConfig& config, const SimilaritySource& source) {
    PipelineResult r;
    r.features = prepare_features(doc, config.weights);
    r.similarity = source ? source(r.features.matrix) : similarity_matrix(r.features.matrix, config.threads);
    r.dendrogram = cluster(r.similarity, config.linkage);
    r.assignment = apply_cut(r.dendrogram, config, doc.graph);
    r.nodes = partition_to_nodes(r.assignment, doc.graph);
    r.report = progress_report(doc.graph, r.nodes);
    r.suggestions = suggest_moves(doc.graph, r.assignment);
    r.agreement = agreement(r.assignment.labels, declared_partition(doc.graph));
    return r;
}

std::map<std::string, std::string> render_outputs(const FactsDocument& doc, const PipelineResult& r) {
    const auto ids = entity_ids(doc.graph);
    std::map<std::string, std::string> files;
    files["dendrogram.json"] = to_json(r.dendrogram, ids);
    files["tree.nwk"] = to_newick(r.dendrogram, ids);
    files["tree.dot"] = to_dot(r.dendrogram, ids);

    std::string assignment = "entity,cluster\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        assignment += csv_field(ids[i]) + "," + std::to_string(r.assignment.labels[i]) + "\n";
    }
    files["assignment.csv"] = std::move(assignment);

    std::string report = "linkage\t" + std::string(to_string(r.dendrogram.linkage)) + "\nclusters\t" +
                         std::to_string(r.assignment.k) + "\n";
    if (!r.features.dropped.empty()) {
        report += "dropped constant attributes\t" + std::to_string(r.features.dropped.size()) + "\n";
    }
    report += "\n" + r.report.to_text();
    files["report.txt"] = std::move(report);
    files["report.json"] = r.report.to_json();

    std::string suggestions = "entity,from_module,to_module\n";
    for (const auto& s : r.suggestions) {
        suggestions += csv_field(s.entity_id) + "," + csv_field(s.from_module) + "," + csv_field(s.to_module) + "\n";
    }
    files["suggestions.csv"] = std::move(suggestions);
    files["agreement.txt"] = "rand_index " + format_double(r.agreement) + "\n";
    return files;
}

void write_outputs(const std::filesystem::path& dir, const FactsDocument& doc, const PipelineResult& result) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : render_outputs(doc, result)) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    }
}

LinkageComparison compare_linkages(const FactsDocument& doc, const PipelineConfig& config) {
    const auto features = prepare_features(doc, config.weights);
    const auto sim = similarity_matrix(features.matrix, config.threads);
    LinkageComparison out;
    for (std::size_t a = 0; a < 4; ++a) {
        out.assignments[a] = apply_cut(cluster(sim, kAllLinkages[a]), config, doc.graph);
    }
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            out.rand_index[a][b] = agreement(out.assignments[a].labels, out.assignments[b].labels);
        }
    }
    return out;
}

std::string LinkageComparison::to_text() const {
    std::string out = "linkage";
    for (Linkage l : kAllLinkages) out += "\t" + std::string(short_name(l));
    out += "\n";
    for (std::size_t a = 0; a < 4; ++a) {
        out += short_name(kAllLinkages[a]);
        for (std::size_t b = 0; b < 4; ++b) out += "\t" + format_double(rand_index[a][b]);
        out += "\n";
    }
    return out;
}

}  // namespace p2n
