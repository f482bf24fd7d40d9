#pragma once

// End-to-end run: facts -> features -> similarity -> dendrogram -> cut ->
// nodes, report, suggestions and agreement, plus rendering of every output
// file. Shared by the CLI and the bindings.

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "p2n/features.hpp"
#include "p2n/hac.hpp"
#include "p2n/ingest.hpp"
#include "p2n/metrics.hpp"
#include "p2n/restructure.hpp"

namespace p2n {

struct PipelineConfig {
    Linkage linkage = Linkage::unweighted_average;
    /// At most one of k / threshold; neither means k = number of declared modules.
    std::optional<std::size_t> k;
    std::optional<double> threshold;
    RelationWeights weights;
    unsigned threads = 1;
};

using SimilaritySource = std::function<SimilarityMatrix(const FeatureMatrix&)>;

struct PipelineResult {
    StandardizedFeatures features;
    SimilarityMatrix similarity;
    Dendrogram dendrogram;
    ClusterAssignment assignment;
    NodePartition nodes;
    ProgressReport report;
    std::vector<MoveSuggestion> suggestions;
    double agreement = 0.0;
};

/// Structural features, standardized. Throws DegenerateInput when the graph
/// has fewer than 2 entities or no informative attribute.
StandardizedFeatures prepare_features(const FactsDocument& doc, const RelationWeights& weights);

/// Runs the whole pipeline. `source` computes the similarity matrix; the
/// default computes it in-process.
PipelineResult run_pipeline(const FactsDocument& doc, const PipelineConfig& config,
                            const SimilaritySource& source = {});

/// File name -> contents for every output artifact.
std::map<std::string, std::string> render_outputs(const FactsDocument& doc, const PipelineResult& result);

/// Writes render_outputs into `dir`, creating it if needed.
void write_outputs(const std::filesystem::path& dir, const FactsDocument& doc, const PipelineResult& result);

struct LinkageComparison {
    std::array<ClusterAssignment, 4> assignments;  // in kAllLinkages order
    std::array<std::array<double, 4>, 4> rand_index{};

    std::string to_text() const;
};

/// Clusters with all four linkages at the same cut and compares the results pairwise.
LinkageComparison compare_linkages(const FactsDocument& doc, const PipelineConfig& config);

}  // namespace p2n
