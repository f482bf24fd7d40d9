#pragma once

// Agglomerative clustering on similarities. After clusters j and k merge,
// the similarity of every other cluster i to the union is derived from
// sim(i, j) and sim(i, k) by one of four update rules instead of being
// recomputed from the leaves.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "p2n/metrics.hpp"

namespace p2n {

enum class Linkage { single, complete, weighted_average, unweighted_average };

inline constexpr Linkage kAllLinkages[] = {Linkage::single, Linkage::complete, Linkage::weighted_average,
                                           Linkage::unweighted_average};

/// Long name used in documents ("weighted_average").
std::string_view to_string(Linkage linkage);
/// Short CLI name ("wavg").
std::string_view short_name(Linkage linkage);
/// Accepts either the long or the short name.
std::optional<Linkage> parse_linkage(std::string_view text);

/// Similarity of cluster i to the union of clusters j and k.
///   single:             max(s_ij, s_ik)
///   complete:           min(s_ij, s_ik)
///   weighted_average:   (s_ij + s_ik) / 2
///   unweighted_average: (s_ij |j| + s_ik |k|) / (|j| + |k|)
double update_similarity(Linkage linkage, double s_ij, double s_ik, std::size_t size_j, std::size_t size_k);

/// Leaves are clusters 0..n-1 in entity order; merge step t (1-based)
/// creates cluster n-1+t.
struct Merge {
    std::size_t step = 0;
    std::size_t left = 0;  // smaller cluster id
    std::size_t right = 0;
    double similarity = 0.0;
    std::size_t new_size = 0;

    bool operator==(const Merge&) const = default;
};

struct Dendrogram {
    std::size_t n = 0;
    Linkage linkage = Linkage::unweighted_average;
    std::vector<Merge> merges;

    bool operator==(const Dendrogram&) const = default;
};

/// Repeatedly merges the most similar pair of clusters. Ties go to the
/// lexicographically smallest (left id, right id). Throws DegenerateInput
/// when n < 2.
Dendrogram cluster(const SimilarityMatrix& sim, Linkage linkage);

struct ClusterAssignment {
    std::vector<std::size_t> labels;  // per entity index
    std::size_t k = 0;

    bool operator==(const ClusterAssignment&) const = default;
};

/// Undoes the last k-1 merges. Labels are numbered by each cluster's smallest
/// member index. Throws std::invalid_argument unless 1 <= k <= n.
ClusterAssignment cut_k(const Dendrogram& d, std::size_t k);

/// Keeps the merges whose similarity is >= threshold.
ClusterAssignment cut_threshold(const Dendrogram& d, double threshold);

/// Newick tree; leaf names are the given labels (entity ids), every internal
/// node carries its merge similarity as branch annotation.
std::string to_newick(const Dendrogram& d, std::span<const std::string> leaf_names);

/// DOT digraph of the merge tree: 2n-1 nodes, 2n-2 edges.
std::string to_dot(const Dendrogram& d, std::span<const std::string> leaf_names);

/// JSON document {"n", "linkage", "leaves", "merges": [...]}.
std::string to_json(const Dendrogram& d, std::span<const std::string> leaf_names);

}  // namespace p2n
