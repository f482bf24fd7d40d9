#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "p2n/ingest.hpp"
#include "p2n/model.hpp"

namespace p2n {

struct AttributeSchema {
    std::vector<std::string> names;

    std::size_t dimension() const { return names.size(); }
    bool operator==(const AttributeSchema&) const = default;
};

/// Dense row-major n x l matrix; row i belongs to entity index i.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(AttributeSchema schema, std::size_t rows, std::vector<double> values, bool standardized);

    const AttributeSchema& schema() const { return schema_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return schema_.dimension(); }
    bool standardized() const { return standardized_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols(), cols()}; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
    std::span<const double> values() const { return values_; }

    bool operator==(const FeatureMatrix&) const = default;

private:
    AttributeSchema schema_;
    std::size_t rows_ = 0;
    std::vector<double> values_;
    bool standardized_ = false;
};

struct RelationWeights {
    double part = 1.0;
    double subclass = 1.0;
    double ref = 1.0;

    double of(RelType type) const;
};

/// Symmetric weighted adjacency row per entity (columns "adj:<id>") followed
/// by one column per user attribute name ("attr:<name>", absent values 0).
FeatureMatrix extract_structural_features(const SoftwareGraph& graph, const RelationWeights& weights,
                                          std::span<const UserAttribute> attributes = {});

struct StandardizedFeatures {
    FeatureMatrix matrix;
    std::vector<std::string> dropped;  // names of constant columns removed
};

/// Z-scores every non-constant column with its mean and population standard
/// deviation and drops constant columns. Throws DegenerateInput when no
/// column survives.
StandardizedFeatures standardize(const FeatureMatrix& m);

}  // namespace p2n
