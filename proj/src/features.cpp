#include "p2n/features.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "p2n/errors.hpp"

namespace p2n {

FeatureMatrix::FeatureMatrix(AttributeSchema schema, std::size_t rows, std::vector<double> values,
                             bool standardized)
    : schema_(std::move(schema)), rows_(rows), values_(std::move(values)), standardized_(standardized) {
    if (values_.size() != rows_ * schema_.dimension()) {
        throw std::invalid_argument("feature matrix shape does not match its value count");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("feature matrix values must be finite");
    }
}

double RelationWeights::of(RelType type) const {
    switch (type) {
        case RelType::part: return part;
        case RelType::subclass: return subclass;
        case RelType::ref: return ref;
    }
    return 0.0;
}

FeatureMatrix extract_structural_features(const SoftwareGraph& graph, const RelationWeights& weights,
                                          std::span<const UserAttribute> attributes) {
    const std::size_t n = graph.size();

    std::map<std::string, std::size_t> attr_col;
    for (const auto& a : attributes) attr_col.emplace(a.name, 0);

    AttributeSchema schema;
    schema.names.reserve(n + attr_col.size());
    for (const auto& e : graph.entities()) schema.names.push_back("adj:" + e.id);
    for (auto& [name, col] : attr_col) {
        col = schema.names.size();
        schema.names.push_back("attr:" + name);
    }
    const std::size_t l = schema.names.size();

    std::vector<double> values(n * l, 0.0);
    for (const auto& r : graph.relationships()) {
        auto s = graph.index_of(r.src), d = graph.index_of(r.dst);
        if (!s || !d) throw std::invalid_argument("relationship endpoint not in graph: " + r.src + " -> " + r.dst);
        if (*s == *d) continue;
        const double w = weights.of(r.type);
        values[*s * l + *d] += w;
        values[*d * l + *s] += w;
    }
    for (const auto& a : attributes) {
        auto i = graph.index_of(a.entity_id);
        if (!i) throw std::invalid_argument("attribute for unknown entity: " + a.entity_id);
        values[*i * l + attr_col.at(a.name)] = a.value;
    }
    return FeatureMatrix(std::move(schema), n, std::move(values), false);
}

StandardizedFeatures standardize(const FeatureMatrix& m) {
    if (m.standardized()) throw std::invalid_argument("feature matrix is already standardized");
    const std::size_t n = m.rows(), l = m.cols();
    const double count = static_cast<double>(n);

    struct ColumnStats {
        std::size_t col;
        double mean;
        double sd;
    };
    std::vector<ColumnStats> kept;
    StandardizedFeatures out;

    for (std::size_t j = 0; j < l; ++j) {
        bool constant = true;
        for (std::size_t i = 1; i < n && constant; ++i) constant = m.at(i, j) == m.at(0, j);
        if (!constant) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += m.at(i, j);
            double mean = sum / count;
            // Second pass removes the rounding error of the first mean.
            double resid = 0.0;
            for (std::size_t i = 0; i < n; ++i) resid += m.at(i, j) - mean;
            mean += resid / count;
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = m.at(i, j) - mean;
                ss += d * d;
            }
            const double sd = std::sqrt(ss / count);
            if (sd > 0.0 && std::isfinite(sd)) {
                kept.push_back({j, mean, sd});
                continue;
            }
        }
        out.dropped.push_back(m.schema().names[j]);
    }
    if (kept.empty()) throw DegenerateInput("no informative attributes");

    AttributeSchema schema;
    for (const auto& k : kept) schema.names.push_back(m.schema().names[k.col]);
    std::vector<double> values(n * kept.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < kept.size(); ++c) {
            values[i * kept.size() + c] = (m.at(i, kept[c].col) - kept[c].mean) / kept[c].sd;
        }
    }
    out.matrix = FeatureMatrix(std::move(schema), n, std::move(values), true);
    return out;
}

}  // namespace p2n
