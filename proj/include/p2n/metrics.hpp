#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "p2n/features.hpp"

namespace p2n {

/// Floor applied to distances before inversion.
inline constexpr double kDistanceFloor = 1e-12;

/// sqrt(sum_h (u_h - v_h)^2), summed in ascending index order.
/// Throws std::invalid_argument on a length mismatch.
double euclidean_distance(std::span<const double> u, std::span<const double> v);

/// 1 / max(d, kDistanceFloor).
double similarity(double distance);

/// Upper-triangular block of similarity rows [row_start, row_end) of an n x n
/// matrix. Row i holds sim(i, j) for j = i+1 .. n-1.
struct SimilarityRows {
    std::size_t n = 0;
    std::size_t row_start = 0;
    std::size_t row_end = 0;
    std::vector<std::vector<double>> rows;
};

/// Symmetric similarity matrix stored as its strict upper triangle.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    explicit SimilarityMatrix(std::size_t n);

    std::size_t size() const { return n_; }

    /// sim(i, j) for i != j, either order.
    double at(std::size_t i, std::size_t j) const { return values_[offset(i, j)]; }
    void set(std::size_t i, std::size_t j, double v) { values_[offset(i, j)] = v; }

    /// Entries j > i of row i.
    std::span<const double> row(std::size_t i) const;

    /// Copies a block of rows into place; throws on a shape mismatch.
    void assign(const SimilarityRows& block);

    std::span<const double> triangle() const { return values_; }
    bool operator==(const SimilarityMatrix&) const = default;

private:
    std::size_t row_offset(std::size_t i) const { return i * n_ - i * (i + 1) / 2; }
    std::size_t offset(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return row_offset(i) + (j - i - 1);
    }

    std::size_t n_ = 0;
    std::vector<double> values_;
};

/// Similarity rows [row_start, row_end) of a standardized feature matrix.
/// Throws std::invalid_argument if the matrix is not standardized or the
/// range is empty or out of bounds.
SimilarityRows similarity_rows(const FeatureMatrix& m, std::size_t row_start, std::size_t row_end);

/// Full matrix, optionally split across `threads` row ranges. The result does
/// not depend on the thread count.
SimilarityMatrix similarity_matrix(const FeatureMatrix& m, unsigned threads = 1);

}  // namespace p2n
