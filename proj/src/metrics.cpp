#include "p2n/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace p2n {

double euclidean_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("vector length mismatch: " + std::to_string(u.size()) + " vs " +
                                    std::to_string(v.size()));
    }
    double sum = 0.0;
    for (std::size_t h = 0; h < u.size(); ++h) {
        const double d = u[h] - v[h];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double similarity(double distance) { return 1.0 / std::max(distance, kDistanceFloor); }

SimilarityMatrix::SimilarityMatrix(std::size_t n) : n_(n), values_(n < 2 ? 0 : n * (n - 1) / 2, 0.0) {}

std::span<const double> SimilarityMatrix::row(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("similarity row out of range");
    return {values_.data() + row_offset(i), n_ - i - 1};
}

void SimilarityMatrix::assign(const SimilarityRows& block) {
    if (block.n != n_ || block.row_end > n_ || block.row_start >= block.row_end ||
        block.rows.size() != block.row_end - block.row_start) {
        throw std::invalid_argument("similarity block does not fit the matrix");
    }
    for (std::size_t i = block.row_start; i < block.row_end; ++i) {
        const auto& src = block.rows[i - block.row_start];
        if (src.size() != n_ - i - 1) throw std::invalid_argument("similarity row has the wrong length");
        std::copy(src.begin(), src.end(), values_.begin() + static_cast<std::ptrdiff_t>(row_offset(i)));
    }
}

SimilarityRows similarity_rows(const FeatureMatrix& m, std::size_t row_start, std::size_t row_end) {
    if (!m.standardized()) throw std::invalid_argument("similarity rows need a standardized feature matrix");
    const std::size_t n = m.rows();
    if (row_start >= row_end || row_end > n) {
        throw std::invalid_argument("row range [" + std::to_string(row_start) + ", " + std::to_string(row_end) +
                                    ") is invalid for n = " + std::to_string(n));
    }
    SimilarityRows out{n, row_start, row_end, {}};
    out.rows.reserve(row_end - row_start);
    for (std::size_t i = row_start; i < row_end; ++i) {
        std::vector<double> row;
        row.reserve(n - i - 1);
        for (std::size_t j = i + 1; j < n; ++j) row.push_back(similarity(euclidean_distance(m.row(i), m.row(j))));
        out.rows.push_back(std::move(row));
    }
    return out;
}

SimilarityMatrix similarity_matrix(const FeatureMatrix& m, unsigned threads) {
    const std::size_t n = m.rows();
    SimilarityMatrix out(n);
    if (n < 2) return out;
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(n));
    if (threads == 1) {
        out.assign(similarity_rows(m, 0, n));
        return out;
    }

    // Early rows are longer; split on equal triangle area rather than row count.
    std::vector<std::size_t> bounds{0};
    const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    std::size_t i = 0;
    double acc = 0.0;
    for (unsigned t = 1; t < threads; ++t) {
        const double target = total * t / threads;
        while (i < n && acc < target) acc += static_cast<double>(n - 1 - i++);
        if (i > bounds.back() && i < n) bounds.push_back(i);
    }
    bounds.push_back(n);

    std::vector<SimilarityRows> blocks(bounds.size() - 1);
    {
        std::vector<std::jthread> workers;
        for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
            workers.emplace_back([&, b] { blocks[b] = similarity_rows(m, bounds[b], bounds[b + 1]); });
        }
    }
    for (const auto& block : blocks) out.assign(block);
    return out;
}

}  // namespace p2n
