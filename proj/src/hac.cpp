#include "p2n/hac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "p2n/errors.hpp"

namespace p2n {

std::string_view to_string(Linkage linkage) {
    switch (linkage) {
        case Linkage::single: return "single";
        case Linkage::complete: return "complete";
        case Linkage::weighted_average: return "weighted_average";
        case Linkage::unweighted_average: return "unweighted_average";
    }
    return "?";
}

std::string_view short_name(Linkage linkage) {
    switch (linkage) {
        case Linkage::single: return "single";
        case Linkage::complete: return "complete";
        case Linkage::weighted_average: return "wavg";
        case Linkage::unweighted_average: return "uavg";
    }
    return "?";
}

std::optional<Linkage> parse_linkage(std::string_view text) {
    for (Linkage l : kAllLinkages) {
        if (text == to_string(l) || text == short_name(l)) return l;
    }
    return std::nullopt;
}

double update_similarity(Linkage linkage, double s_ij, double s_ik, std::size_t size_j, std::size_t size_k) {
    switch (linkage) {
        case Linkage::single: return std::max(s_ij, s_ik);
        case Linkage::complete: return std::min(s_ij, s_ik);
        case Linkage::weighted_average: return (s_ij + s_ik) / 2.0;
        case Linkage::unweighted_average: {
            const double wj = static_cast<double>(size_j), wk = static_cast<double>(size_k);
            return (s_ij * wj + s_ik * wk) / (wj + wk);
        }
    }
    return 0.0;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Working state of one clustering run. Slots hold the live clusters; a merge
// reuses the slot of one side and retires the other. best_[i] caches the
// preferred partner of slot i so a step usually costs O(n) instead of O(n^2).
class Agglomerator {
public:
    Agglomerator(const SimilarityMatrix& sim, Linkage linkage)
        : n_(sim.size()), linkage_(linkage), s_(n_ * n_, 0.0), id_(n_), size_(n_, 1), active_(n_, true),
          best_(n_, kNone) {
        for (std::size_t i = 0; i < n_; ++i) {
            id_[i] = i;
            for (std::size_t j = i + 1; j < n_; ++j) s_[i * n_ + j] = s_[j * n_ + i] = sim.at(i, j);
        }
        for (std::size_t i = 0; i < n_; ++i) refresh(i);
    }

    Dendrogram run() {
        Dendrogram d{n_, linkage_, {}};
        d.merges.reserve(n_ - 1);
        for (std::size_t step = 1; step < n_; ++step) {
            std::size_t a = kNone;
            for (std::size_t i = 0; i < n_; ++i) {
                if (!active_[i] || best_[i] == kNone) continue;
                if (a == kNone || prefer(i, best_[i], a, best_[a])) a = i;
            }
            const std::size_t b = best_[a];
            const double s_ab = at(a, b);
            const std::size_t new_id = n_ - 1 + step;
            d.merges.push_back({step, std::min(id_[a], id_[b]), std::max(id_[a], id_[b]), s_ab,
                                size_[a] + size_[b]});

            for (std::size_t k = 0; k < n_; ++k) {
                if (!active_[k] || k == a || k == b) continue;
                const double v = update_similarity(linkage_, at(k, a), at(k, b), size_[a], size_[b]);
                s_[k * n_ + a] = s_[a * n_ + k] = v;
            }
            active_[b] = false;
            best_[b] = kNone;
            id_[a] = new_id;
            size_[a] += size_[b];

            refresh(a);
            for (std::size_t k = 0; k < n_; ++k) {
                if (!active_[k] || k == a) continue;
                if (best_[k] == a || best_[k] == b) {
                    refresh(k);
                } else if (prefer(k, a, k, best_[k])) {
                    best_[k] = a;
                }
            }
        }
        return d;
    }

private:
    double at(std::size_t i, std::size_t j) const { return s_[i * n_ + j]; }

    std::pair<std::size_t, std::size_t> key(std::size_t i, std::size_t j) const {
        return std::minmax(id_[i], id_[j]);
    }

    // Is pair (i, j) preferred over pair (k, l)? Higher similarity first, then
    // the smaller (left id, right id).
    bool prefer(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        if (l == kNone) return true;
        const double x = at(i, j), y = at(k, l);
        if (x != y) return x > y;
        return key(i, j) < key(k, l);
    }

    void refresh(std::size_t i) {
        best_[i] = kNone;
        for (std::size_t j = 0; j < n_; ++j) {
            if (j == i || !active_[j]) continue;
            if (prefer(i, j, i, best_[i])) best_[i] = j;
        }
    }

    std::size_t n_;
    Linkage linkage_;
    std::vector<double> s_;
    std::vector<std::size_t> id_;
    std::vector<std::size_t> size_;
    std::vector<bool> active_;
    std::vector<std::size_t> best_;
};

}  // namespace

Dendrogram cluster(const SimilarityMatrix& sim, Linkage linkage) {
    if (sim.size() < 2) throw DegenerateInput("clustering needs at least 2 entities");
    for (double v : sim.triangle()) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("similarities must be positive and finite");
    }
    return Agglomerator(sim, linkage).run();
}

namespace {

ClusterAssignment apply_merges(const Dendrogram& d, std::size_t count) {
    std::vector<std::size_t> parent(d.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    // Cluster id -> any leaf it contains.
    std::vector<std::size_t> leaf_of(d.n + d.merges.size());
    std::iota(leaf_of.begin(), leaf_of.begin() + static_cast<std::ptrdiff_t>(d.n), 0);
    for (std::size_t t = 0; t < d.merges.size(); ++t) {
        const auto& m = d.merges[t];
        leaf_of[d.n + t] = leaf_of[m.left];
        if (t < count) parent[find(leaf_of[m.right])] = find(leaf_of[m.left]);
    }

    ClusterAssignment out;
    out.labels.assign(d.n, 0);
    std::vector<std::size_t> label_of_root(d.n, kNone);
    for (std::size_t i = 0; i < d.n; ++i) {
        std::size_t& lbl = label_of_root[find(i)];
        if (lbl == kNone) lbl = out.k++;
        out.labels[i] = lbl;
    }
    return out;
}

}  // namespace

ClusterAssignment cut_k(const Dendrogram& d, std::size_t k) {
    if (k < 1 || k > d.n) {
        throw std::invalid_argument("k = " + std::to_string(k) + " is out of range [1, " + std::to_string(d.n) + "]");
    }
    return apply_merges(d, d.n - k);
}

ClusterAssignment cut_threshold(const Dendrogram& d, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    std::size_t kept = 0;
    while (kept < d.merges.size() && d.merges[kept].similarity >= threshold) ++kept;
    return apply_merges(d, kept);
}

}  // namespace p2n
