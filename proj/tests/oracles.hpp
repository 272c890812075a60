#pragma once

// Brute-force reference implementations used as oracles. Everything here is
// computed from first principles with scalar loops and explicit materialized
// sets, independent of the library's optimized code paths.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "reidrank/tracklet.hpp"

namespace oracle {

using reidrank::MatrixRd;

// Per-column mean of a float frame matrix, scalar accumulation in double.
inline std::vector<double> column_means(const reidrank::FrameMatrix& frames, int row_begin,
                                        int row_end) {
    std::vector<double> means(frames.cols(), 0.0);
    for (int t = row_begin; t < row_end; ++t) {
        for (int d = 0; d < frames.cols(); ++d) {
            means[d] += static_cast<double>(frames(t, d));
        }
    }
    for (auto& m : means) m /= (row_end - row_begin);
    return means;
}

inline std::vector<double> column_means(const reidrank::FrameMatrix& frames) {
    return column_means(frames, 0, static_cast<int>(frames.rows()));
}

// Group sizes for the "remainder to earliest groups" contiguous partition.
inline std::vector<int> group_sizes(int total, int groups) {
    std::vector<int> sizes(groups);
    for (int l = 0; l < groups; ++l) {
        sizes[l] = (total + groups - 1 - l) / groups;
    }
    return sizes;
}

inline double sq_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double sum = 0.0;
    for (Eigen::Index d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sum += diff * diff;
    }
    return sum;
}

// All-pairs squared distances between rows, triple scalar loop.
inline MatrixRd all_pairs_sq(const MatrixRd& a, const MatrixRd& b) {
    MatrixRd out(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
            double sum = 0.0;
            for (Eigen::Index d = 0; d < a.cols(); ++d) {
                const double diff = a(i, d) - b(j, d);
                sum += diff * diff;
            }
            out(i, j) = sum;
        }
    }
    return out;
}

// All other items ranked by (distance, index).
inline std::vector<int> ranked_neighbors(const MatrixRd& dist, int i) {
    std::vector<int> order;
    for (int j = 0; j < dist.rows(); ++j) {
        if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (dist(i, a) != dist(i, b)) return dist(i, a) < dist(i, b);
        return a < b;
    });
    return order;
}

inline std::set<int> knn_set(const MatrixRd& dist, int i, int k) {
    const auto order = ranked_neighbors(dist, i);
    return {order.begin(), order.begin() + std::min<std::size_t>(k, order.size())};
}

inline std::set<int> reciprocal_set(const MatrixRd& dist, int i, int k) {
    std::set<int> out;
    for (int g : knn_set(dist, i, k)) {
        if (knn_set(dist, g, k).count(i)) out.insert(g);
    }
    return out;
}

inline std::set<int> expanded_set(const MatrixRd& dist, int i, int k1) {
    const std::set<int> base = reciprocal_set(dist, i, k1);
    const int k_half = (k1 + 1) / 2;
    std::set<int> expanded = base;
    for (int g : base) {
        const std::set<int> half = reciprocal_set(dist, g, k_half);
        std::size_t overlap = 0;
        for (int x : half) overlap += base.count(x);
        if (3 * overlap >= 2 * half.size()) {
            expanded.insert(half.begin(), half.end());
        }
    }
    return expanded;
}

// Materialized weighted set: member -> exp(-distance).
inline std::map<int, double> weighted_set(const MatrixRd& dist, int i, int k1,
                                          bool use_expanded) {
    const std::set<int> members =
        use_expanded ? expanded_set(dist, i, k1) : reciprocal_set(dist, i, k1);
    std::map<int, double> out;
    for (int g : members) out[g] = std::exp(-dist(i, g));
    return out;
}

// Encoding after local query expansion: mean of the weighted sets of the item
// itself and its k2 - 1 nearest neighbors.
inline std::map<int, double> expanded_encoding(const MatrixRd& dist, int i, int k1, int k2,
                                               bool use_expanded) {
    std::vector<int> sources = {i};
    const auto order = ranked_neighbors(dist, i);
    for (int m = 0; m + 1 < k2; ++m) sources.push_back(order[m]);
    std::map<int, double> acc;
    for (int src : sources) {
        for (const auto& [g, w] : weighted_set(dist, src, k1, use_expanded)) acc[g] += w;
    }
    for (auto& [g, w] : acc) w /= k2;
    return acc;
}

inline double jaccard_pair(const std::map<int, double>& a, const std::map<int, double>& b) {
    std::set<int> keys;
    for (const auto& [g, w] : a) keys.insert(g);
    for (const auto& [g, w] : b) keys.insert(g);
    double min_sum = 0.0, max_sum = 0.0;
    for (int g : keys) {
        const auto ia = a.find(g);
        const auto ib = b.find(g);
        const double wa = ia == a.end() ? 0.0 : ia->second;
        const double wb = ib == b.end() ? 0.0 : ib->second;
        min_sum += std::min(wa, wb);
        max_sum += std::max(wa, wb);
    }
    if (max_sum <= 0.0) return 1.0;
    return 1.0 - min_sum / max_sum;
}

// Full materialized-set Jaccard pipeline over a population whose first
// num_probes items are probes and the rest references.
inline MatrixRd jaccard_matrix(const MatrixRd& all_dist, int num_probes, int k1, int k2,
                               bool use_expanded) {
    const int n = static_cast<int>(all_dist.rows());
    std::vector<std::map<int, double>> encodings(n);
    for (int i = 0; i < n; ++i) {
        encodings[i] = expanded_encoding(all_dist, i, k1, k2, use_expanded);
    }
    MatrixRd out(num_probes, n - num_probes);
    for (int i = 0; i < num_probes; ++i) {
        for (int j = 0; j < n - num_probes; ++j) {
            out(i, j) = jaccard_pair(encodings[i], encodings[num_probes + j]);
        }
    }
    return out;
}

// Group-mean matrix (rows = records) for temporal group l of L.
inline MatrixRd group_pooled(const std::vector<reidrank::TrackletRecord>& records, int groups,
                             int group) {
    MatrixRd out(static_cast<Eigen::Index>(records.size()), records.front().frames.cols());
    for (std::size_t r = 0; r < records.size(); ++r) {
        const int t = static_cast<int>(records[r].frames.rows());
        const auto sizes = group_sizes(t, groups);
        int begin = 0;
        for (int l = 0; l < group; ++l) begin += sizes[l];
        const auto means = column_means(records[r].frames, begin, begin + sizes[group]);
        for (Eigen::Index d = 0; d < out.cols(); ++d) out(static_cast<Eigen::Index>(r), d) = means[d];
    }
    return out;
}

// Cross-temporal distances rebuilt from scratch per group pair.
inline MatrixRd cross_temporal_matrix(const reidrank::EvalSplit& split, int groups, int k1,
                                      int k2, bool use_expanded) {
    const int m = static_cast<int>(split.queries.size());
    const int n = static_cast<int>(split.gallery.size());
    MatrixRd sum = MatrixRd::Zero(m, n);
    for (int l = 0; l < groups; ++l) {
        const MatrixRd q = group_pooled(split.queries, groups, l);
        const MatrixRd g = group_pooled(split.gallery, groups, groups - 1 - l);
        MatrixRd pop(m + n, q.cols());
        pop.topRows(m) = q;
        pop.bottomRows(n) = g;
        const MatrixRd all_dist = all_pairs_sq(pop, pop);
        sum += jaccard_matrix(all_dist, m, k1, k2, use_expanded);
    }
    return sum;
}

inline std::uint64_t fnv1a(const unsigned char* data, std::size_t size) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= data[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace oracle
