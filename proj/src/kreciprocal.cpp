#include "reidrank/kreciprocal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "reidrank/errors.hpp"
#include "reidrank/parallel.hpp"

namespace reidrank {

namespace {
constexpr std::ptrdiff_t kItemChunk = 64;

// Sparse weighted set encoding: (item index, weight), sorted by index.
using SparseRow = std::vector<std::pair<int, double>>;

bool contains_in_top(const std::vector<int>& ranked, int limit, int item) {
    const int n = std::min<int>(limit, static_cast<int>(ranked.size()));
    for (int i = 0; i < n; ++i) {
        if (ranked[i] == item) return true;
    }
    return false;
}

// |a ∩ b| for index-sorted vectors.
std::size_t sorted_intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t count = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++count;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return count;
}

}  // namespace

void RerankConfig::validate() const {
    if (k1 < 1) throw ConfigError("k1 must be >= 1, got " + std::to_string(k1));
    if (k2 < 1) throw ConfigError("k2 must be >= 1, got " + std::to_string(k2));
    if (k2 > k1) {
        throw ConfigError("k2=" + std::to_string(k2) + " must not exceed k1=" + std::to_string(k1));
    }
    if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) {
        throw ConfigError("lambda1 must lie in [0, 1], got " + std::to_string(lambda1));
    }
    if (!(lambda2 >= 0.0)) {
        throw ConfigError("lambda2 must be >= 0, got " + std::to_string(lambda2));
    }
    if (num_groups < 1) {
        throw ConfigError("group count L must be >= 1, got " + std::to_string(num_groups));
    }
}

NeighborSets reciprocal_sets_from_distances(const MatrixRd& all_sq_dist, int k1) {
    const Eigen::Index n = all_sq_dist.rows();
    if (all_sq_dist.cols() != n) {
        throw DataError("population distance matrix must be square, got " + std::to_string(n) +
                        "x" + std::to_string(all_sq_dist.cols()));
    }
    if (k1 < 1) throw ConfigError("k1 must be >= 1, got " + std::to_string(k1));
    if (n < k1 + 1) {
        throw ConfigError("population of " + std::to_string(n) +
                          " items is smaller than k1+1 = " + std::to_string(k1 + 1));
    }

    NeighborSets sets;
    sets.k1 = k1;
    sets.knn.resize(n);
    sets.kr.resize(n);
    sets.kr_expanded.resize(n);

    // k1 nearest other items per probe, ties broken by ascending index.
    parallel_chunks(n, kItemChunk, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        std::vector<int> order(n - 1);
        for (std::ptrdiff_t i = begin; i < end; ++i) {
            int pos = 0;
            for (int j = 0; j < n; ++j) {
                if (j != i) order[pos++] = j;
            }
            auto closer = [&](int a, int b) {
                const double da = all_sq_dist(i, a), db = all_sq_dist(i, b);
                return da < db || (da == db && a < b);
            };
            std::partial_sort(order.begin(), order.begin() + k1, order.end(), closer);
            sets.knn[i].assign(order.begin(), order.begin() + k1);
        }
    });

    const int k_half = (k1 + 1) / 2;
    auto mutual_set = [&](int i, int k) {
        std::vector<int> r;
        for (int g = 0; g < k; ++g) {
            const int cand = sets.knn[i][g];
            if (contains_in_top(sets.knn[cand], k, i)) r.push_back(cand);
        }
        std::sort(r.begin(), r.end());
        return r;
    };

    std::vector<std::vector<int>> kr_half(n);
    parallel_chunks(n, kItemChunk, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        for (std::ptrdiff_t i = begin; i < end; ++i) {
            sets.kr[i] = mutual_set(static_cast<int>(i), k1);
            kr_half[i] = mutual_set(static_cast<int>(i), k_half);
        }
    });

    // Expansion: absorb R(g, ceil(k1/2)) when it overlaps R(p, k1) by >= 2/3.
    parallel_chunks(n, kItemChunk, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        for (std::ptrdiff_t i = begin; i < end; ++i) {
            std::vector<int> expanded = sets.kr[i];
            for (int g : sets.kr[i]) {
                const auto& half = kr_half[g];
                if (3 * sorted_intersection_size(sets.kr[i], half) >= 2 * half.size()) {
                    expanded.insert(expanded.end(), half.begin(), half.end());
                }
            }
            std::sort(expanded.begin(), expanded.end());
            expanded.erase(std::unique(expanded.begin(), expanded.end()), expanded.end());
            sets.kr_expanded[i] = std::move(expanded);
        }
    });
    return sets;
}

NeighborSets reciprocal_sets(const MatrixRd& pooled_population, int k1) {
    return reciprocal_sets_from_distances(
        pairwise_sq_euclidean(pooled_population, pooled_population), k1);
}

MatrixRd jaccard_distances(const NeighborSets& sets, const MatrixRd& all_sq_dist,
                           int num_probes, int k2, bool use_expanded) {
    const Eigen::Index n = all_sq_dist.rows();
    if (all_sq_dist.cols() != n || static_cast<Eigen::Index>(sets.knn.size()) != n) {
        throw DataError("neighbor sets and distance matrix describe different populations");
    }
    if (num_probes < 1 || num_probes >= n) {
        throw DataError("probe count " + std::to_string(num_probes) +
                        " must leave at least one reference item in a population of " +
                        std::to_string(n));
    }
    if (k2 < 1) throw ConfigError("k2 must be >= 1, got " + std::to_string(k2));
    if (k2 > sets.k1) {
        throw ConfigError("k2=" + std::to_string(k2) + " must not exceed k1=" +
                          std::to_string(sets.k1));
    }

    // Membership weight exp(-d); indices stay sorted because the sets are.
    std::vector<SparseRow> encoding(n);
    parallel_chunks(n, kItemChunk, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        for (std::ptrdiff_t i = begin; i < end; ++i) {
            const auto& members = use_expanded ? sets.kr_expanded[i] : sets.kr[i];
            encoding[i].reserve(members.size());
            for (int g : members) {
                encoding[i].emplace_back(g, std::exp(-all_sq_dist(i, g)));
            }
        }
    });

    // Local query expansion: average the encoding over the item itself plus
    // its k2 - 1 nearest neighbors. k2 = 1 keeps the encoding unchanged.
    const std::vector<SparseRow>* rows = &encoding;
    std::vector<SparseRow> expanded_rows;
    if (k2 > 1) {
        expanded_rows.resize(n);
        parallel_chunks(n, kItemChunk, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
            for (std::ptrdiff_t i = begin; i < end; ++i) {
                std::map<int, double> acc;
                for (const auto& [idx, w] : encoding[i]) acc[idx] += w;
                for (int m = 0; m + 1 < k2; ++m) {
                    for (const auto& [idx, w] : encoding[sets.knn[i][m]]) acc[idx] += w;
                }
                const double inv = 1.0 / static_cast<double>(k2);
                expanded_rows[i].reserve(acc.size());
                for (const auto& [idx, w] : acc) expanded_rows[i].emplace_back(idx, w * inv);
            }
        });
        rows = &expanded_rows;
    }

    const Eigen::Index num_refs = n - num_probes;
    MatrixRd out(num_probes, num_refs);
    parallel_chunks(num_probes, kItemChunk, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        for (std::ptrdiff_t i = begin; i < end; ++i) {
            const SparseRow& a = (*rows)[i];
            for (Eigen::Index j = 0; j < num_refs; ++j) {
                const SparseRow& b = (*rows)[num_probes + j];
                double min_sum = 0.0, max_sum = 0.0;
                std::size_t p = 0, q = 0;
                while (p < a.size() && q < b.size()) {
                    if (a[p].first == b[q].first) {
                        min_sum += std::min(a[p].second, b[q].second);
                        max_sum += std::max(a[p].second, b[q].second);
                        ++p;
                        ++q;
                    } else if (a[p].first < b[q].first) {
                        max_sum += a[p].second;
                        ++p;
                    } else {
                        max_sum += b[q].second;
                        ++q;
                    }
                }
                for (; p < a.size(); ++p) max_sum += a[p].second;
                for (; q < b.size(); ++q) max_sum += b[q].second;
                const double d = max_sum > 0.0 ? 1.0 - min_sum / max_sum : 1.0;
                out(i, j) = std::clamp(d, 0.0, 1.0);
            }
        }
    });
    return out;
}

MatrixRd fuse(const MatrixRd& base, const MatrixRd& jacc, double lambda1) {
    if (base.rows() != jacc.rows() || base.cols() != jacc.cols()) {
        throw DataError("fuse shape mismatch: " + std::to_string(base.rows()) + "x" +
                        std::to_string(base.cols()) + " vs " + std::to_string(jacc.rows()) + "x" +
                        std::to_string(jacc.cols()));
    }
    if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) {
        throw ConfigError("lambda1 must lie in [0, 1], got " + std::to_string(lambda1));
    }
    if (lambda1 == 1.0) return base;
    if (lambda1 == 0.0) return jacc;
    return lambda1 * base + (1.0 - lambda1) * jacc;
}

DistanceMatrix fuse(const DistanceMatrix& base, const DistanceMatrix& jacc, double lambda1) {
    if (base.row_ids != jacc.row_ids || base.col_ids != jacc.col_ids) {
        throw DataError("fuse inputs index different tracklets");
    }
    return {fuse(base.values, jacc.values, lambda1), base.row_ids, base.col_ids};
}

RerankOutput rerank_kreciprocal(const EvalSplit& split, const RerankConfig& config) {
    config.validate();
    validate(split);

    const MatrixRd queries = pooled_matrix(split.queries);
    const MatrixRd gallery = pooled_matrix(split.gallery);
    const Eigen::Index m = queries.rows();
    const Eigen::Index n = gallery.rows();
    MatrixRd population(m + n, queries.cols());
    population.topRows(m) = queries;
    population.bottomRows(n) = gallery;

    const MatrixRd all_dist = pairwise_sq_euclidean(population, population);
    const NeighborSets sets = reciprocal_sets_from_distances(all_dist, config.k1);

    RerankOutput out;
    out.feature.values = all_dist.block(0, m, m, n);
    for (const auto& r : split.queries) out.feature.row_ids.push_back(r.tracklet_id);
    for (const auto& r : split.gallery) out.feature.col_ids.push_back(r.tracklet_id);

    out.jaccard.values = jaccard_distances(sets, all_dist, static_cast<int>(m), config.k2,
                                           config.use_expanded_sets);
    out.jaccard.row_ids = out.feature.row_ids;
    out.jaccard.col_ids = out.feature.col_ids;

    out.reranked = fuse(out.feature, out.jaccard, config.lambda1);
    return out;
}

}  // namespace reidrank
