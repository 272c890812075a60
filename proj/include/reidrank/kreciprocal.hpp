#pragma once

#include <vector>

#include "reidrank/distance.hpp"
#include "reidrank/tracklet.hpp"

namespace reidrank {

struct RerankConfig {
    int k1 = 5;
    int k2 = 3;
    double lambda1 = 0.8;
    double lambda2 = 0.1;
    int num_groups = 2;              // L, temporal group count
    bool use_expanded_sets = true;   // Jaccard over expanded sets R*, plain R if false

    void validate() const;           // throws ConfigError
};

/// Mutual nearest-neighbor structure over one item population. Item order is
/// probes first, then references; sets span the whole population.
struct NeighborSets {
    int k1 = 0;
    /// Per item: its k1 nearest other items, ascending by (distance, index).
    std::vector<std::vector<int>> knn;
    /// Per item: the k-reciprocal set R(p, k1), sorted by item index.
    std::vector<std::vector<int>> kr;
    /// Per item: the expanded set R*(p), sorted by item index.
    std::vector<std::vector<int>> kr_expanded;
};

/// Mutual k-nearest-neighbor sets over the population given its all-pairs
/// squared distances. Ties are broken by ascending item index. Expansion
/// merges R(g, ceil(k1/2)) of every g in R(p, k1) whose overlap with R(p, k1)
/// covers at least two thirds of R(g, ceil(k1/2)).
/// Requires a square matrix and population size >= k1 + 1.
NeighborSets reciprocal_sets_from_distances(const MatrixRd& all_sq_dist, int k1);

/// Same, computing the population distances from stacked pooled embeddings.
NeighborSets reciprocal_sets(const MatrixRd& pooled_population, int k1);

/// Soft-set Jaccard distances between the first num_probes items (rows) and
/// the remaining items (columns). Set membership weight is exp(-d) of the
/// base squared distance; intersection/union are elementwise min/max sums.
/// Each encoding is first averaged over the item itself plus its k2 - 1
/// nearest neighbors (k2 = 1 disables the expansion). Entries lie in [0, 1].
MatrixRd jaccard_distances(const NeighborSets& sets, const MatrixRd& all_sq_dist,
                           int num_probes, int k2, bool use_expanded = true);

/// Elementwise lambda1 * base + (1 - lambda1) * jacc.
MatrixRd fuse(const MatrixRd& base, const MatrixRd& jacc, double lambda1);
DistanceMatrix fuse(const DistanceMatrix& base, const DistanceMatrix& jacc, double lambda1);

/// Instance-level pipeline output; temporal_rerank reuses the same shape.
struct RerankOutput {
    DistanceMatrix feature;   // raw squared feature distances
    DistanceMatrix jaccard;   // instance-level soft-set Jaccard distances
    DistanceMatrix reranked;  // fused result
};

/// Full instance-level k-reciprocal re-ranking of a split: pooled population
/// distances, reciprocal sets, Jaccard and weighted fusion.
RerankOutput rerank_kreciprocal(const EvalSplit& split, const RerankConfig& config);

}  // namespace reidrank
