#pragma once

#include "reidrank/kreciprocal.hpp"

namespace reidrank {

/// Sum of L per-group-pair Jaccard matrices; entries lie in [0, L].
struct CrossTemporalMatrix {
    MatrixRd values;
    int num_groups = 0;
};

/// Cross-temporal operation: every tracklet is split into L temporal groups
/// and for each l a full k-reciprocal Jaccard pipeline runs over the
/// population of query group-l and gallery group-(L-1-l) sub-embeddings; the
/// L Jaccard matrices are summed in group order.
/// Requires every tracklet to have at least L frames.
CrossTemporalMatrix cross_temporal(const EvalSplit& split, const RerankConfig& config);

/// Three-term fusion: lambda1 * d_feat + (1 - lambda1) * d_jacc
/// + lambda2 * d_cross. With lambda2 = 0 the cross term is skipped and the
/// output equals the instance-level pipeline bit for bit.
RerankOutput temporal_rerank(const EvalSplit& split, const RerankConfig& config);

}  // namespace reidrank
