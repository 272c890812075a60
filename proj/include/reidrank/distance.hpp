#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "reidrank/tracklet.hpp"

namespace reidrank {

/// Dense query-by-gallery dissimilarity matrix with the tracklet ids of both
/// axes. Entries are squared Euclidean distances unless derived otherwise.
struct DistanceMatrix {
    MatrixRd values;
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;
};

/// All-pairs squared Euclidean distances between the rows of a and the rows
/// of b. Entries are clamped at 0 to absorb floating-point cancellation.
/// Deterministic for any thread count.
MatrixRd pairwise_sq_euclidean(const MatrixRd& a, const MatrixRd& b);

/// Squared Euclidean distances between pooled queries (rows) and pooled
/// gallery embeddings (columns).
DistanceMatrix feature_distances(const EvalSplit& split);

/// Derived entrywise-sqrt view; ranking-equivalent to the squared form.
DistanceMatrix unsquared(DistanceMatrix dist);

/// Binary dump: <prefix>.bin holds little-endian float64, row-major; the
/// <prefix>.json sidecar holds rows/cols and the axis ids.
void save_matrix(const DistanceMatrix& dist, const std::filesystem::path& prefix);
DistanceMatrix load_matrix(const std::filesystem::path& prefix);

}  // namespace reidrank
