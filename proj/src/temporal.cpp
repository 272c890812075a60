#include "reidrank/temporal.hpp"

#include <string>

#include "reidrank/errors.hpp"

namespace reidrank {

CrossTemporalMatrix cross_temporal(const EvalSplit& split, const RerankConfig& config) {
    config.validate();
    validate(split);
    const int num_groups = config.num_groups;
    auto check_length = [&](const TrackletRecord& r) {
        if (r.frames.rows() < num_groups) {
            throw DataError("tracklet '" + r.tracklet_id + "' has " +
                            std::to_string(r.frames.rows()) + " frames, fewer than L=" +
                            std::to_string(num_groups) + " temporal groups");
        }
    };
    for (const auto& r : split.queries) check_length(r);
    for (const auto& r : split.gallery) check_length(r);

    const Eigen::Index m = static_cast<Eigen::Index>(split.queries.size());
    const Eigen::Index n = static_cast<Eigen::Index>(split.gallery.size());

    CrossTemporalMatrix cross;
    cross.num_groups = num_groups;
    cross.values = MatrixRd::Zero(m, n);
    // Query group l is paired with gallery group L-1-l; groups are summed in
    // fixed order so the reduction is deterministic.
    for (int l = 0; l < num_groups; ++l) {
        const MatrixRd query_groups = pooled_group_matrix(split.queries, num_groups, l);
        const MatrixRd gallery_groups =
            pooled_group_matrix(split.gallery, num_groups, num_groups - 1 - l);
        MatrixRd population(m + n, query_groups.cols());
        population.topRows(m) = query_groups;
        population.bottomRows(n) = gallery_groups;

        const MatrixRd all_dist = pairwise_sq_euclidean(population, population);
        const NeighborSets sets = reciprocal_sets_from_distances(all_dist, config.k1);
        cross.values += jaccard_distances(sets, all_dist, static_cast<int>(m), config.k2,
                                          config.use_expanded_sets);
    }
    return cross;
}

RerankOutput temporal_rerank(const EvalSplit& split, const RerankConfig& config) {
    RerankOutput out = rerank_kreciprocal(split, config);
    // lambda2 = 0 must reproduce the instance-level result bit for bit, so the
    // cross term is skipped entirely.
    if (config.lambda2 != 0.0) {
        out.reranked.values += config.lambda2 * cross_temporal(split, config).values;
    }
    return out;
}

}  // namespace reidrank
