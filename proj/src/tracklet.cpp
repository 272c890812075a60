#include "reidrank/tracklet.hpp"

#include <cmath>

#include "reidrank/errors.hpp"

namespace reidrank {

const char* to_string(Modality m) {
    return m == Modality::RGB ? "RGB" : "IR";
}

const char* to_string(Direction d) {
    return d == Direction::VisibleToInfrared ? "visible_to_infrared" : "infrared_to_visible";
}

Modality modality_from_string(const std::string& s) {
    if (s == "RGB") return Modality::RGB;
    if (s == "IR") return Modality::IR;
    throw DataError("unknown modality '" + s + "' (expected RGB or IR)");
}

void validate(const TrackletRecord& record) {
    if (record.frames.rows() < 1 || record.frames.cols() < 1) {
        throw DataError("tracklet '" + record.tracklet_id + "' has an empty frame matrix");
    }
    if (!record.frames.allFinite()) {
        throw DataError("tracklet '" + record.tracklet_id + "' contains non-finite features");
    }
}

void validate(const EvalSplit& split) {
    if (split.queries.empty() || split.gallery.empty()) {
        throw DataError("split must contain at least one query and one gallery record");
    }
    const Modality query_mod = split.direction == Direction::VisibleToInfrared
                                   ? Modality::RGB
                                   : Modality::IR;
    const Modality gallery_mod = query_mod == Modality::RGB ? Modality::IR : Modality::RGB;
    const Eigen::Index dim = split.queries.front().frames.cols();
    auto check = [&](const TrackletRecord& r, Modality expected, const char* role) {
        validate(r);
        if (r.frames.cols() != dim) {
            throw DataError("tracklet '" + r.tracklet_id + "' has feature dimension " +
                            std::to_string(r.frames.cols()) + ", expected " + std::to_string(dim));
        }
        if (r.modality != expected) {
            throw DataError(std::string("modality/direction violation: ") + role + " tracklet '" +
                            r.tracklet_id + "' is " + to_string(r.modality) + " but direction " +
                            to_string(split.direction) + " requires " + to_string(expected));
        }
    };
    for (const auto& r : split.queries) check(r, query_mod, "query");
    for (const auto& r : split.gallery) check(r, gallery_mod, "gallery");
}

EvalSplit swapped(const EvalSplit& split) {
    EvalSplit out;
    out.queries = split.gallery;
    out.gallery = split.queries;
    out.direction = split.direction == Direction::VisibleToInfrared
                        ? Direction::InfraredToVisible
                        : Direction::VisibleToInfrared;
    return out;
}

namespace {

// Shared by temporal_pool and split_temporal so an L=1 split is bit-identical
// to the full pooled embedding.
Embedding pool_rows(const FrameMatrix& frames, Eigen::Index begin, Eigen::Index end) {
    const Eigen::Index count = end - begin;
    Embedding sum = frames.middleRows(begin, count).cast<double>().colwise().sum();
    return sum / static_cast<double>(count);
}

}  // namespace

Embedding temporal_pool(const TrackletRecord& record) {
    validate(record);
    return pool_rows(record.frames, 0, record.frames.rows());
}

SubTrackletEmbeddings split_temporal(const TrackletRecord& record, int num_groups) {
    validate(record);
    const Eigen::Index t = record.frames.rows();
    if (num_groups < 1 || num_groups > t) {
        throw ConfigError("group count L=" + std::to_string(num_groups) +
                          " must satisfy 1 <= L <= T (tracklet '" + record.tracklet_id +
                          "' has T=" + std::to_string(t) + ")");
    }
    SubTrackletEmbeddings out;
    out.groups.reserve(num_groups);
    out.group_bounds.reserve(num_groups);
    const Eigen::Index base = t / num_groups;
    const Eigen::Index remainder = t % num_groups;
    Eigen::Index begin = 0;
    for (int l = 0; l < num_groups; ++l) {
        const Eigen::Index size = base + (l < remainder ? 1 : 0);
        out.groups.push_back(pool_rows(record.frames, begin, begin + size));
        out.group_bounds.emplace_back(begin, begin + size);
        begin += size;
    }
    return out;
}

MatrixRd pooled_matrix(std::span<const TrackletRecord> records) {
    if (records.empty()) throw DataError("cannot pool an empty record list");
    MatrixRd out(static_cast<Eigen::Index>(records.size()), records.front().frames.cols());
    for (std::size_t i = 0; i < records.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = temporal_pool(records[i]);
    }
    return out;
}

MatrixRd pooled_group_matrix(std::span<const TrackletRecord> records, int num_groups, int group) {
    if (records.empty()) throw DataError("cannot pool an empty record list");
    if (group < 0 || group >= num_groups) {
        throw ConfigError("group index " + std::to_string(group) + " out of range for L=" +
                          std::to_string(num_groups));
    }
    MatrixRd out(static_cast<Eigen::Index>(records.size()), records.front().frames.cols());
    for (std::size_t i = 0; i < records.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) =
            split_temporal(records[i], num_groups).groups[static_cast<std::size_t>(group)];
    }
    return out;
}

}  // namespace reidrank
