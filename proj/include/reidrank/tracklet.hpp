#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace reidrank {

enum class Modality { RGB, IR };
enum class Direction { VisibleToInfrared, InfraredToVisible };

const char* to_string(Modality m);
const char* to_string(Direction d);
Modality modality_from_string(const std::string& s);

/// Frame-level features, one row per frame. Stored as float32 to match the
/// on-disk exchange format bit for bit.
using FrameMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Pooled embeddings and all derived arithmetic are double precision.
using Embedding = Eigen::VectorXd;
using MatrixRd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One sample: a single-camera tracklet with identity/camera/modality labels.
struct TrackletRecord {
    std::string tracklet_id;
    int person_id = 0;
    int camera_id = 0;
    Modality modality = Modality::RGB;
    FrameMatrix frames;  // T x D
};

/// Throws DataError on empty frames or non-finite entries.
void validate(const TrackletRecord& record);

/// Per-group pooled embeddings of one tracklet split into L contiguous
/// temporal groups. group_bounds holds [begin, end) frame ranges.
struct SubTrackletEmbeddings {
    std::vector<Embedding> groups;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> group_bounds;
};

struct EvalSplit {
    std::vector<TrackletRecord> queries;
    std::vector<TrackletRecord> gallery;
    Direction direction = Direction::VisibleToInfrared;
};

/// Checks record validity, uniform feature dimension, non-empty sides and the
/// modality/direction rule (throws DataError).
void validate(const EvalSplit& split);

/// Query/gallery roles exchanged, direction flipped.
EvalSplit swapped(const EvalSplit& split);

/// Mean over frames, accumulated in double.
Embedding temporal_pool(const TrackletRecord& record);

/// Splits frames into L contiguous temporal groups (remainder frames go to
/// the earliest groups, so sizes differ by at most 1) and pools each group.
/// Requires 1 <= L <= T, otherwise throws ConfigError.
SubTrackletEmbeddings split_temporal(const TrackletRecord& record, int num_groups);

/// Stacks temporal_pool of every record into a row-per-item matrix.
MatrixRd pooled_matrix(std::span<const TrackletRecord> records);

/// Row l of the result is the group-l embedding of record l's split.
MatrixRd pooled_group_matrix(std::span<const TrackletRecord> records, int num_groups, int group);

}  // namespace reidrank
