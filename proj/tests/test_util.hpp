#pragma once

// Shared fixture builders for the test suites.

#include <string>
#include <vector>

#include "reidrank/synth.hpp"
#include "reidrank/tracklet.hpp"

namespace testutil {

using reidrank::EvalSplit;
using reidrank::FrameMatrix;
using reidrank::MatrixRd;
using reidrank::Modality;
using reidrank::TrackletRecord;

inline TrackletRecord make_record(std::string id, int person, int camera, Modality modality,
                                  const std::vector<std::vector<float>>& rows) {
    TrackletRecord rec;
    rec.tracklet_id = std::move(id);
    rec.person_id = person;
    rec.camera_id = camera;
    rec.modality = modality;
    rec.frames.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t d = 0; d < rows[t].size(); ++d) {
            rec.frames(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d)) = rows[t][d];
        }
    }
    return rec;
}

inline FrameMatrix random_frames(reidrank::SplitMix64& rng, int t, int d, double scale = 1.0) {
    FrameMatrix frames(t, d);
    for (int i = 0; i < t; ++i) {
        for (int j = 0; j < d; ++j) {
            frames(i, j) = static_cast<float>(scale * rng.next_gaussian());
        }
    }
    return frames;
}

inline MatrixRd random_matrix(reidrank::SplitMix64& rng, int rows, int cols, double scale = 1.0) {
    MatrixRd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = scale * rng.next_gaussian();
        }
    }
    return m;
}

// Random labeled split with mildly clustered identities so rankings are
// nontrivial but every query has positives.
inline EvalSplit random_split(std::uint64_t seed, int num_ids, int per_side_per_id, int t,
                              int d) {
    reidrank::SplitMix64 rng(seed);
    EvalSplit split;
    for (int id = 0; id < num_ids; ++id) {
        Eigen::VectorXd center(d);
        for (int k = 0; k < d; ++k) center[k] = 2.0 * rng.next_gaussian();
        for (int copy = 0; copy < per_side_per_id; ++copy) {
            for (int side = 0; side < 2; ++side) {
                TrackletRecord rec;
                rec.tracklet_id = "id" + std::to_string(id) + (side == 0 ? "_q" : "_g") +
                                  std::to_string(copy);
                rec.person_id = id;
                rec.camera_id = copy;
                rec.modality = side == 0 ? Modality::RGB : Modality::IR;
                rec.frames.resize(t, d);
                for (int ti = 0; ti < t; ++ti) {
                    for (int k = 0; k < d; ++k) {
                        rec.frames(ti, k) =
                            static_cast<float>(center[k] + 0.8 * rng.next_gaussian());
                    }
                }
                (side == 0 ? split.queries : split.gallery).push_back(std::move(rec));
            }
        }
    }
    return split;
}

}  // namespace testutil
