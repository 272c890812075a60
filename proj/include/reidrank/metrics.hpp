#pragma once

#include <map>
#include <string>
#include <vector>

#include "reidrank/distance.hpp"
#include "reidrank/kreciprocal.hpp"
#include "reidrank/tracklet.hpp"

namespace reidrank {

struct EvalOptions {
    /// Remove gallery items sharing both person and camera with the query
    /// from its ranking list. Off by default: in cross-modality retrieval the
    /// two sides come from different modalities of bimodal cameras.
    bool exclude_same_camera = false;
};

struct EvalReport {
    /// cmc[r] = fraction of scored queries whose first correct match appears
    /// at rank <= r + 1. Length equals the gallery size.
    std::vector<double> cmc;
    double map = 0.0;
    /// Per query; NaN marks queries skipped for lack of a valid positive.
    std::vector<double> per_query_ap;
    int num_queries = 0;
    int num_gallery = 0;
    int num_skipped_queries = 0;
    Direction direction = Direction::VisibleToInfrared;
    RerankConfig config_echo;
    std::map<std::string, double> timing_ms;

    double cmc_at(int rank) const;  // rank is 1-based; 0 if rank exceeds the curve
};

/// Scores a distance matrix against the split labels. Gallery is sorted
/// ascending per query with ties broken by gallery index; AP is the
/// precision-at-positive average. Queries without a valid positive after
/// exclusions are skipped and counted. Throws DataError on shape mismatch or
/// when every query is skipped.
EvalReport evaluate(const DistanceMatrix& dist, const EvalSplit& split,
                    const EvalOptions& options = {});

/// Byte-stable JSON: sorted keys, fixed 6-decimal floats. Timing is included
/// only when include_timing is set, keeping default reports reproducible.
std::string report_json(const EvalReport& report, bool include_timing = false);

/// ASCII table (R1/R5/R10/R20/mAP per direction), one row per report.
std::string report_table(const std::vector<EvalReport>& reports);

}  // namespace reidrank
