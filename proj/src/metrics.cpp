#include "reidrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "reidrank/errors.hpp"
#include "reidrank/parallel.hpp"

namespace reidrank {

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void append_number_array(std::string& out, const std::vector<double>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) out += ", ";
        out += std::isnan(values[i]) ? "null" : fmt6(values[i]);
    }
    out += ']';
}

}  // namespace

double EvalReport::cmc_at(int rank) const {
    if (cmc.empty() || rank < 1) return 0.0;
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(rank), cmc.size());
    return cmc[idx - 1];
}

EvalReport evaluate(const DistanceMatrix& dist, const EvalSplit& split,
                    const EvalOptions& options) {
    validate(split);
    const Eigen::Index m = static_cast<Eigen::Index>(split.queries.size());
    const Eigen::Index n = static_cast<Eigen::Index>(split.gallery.size());
    if (dist.values.rows() != m || dist.values.cols() != n) {
        throw DataError("distance matrix is " + std::to_string(dist.values.rows()) + "x" +
                        std::to_string(dist.values.cols()) + " but the split has " +
                        std::to_string(m) + " queries and " + std::to_string(n) + " gallery items");
    }

    EvalReport report;
    report.num_queries = static_cast<int>(m);
    report.num_gallery = static_cast<int>(n);
    report.direction = split.direction;
    report.per_query_ap.assign(m, std::numeric_limits<double>::quiet_NaN());

    std::vector<int> first_match_rank(m, -1);  // 1-based, -1 = skipped
    parallel_chunks(m, 16, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        std::vector<int> order;
        for (std::ptrdiff_t i = begin; i < end; ++i) {
            const auto& query = split.queries[i];
            order.clear();
            for (int j = 0; j < n; ++j) {
                const auto& g = split.gallery[j];
                if (options.exclude_same_camera && g.person_id == query.person_id &&
                    g.camera_id == query.camera_id) {
                    continue;
                }
                order.push_back(j);
            }
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const double da = dist.values(i, a), db = dist.values(i, b);
                return da < db || (da == db && a < b);
            });
            double precision_sum = 0.0;
            int positives = 0;
            for (std::size_t r = 0; r < order.size(); ++r) {
                if (split.gallery[order[r]].person_id == query.person_id) {
                    ++positives;
                    precision_sum += static_cast<double>(positives) / static_cast<double>(r + 1);
                    if (positives == 1) first_match_rank[i] = static_cast<int>(r + 1);
                }
            }
            if (positives > 0) {
                report.per_query_ap[i] = precision_sum / positives;
            }
        }
    });

    std::vector<double> cmc_counts(n, 0.0);
    double ap_sum = 0.0;
    int valid = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (first_match_rank[i] < 0) continue;
        ++valid;
        ap_sum += report.per_query_ap[i];
        cmc_counts[first_match_rank[i] - 1] += 1.0;
    }
    report.num_skipped_queries = static_cast<int>(m) - valid;
    if (valid == 0) {
        throw DataError("empty evaluation: no query has a valid gallery positive");
    }
    report.map = ap_sum / valid;
    report.cmc.resize(n);
    double running = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        running += cmc_counts[r];
        report.cmc[r] = running / valid;
    }
    return report;
}

std::string report_json(const EvalReport& report, bool include_timing) {
    // Hand-rolled so the output is byte-stable: keys sorted, floats %.6f.
    std::string out = "{\n";
    out += "  \"cmc\": ";
    append_number_array(out, report.cmc);
    out += ",\n";
    out += "  \"config\": {";
    out += "\"k1\": " + std::to_string(report.config_echo.k1);
    out += ", \"k2\": " + std::to_string(report.config_echo.k2);
    out += ", \"lambda1\": " + fmt6(report.config_echo.lambda1);
    out += ", \"lambda2\": " + fmt6(report.config_echo.lambda2);
    out += ", \"num_groups\": " + std::to_string(report.config_echo.num_groups);
    out += std::string(", \"use_expanded_sets\": ") +
           (report.config_echo.use_expanded_sets ? "true" : "false");
    out += "},\n";
    out += "  \"direction\": \"" + std::string(to_string(report.direction)) + "\",\n";
    out += "  \"map\": " + fmt6(report.map) + ",\n";
    out += "  \"num_gallery\": " + std::to_string(report.num_gallery) + ",\n";
    out += "  \"num_queries\": " + std::to_string(report.num_queries) + ",\n";
    out += "  \"num_skipped_queries\": " + std::to_string(report.num_skipped_queries) + ",\n";
    out += "  \"per_query_ap\": ";
    append_number_array(out, report.per_query_ap);
    out += ",\n";
    out += "  \"rank1\": " + fmt6(report.cmc_at(1)) + ",\n";
    out += "  \"rank10\": " + fmt6(report.cmc_at(10)) + ",\n";
    out += "  \"rank20\": " + fmt6(report.cmc_at(20)) + ",\n";
    out += "  \"rank5\": " + fmt6(report.cmc_at(5));
    if (include_timing) {
        out += ",\n  \"timing_ms\": {";
        bool first = true;
        for (const auto& [stage, ms] : report.timing_ms) {
            if (!first) out += ", ";
            out += "\"" + stage + "\": " + fmt6(ms);
            first = false;
        }
        out += "}";
    }
    out += "\n}\n";
    return out;
}

std::string report_table(const std::vector<EvalReport>& reports) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof(line), "%-22s %8s %8s %8s %8s %8s\n", "direction", "rank1",
                  "rank5", "rank10", "rank20", "mAP");
    os << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof(line), "%-22s %8.4f %8.4f %8.4f %8.4f %8.4f\n",
                      to_string(r.direction), r.cmc_at(1), r.cmc_at(5), r.cmc_at(10),
                      r.cmc_at(20), r.map);
        os << line;
        if (r.num_skipped_queries > 0) {
            os << "  (" << r.num_skipped_queries << " of " << r.num_queries
               << " queries skipped: no valid positive)\n";
        }
    }
    return os.str();
}

}  // namespace reidrank
