#include "reidrank/distance.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "reidrank/errors.hpp"
#include "reidrank/parallel.hpp"

namespace reidrank {

namespace {
constexpr std::ptrdiff_t kRowChunk = 64;

std::vector<std::string> record_ids(const std::vector<TrackletRecord>& records) {
    std::vector<std::string> ids;
    ids.reserve(records.size());
    for (const auto& r : records) ids.push_back(r.tracklet_id);
    return ids;
}
}  // namespace

MatrixRd pairwise_sq_euclidean(const MatrixRd& a, const MatrixRd& b) {
    if (a.cols() != b.cols()) {
        throw DataError("dimension mismatch: " + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.cols()) + " feature columns");
    }
    const Eigen::VectorXd a_norms = a.rowwise().squaredNorm();
    const Eigen::VectorXd b_norms = b.rowwise().squaredNorm();
    MatrixRd out(a.rows(), b.rows());
    // Expanded form |a|^2 + |b|^2 - 2 a.b; each entry uses one fixed-order dot
    // product, so results do not depend on chunking or thread count.
    parallel_chunks(a.rows(), kRowChunk, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        for (std::ptrdiff_t i = begin; i < end; ++i) {
            for (Eigen::Index j = 0; j < b.rows(); ++j) {
                const double d = a_norms[i] + b_norms[j] - 2.0 * a.row(i).dot(b.row(j));
                out(i, j) = d > 0.0 ? d : 0.0;
            }
        }
    });
    return out;
}

DistanceMatrix feature_distances(const EvalSplit& split) {
    validate(split);
    DistanceMatrix dist;
    dist.values = pairwise_sq_euclidean(pooled_matrix(split.queries), pooled_matrix(split.gallery));
    dist.row_ids = record_ids(split.queries);
    dist.col_ids = record_ids(split.gallery);
    return dist;
}

DistanceMatrix unsquared(DistanceMatrix dist) {
    dist.values = dist.values.cwiseSqrt();
    return dist;
}

void save_matrix(const DistanceMatrix& dist, const std::filesystem::path& prefix) {
    std::filesystem::path bin_path = prefix;
    bin_path += ".bin";
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw DataError("cannot open '" + bin_path.string() + "' for writing");
    static_assert(std::endian::native == std::endian::little, "dump format is little-endian");
    bin.write(reinterpret_cast<const char*>(dist.values.data()),
              static_cast<std::streamsize>(sizeof(double) * dist.values.size()));
    if (!bin) throw DataError("short write to '" + bin_path.string() + "'");
    bin.close();

    nlohmann::json meta;
    meta["rows"] = dist.values.rows();
    meta["cols"] = dist.values.cols();
    meta["dtype"] = "float64";
    meta["order"] = "row_major";
    meta["row_ids"] = dist.row_ids;
    meta["col_ids"] = dist.col_ids;
    std::filesystem::path json_path = prefix;
    json_path += ".json";
    std::ofstream js(json_path);
    if (!js) throw DataError("cannot open '" + json_path.string() + "' for writing");
    js << meta.dump(2) << "\n";
}

DistanceMatrix load_matrix(const std::filesystem::path& prefix) {
    std::filesystem::path json_path = prefix;
    json_path += ".json";
    std::ifstream js(json_path);
    if (!js) throw DataError("missing matrix descriptor '" + json_path.string() + "'");
    nlohmann::json meta;
    try {
        js >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed matrix descriptor '" + json_path.string() + "': " + e.what());
    }

    DistanceMatrix dist;
    const Eigen::Index rows = meta.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = meta.at("cols").get<Eigen::Index>();
    if (rows < 1 || cols < 1) throw DataError("matrix descriptor declares an empty matrix");
    dist.row_ids = meta.value("row_ids", std::vector<std::string>{});
    dist.col_ids = meta.value("col_ids", std::vector<std::string>{});

    std::filesystem::path bin_path = prefix;
    bin_path += ".bin";
    std::ifstream bin(bin_path, std::ios::binary | std::ios::ate);
    if (!bin) throw DataError("missing matrix blob '" + bin_path.string() + "'");
    const auto expected = static_cast<std::streamoff>(sizeof(double) * rows * cols);
    if (bin.tellg() != expected) {
        throw DataError("matrix blob '" + bin_path.string() + "' has " +
                        std::to_string(bin.tellg()) + " bytes, expected " +
                        std::to_string(expected));
    }
    bin.seekg(0);
    dist.values.resize(rows, cols);
    bin.read(reinterpret_cast<char*>(dist.values.data()), expected);
    if (!bin) throw DataError("short read from '" + bin_path.string() + "'");
    if (!dist.values.allFinite()) {
        throw DataError("matrix blob '" + bin_path.string() + "' contains non-finite values");
    }
    return dist;
}

}  // namespace reidrank
