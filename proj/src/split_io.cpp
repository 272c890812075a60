#include "reidrank/split_io.hpp"

#include <fstream>
#include <map>
#include <nlohmann/json.hpp>

#include "reidrank/errors.hpp"

namespace reidrank {

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kManifestName = "manifest.json";
constexpr const char* kBlobName = "embeddings.bin";

struct BlobFile {
    std::vector<char> bytes;
};

}  // namespace

void save_split(const EvalSplit& split, const std::filesystem::path& dir) {
    validate(split);
    std::filesystem::create_directories(dir);

    nlohmann::json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["feature_dim"] = split.queries.front().frames.cols();
    auto& records = manifest["records"] = nlohmann::json::array();

    std::ofstream blob(dir / kBlobName, std::ios::binary);
    if (!blob) throw DataError("cannot open '" + (dir / kBlobName).string() + "' for writing");
    std::uint64_t offset = 0;
    auto write_side = [&](const std::vector<TrackletRecord>& side, const char* role) {
        for (const auto& r : side) {
            const std::uint64_t bytes = sizeof(float) * r.frames.size();
            records.push_back({
                {"tracklet_id", r.tracklet_id},
                {"person_id", r.person_id},
                {"camera_id", r.camera_id},
                {"modality", to_string(r.modality)},
                {"role", role},
                {"num_frames", r.frames.rows()},
                {"blob", kBlobName},
                {"offset_bytes", offset},
            });
            blob.write(reinterpret_cast<const char*>(r.frames.data()),
                       static_cast<std::streamsize>(bytes));
            offset += bytes;
        }
    };
    write_side(split.queries, "query");
    write_side(split.gallery, "gallery");
    if (!blob) throw DataError("short write to '" + (dir / kBlobName).string() + "'");
    blob.close();

    std::ofstream mf(dir / kManifestName);
    if (!mf) throw DataError("cannot open '" + (dir / kManifestName).string() + "' for writing");
    mf << manifest.dump(2) << "\n";
}

EvalSplit load_split(const std::filesystem::path& manifest_or_dir) {
    std::filesystem::path manifest_path = manifest_or_dir;
    if (std::filesystem::is_directory(manifest_path)) manifest_path /= kManifestName;
    const std::filesystem::path dir = manifest_path.parent_path();

    std::ifstream mf(manifest_path);
    if (!mf) throw DataError("missing manifest '" + manifest_path.string() + "'");
    nlohmann::json manifest;
    try {
        mf >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed manifest '" + manifest_path.string() + "': " + e.what());
    }

    try {
        if (manifest.at("format_version").get<int>() != kFormatVersion) {
            throw DataError("unsupported format_version " +
                            manifest.at("format_version").dump());
        }
        const Eigen::Index feature_dim = manifest.at("feature_dim").get<Eigen::Index>();
        if (feature_dim < 1) throw DataError("manifest declares feature_dim < 1");

        std::map<std::string, BlobFile> blobs;
        auto blob_bytes = [&](const std::string& name) -> const std::vector<char>& {
            auto it = blobs.find(name);
            if (it == blobs.end()) {
                std::ifstream in(dir / name, std::ios::binary | std::ios::ate);
                if (!in) throw DataError("missing blob file '" + (dir / name).string() + "'");
                BlobFile f;
                f.bytes.resize(static_cast<std::size_t>(in.tellg()));
                in.seekg(0);
                in.read(f.bytes.data(), static_cast<std::streamsize>(f.bytes.size()));
                if (!in) throw DataError("short read from blob '" + (dir / name).string() + "'");
                it = blobs.emplace(name, std::move(f)).first;
            }
            return it->second.bytes;
        };

        EvalSplit split;
        bool saw_query = false, saw_gallery = false;
        for (const auto& rec : manifest.at("records")) {
            TrackletRecord r;
            r.tracklet_id = rec.at("tracklet_id").get<std::string>();
            r.person_id = rec.at("person_id").get<int>();
            r.camera_id = rec.at("camera_id").get<int>();
            r.modality = modality_from_string(rec.at("modality").get<std::string>());
            const std::string role = rec.at("role").get<std::string>();
            const Eigen::Index num_frames = rec.at("num_frames").get<Eigen::Index>();
            if (num_frames < 1) {
                throw DataError("tracklet '" + r.tracklet_id + "' declares num_frames < 1");
            }
            const std::string blob_name = rec.at("blob").get<std::string>();
            const std::uint64_t offset = rec.at("offset_bytes").get<std::uint64_t>();
            const std::uint64_t need = sizeof(float) * num_frames * feature_dim;
            const auto& bytes = blob_bytes(blob_name);
            if (offset + need > bytes.size()) {
                throw DataError(
                    "dimension mismatch: tracklet '" + r.tracklet_id + "' needs " +
                    std::to_string(need) + " bytes at offset " + std::to_string(offset) +
                    " of blob '" + blob_name + "' (num_frames=" + std::to_string(num_frames) +
                    " x feature_dim=" + std::to_string(feature_dim) + " x 4), but the blob holds " +
                    std::to_string(bytes.size()) + " bytes");
            }
            r.frames.resize(num_frames, feature_dim);
            std::memcpy(r.frames.data(), bytes.data() + offset, need);
            validate(r);  // rejects non-finite values

            if (role == "query") {
                saw_query = true;
                split.queries.push_back(std::move(r));
            } else if (role == "gallery") {
                saw_gallery = true;
                split.gallery.push_back(std::move(r));
            } else {
                throw DataError("tracklet '" + r.tracklet_id + "' has unknown role '" + role +
                                "'");
            }
        }
        if (!saw_query || !saw_gallery) {
            throw DataError("manifest must contain at least one query and one gallery record");
        }
        // Direction is implied by the query-side modality and checked for
        // consistency by the split validator.
        split.direction = split.queries.front().modality == Modality::RGB
                              ? Direction::VisibleToInfrared
                              : Direction::InfraredToVisible;
        validate(split);
        return split;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed manifest '" + manifest_path.string() + "': " + e.what());
    }
}

}  // namespace reidrank
