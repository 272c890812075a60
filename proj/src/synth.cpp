#include "reidrank/synth.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "reidrank/errors.hpp"

namespace reidrank {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stream domains for derive_stream.
constexpr std::uint64_t kDomainIdentity = 1;
constexpr std::uint64_t kDomainModality = 2;
constexpr std::uint64_t kDomainCamera = 3;
constexpr std::uint64_t kDomainNoise = 4;

// Per-coordinate scale profile (1 + d)^-0.75: embeddings concentrate in the
// leading coordinates the way learned features do, which keeps rankings
// imperfect at the default problem sizes.
constexpr double kSpectrumDecay = 0.75;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Eigen::VectorXd scaled_gaussian(SplitMix64& rng, const Eigen::VectorXd& scales, double sigma) {
    Eigen::VectorXd v(scales.size());
    for (Eigen::Index d = 0; d < scales.size(); ++d) {
        v[d] = sigma * scales[d] * rng.next_gaussian();
    }
    return v;
}

}  // namespace

std::uint64_t SplitMix64::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double SplitMix64::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t a,
                            std::uint64_t b) {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (domain + kGolden));
    h = mix64(h ^ (a + kGolden));
    h = mix64(h ^ (b + kGolden));
    return h;
}

void SynthConfig::validate() const {
    if (num_ids < 1) throw ConfigError("num_ids must be >= 1");
    if (cams_per_id < 1) throw ConfigError("cams_per_id must be >= 1");
    if (frames_per_tracklet < 1) throw ConfigError("frames_per_tracklet must be >= 1");
    if (dim < 2) throw ConfigError("dim must be >= 2");
    if (!(identity_spread > 0.0)) throw ConfigError("identity_spread must be > 0");
    if (modality_offset_scale < 0.0) throw ConfigError("modality_offset_scale must be >= 0");
    if (camera_offset_scale < 0.0) throw ConfigError("camera_offset_scale must be >= 0");
    if (frame_noise < 0.0) throw ConfigError("frame_noise must be >= 0");
}

EvalSplit generate(const SynthConfig& config) {
    config.validate();
    const int dim = config.dim;
    Eigen::VectorXd scales(dim);
    for (int d = 0; d < dim; ++d) {
        scales[d] = std::pow(1.0 + d, -kSpectrumDecay);
    }

    EvalSplit split;
    split.direction = Direction::VisibleToInfrared;
    const Modality modalities[2] = {Modality::RGB, Modality::IR};

    for (int id = 0; id < config.num_ids; ++id) {
        SplitMix64 center_rng(derive_stream(config.seed, kDomainIdentity, id));
        const Eigen::VectorXd center =
            scaled_gaussian(center_rng, scales, config.identity_spread);

        Eigen::VectorXd modality_offset[2];
        for (int m = 0; m < 2; ++m) {
            SplitMix64 rng(derive_stream(config.seed, kDomainModality, id, m));
            modality_offset[m] = scaled_gaussian(rng, scales, config.modality_offset_scale);
        }

        for (int cam = 0; cam < config.cams_per_id; ++cam) {
            SplitMix64 cam_rng(derive_stream(config.seed, kDomainCamera, id, cam));
            const Eigen::VectorXd camera_offset =
                scaled_gaussian(cam_rng, scales, config.camera_offset_scale);

            for (int m = 0; m < 2; ++m) {
                const Eigen::VectorXd base = center + modality_offset[m] + camera_offset;
                const std::uint64_t tracklet_index =
                    (static_cast<std::uint64_t>(id) * config.cams_per_id + cam) * 2 + m;
                SplitMix64 noise_rng(derive_stream(config.seed, kDomainNoise, tracklet_index));

                TrackletRecord rec;
                char buf[64];
                std::snprintf(buf, sizeof(buf), "id%04d_cam%d_%s", id, cam,
                              modalities[m] == Modality::RGB ? "rgb" : "ir");
                rec.tracklet_id = buf;
                rec.person_id = id;
                rec.camera_id = cam;
                rec.modality = modalities[m];
                rec.frames.resize(config.frames_per_tracklet, dim);
                for (int t = 0; t < config.frames_per_tracklet; ++t) {
                    for (int d = 0; d < dim; ++d) {
                        rec.frames(t, d) = static_cast<float>(
                            base[d] + config.frame_noise * noise_rng.next_gaussian());
                    }
                }
                auto& side = modalities[m] == Modality::RGB ? split.queries : split.gallery;
                side.push_back(std::move(rec));
            }
        }
    }
    return split;
}

}  // namespace reidrank
