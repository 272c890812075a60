#pragma once

#include <filesystem>

#include "reidrank/tracklet.hpp"

namespace reidrank {

/// Writes manifest.json plus embeddings.bin (little-endian float32, row-major
/// frame-major, no header) into dir. Save-then-load is bit-exact.
void save_split(const EvalSplit& split, const std::filesystem::path& dir);

/// Loads a split from a directory containing manifest.json, or from the
/// manifest path itself. Distinct DataError diagnostics for missing blobs,
/// dimension mismatches, non-finite values and modality/direction violations.
EvalSplit load_split(const std::filesystem::path& manifest_or_dir);

}  // namespace reidrank
