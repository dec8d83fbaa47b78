#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "jcr/types.hpp"

namespace jcr {

// Binary grid files: little-endian interleaved float32 (re, im), row-major
// rows x cols, with a JSON sidecar at "<path>.json". Used both for captured
// I/Q blocks (kind "iq", M x N) and channel estimates (kind "estimate",
// M x K).
struct GridHeader {
  std::string kind = "iq";
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 0;
  double snr_db = kInf;
  std::string bits = "inf";
  double noise_variance = 0.0;
  // Serialized JSON object carried verbatim under "metadata".
  std::string metadata_json = "{}";
};

struct GridFile {
  CMatrix data;
  GridHeader header;
};

inline constexpr int kGridFormatVersion = 1;

std::filesystem::path sidecar_path(const std::filesystem::path& data_path);

// Writes data and sidecar. Values are narrowed to float32. Throws
// std::runtime_error on I/O failure.
void write_grid(const std::filesystem::path& path, const CMatrix& data, GridHeader header);

// Throws FormatError (with byte offset) for malformed sidecars, truncated or
// oversized payloads, and non-finite samples.
GridFile read_grid(const std::filesystem::path& path);

}  // namespace jcr
