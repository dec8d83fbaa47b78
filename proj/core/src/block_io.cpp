#include "jcr/block_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <json.hpp>

namespace jcr {

namespace {

using nlohmann::json;

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
}

void put_float(std::vector<char>& out, std::size_t at, float f) {
  const std::uint32_t le = to_le(std::bit_cast<std::uint32_t>(f));
  std::memcpy(out.data() + at, &le, sizeof le);
}

float get_float(const std::vector<char>& in, std::size_t at) {
  std::uint32_t le;
  std::memcpy(&le, in.data() + at, sizeof le);
  return std::bit_cast<float>(to_le(le));
}

json snr_to_json(double snr) {
  if (std::isinf(snr)) return snr > 0 ? json("inf") : json("-inf");
  return snr;
}

double snr_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("bad snr_db value '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& data_path) {
  auto p = data_path;
  p += ".json";
  return p;
}

void write_grid(const std::filesystem::path& path, const CMatrix& data, GridHeader header) {
  header.rows = static_cast<std::size_t>(data.rows());
  header.cols = static_cast<std::size_t>(data.cols());
  std::vector<char> payload(header.rows * header.cols * 8);
  std::size_t at = 0;
  for (Eigen::Index r = 0; r < data.rows(); ++r)
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      put_float(payload, at, static_cast<float>(data(r, c).real()));
      put_float(payload, at + 4, static_cast<float>(data(r, c).imag()));
      at += 8;
    }
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!f) throw std::runtime_error("write failed for " + path.string());
  }
  json side = {{"format", "jcr-grid"},
               {"version", kGridFormatVersion},
               {"kind", header.kind},
               {"rows", header.rows},
               {"cols", header.cols},
               {"seed", header.seed},
               {"snr_db", snr_to_json(header.snr_db)},
               {"bits", header.bits},
               {"noise_variance", header.noise_variance},
               {"sample_format", "cf32le"},
               {"metadata", json::parse(header.metadata_json)}};
  std::ofstream s(sidecar_path(path), std::ios::trunc);
  if (!s) throw std::runtime_error("cannot open " + sidecar_path(path).string() + " for writing");
  s << side.dump(2) << '\n';
  if (!s) throw std::runtime_error("write failed for " + sidecar_path(path).string());
}

GridFile read_grid(const std::filesystem::path& path) {
  GridFile out;
  std::string side_text;
  {
    std::ifstream s(sidecar_path(path));
    if (!s) throw FormatError("missing sidecar " + sidecar_path(path).string(), 0);
    side_text.assign(std::istreambuf_iterator<char>(s), {});
  }
  json side;
  try {
    side = json::parse(side_text);
  } catch (const json::parse_error& e) {
    throw FormatError("malformed sidecar " + sidecar_path(path).string() + ": " + e.what(), e.byte);
  }
  try {
    if (side.at("format") != "jcr-grid") throw FormatError("sidecar is not a jcr-grid header", 0);
    if (side.at("version").get<int>() != kGridFormatVersion)
      throw FormatError("unsupported grid format version", 0);
    if (side.at("sample_format") != "cf32le") throw FormatError("unsupported sample format", 0);
    GridHeader& h = out.header;
    h.kind = side.at("kind").get<std::string>();
    h.rows = side.at("rows").get<std::size_t>();
    h.cols = side.at("cols").get<std::size_t>();
    h.seed = side.at("seed").get<std::uint64_t>();
    h.snr_db = snr_from_json(side.at("snr_db"));
    h.bits = side.at("bits").get<std::string>();
    h.noise_variance = side.at("noise_variance").get<double>();
    h.metadata_json = side.value("metadata", json::object()).dump();
  } catch (const json::exception& e) {
    throw FormatError(std::string("sidecar field error: ") + e.what(), 0);
  }

  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path.string(), 0);
  std::vector<char> payload((std::istreambuf_iterator<char>(f)), {});
  const std::size_t expected = out.header.rows * out.header.cols * 8;
  if (payload.size() < expected) {
    throw FormatError("truncated payload in " + path.string() + ": expected " +
                          std::to_string(expected) + " bytes, found " + std::to_string(payload.size()),
                      payload.size() - payload.size() % 8);
  }
  if (payload.size() > expected)
    throw FormatError("trailing bytes in " + path.string(), expected);

  out.data.resize(static_cast<Eigen::Index>(out.header.rows), static_cast<Eigen::Index>(out.header.cols));
  std::size_t at = 0;
  for (Eigen::Index r = 0; r < out.data.rows(); ++r)
    for (Eigen::Index c = 0; c < out.data.cols(); ++c) {
      const float re = get_float(payload, at);
      const float im = get_float(payload, at + 4);
      if (!std::isfinite(re) || !std::isfinite(im))
        throw FormatError("non-finite sample in " + path.string(), at);
      out.data(r, c) = {re, im};
      at += 8;
    }
  return out;
}

}  // namespace jcr
