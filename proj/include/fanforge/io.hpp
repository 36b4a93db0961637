// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_IO_HPP
#define FANFORGE_IO_HPP

// 8-bit PNG raster I/O (libpng simplified API) and the JSONL dataset
// manifest.

#include <png.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fanforge/core.hpp"
#include "json.hpp"

namespace fanforge {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

namespace detail {

struct PngImage {
  png_image image;
  PngImage() {
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

}  // namespace detail

/// Reads a PNG as one 8-bit channel. Color sources are reduced with BT.601
/// luma; grayscale sources are returned unchanged. With `raw_gray` the file is
/// read as grayscale directly (used for masks holding class ids).
inline Raster<std::uint8_t> read_png_u8(const fs::path& path, bool raw_gray = false) {
  detail::PngImage png;
  if (!png_image_begin_read_from_file(&png.image, path.string().c_str())) {
    throw Error(ErrorCode::IoError, "cannot read PNG " + path.string() + ": " + png.image.message,
                path.string());
  }
  const bool color = (png.image.format & PNG_FORMAT_FLAG_COLOR) != 0 && !raw_gray;
  png.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t width = png.image.width;
  const std::size_t height = png.image.height;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoError, "cannot decode PNG " + path.string() + ": " + png.image.message,
                path.string());
  }
  if (!color) return Raster<std::uint8_t>(width, height, std::move(buffer));
  Raster<std::uint8_t> out(width, height);
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = luminance_bt601(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
  }
  return out;
}

inline std::vector<std::uint8_t> encode_png_u8(const Raster<std::uint8_t>& raster) {
  detail::PngImage png;
  png.image.width = static_cast<png_uint_32>(raster.width());
  png.image.height = static_cast<png_uint_32>(raster.height());
  png.image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, raster.values().data(), 0,
                                 nullptr)) {
    throw Error(ErrorCode::IoError, std::string("cannot size PNG: ") + png.image.message);
  }
  std::vector<std::uint8_t> bytes(size);
  if (!png_image_write_to_memory(&png.image, bytes.data(), &size, 0, raster.values().data(), 0,
                                 nullptr)) {
    throw Error(ErrorCode::IoError, std::string("cannot encode PNG: ") + png.image.message);
  }
  bytes.resize(size);
  return bytes;
}

inline void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string(), path.string());
}

inline void write_png_u8(const fs::path& path, const Raster<std::uint8_t>& raster) {
  write_file(path, encode_png_u8(raster));
}

inline ImageBuffer read_image(const fs::path& path) { return normalize_u8(read_png_u8(path)); }

inline void write_image(const fs::path& path, const ImageBuffer& image) {
  write_png_u8(path, quantize_u8(image));
}

/// Any nonzero pixel is scan region.
inline ScanMask read_scan_mask(const fs::path& path) {
  ScanMask mask = read_png_u8(path, true);
  for (auto& v : mask.values()) v = v ? 1 : 0;
  return mask;
}

inline LabelMask read_label_mask(const fs::path& path) {
  LabelMask mask{read_png_u8(path, true), 1};
  const auto values = mask.ids.values();
  if (!values.empty()) mask.num_classes = *std::max_element(values.begin(), values.end()) + 1;
  return mask;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

enum class Split { Train, Val, Test };

inline std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

/// One JSONL line:
///   {"id": "...", "image_path": "...", "scan_mask_path": "...",
///    "label_mask_path": "...", "label": 2, "split": "train"}
/// Only id and image_path are required; split defaults to train. Relative
/// paths resolve against the manifest's directory.
struct ManifestEntry {
  std::string id;
  fs::path image_path;
  std::optional<fs::path> scan_mask_path;
  std::optional<fs::path> label_mask_path;
  std::optional<int> label;
  Split split = Split::Train;
};

inline nlohmann::json to_json(const ManifestEntry& e) {
  nlohmann::json j;
  j["id"] = e.id;
  j["image_path"] = e.image_path.generic_string();
  if (e.scan_mask_path) j["scan_mask_path"] = e.scan_mask_path->generic_string();
  if (e.label_mask_path) j["label_mask_path"] = e.label_mask_path->generic_string();
  if (e.label) j["label"] = *e.label;
  j["split"] = std::string(to_string(e.split));
  return j;
}

namespace detail {

inline ManifestEntry parse_manifest_line(const std::string& line, std::size_t line_no,
                                         const fs::path& base) {
  auto fail = [line_no](const std::string& why) -> Error {
    return Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + why, {},
                 line_no);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
  if (!j.is_object()) throw fail("expected a JSON object");
  static const std::set<std::string> known = {"id",    "image_path", "scan_mask_path",
                                              "label_mask_path", "label", "split"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw fail("unknown key '" + key + "'");
  }
  auto string_field = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_string()) throw fail(std::string(key) + " must be a string");
    return j[key].get<std::string>();
  };
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  ManifestEntry e;
  const auto id = string_field("id");
  if (!id || id->empty()) throw fail("missing id");
  e.id = *id;
  const auto image = string_field("image_path");
  if (!image) throw fail("missing image_path");
  e.image_path = resolve(*image);
  if (auto s = string_field("scan_mask_path")) e.scan_mask_path = resolve(*s);
  if (auto s = string_field("label_mask_path")) e.label_mask_path = resolve(*s);
  if (j.contains("label")) {
    if (!j["label"].is_number_integer() || j["label"].get<int>() < 0) {
      throw fail("label must be a non-negative integer");
    }
    e.label = j["label"].get<int>();
  }
  if (auto s = string_field("split")) {
    if (*s == "train") e.split = Split::Train;
    else if (*s == "val") e.split = Split::Val;
    else if (*s == "test") e.split = Split::Test;
    else throw fail("split must be train, val or test");
  }
  return e;
}

}  // namespace detail

/// One entry per non-blank line, in file order. Throws ParseError(line),
/// DuplicateId(line) and, when `check_files`, MissingFile naming the entry.
inline std::vector<ManifestEntry> load_manifest(const fs::path& path, bool check_files = true) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open manifest " + path.string(), path.string());
  const fs::path base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto entry = detail::parse_manifest_line(line, line_no, base);
    if (!ids.insert(entry.id).second) {
      throw Error(ErrorCode::DuplicateId,
                  "line " + std::to_string(line_no) + ": duplicate id '" + entry.id + "'", entry.id,
                  line_no);
    }
    if (check_files) {
      if (!fs::exists(entry.image_path)) {
        throw Error(ErrorCode::MissingFile, "missing " + entry.image_path.string(), entry.id,
                    line_no);
      }
      for (const auto& p : {entry.scan_mask_path, entry.label_mask_path}) {
        if (p && !fs::exists(*p)) {
          throw Error(ErrorCode::MissingFile, "missing " + p->string(), entry.id, line_no);
        }
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

/// Reads every raster named by the entry into a validated sample.
inline Sample load_sample(const ManifestEntry& entry, std::uint64_t seed = 0) {
  Sample s;
  s.id = entry.id;
  s.seed = seed;
  s.image = read_image(entry.image_path);
  if (entry.scan_mask_path) s.scan_mask = read_scan_mask(*entry.scan_mask_path);
  if (entry.label_mask_path) s.label_mask = read_label_mask(*entry.label_mask_path);
  s.label = entry.label;
  validate(s);
  return s;
}

}  // namespace fanforge

#endif  // FANFORGE_IO_HPP
