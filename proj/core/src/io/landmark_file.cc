#include "hmot/io/landmark_file.h"

#include <set>

#include "hmot/io/heatmap_file.h"
#include "json_util.h"

namespace hmot::io {
namespace {

using detail::Json;

Point ParsePoint(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw FormatError(path + ": expected [x, y]");
  return {detail::GetNumber(j[0], path + "[0]"), detail::GetNumber(j[1], path + "[1]")};
}

LandmarkRecord ParseRecord(const Json& j, const std::string& path) {
  detail::RequireKeys(j, path, {"id", "image", "points", "visible", "normalization"});
  LandmarkRecord rec;
  if (!j.contains("id")) throw FormatError(path + ".id: missing");
  rec.id = detail::GetString(j["id"], path + ".id");
  if (j.contains("image")) rec.image = detail::GetString(j["image"], path + ".image");
  if (!j.contains("points") || !j["points"].is_array()) throw FormatError(path + ".points: expected an array");
  const auto& pts = j["points"];
  for (std::size_t k = 0; k < pts.size(); ++k) {
    rec.landmarks.points.push_back(ParsePoint(pts[k], path + ".points[" + std::to_string(k) + "]"));
  }
  if (rec.landmarks.points.empty()) throw FormatError(path + ".points: no landmarks");
  if (j.contains("visible")) {
    const auto& vis = j["visible"];
    if (!vis.is_array() || vis.size() != pts.size()) {
      throw FormatError(path + ".visible: expected one flag per point");
    }
    for (std::size_t k = 0; k < vis.size(); ++k) {
      rec.landmarks.visible.push_back(detail::GetBool(vis[k], path + ".visible[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("normalization")) rec.normalization = detail::ParseNormalization(j["normalization"], path + ".normalization");
  return rec;
}

}  // namespace

const metrics::NormalizationRule* LandmarkFile::RuleFor(std::size_t k) const {
  if (images[k].normalization) return &*images[k].normalization;
  if (normalization) return &*normalization;
  return nullptr;
}

LandmarkFile ParseLandmarkFile(std::string_view text, std::string_view source) {
  const std::string where(source);
  const Json doc = detail::ParseJson(text, source);
  try {
    detail::RequireKeys(doc, "", {"version", "format", "normalization", "images"});
  } catch (const FormatError& e) {
    throw FormatError(where + ": " + e.what());
  }
  LandmarkFile file;
  try {
    if (!doc.contains("version")) throw FormatError("version: missing");
    file.version = detail::GetInt(doc["version"], "version");
    if (file.version != 1) throw FormatError("version: unsupported schema version " + std::to_string(file.version));
    if (doc.contains("format")) {
      file.format = detail::GetString(doc["format"], "format");
      if (file.format != "uniform" && file.format != "mixed") {
        throw FormatError("format: expected \"uniform\" or \"mixed\", got \"" + file.format + "\"");
      }
    }
    if (doc.contains("normalization")) file.normalization = detail::ParseNormalization(doc["normalization"], "normalization");
    if (!doc.contains("images") || !doc["images"].is_array()) throw FormatError("images: expected an array");
    std::set<std::string> ids;
    for (std::size_t k = 0; k < doc["images"].size(); ++k) {
      auto rec = ParseRecord(doc["images"][k], "images[" + std::to_string(k) + "]");
      if (!ids.insert(rec.id).second) throw FormatError("images[" + std::to_string(k) + "]: duplicate id '" + rec.id + "'");
      if (file.format == "uniform" && !file.images.empty() && rec.landmarks.size() != file.images.front().landmarks.size()) {
        throw FormatError("images[" + std::to_string(k) + "]: " + std::to_string(rec.landmarks.size()) +
                          " landmarks in a uniform file of " + std::to_string(file.images.front().landmarks.size()));
      }
      file.images.push_back(std::move(rec));
    }
  } catch (const FormatError& e) {
    throw FormatError(where + ": " + e.what());
  }
  return file;
}

std::string SerializeLandmarkFile(const LandmarkFile& file) {
  Json doc;
  doc["version"] = file.version;
  doc["format"] = file.format;
  if (file.normalization) doc["normalization"] = detail::NormalizationToJson(*file.normalization);
  doc["images"] = Json::array();
  for (const auto& rec : file.images) {
    Json j;
    j["id"] = rec.id;
    if (rec.image) j["image"] = *rec.image;
    j["points"] = Json::array();
    for (const auto& p : rec.landmarks.points) j["points"].push_back({p.x, p.y});
    if (!rec.landmarks.visible.empty()) {
      j["visible"] = Json::array();
      for (bool v : rec.landmarks.visible) j["visible"].push_back(v);
    }
    if (rec.normalization) j["normalization"] = detail::NormalizationToJson(*rec.normalization);
    doc["images"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

LandmarkFile ReadLandmarkFile(const std::filesystem::path& path) {
  return ParseLandmarkFile(ReadFileBytes(path), path.string());
}

void WriteLandmarkFile(const std::filesystem::path& path, const LandmarkFile& file) {
  WriteFileBytes(path, SerializeLandmarkFile(file));
}

metrics::LandmarkMapping ParseMappingFile(std::string_view text, std::string_view source) {
  const std::string where(source);
  const Json doc = detail::ParseJson(text, source);
  metrics::LandmarkMapping mapping;
  try {
    detail::RequireKeys(doc, "", {"pairs"});
    if (!doc.contains("pairs") || !doc["pairs"].is_array()) throw FormatError("pairs: expected an array");
    for (std::size_t k = 0; k < doc["pairs"].size(); ++k) {
      const auto& p = doc["pairs"][k];
      const std::string path = "pairs[" + std::to_string(k) + "]";
      if (!p.is_array() || p.size() != 2) throw FormatError(path + ": expected [pred_index, gt_index]");
      mapping.pairs.emplace_back(detail::GetInt(p[0], path + "[0]"), detail::GetInt(p[1], path + "[1]"));
    }
    if (mapping.pairs.empty()) throw FormatError("pairs: mapping is empty");
  } catch (const FormatError& e) {
    throw FormatError(where + ": " + e.what());
  }
  return mapping;
}

metrics::LandmarkMapping ReadMappingFile(const std::filesystem::path& path) {
  return ParseMappingFile(ReadFileBytes(path), path.string());
}

}  // namespace hmot::io
