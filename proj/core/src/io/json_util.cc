#include "json_util.h"

#include <cmath>

namespace hmot::io::detail {

Json ParseJson(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string(source) + ": " + e.what());
  }
}

std::string Join(std::string_view path, std::string_view key) {
  return path.empty() ? std::string(key) : std::string(path) + "." + std::string(key);
}

void RequireObject(const Json& j, std::string_view path) {
  if (!j.is_object()) throw FormatError(std::string(path.empty() ? "document" : path) + ": expected an object");
}

void RequireKeys(const Json& obj, std::string_view path, std::initializer_list<std::string_view> allowed) {
  RequireObject(obj, path);
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw FormatError("unknown key '" + Join(path, item.key()) + "'");
  }
}

double GetNumber(const Json& j, std::string_view path) {
  if (!j.is_number()) throw FormatError(std::string(path) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(std::string(path) + ": expected a finite number");
  return v;
}

int GetInt(const Json& j, std::string_view path) {
  if (!j.is_number_integer()) throw FormatError(std::string(path) + ": expected an integer");
  return j.get<int>();
}

bool GetBool(const Json& j, std::string_view path) {
  if (!j.is_boolean()) throw FormatError(std::string(path) + ": expected true or false");
  return j.get<bool>();
}

std::string GetString(const Json& j, std::string_view path) {
  if (!j.is_string()) throw FormatError(std::string(path) + ": expected a string");
  return j.get<std::string>();
}

std::uint64_t GetU64(const Json& j, std::string_view path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw FormatError(std::string(path) + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

namespace {

std::vector<int> GetIndexList(const Json& j, std::string_view path) {
  if (!j.is_array()) throw FormatError(std::string(path) + ": expected an array of landmark indices");
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(GetInt(j[k], std::string(path) + "[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace

metrics::NormalizationRule ParseNormalization(const Json& j, std::string_view path) {
  RequireKeys(j, path, {"kind", "left_eye", "right_eye", "value"});
  if (!j.contains("kind")) throw FormatError(Join(path, "kind") + ": missing");
  metrics::NormalizationRule rule;
  try {
    rule.kind = metrics::ParseNormalizationKind(GetString(j["kind"], Join(path, "kind")));
  } catch (const InvalidInput& e) {
    throw FormatError(Join(path, "kind") + ": " + e.what());
  }
  if (rule.kind == metrics::NormalizationKind::kInterOcular) {
    if (!j.contains("left_eye") || !j.contains("right_eye")) {
      throw FormatError(std::string(path) + ": inter-ocular normalization needs left_eye and right_eye");
    }
    if (j.contains("value")) throw FormatError(Join(path, "value") + ": not used by inter-ocular normalization");
    rule.left_eye = GetIndexList(j["left_eye"], Join(path, "left_eye"));
    rule.right_eye = GetIndexList(j["right_eye"], Join(path, "right_eye"));
  } else {
    if (!j.contains("value")) throw FormatError(Join(path, "value") + ": missing");
    if (j.contains("left_eye") || j.contains("right_eye")) {
      throw FormatError(std::string(path) + ": eye indices only apply to inter-ocular normalization");
    }
    rule.value = GetNumber(j["value"], Join(path, "value"));
    if (!(rule.value > 0.0)) throw FormatError(Join(path, "value") + ": must be positive");
  }
  return rule;
}

Json NormalizationToJson(const metrics::NormalizationRule& rule) {
  Json j;
  j["kind"] = std::string(metrics::ToString(rule.kind));
  if (rule.kind == metrics::NormalizationKind::kInterOcular) {
    j["left_eye"] = rule.left_eye;
    j["right_eye"] = rule.right_eye;
  } else {
    j["value"] = rule.value;
  }
  return j;
}

}  // namespace hmot::io::detail
