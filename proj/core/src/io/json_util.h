#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "hmot/error.h"
#include "hmot/metrics/metrics.h"
#include "json.hpp"

namespace hmot::io::detail {

using Json = nlohmann::ordered_json;

/// Parses text, turning syntax errors into FormatError.
Json ParseJson(std::string_view text, std::string_view source);

/// Throws FormatError naming `path.key` for any key outside `allowed`.
void RequireKeys(const Json& obj, std::string_view path, std::initializer_list<std::string_view> allowed);

void RequireObject(const Json& j, std::string_view path);

double GetNumber(const Json& j, std::string_view path);
int GetInt(const Json& j, std::string_view path);
bool GetBool(const Json& j, std::string_view path);
std::string GetString(const Json& j, std::string_view path);

std::uint64_t GetU64(const Json& j, std::string_view path);

metrics::NormalizationRule ParseNormalization(const Json& j, std::string_view path);
Json NormalizationToJson(const metrics::NormalizationRule& rule);

std::string Join(std::string_view path, std::string_view key);

}  // namespace hmot::io::detail
