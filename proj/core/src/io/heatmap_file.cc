#include "hmot/io/heatmap_file.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "hmot/error.h"

namespace hmot::io {
namespace {

constexpr char kMagic[4] = {'H', 'M', 'F', '1'};
constexpr std::size_t kHeaderBytes = 16;

void PutU32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFFu));
}

std::uint32_t GetU32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + k])) << (8 * k);
  return v;
}

}  // namespace

Heatmap HeatmapStack::At(std::size_t k) const {
  if (k >= count) throw InvalidInput("heatmap index " + std::to_string(k) + " out of range");
  const auto s = slice(k);
  return Heatmap(shape, std::vector<double>(s.begin(), s.end()));
}

std::vector<Heatmap> HeatmapStack::ToHeatmaps() const {
  std::vector<Heatmap> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(At(k));
  return out;
}

HeatmapStack HeatmapStack::FromHeatmaps(std::span<const Heatmap> hms) {
  HeatmapStack stack;
  if (hms.empty()) return stack;
  stack.shape = hms.front().shape();
  stack.count = hms.size();
  stack.data.reserve(stack.count * stack.shape.cells());
  for (const auto& hm : hms) {
    RequireSameShape(hms.front(), hm, "heatmap stack");
    for (double v : hm.values()) stack.data.push_back(static_cast<float>(v));
  }
  return stack;
}

std::string EncodeHeatmapFile(const HeatmapStack& stack) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (stack.count > kMax || stack.shape.height < 0 || stack.shape.width < 0) {
    throw InvalidInput("heatmap file: dimensions do not fit the header");
  }
  if (stack.data.size() != stack.count * stack.shape.cells()) {
    throw InvalidInput("heatmap file: payload holds " + std::to_string(stack.data.size()) + " values, header says " +
                       std::to_string(stack.count * stack.shape.cells()));
  }
  std::string out(kMagic, kMagic + 4);
  out.reserve(kHeaderBytes + 4 * stack.data.size());
  PutU32(out, static_cast<std::uint32_t>(stack.count));
  PutU32(out, static_cast<std::uint32_t>(stack.shape.height));
  PutU32(out, static_cast<std::uint32_t>(stack.shape.width));
  for (float f : stack.data) PutU32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

HeatmapStack DecodeHeatmapFile(std::string_view bytes, std::string_view source) {
  const std::string where(source);
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError(where + ": not an HMF1 heatmap file");
  }
  HeatmapStack stack;
  stack.count = GetU32(bytes, 4);
  const std::uint32_t h = GetU32(bytes, 8), w = GetU32(bytes, 12);
  if (h == 0 || w == 0 || h > 1u << 15 || w > 1u << 15) {
    throw FormatError(where + ": invalid heatmap size " + std::to_string(h) + "x" + std::to_string(w));
  }
  stack.shape = {static_cast<int>(h), static_cast<int>(w)};
  const std::size_t values = stack.count * stack.shape.cells();
  if (bytes.size() - kHeaderBytes != 4 * values) {
    throw FormatError(where + ": payload is " + std::to_string(bytes.size() - kHeaderBytes) + " bytes, header needs " +
                      std::to_string(4 * values));
  }
  stack.data.resize(values);
  for (std::size_t k = 0; k < values; ++k) {
    const float f = std::bit_cast<float>(GetU32(bytes, kHeaderBytes + 4 * k));
    if (!std::isfinite(f)) {
      const std::size_t cells = stack.shape.cells();
      throw FormatError(where + ": non-finite value in heatmap " + std::to_string(k / cells) + " at cell (row " +
                        std::to_string(k % cells / w) + ", col " + std::to_string(k % w) + ")");
    }
    stack.data[k] = f;
  }
  return stack;
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("failed writing " + path.string());
}

void WriteHeatmapFile(const std::filesystem::path& path, const HeatmapStack& stack) {
  WriteFileBytes(path, EncodeHeatmapFile(stack));
}

HeatmapStack ReadHeatmapFile(const std::filesystem::path& path) {
  return DecodeHeatmapFile(ReadFileBytes(path), path.string());
}

}  // namespace hmot::io
