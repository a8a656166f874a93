#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>

#include "aladdin/bytes.hpp"
#include "aladdin/rng.hpp"
#include "aladdin/sim_time.hpp"
#include "aladdin/util.hpp"

namespace aladdin {

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

namespace {
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

bool from_hex(std::string_view hex, Bytes& out) {
  if (hex.size() % 2 != 0) return false;
  Bytes result;
  result.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) return false;
    result.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  out = std::move(result);
  return true;
}

SimTime sim_ms_from_double(double ms) { return SimTime(std::llround(ms * 1000.0)); }

std::string format_ms(SimTime t) {
  std::int64_t us = t.count();
  const char* sign = "";
  if (us < 0) {
    sign = "-";
    us = -us;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", sign, static_cast<long long>(us / 1000),
                static_cast<long long>(us % 1000));
  return buf;
}

std::int64_t SimRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next());
  const std::uint64_t range = span + 1;
  // Largest multiple of range that fits; draws above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range);
  std::uint64_t draw;
  do {
    draw = next();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % range);
}

double SimRng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

bool read_file(const std::filesystem::path& path, std::string& out) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return false;
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return !in.bad();
}

bool stays_inside(std::string_view relative) {
  std::filesystem::path rel(relative);
  if (rel.empty() || rel.is_absolute() || rel.has_root_name()) return false;
  auto normal = rel.lexically_normal();
  if (normal.empty()) return false;
  return *normal.begin() != "..";
}

}  // namespace aladdin
