#pragma once

// RFC-4180 CSV output with locale-independent number formatting.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace hkmc {

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for specials.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << csv_field(header[i]);
    os_ << "\r\n";
  }

  template <class... Ts>
  void row(const Ts&... values) {
    static_assert(sizeof...(Ts) > 0);
    std::size_t i = 0;
    ((os_ << (i++ ? "," : "") << cell(values)), ...);
    os_ << "\r\n";
  }

  void raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << csv_field(cells[i]);
    os_ << "\r\n";
  }

  std::size_t width() const noexcept { return width_; }

private:
  template <class T>
  static std::string cell(const T& v) {
    if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
    else if constexpr (std::is_floating_point_v<T>) return format_double(static_cast<double>(v));
    else if constexpr (std::is_integral_v<T>) return std::to_string(v);
    else return csv_field(std::string_view(v));
  }

  std::ostream& os_;
  std::size_t width_;
};

}  // namespace hkmc
