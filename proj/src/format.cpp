#include "machina/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace machina {

std::string format_number(double value, int sig) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (value == 0.0) value = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, value);
  return buf;
}

namespace {

bool parse_plain(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

bool parse_number(const std::string& text, double& out) {
  if (text == "inf" || text == "Inf" || text == "infinity") {
    out = INFINITY;
    return true;
  }
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    double num = 0, den = 0;
    if (!parse_plain(text.substr(0, slash), num) || !parse_plain(text.substr(slash + 1), den))
      return false;
    if (den == 0.0) return false;
    out = num / den;
    return std::isfinite(out);
  }
  return parse_plain(text, out) && std::isfinite(out);
}

}  // namespace machina
