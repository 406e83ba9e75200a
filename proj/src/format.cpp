#include "phc/format.hpp"

#include <charconv>
#include <system_error>

#include "phc/error.hpp"

namespace phc {

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) throw IoError("cannot format number");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && (text[begin] == ' ' || text[begin] == '\t')) ++begin;
  while (end > begin && (text[end - 1] == ' ' || text[end - 1] == '\t' || text[end - 1] == '\r')) --end;
  if (begin < end && text[begin] == '+') ++begin;
  double value = 0.0;
  const auto res = std::from_chars(text.data() + begin, text.data() + end, value);
  if (res.ec != std::errc{} || res.ptr != text.data() + end) {
    throw IoError("not a number: '" + text + "'");
  }
  return value;
}

}  // namespace phc
