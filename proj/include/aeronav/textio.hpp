#ifndef AERONAV_TEXTIO_HPP
#define AERONAV_TEXTIO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aeronav {

// Shortest decimal representation that round-trips bit-exactly.
std::string fmt_double(double x);
std::string fmt_int(long long x);

// Strict parsers: the whole token must be consumed.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);
bool parse_bool(std::string_view s);

// Comma-separated doubles, formatted with fmt_double.
std::string join_doubles(const std::vector<double>& xs);
std::vector<double> split_doubles(std::string_view s);

// One `key=value` pair; value may contain '=' (split at the first one).
struct KeyValue {
  std::string key;
  std::string value;
};
KeyValue parse_kv(std::string_view line);

std::vector<std::string> split(std::string_view s, char sep);

// Whole-file helpers. write_file creates parent directories.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit over bytes, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace aeronav

#endif  // AERONAV_TEXTIO_HPP
