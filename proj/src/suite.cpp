#include "aeronav/suite.hpp"

#include "aeronav/errors.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

void write_suite(const std::string& dir, const std::vector<Scenario>& scenarios) {
  std::string index = "count=" + fmt_int(static_cast<long long>(scenarios.size())) + "\n";
  for (const Scenario& s : scenarios) {
    const std::string file = "scenario_" + s.id + ".txt";
    write_file(dir + "/" + file, serialize_scenario(s));
    index += "scenario=" + s.id + "," + s.difficulty + "," + file + "," +
             fmt_double(s.oracle_length()) + "," + fmt_double(s.straight_distance()) + "\n";
  }
  write_file(dir + "/index.txt", index);
}

std::vector<Scenario> load_suite(const std::string& dir, const EncoderParams& enc) {
  const std::string index = read_file(dir + "/index.txt");
  std::vector<Scenario> scenarios;
  size_t declared = 0;
  for (const std::string& raw : split(index, '\n')) {
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    KeyValue kv = parse_kv(line);
    if (kv.key == "count") {
      declared = static_cast<size_t>(parse_int(kv.value));
    } else if (kv.key == "scenario") {
      auto parts = split(kv.value, ',');
      if (parts.size() != 5) throw FormatError("suite index row needs 5 fields");
      scenarios.push_back(parse_scenario(read_file(dir + "/" + parts[2]), enc));
      if (scenarios.back().id != parts[0]) {
        throw FormatError("suite index id mismatch for " + parts[2]);
      }
    } else {
      throw FormatError("unknown suite index key '" + kv.key + "'");
    }
  }
  if (scenarios.size() != declared) {
    throw FormatError("suite index count mismatch: declared " + fmt_int((long long)declared) +
                      ", found " + fmt_int((long long)scenarios.size()));
  }
  return scenarios;
}

}  // namespace aeronav
