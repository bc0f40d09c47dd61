#ifndef AERONAV_SUITE_HPP
#define AERONAV_SUITE_HPP

#include <string>
#include <vector>

#include "aeronav/encoder.hpp"
#include "aeronav/world.hpp"

namespace aeronav {

// A frozen scenario suite on disk: one structured-text file per scenario
// plus index.txt listing id, difficulty, file, oracle length and straight
// distance per row.
void write_suite(const std::string& dir, const std::vector<Scenario>& scenarios);

// Loads scenarios in index order. The encoder rebuilds goal features, so
// it must match the one the suite was generated with.
std::vector<Scenario> load_suite(const std::string& dir, const EncoderParams& enc);

}  // namespace aeronav

#endif  // AERONAV_SUITE_HPP
