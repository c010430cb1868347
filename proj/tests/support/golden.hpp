#pragma once
// Frozen reference outputs. A missing file (or SATDOMAIN_UPDATE_GOLDEN=1) writes the
// current output as the new reference.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace satdomain::testing {

struct GoldenResult {
  bool matched = false;
  bool written = false;
  std::string expected;
};

inline GoldenResult check_golden(const std::string& path, const std::string& actual) {
  GoldenResult r;
  const char* update = std::getenv("SATDOMAIN_UPDATE_GOLDEN");
  std::ifstream in(path, std::ios::binary);
  if (!in || (update && std::string(update) == "1")) {
    std::ofstream(path, std::ios::binary) << actual;
    r.matched = true;
    r.written = true;
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  r.expected = ss.str();
  r.matched = r.expected == actual;
  return r;
}

}  // namespace satdomain::testing
