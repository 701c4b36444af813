#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace minicalc::testing {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_file(const std::string& name) { return read_text(std::string(MINICALC_TEST_DATA_DIR) + "/" + name); }
inline std::string golden_path(const std::string& name) { return std::string(MINICALC_GOLDEN_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(MINICALC_FIXTURE_DIR) + "/" + name + ".mc"; }

}  // namespace minicalc::testing
