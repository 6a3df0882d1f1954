#include "gpbm/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "gpbm/error.hpp"

namespace gpbm {
namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) parts.push_back(trim(item));
  return parts;
}

[[noreturn]] void bad_value(int lineno, const std::string& key,
                            const std::string& value) {
  throw Error(Errc::invalid_config,
              "line " + std::to_string(lineno) + ": bad value '" + value +
              "' for " + key);
}

double to_double(int lineno, const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  bad_value(lineno, key, v);
}

int to_int(int lineno, const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos == v.size() && d >= INT32_MIN && d <= INT32_MAX)
      return static_cast<int>(d);
  } catch (const std::exception&) {
  }
  bad_value(lineno, key, v);
}

Point to_point(int lineno, const std::string& key, const std::string& v) {
  const std::vector<std::string> parts = split_list(v);
  if (parts.size() != 2) bad_value(lineno, key, v);
  return {to_double(lineno, key, parts[0]), to_double(lineno, key, parts[1])};
}

}  // namespace

void Config::validate() const {
  gabor.validate();
  match.validate();
  if (align.out_height < 1 || align.out_width < 1)
    throw Error(Errc::invalid_config, "output frame dimensions must be >= 1");
  auto inside = [&](Point p) {
    return p.x > 0.0 && p.x < align.out_width - 1 && p.y > 0.0 &&
           p.y < align.out_height - 1;
  };
  if (!inside(align.canonical_left) || !inside(align.canonical_right))
    throw Error(Errc::invalid_config,
                "canonical eyes must lie strictly inside the output frame");
  if (!(align.canonical_left.x < align.canonical_right.x))
    throw Error(Errc::invalid_config,
                "canonical left eye must lie left of the right eye");
  if (match.block_h > align.out_height || match.block_w > align.out_width)
    throw Error(Errc::invalid_config, "block exceeds the output frame");
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::invalid_config, "line " + std::to_string(lineno) +
                                            ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error(Errc::invalid_config, "line " + std::to_string(lineno) +
                                            ": expected key = value");

    if (key == "k_max") {
      cfg.gabor.k_max = to_double(lineno, key, value);
    } else if (key == "f") {
      cfg.gabor.f = to_double(lineno, key, value);
    } else if (key == "sigma") {
      cfg.gabor.sigma = to_double(lineno, key, value);
    } else if (key == "v") {
      cfg.gabor.v = to_int(lineno, key, value);
    } else if (key == "orientations") {
      cfg.gabor.orientations.clear();
      for (const std::string& item : split_list(value)) {
        const int u = to_int(lineno, key, item);
        if (u < 0 || u > 255) bad_value(lineno, key, value);
        cfg.gabor.orientations.push_back(static_cast<uint8_t>(u));
      }
    } else if (key == "kernel_size") {
      cfg.gabor.kernel_size = to_int(lineno, key, value);
    } else if (key == "block_h") {
      cfg.match.block_h = to_int(lineno, key, value);
    } else if (key == "block_w") {
      cfg.match.block_w = to_int(lineno, key, value);
    } else if (key == "search_r") {
      cfg.match.search_r = to_int(lineno, key, value);
    } else if (key == "search_c") {
      cfg.match.search_c = to_int(lineno, key, value);
    } else if (key == "fit_count") {
      cfg.match.fit_count = to_int(lineno, key, value);
    } else if (key == "epsilon") {
      cfg.match.epsilon = to_double(lineno, key, value);
    } else if (key == "out_height") {
      cfg.align.out_height = to_int(lineno, key, value);
    } else if (key == "out_width") {
      cfg.align.out_width = to_int(lineno, key, value);
    } else if (key == "canonical_left_eye") {
      cfg.align.canonical_left = to_point(lineno, key, value);
    } else if (key == "canonical_right_eye") {
      cfg.align.canonical_right = to_point(lineno, key, value);
    } else {
      throw Error(Errc::invalid_config, "line " + std::to_string(lineno) +
                                            ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::file_not_found, path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gpbm
