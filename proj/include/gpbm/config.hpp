#ifndef GPBM_CONFIG_HPP_
#define GPBM_CONFIG_HPP_

#include <string>

#include "gpbm/align.hpp"
#include "gpbm/gabor.hpp"
#include "gpbm/matcher.hpp"

namespace gpbm {

// Full parameter set; defaults are the reference operating point
// (6x6 kernel, v=0, u={2,6}, f=sqrt(2), k_max=pi/2, sigma=2*pi,
//  150x136 frame, 29x19 blocks, R=7, C=6).
struct Config {
  GaborParams gabor;
  MatchParams match;
  AlignmentSpec align;

  void validate() const;
  bool operator==(const Config&) const = default;
};

// Flat "key = value" file, '#' comments, lists comma-separated.
// Unknown keys are rejected; values are validated on load.
Config load_config(const std::string& path);

// Parses config text (same format as load_config).
Config parse_config(const std::string& text);

}  // namespace gpbm

#endif  // GPBM_CONFIG_HPP_
