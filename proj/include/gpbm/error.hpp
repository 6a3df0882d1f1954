#ifndef GPBM_ERROR_HPP_
#define GPBM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gpbm {

enum class Errc {
  // image / eye-list ingestion
  file_not_found,
  malformed_header,
  unsupported_depth,
  degenerate_eyes,
  parse_error,
  duplicate_id,
  // codes and matching
  out_of_range,
  block_larger_than_image,
  patch_out_of_bounds,
  channel_mismatch,
  too_few_candidates,
  dimension_mismatch,
  // gallery index
  duplicate_entry,
  io_error,
  bad_magic,
  version_mismatch,
  truncated_file,
  fingerprint_mismatch,
  unknown_identity,
  build_failed,
  // configuration
  invalid_config,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace gpbm

#endif  // GPBM_ERROR_HPP_
