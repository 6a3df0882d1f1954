#include "gpbm/error.hpp"

namespace gpbm {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::file_not_found: return "file_not_found";
    case Errc::malformed_header: return "malformed_header";
    case Errc::unsupported_depth: return "unsupported_depth";
    case Errc::degenerate_eyes: return "degenerate_eyes";
    case Errc::parse_error: return "parse_error";
    case Errc::duplicate_id: return "duplicate_id";
    case Errc::out_of_range: return "out_of_range";
    case Errc::block_larger_than_image: return "block_larger_than_image";
    case Errc::patch_out_of_bounds: return "patch_out_of_bounds";
    case Errc::channel_mismatch: return "channel_mismatch";
    case Errc::too_few_candidates: return "too_few_candidates";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::duplicate_entry: return "duplicate_entry";
    case Errc::io_error: return "io_error";
    case Errc::bad_magic: return "bad_magic";
    case Errc::version_mismatch: return "version_mismatch";
    case Errc::truncated_file: return "truncated_file";
    case Errc::fingerprint_mismatch: return "fingerprint_mismatch";
    case Errc::unknown_identity: return "unknown_identity";
    case Errc::build_failed: return "build_failed";
    case Errc::invalid_config: return "invalid_config";
  }
  return "unknown";
}

}  // namespace gpbm
