#ifndef GPBM_GALLERY_HPP_
#define GPBM_GALLERY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpbm/align.hpp"
#include "gpbm/config.hpp"
#include "gpbm/matcher.hpp"
#include "gpbm/phase.hpp"

namespace gpbm {

// The parameter set an index was encoded under; exactly the fields the
// index file persists. Two indices are comparable iff these are equal.
struct ParamsFingerprint {
  uint16_t height = 0;
  uint16_t width = 0;
  uint8_t channels = 0;
  double k_max = 0.0;
  double f = 0.0;
  double sigma = 0.0;
  uint8_t v = 0;
  std::vector<uint8_t> orientations;
  uint16_t block_h = 0;
  uint16_t block_w = 0;
  uint16_t search_r = 0;
  uint16_t search_c = 0;
  uint16_t fit_count = 0;
  double epsilon = 0.0;

  static ParamsFingerprint from_config(const Config& cfg);
  MatchParams match_params() const;
  GaborParams gabor_params(int kernel_size) const;
  std::string describe() const;
  bool operator==(const ParamsFingerprint&) const = default;
};

struct GalleryEntry {
  std::string identity;
  std::string image_id;
  PhaseCodeImage code;
  bool operator==(const GalleryEntry&) const = default;
};

struct GalleryIndex {
  ParamsFingerprint fingerprint;
  std::vector<GalleryEntry> entries;
  bool operator==(const GalleryIndex&) const = default;
};

struct GalleryRecord {
  std::string identity;
  std::string image_id;
  std::string path;
  EyePair eyes;
};

struct RankedCandidate {
  std::string identity;
  std::string image_id;
  double dist = 0.0;
};

struct RankedResult {
  std::string probe_id;
  std::vector<RankedCandidate> candidates;  // ascending by dist
  std::optional<int> rank_of_truth;         // 1-based
};

struct CmcCurve {
  std::vector<double> rates;  // rates[k-1] = P(rank <= k)
  int probe_count = 0;
};

// Aligns and encodes every record; entries keep input order. Per-record
// failures are collected and reported together; any failure aborts.
GalleryIndex build_gallery(const std::vector<GalleryRecord>& records,
                           const Config& cfg);

void save_index(const GalleryIndex& index, const std::string& path);
GalleryIndex load_index(const std::string& path);

// In-memory serialization used by save_index/load_index.
std::vector<uint8_t> serialize_index(const GalleryIndex& index);
GalleryIndex deserialize_index(const std::vector<uint8_t>& bytes);

// Ranks every gallery entry against the probe; ties keep insertion order.
// When probe_fp is provided it must equal the index fingerprint.
RankedResult identify(const PhaseCodeImage& probe, const GalleryIndex& index,
                      int top_k,
                      const std::optional<ParamsFingerprint>& probe_fp =
                          std::nullopt);

struct ProbeCode {
  std::string probe_id;
  PhaseCodeImage code;
};

// identify() over many probes, optionally in parallel; output order and
// content are independent of the thread count.
std::vector<RankedResult> identify_batch(
    const std::vector<ProbeCode>& probes, const GalleryIndex& index,
    int top_k, int threads = 1,
    const std::optional<ParamsFingerprint>& probe_fp = std::nullopt);

struct ProbeEntry {
  std::string probe_id;
  std::string truth_identity;
  PhaseCodeImage code;
};

struct EvalResult {
  CmcCurve cmc;
  std::vector<RankedResult> results;
};

// Closed-set identification over all probes; rank of truth is the position
// of the best-ranked gallery entry carrying the true identity.
EvalResult evaluate(const std::vector<ProbeEntry>& probes,
                    const GalleryIndex& index, int max_rank, int threads = 1);

// CSV writers shared by the CLI and the test suites.
std::string results_to_csv(const std::vector<RankedResult>& results);
std::string cmc_to_csv(const CmcCurve& cmc);

// List file: one "<identity> <image-id> <path>" per line, '#' comments.
struct ListRecord {
  std::string identity;
  std::string image_id;
  std::string path;
};
std::vector<ListRecord> parse_list_file(const std::string& path);

}  // namespace gpbm

#endif  // GPBM_GALLERY_HPP_
