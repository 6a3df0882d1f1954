#include "gpbm/gallery.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gpbm/error.hpp"
#include "gpbm/image.hpp"
#include "gpbm/phase.hpp"

namespace gpbm {
namespace {

// CRC-32 (IEEE), reflected, zlib-compatible.
uint32_t crc32(const uint8_t* data, size_t len) {
  static const auto table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  uint32_t crc = 0xFFFFFFFFu;
  for (size_t i = 0; i < len; ++i)
    crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

constexpr char kMagic[8] = {'G', 'P', 'B', 'M', 'I', 'D', 'X', '1'};
constexpr uint16_t kFormatVersion = 1;

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<uint8_t>& out, double v) {
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<uint8_t>(bits >> (8 * i)));
}

void put_string(std::vector<uint8_t>& out, const std::string& s) {
  if (s.size() > 0xFFFF)
    throw Error(Errc::io_error, "label longer than 65535 bytes");
  put_u16(out, static_cast<uint16_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

class Reader {
 public:
  explicit Reader(const std::vector<uint8_t>& bytes) : bytes_(bytes) {}

  const uint8_t* take(size_t n) {
    if (pos_ + n > bytes_.size())
      throw Error(Errc::truncated_file, "index file truncated");
    const uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  uint8_t u8() { return *take(1); }
  uint16_t u16() {
    const uint8_t* p = take(2);
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
  }
  uint32_t u32() {
    const uint8_t* p = take(4);
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) |
           (static_cast<uint32_t>(p[3]) << 24);
  }
  double f64() {
    const uint8_t* p = take(8);
    uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    return std::bit_cast<double>(bits);
  }
  std::string str() {
    const uint16_t n = u16();
    const uint8_t* p = take(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }
  size_t pos() const { return pos_; }

 private:
  const std::vector<uint8_t>& bytes_;
  size_t pos_ = 0;
};

// Runs fn(i) for i in [0, n); thread count 1 stays on the caller's thread.
// The first exception thrown by any worker is rethrown after the join.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (int i = next.fetch_add(1); i < n && !failed;
           i = next.fetch_add(1))
        fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min(threads, n);
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

ParamsFingerprint ParamsFingerprint::from_config(const Config& cfg) {
  cfg.validate();
  ParamsFingerprint fp;
  fp.height = static_cast<uint16_t>(cfg.align.out_height);
  fp.width = static_cast<uint16_t>(cfg.align.out_width);
  fp.channels = static_cast<uint8_t>(cfg.gabor.orientations.size());
  fp.k_max = cfg.gabor.k_max;
  fp.f = cfg.gabor.f;
  fp.sigma = cfg.gabor.sigma;
  fp.v = static_cast<uint8_t>(cfg.gabor.v);
  fp.orientations = cfg.gabor.orientations;
  fp.block_h = static_cast<uint16_t>(cfg.match.block_h);
  fp.block_w = static_cast<uint16_t>(cfg.match.block_w);
  fp.search_r = static_cast<uint16_t>(cfg.match.search_r);
  fp.search_c = static_cast<uint16_t>(cfg.match.search_c);
  fp.fit_count = static_cast<uint16_t>(cfg.match.fit_count);
  fp.epsilon = cfg.match.epsilon;
  return fp;
}

MatchParams ParamsFingerprint::match_params() const {
  MatchParams p;
  p.block_h = block_h;
  p.block_w = block_w;
  p.search_r = search_r;
  p.search_c = search_c;
  p.fit_count = fit_count;
  p.epsilon = epsilon;
  return p;
}

GaborParams ParamsFingerprint::gabor_params(int kernel_size) const {
  GaborParams p;
  p.k_max = k_max;
  p.f = f;
  p.sigma = sigma;
  p.v = v;
  p.orientations = orientations;
  p.kernel_size = kernel_size;
  return p;
}

std::string ParamsFingerprint::describe() const {
  char buf[256];
  std::string us;
  for (size_t i = 0; i < orientations.size(); ++i) {
    if (i) us += ",";
    us += std::to_string(orientations[i]);
  }
  std::snprintf(buf, sizeof(buf),
                "%ux%u ch=%u kmax=%.17g f=%.17g sigma=%.17g v=%u u=[%s] "
                "block=%ux%u search=%ux%u fit=%u eps=%.17g",
                height, width, channels, k_max, f, sigma, v, us.c_str(),
                block_h, block_w, search_r, search_c, fit_count, epsilon);
  return buf;
}

GalleryIndex build_gallery(const std::vector<GalleryRecord>& records,
                           const Config& cfg) {
  GalleryIndex index;
  index.fingerprint = ParamsFingerprint::from_config(cfg);

  std::set<std::pair<std::string, std::string>> seen;
  std::string failures;
  for (const GalleryRecord& rec : records) {
    if (!seen.emplace(rec.identity, rec.image_id).second)
      throw Error(Errc::duplicate_entry,
                  "duplicate entry (" + rec.identity + ", " + rec.image_id +
                  ")");
    try {
      const RasterImage raw = load_grayscale(rec.path);
      const RasterImage face = align_face(raw, rec.eyes, cfg.align);
      index.entries.push_back(
          {rec.identity, rec.image_id, encode_face(face, cfg.gabor)});
    } catch (const Error& e) {
      failures += failures.empty() ? "" : "; ";
      failures += rec.image_id + ": " + e.what();
    }
  }
  if (!failures.empty())
    throw Error(Errc::build_failed, "gallery build failed: " + failures);
  return index;
}

std::vector<uint8_t> serialize_index(const GalleryIndex& index) {
  const ParamsFingerprint& fp = index.fingerprint;
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 8);
  put_u16(out, kFormatVersion);
  put_u16(out, fp.height);
  put_u16(out, fp.width);
  out.push_back(fp.channels);
  put_f64(out, fp.k_max);
  put_f64(out, fp.f);
  put_f64(out, fp.sigma);
  out.push_back(fp.v);
  out.push_back(static_cast<uint8_t>(fp.orientations.size()));
  out.insert(out.end(), fp.orientations.begin(), fp.orientations.end());
  put_u16(out, fp.block_h);
  put_u16(out, fp.block_w);
  put_u16(out, fp.search_r);
  put_u16(out, fp.search_c);
  put_u16(out, fp.fit_count);
  put_f64(out, fp.epsilon);
  put_u32(out, static_cast<uint32_t>(index.entries.size()));

  for (const GalleryEntry& e : index.entries) {
    if (e.code.height != fp.height || e.code.width != fp.width ||
        e.code.channels != fp.channels)
      throw Error(Errc::dimension_mismatch,
                  "entry " + e.image_id + " does not match index dimensions");
    put_string(out, e.identity);
    put_string(out, e.image_id);
    out.insert(out.end(), e.code.codes.begin(), e.code.codes.end());
  }
  put_u32(out, crc32(out.data(), out.size()));
  return out;
}

GalleryIndex deserialize_index(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 8)
    throw Error(Errc::truncated_file, "index file shorter than its magic");
  if (std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw Error(Errc::bad_magic, "not a gallery index file");
  Reader r(bytes);
  r.take(8);
  const uint16_t version = r.u16();
  if (version != kFormatVersion)
    throw Error(Errc::version_mismatch,
                "index format version " + std::to_string(version) +
                ", expected " + std::to_string(kFormatVersion));
  if (bytes.size() < 16)
    throw Error(Errc::truncated_file, "index file truncated");
  const uint8_t* tail = bytes.data() + bytes.size() - 4;
  const uint32_t stored = static_cast<uint32_t>(tail[0]) |
                          (static_cast<uint32_t>(tail[1]) << 8) |
                          (static_cast<uint32_t>(tail[2]) << 16) |
                          (static_cast<uint32_t>(tail[3]) << 24);
  if (crc32(bytes.data(), bytes.size() - 4) != stored)
    throw Error(Errc::truncated_file, "index checksum failure");

  GalleryIndex index;
  ParamsFingerprint& fp = index.fingerprint;
  fp.height = r.u16();
  fp.width = r.u16();
  fp.channels = r.u8();
  fp.k_max = r.f64();
  fp.f = r.f64();
  fp.sigma = r.f64();
  fp.v = r.u8();
  const uint8_t n_orient = r.u8();
  const uint8_t* orient = r.take(n_orient);
  fp.orientations.assign(orient, orient + n_orient);
  fp.block_h = r.u16();
  fp.block_w = r.u16();
  fp.search_r = r.u16();
  fp.search_c = r.u16();
  fp.fit_count = r.u16();
  fp.epsilon = r.f64();
  if (fp.channels != n_orient)
    throw Error(Errc::malformed_header,
                "channel count disagrees with orientation count");

  const uint32_t n_entries = r.u32();
  const size_t code_len =
      static_cast<size_t>(fp.channels) * fp.height * fp.width;
  index.entries.reserve(n_entries);
  for (uint32_t i = 0; i < n_entries; ++i) {
    GalleryEntry e;
    e.identity = r.str();
    e.image_id = r.str();
    const uint8_t* codes = r.take(code_len);
    e.code = PhaseCodeImage(fp.height, fp.width, fp.channels);
    std::copy(codes, codes + code_len, e.code.codes.begin());
    index.entries.push_back(std::move(e));
  }
  if (r.pos() != bytes.size() - 4)
    throw Error(Errc::truncated_file, "trailing bytes after last entry");
  return index;
}

void save_index(const GalleryIndex& index, const std::string& path) {
  const std::vector<uint8_t> bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::io_error, path + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw Error(Errc::io_error, path + ": write failed");
}

GalleryIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::io_error, path + ": cannot open");
  std::vector<uint8_t> bytes{std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>()};
  return deserialize_index(bytes);
}

RankedResult identify(const PhaseCodeImage& probe, const GalleryIndex& index,
                      int top_k,
                      const std::optional<ParamsFingerprint>& probe_fp) {
  if (probe_fp && !(*probe_fp == index.fingerprint))
    throw Error(Errc::fingerprint_mismatch,
                "probe parameters differ from the index fingerprint");
  if (!index.entries.empty()) {
    if (probe.height != index.fingerprint.height ||
        probe.width != index.fingerprint.width)
      throw Error(Errc::dimension_mismatch,
                  "probe dimensions differ from index entries");
    if (probe.channels != index.fingerprint.channels)
      throw Error(Errc::channel_mismatch,
                  "probe channels differ from index entries");
  }

  const MatchParams params = index.fingerprint.match_params();
  RankedResult result;
  result.candidates.reserve(index.entries.size());
  for (const GalleryEntry& e : index.entries) {
    const MatchReport report = pair_distance(probe, e.code, params);
    result.candidates.push_back({e.identity, e.image_id, report.dist});
  }
  // ties keep gallery insertion order
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.dist < b.dist;
                   });
  if (top_k >= 0 && result.candidates.size() > static_cast<size_t>(top_k))
    result.candidates.resize(top_k);
  return result;
}

std::vector<RankedResult> identify_batch(
    const std::vector<ProbeCode>& probes, const GalleryIndex& index,
    int top_k, int threads,
    const std::optional<ParamsFingerprint>& probe_fp) {
  if (probe_fp && !(*probe_fp == index.fingerprint))
    throw Error(Errc::fingerprint_mismatch,
                "probe parameters differ from the index fingerprint");
  std::vector<RankedResult> out(probes.size());
  parallel_for(static_cast<int>(probes.size()), threads, [&](int i) {
    RankedResult r = identify(probes[i].code, index, top_k);
    r.probe_id = probes[i].probe_id;
    out[i] = std::move(r);
  });
  return out;
}

EvalResult evaluate(const std::vector<ProbeEntry>& probes,
                    const GalleryIndex& index, int max_rank, int threads) {
  std::set<std::string> identities;
  for (const GalleryEntry& e : index.entries) identities.insert(e.identity);
  for (const ProbeEntry& p : probes)
    if (!identities.count(p.truth_identity))
      throw Error(Errc::unknown_identity,
                  "probe " + p.probe_id + ": identity '" + p.truth_identity +
                  "' not in gallery");

  EvalResult out;
  out.results.resize(probes.size());
  const int n = static_cast<int>(probes.size());
  parallel_for(n, threads, [&](int i) {
    RankedResult r =
        identify(probes[i].code, index, static_cast<int>(index.entries.size()));
    r.probe_id = probes[i].probe_id;
    for (size_t k = 0; k < r.candidates.size(); ++k) {
      if (r.candidates[k].identity == probes[i].truth_identity) {
        r.rank_of_truth = static_cast<int>(k) + 1;
        break;
      }
    }
    out.results[i] = std::move(r);
  });

  out.cmc.probe_count = n;
  out.cmc.rates.assign(std::max(max_rank, 0), 0.0);
  for (const RankedResult& r : out.results) {
    if (!r.rank_of_truth) continue;
    const int rank = *r.rank_of_truth;
    for (int k = rank; k <= max_rank; ++k) out.cmc.rates[k - 1] += 1.0;
  }
  if (n > 0)
    for (double& rate : out.cmc.rates) rate /= n;
  return out;
}

std::string results_to_csv(const std::vector<RankedResult>& results) {
  std::string out = "probe_id,rank,identity,image_id,dist\n";
  char buf[64];
  for (const RankedResult& r : results) {
    for (size_t k = 0; k < r.candidates.size(); ++k) {
      const RankedCandidate& c = r.candidates[k];
      std::snprintf(buf, sizeof(buf), ",%zu,", k + 1);
      out += r.probe_id;
      out += buf;
      out += c.identity + "," + c.image_id;
      std::snprintf(buf, sizeof(buf), ",%.6f\n", c.dist);
      out += buf;
    }
  }
  return out;
}

std::string cmc_to_csv(const CmcCurve& cmc) {
  std::string out = "k,rate\n";
  char buf[48];
  for (size_t k = 0; k < cmc.rates.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.6f\n", k + 1, cmc.rates[k]);
    out += buf;
  }
  return out;
}

std::vector<ListRecord> parse_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::file_not_found, path + ": cannot open");
  std::vector<ListRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    ListRecord rec;
    if (!(ls >> rec.identity)) continue;
    if (!(ls >> rec.image_id >> rec.path))
      throw Error(Errc::parse_error,
                  path + ":" + std::to_string(lineno) +
                  ": expected <identity> <image-id> <path>");
    std::string extra;
    if (ls >> extra)
      throw Error(Errc::parse_error,
                  path + ":" + std::to_string(lineno) + ": trailing token '" +
                  extra + "'");
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace gpbm
