// gpbm - face identification over Gabor-phase codes with block matching.
//
// Subcommands: encode, match, identify, eval, kernel-dump.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpbm/align.hpp"
#include "gpbm/config.hpp"
#include "gpbm/error.hpp"
#include "gpbm/gabor.hpp"
#include "gpbm/gallery.hpp"
#include "gpbm/image.hpp"
#include "gpbm/matcher.hpp"
#include "gpbm/phase.hpp"

namespace {

using namespace gpbm;

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::io_error, path + ": cannot open for writing");
  out << content;
  if (!out)
    throw Error(Errc::io_error, path + ": write failed");
}

// Eye records are keyed by image id; paths fall back to their basename.
EyePair find_eyes(const std::map<std::string, EyePair>& eyes,
                  const std::string& key, const std::string& path) {
  auto it = eyes.find(key);
  if (it != eyes.end()) return it->second;
  const std::string base = std::filesystem::path(path).filename().string();
  it = eyes.find(base);
  if (it != eyes.end()) return it->second;
  throw Error(Errc::parse_error, "no eye record for '" + key + "'");
}

PhaseCodeImage encode_from_file(const std::string& path, const EyePair& eyes,
                                const Config& cfg) {
  const RasterImage img = load_grayscale(path);
  const RasterImage face = align_face(img, eyes, cfg.align);
  return encode_face(face, cfg.gabor);
}

struct EncodeArgs {
  std::string list, eyes, config, out;
};

int cmd_encode(const EncodeArgs& a) {
  const Config cfg = load_config(a.config);
  const auto eye_map = parse_eye_list(a.eyes);
  const auto list = parse_list_file(a.list);

  std::vector<GalleryRecord> records;
  records.reserve(list.size());
  for (const ListRecord& rec : list)
    records.push_back({rec.identity, rec.image_id, rec.path,
                       find_eyes(eye_map, rec.image_id, rec.path)});

  const GalleryIndex index = build_gallery(records, cfg);
  save_index(index, a.out);
  std::printf("entries: %zu\n", index.entries.size());
  std::printf("fingerprint: %s\n", index.fingerprint.describe().c_str());
  return 0;
}

struct MatchArgs {
  std::string a, b, eyes, config, report;
};

int cmd_match(const MatchArgs& args) {
  const Config cfg = load_config(args.config);
  const auto eye_map = parse_eye_list(args.eyes);
  const PhaseCodeImage pa =
      encode_from_file(args.a, find_eyes(eye_map, args.a, args.a), cfg);
  const PhaseCodeImage pb =
      encode_from_file(args.b, find_eyes(eye_map, args.b, args.b), cfg);
  const MatchReport report = pair_distance(pa, pb, cfg.match);
  std::printf("%.6f\n", report.dist);
  if (!args.report.empty()) write_text(args.report, report_to_text(report));
  return 0;
}

// Probe-side parameters: the given config when present, otherwise the
// index fingerprint completed with defaults for the unsaved fields:
// kernel size, and canonical eye positions scaled to the stored frame.
Config probe_config(const std::optional<Config>& cfg,
                    const GalleryIndex& index) {
  if (cfg) return *cfg;
  Config out;
  out.gabor = index.fingerprint.gabor_params(GaborParams{}.kernel_size);
  out.match = index.fingerprint.match_params();
  const AlignmentSpec ref;
  const double sx = static_cast<double>(index.fingerprint.width) /
                    ref.out_width;
  const double sy = static_cast<double>(index.fingerprint.height) /
                    ref.out_height;
  out.align.out_height = index.fingerprint.height;
  out.align.out_width = index.fingerprint.width;
  out.align.canonical_left = {ref.canonical_left.x * sx,
                              ref.canonical_left.y * sy};
  out.align.canonical_right = {ref.canonical_right.x * sx,
                               ref.canonical_right.y * sy};
  out.validate();
  return out;
}

struct IdentifyArgs {
  std::string index, probes, eyes, out, config;
  int top_k = 5;
  int threads = 1;
};

int cmd_identify(const IdentifyArgs& a) {
  const GalleryIndex index = load_index(a.index);
  std::optional<Config> cfg;
  std::optional<ParamsFingerprint> fp;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
    fp = ParamsFingerprint::from_config(*cfg);
  }
  const Config pcfg = probe_config(cfg, index);
  const auto eye_map = parse_eye_list(a.eyes);
  const auto list = parse_list_file(a.probes);

  std::vector<ProbeCode> probes;
  probes.reserve(list.size());
  for (const ListRecord& rec : list)
    probes.push_back({rec.image_id,
                      encode_from_file(rec.path,
                                       find_eyes(eye_map, rec.image_id,
                                                 rec.path),
                                       pcfg)});

  const std::vector<RankedResult> results =
      identify_batch(probes, index, a.top_k, a.threads, fp);
  write_text(a.out, results_to_csv(results));
  return 0;
}

struct EvalArgs {
  std::string index, probes, eyes, config, cmc, ranked;
  int max_rank = 0;
  int threads = 1;
};

int cmd_eval(const EvalArgs& a) {
  const GalleryIndex index = load_index(a.index);
  const Config cfg = load_config(a.config);
  const ParamsFingerprint fp = ParamsFingerprint::from_config(cfg);
  if (!(fp == index.fingerprint))
    throw Error(Errc::fingerprint_mismatch,
                "config fingerprint differs from the index");
  const auto eye_map = parse_eye_list(a.eyes);
  const auto list = parse_list_file(a.probes);

  std::vector<ProbeEntry> probes;
  probes.reserve(list.size());
  for (const ListRecord& rec : list)
    probes.push_back({rec.image_id, rec.identity,
                      encode_from_file(rec.path,
                                       find_eyes(eye_map, rec.image_id,
                                                 rec.path),
                                       cfg)});

  const int max_rank =
      a.max_rank > 0 ? a.max_rank : static_cast<int>(index.entries.size());
  const EvalResult result = evaluate(probes, index, max_rank, a.threads);
  write_text(a.cmc, cmc_to_csv(result.cmc));
  if (!a.ranked.empty()) write_text(a.ranked, results_to_csv(result.results));
  const double rank1 =
      result.cmc.rates.empty() ? 0.0 : result.cmc.rates.front();
  std::printf("rank-1: %.1f%%\n", 100.0 * rank1);
  return 0;
}

struct KernelDumpArgs {
  std::string config, out;
  int u = 0;
};

int cmd_kernel_dump(const KernelDumpArgs& a) {
  const Config cfg = load_config(a.config);
  const GaborKernel kernel = make_kernel(cfg.gabor, a.u);
  write_text(a.out, kernel_to_csv(kernel));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gabor-phase block-matching face identification"};
  app.require_subcommand(1);

  EncodeArgs enc;
  CLI::App* encode = app.add_subcommand("encode", "build a gallery index");
  encode->add_option("--list", enc.list, "gallery list file")->required();
  encode->add_option("--eyes", enc.eyes, "eye coordinate file")->required();
  encode->add_option("--config", enc.config, "config file")->required();
  encode->add_option("--out", enc.out, "output index path")->required();

  MatchArgs mat;
  CLI::App* match = app.add_subcommand("match", "distance between two faces");
  match->add_option("--a", mat.a, "first image")->required();
  match->add_option("--b", mat.b, "second image")->required();
  match->add_option("--eyes", mat.eyes, "eye coordinate file")->required();
  match->add_option("--config", mat.config, "config file")->required();
  match->add_option("--report", mat.report, "per-block report output");

  IdentifyArgs ide;
  CLI::App* identify = app.add_subcommand("identify", "rank gallery matches");
  identify->add_option("--index", ide.index, "gallery index")->required();
  identify->add_option("--probes", ide.probes, "probe list file")->required();
  identify->add_option("--eyes", ide.eyes, "eye coordinate file")->required();
  identify->add_option("--top-k", ide.top_k, "candidates per probe");
  identify->add_option("--out", ide.out, "output CSV")->required();
  identify->add_option("--config", ide.config,
                       "config file (defaults to the index parameters)");
  identify->add_option("--threads", ide.threads, "worker threads");

  EvalArgs eva;
  CLI::App* eval = app.add_subcommand("eval", "closed-set identification");
  eval->add_option("--index", eva.index, "gallery index")->required();
  eval->add_option("--probes", eva.probes, "probe list file")->required();
  eval->add_option("--config", eva.config, "config file")->required();
  eval->add_option("--eyes", eva.eyes, "eye coordinate file")->required();
  eval->add_option("--cmc", eva.cmc, "CMC CSV output")->required();
  eval->add_option("--max-rank", eva.max_rank,
                   "ranks in the CMC (default: gallery size)");
  eval->add_option("--ranked", eva.ranked, "per-probe ranking CSV output");
  eval->add_option("--threads", eva.threads, "worker threads");

  KernelDumpArgs ker;
  CLI::App* kdump = app.add_subcommand("kernel-dump", "dump kernel taps");
  kdump->add_option("--config", ker.config, "config file")->required();
  kdump->add_option("--u", ker.u, "orientation index")->required();
  kdump->add_option("--out", ker.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (encode->parsed()) return cmd_encode(enc);
    if (match->parsed()) return cmd_match(mat);
    if (identify->parsed()) return cmd_identify(ide);
    if (eval->parsed()) return cmd_eval(eva);
    if (kdump->parsed()) return cmd_kernel_dump(ker);
    return 1;
  } catch (const gpbm::Error& e) {
    std::fprintf(stderr, "error code=%s msg=\"%s\"\n",
                 gpbm::errc_name(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error code=internal msg=\"%s\"\n", e.what());
    return 3;
  }
}
