#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "seqnms/clip_io.hpp"
#include "seqnms/evaluation.hpp"
#include "seqnms/nms.hpp"
#include "seqnms/oracle.hpp"
#include "seqnms/report.hpp"
#include "seqnms/seq_nms.hpp"
#include "seqnms/synthesis.hpp"

namespace seqnms::cli {

namespace fs = std::filesystem;

unsigned default_thread_count() {
  if (const char* env = std::getenv("SEQNMS_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Calls fn(i) for i in [0, n) on up to `threads` workers. If any call
/// throws, the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Thresholds {
  double link = kDefaultLinkThreshold;
  double suppress = kDefaultSuppressThreshold;
  double nms = kDefaultNmsThreshold;
};

void add_threshold_options(CLI::App& cmd, Thresholds& th) {
  cmd.add_option("--link-thresh", th.link, "IoU above which boxes in adjacent frames link")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--suppress-thresh", th.suppress, "IoU above which Seq-NMS suppresses")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--nms-thresh", th.nms, "IoU above which per-frame NMS suppresses")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

ClipDetections apply_method(const std::string& method, const ClipDetections& clip,
                            const Thresholds& th) {
  if (method == "nms") return nms_clip(clip, th.nms);
  SeqNmsConfig cfg;
  cfg.link_thresh = th.link;
  cfg.suppress_thresh = th.suppress;
  if (method == "seqnms-avg") cfg.rescore = RescoreMode::Average;
  else if (method == "seqnms-max") cfg.rescore = RescoreMode::Max;
  else throw UsageError("unknown method " + method);
  return seq_nms(clip, cfg);
}

void check_clip_id(const std::string& id) {
  const bool ok = !id.empty() && id != "." && id != ".." &&
                  std::all_of(id.begin(), id.end(), [](unsigned char c) {
                    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
                  });
  if (!ok) throw ClipFormatError("clip_id \"" + id + "\" is not usable as a file name");
}

/// Loads every clip under `path`, keyed and sorted by clip id.
std::map<std::string, ClipFile> load_all(const fs::path& path, unsigned threads,
                                         std::ostream& err) {
  const auto files = list_clip_files(path);
  std::vector<LoadedClip> loaded(files.size());
  parallel_for(files.size(), threads, [&](std::size_t i) { loaded[i] = load_clip(files[i]); });

  std::map<std::string, ClipFile> out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    for (const auto& w : loaded[i].warnings)
      err << "warning: " << files[i].string() << ": " << w << '\n';
    check_clip_id(loaded[i].file.clip_id);
    const std::string id = loaded[i].file.clip_id;
    if (!out.emplace(id, std::move(loaded[i].file)).second)
      throw ClipFormatError("duplicate clip_id " + id + " under " + path.string());
  }
  if (out.empty()) throw ClipFormatError("no clip files found under " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

struct EvalInputs {
  std::vector<std::string> ids;
  std::vector<ClipDetections> dets;
  std::vector<GroundTruthClip> gts;
  std::vector<std::string> labels;
};

/// Pairs detection clips with ground truth by clip id. Ground-truth clips
/// without detections count as clips where nothing was detected.
EvalInputs pair_with_ground_truth(const std::map<std::string, ClipDetections>& dets,
                                  const std::map<std::string, ClipFile>& gt_files) {
  EvalInputs in;
  for (const auto& [id, d] : dets)
    if (!gt_files.contains(id)) throw ClipFormatError("no ground truth for clip " + id);
  for (const auto& [id, file] : gt_files) {
    if (!file.ground_truth) throw ClipFormatError("clip " + id + " has no ground_truth section");
    if (in.labels.empty()) in.labels = file.class_labels;
    auto it = dets.find(id);
    in.ids.push_back(id);
    in.dets.push_back(it != dets.end()
                          ? it->second
                          : ClipDetections::with_frames(file.ground_truth->num_frames()));
    in.gts.push_back(*file.ground_truth);
  }
  return in;
}

int cmd_synth(const std::string& scenario, std::uint64_t seed, const fs::path& out_dir,
              std::ostream& out) {
  std::vector<SyntheticClip> clips;
  if (scenario == "all") {
    clips = scenario_suite(seed);
  } else {
    auto kind = parse_scenario_kind(scenario);
    if (!kind) throw UsageError("unknown scenario " + scenario);
    clips = scenario_suite(seed, *kind);
  }
  fs::create_directories(out_dir);
  for (const auto& c : clips) {
    ClipFile f{c.id, c.class_labels, c.detections, c.ground_truth};
    save_clip(f, out_dir / (c.id + ".json"));
  }
  out << "wrote " << clips.size() << " clips to " << out_dir.string() << '\n';
  return 0;
}

int cmd_run(const std::string& method, const Thresholds& th, const fs::path& in_path,
            const fs::path& out_dir, unsigned threads, std::ostream& out, std::ostream& err) {
  const auto inputs = load_all(in_path, threads, err);
  std::vector<const ClipFile*> clips;
  for (const auto& [id, f] : inputs) clips.push_back(&f);

  fs::create_directories(out_dir);
  parallel_for(clips.size(), threads, [&](std::size_t i) {
    const ClipFile& in = *clips[i];
    ClipFile result{in.clip_id, in.class_labels, apply_method(method, in.detections, th), {}};
    save_clip(result, out_dir / (in.clip_id + ".json"));
  });
  out << method << ": processed " << clips.size() << " clips into " << out_dir.string() << '\n';
  return 0;
}

int cmd_eval(const fs::path& dets_path, const fs::path& gt_path, double match_iou,
             const std::string& csv_path, unsigned threads, std::ostream& out,
             std::ostream& err) {
  std::map<std::string, ClipDetections> dets;
  for (auto& [id, f] : load_all(dets_path, threads, err)) dets.emplace(id, std::move(f.detections));
  const auto gts = load_all(gt_path, threads, err);
  EvalInputs in = pair_with_ground_truth(dets, gts);

  std::string name = fs::path(dets_path).filename().string();
  if (name.empty()) name = fs::path(dets_path).parent_path().filename().string();
  const EvalReport report = evaluate(in.dets, in.gts, match_iou, name);

  std::ostringstream csv;
  write_report_csv(csv, report, in.labels);
  out << "method: " << report.method_name << '\n' << csv.str();
  if (!csv_path.empty()) write_text(csv_path, csv.str());
  return 0;
}

int cmd_compare(const fs::path& in_path, const std::string& gt_arg, const Thresholds& th,
                double match_iou, const std::string& csv_path, const std::string& table_path,
                unsigned threads, std::ostream& out, std::ostream& err) {
  const auto inputs = load_all(in_path, threads, err);
  const auto gt_files = gt_arg.empty() ? inputs : load_all(gt_arg, threads, err);

  std::map<std::string, ClipDetections> raw;
  for (const auto& [id, f] : inputs) raw.emplace(id, f.detections);
  const EvalInputs base = pair_with_ground_truth(raw, gt_files);

  const std::vector<std::string> methods = {"nms", "seqnms-max", "seqnms-avg"};
  std::vector<std::vector<ClipDetections>> processed(methods.size(),
                                                     std::vector<ClipDetections>(base.ids.size()));
  parallel_for(methods.size() * base.ids.size(), threads, [&](std::size_t k) {
    const std::size_t m = k / base.ids.size();
    const std::size_t c = k % base.ids.size();
    processed[m][c] = apply_method(methods[m], base.dets[c], th);
  });

  MethodComparison cmp;
  cmp.nms = evaluate(processed[0], base.gts, match_iou, "nms");
  cmp.seqnms_max = evaluate(processed[1], base.gts, match_iou, "seqnms-max");
  cmp.seqnms_avg = evaluate(processed[2], base.gts, match_iou, "seqnms-avg");
  const EvalReport parts[] = {cmp.nms, cmp.seqnms_avg, cmp.seqnms_max};
  cmp.seqnms_best = per_class_best(parts);
  cmp.seqnms_best.method_name = "seqnms-best";

  const EvalReport rows[] = {cmp.nms, cmp.seqnms_max, cmp.seqnms_avg, cmp.seqnms_best};
  std::ostringstream table;
  write_method_table(table, rows);
  out << table.str();
  if (!table_path.empty()) write_text(table_path, table.str());

  std::ostringstream csv;
  write_comparison_csv(csv, cmp, base.labels);
  if (!csv_path.empty()) write_text(csv_path, csv.str());
  else out << csv.str();
  return 0;
}

int cmd_oracle_check(std::size_t seeds, std::size_t max_frames, std::size_t max_boxes,
                     std::ostream& out) {
  const auto s = oracle::run_equivalence_check(seeds, max_frames, max_boxes);
  out << "oracle-check: " << s.seeds << " seeds, " << s.sequence_mismatches
      << " sequence mismatches, " << s.nms_mismatches << " NMS mismatches\n";
  if (s.first_failing_seed) out << "first failing seed: " << *s.first_failing_seed << '\n';
  out << (s.passed() ? "PASS" : "FAIL") << '\n';
  return s.passed() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seq-NMS video detection post-processing", "seqnms"};
  app.require_subcommand(1);

  unsigned threads = 0;
  auto add_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "Worker threads (default: $SEQNMS_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  };

  std::string scenario;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* synth = app.add_subcommand("synth", "Write synthetic scenario clips");
  synth->add_option("--scenario", scenario, "Scenario name or 'all'")->required();
  synth->add_option("--seed", seed, "Suite seed")->capture_default_str();
  synth->add_option("--out", out_dir, "Output directory")->required();

  std::string method;
  Thresholds th;
  std::string in_path;
  auto* run_cmd = app.add_subcommand("run", "Apply NMS or Seq-NMS to clip files");
  run_cmd->add_option("--method", method, "nms | seqnms-avg | seqnms-max")
      ->required()
      ->check(CLI::IsMember({"nms", "seqnms-avg", "seqnms-max"}));
  add_threshold_options(*run_cmd, th);
  run_cmd->add_option("--in", in_path, "Input clip file or directory")->required()->check(CLI::ExistingPath);
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  add_threads(run_cmd);

  std::string dets_path;
  std::string gt_path;
  double match_iou = kDefaultMatchIou;
  std::string csv_path;
  auto* eval_cmd = app.add_subcommand("eval", "Per-class AP and mAP of detections");
  eval_cmd->add_option("--dets", dets_path, "Detection clip file or directory")
      ->required()
      ->check(CLI::ExistingPath);
  eval_cmd->add_option("--gt", gt_path, "Clip files carrying ground truth")->required()->check(CLI::ExistingPath);
  eval_cmd->add_option("--match-iou", match_iou, "IoU needed to match ground truth")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--csv", csv_path, "Write per-class CSV here");
  add_threads(eval_cmd);

  std::string table_path;
  auto* compare_cmd = app.add_subcommand("compare", "Compare nms, seqnms-max, seqnms-avg and seqnms-best");
  compare_cmd->add_option("--in", in_path, "Raw detection clips")->required()->check(CLI::ExistingPath);
  compare_cmd->add_option("--gt", gt_path, "Ground-truth clips (default: --in)")->check(CLI::ExistingPath);
  add_threshold_options(*compare_cmd, th);
  compare_cmd->add_option("--match-iou", match_iou, "IoU needed to match ground truth")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  compare_cmd->add_option("--csv", csv_path, "Write the per-class comparison CSV here");
  compare_cmd->add_option("--table", table_path, "Also write the method table here");
  add_threads(compare_cmd);

  std::size_t seeds = 200;
  std::size_t max_frames = 5;
  std::size_t max_boxes = 6;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "DP vs brute-force equivalence suite");
  oracle_cmd->add_option("--seeds", seeds)->capture_default_str();
  oracle_cmd->add_option("--max-frames", max_frames)->capture_default_str()->check(CLI::Range(1, 8));
  oracle_cmd->add_option("--max-boxes", max_boxes)->capture_default_str()->check(CLI::Range(0, 8));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) err << app.help();
    return code;
  }

  if (threads == 0) threads = default_thread_count();
  try {
    if (synth->parsed()) return cmd_synth(scenario, seed, out_dir, out);
    if (run_cmd->parsed()) return cmd_run(method, th, in_path, out_dir, threads, out, err);
    if (eval_cmd->parsed())
      return cmd_eval(dets_path, gt_path, match_iou, csv_path, threads, out, err);
    if (compare_cmd->parsed())
      return cmd_compare(in_path, gt_path, th, match_iou, csv_path, table_path, threads, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle_check(seeds, max_frames, max_boxes, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace seqnms::cli
