#include "seqnms/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "seqnms/nms.hpp"
#include "seqnms/random.hpp"

namespace seqnms::oracle {

namespace {

struct Enumerator {
  const ClipDetections& clip;
  double link_thresh;
  std::vector<std::size_t> path;
  std::size_t t_start = 0;
  std::optional<Sequence> best;

  void visit(std::size_t t, std::size_t i, double sum) {
    path.push_back(i);
    if (!best || sum > best->seq_score) {
      Sequence s;
      s.t_start = t_start;
      s.t_end = t;
      s.indices = path;
      for (std::size_t k = 0; k < path.size(); ++k)
        s.raw_scores.push_back(clip.frames[t_start + k].detections[path[k]].score);
      s.rescored = s.raw_scores;
      s.seq_score = sum;
      best = std::move(s);
    }
    if (t + 1 < clip.frames.size()) {
      const auto& here = clip.frames[t].detections[i];
      const auto& next = clip.frames[t + 1].detections;
      for (std::size_t j = 0; j < next.size(); ++j)
        if (iou(here.box, next[j].box) > link_thresh) visit(t + 1, j, sum + next[j].score);
    }
    path.pop_back();
  }
};

}  // namespace

std::optional<Sequence> brute_force_best_sequence(const ClipDetections& clip,
                                                  double link_thresh) {
  double product = 1.0;
  for (const auto& f : clip.frames) product *= static_cast<double>(f.detections.size() + 1);
  if (product > kMaxEnumeration)
    throw EnumerationTooLarge("clip too large for exhaustive sequence enumeration");

  Enumerator e{clip, link_thresh, {}, 0, std::nullopt};
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    e.t_start = t;
    const auto& dets = clip.frames[t].detections;
    for (std::size_t i = 0; i < dets.size(); ++i) e.visit(t, i, dets[i].score);
  }
  return e.best;
}

std::vector<std::size_t> brute_force_nms(std::span<const Detection> dets, double iou_thresh) {
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < dets.size(); ++i) remaining.push_back(i);
  std::vector<std::size_t> kept;
  while (!remaining.empty()) {
    std::size_t arg = 0;
    for (std::size_t k = 1; k < remaining.size(); ++k)
      if (dets[remaining[k]].score > dets[remaining[arg]].score) arg = k;
    const std::size_t top = remaining[arg];
    kept.push_back(top);
    std::vector<std::size_t> next;
    for (std::size_t r : remaining)
      if (r != top && !(iou(dets[top].box, dets[r].box) > iou_thresh)) next.push_back(r);
    remaining = std::move(next);
  }
  return kept;
}

namespace {

BBox random_box(Rng& rng) {
  const double x1 = rng.uniform(0.0, 90.0);
  const double y1 = rng.uniform(0.0, 90.0);
  const double x2 = rng.uniform(x1 + 1.0, 100.0);
  const double y2 = rng.uniform(y1 + 1.0, 100.0);
  return BBox(x1, y1, x2, y2);
}

BBox perturb(Rng& rng, const BBox& b) {
  const double w = b.width();
  const double h = b.height();
  double x1 = std::clamp(b.x1() + rng.uniform(-0.1, 0.1) * w, 0.0, 100.0);
  double y1 = std::clamp(b.y1() + rng.uniform(-0.1, 0.1) * h, 0.0, 100.0);
  double x2 = std::clamp(b.x2() + rng.uniform(-0.1, 0.1) * w, 0.0, 100.0);
  double y2 = std::clamp(b.y2() + rng.uniform(-0.1, 0.1) * h, 0.0, 100.0);
  if (x2 < x1) std::swap(x1, x2);
  if (y2 < y1) std::swap(y1, y2);
  return BBox(x1, y1, x2, y2);
}

}  // namespace

ClipDetections random_clip(std::uint64_t seed, std::size_t max_frames, std::size_t max_boxes) {
  Rng rng(seed);
  const std::size_t T = 1 + rng.below(std::max<std::size_t>(max_frames, 1));
  ClipDetections clip = ClipDetections::with_frames(T);
  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t n = rng.below(max_boxes + 1);
    const auto* prev = t > 0 ? &clip.frames[t - 1].detections : nullptr;
    for (std::size_t i = 0; i < n; ++i) {
      BBox box;
      if (prev && !prev->empty() && rng.uniform() < 0.5)
        box = perturb(rng, (*prev)[rng.below(prev->size())].box);
      else
        box = random_box(rng);
      clip.frames[t].detections.push_back({box, rng.uniform(), ClassId{0}});
    }
  }
  return clip;
}

std::vector<Detection> random_frame(std::uint64_t seed, std::size_t max_boxes) {
  Rng rng(seed);
  const std::size_t n = rng.below(max_boxes + 1);
  std::vector<Detection> dets;
  for (std::size_t i = 0; i < n; ++i) {
    BBox box = (!dets.empty() && rng.uniform() < 0.5)
                   ? perturb(rng, dets[rng.below(dets.size())].box)
                   : random_box(rng);
    dets.push_back({box, rng.uniform(), ClassId{0}});
  }
  return dets;
}

CheckSummary run_equivalence_check(std::size_t seeds, std::size_t max_frames,
                                   std::size_t max_boxes, double tolerance,
                                   double link_thresh, double nms_thresh) {
  CheckSummary summary;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    ++summary.seeds;
    const ClipDetections clip = random_clip(seed, max_frames, max_boxes);
    const auto dp = select_best_sequence(clip, build_links(clip, link_thresh));
    const auto bf = brute_force_best_sequence(clip, link_thresh);

    bool seq_ok = dp.has_value() == bf.has_value();
    if (seq_ok && dp) seq_ok = std::abs(dp->seq_score - bf->seq_score) <= tolerance;
    if (!seq_ok) ++summary.sequence_mismatches;

    bool nms_ok = true;
    for (const auto& frame : clip.frames) {
      if (nms_frame(frame.detections, nms_thresh) != brute_force_nms(frame.detections, nms_thresh))
        nms_ok = false;
    }
    if (!nms_ok) ++summary.nms_mismatches;

    if ((!seq_ok || !nms_ok) && !summary.first_failing_seed) summary.first_failing_seed = seed;
  }
  return summary;
}

}  // namespace seqnms::oracle
