#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "seqnms/detection.hpp"
#include "seqnms/seq_nms.hpp"

// Exhaustive reference implementations. They share nothing with the
// production code paths except BBox/iou and exist to check them.
namespace seqnms::oracle {

inline constexpr double kMaxEnumeration = 1e7;

/// Thrown when a clip is too large to enumerate.
class EnumerationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Enumerates every (t_start, t_end, index tuple) whose adjacent boxes have
/// IoU > link_thresh and returns one with the maximum score sum. Refuses
/// clips where the product of (n_t + 1) exceeds kMaxEnumeration.
std::optional<Sequence> brute_force_best_sequence(const ClipDetections& clip,
                                                  double link_thresh);

/// Greedy NMS by literal repeated argmax over a shrinking copy.
std::vector<std::size_t> brute_force_nms(std::span<const Detection> dets, double iou_thresh);

/// Random single-class clip (class 0) on a 100x100 canvas with
/// 1..max_frames frames and 0..max_boxes boxes per frame, scores uniform in
/// [0, 1]. About half of the boxes are perturbed copies of a box from the
/// previous frame so that link chains actually occur.
ClipDetections random_clip(std::uint64_t seed, std::size_t max_frames, std::size_t max_boxes);

/// Random boxes for one frame of a single class, same canvas and scores.
std::vector<Detection> random_frame(std::uint64_t seed, std::size_t max_boxes);

struct CheckSummary {
  std::size_t seeds = 0;
  std::size_t sequence_mismatches = 0;
  std::size_t nms_mismatches = 0;
  std::optional<std::uint64_t> first_failing_seed;

  bool passed() const { return sequence_mismatches == 0 && nms_mismatches == 0; }
};

/// Runs the DP-vs-enumeration and NMS-vs-brute-force equivalence checks on
/// seeds [0, seeds). Sequence scores are compared with absolute tolerance
/// `tolerance`; NMS kept lists must match exactly.
CheckSummary run_equivalence_check(std::size_t seeds, std::size_t max_frames,
                                   std::size_t max_boxes, double tolerance = 1e-9,
                                   double link_thresh = kDefaultLinkThreshold,
                                   double nms_thresh = 0.3);

}  // namespace seqnms::oracle
