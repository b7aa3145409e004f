#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqnms/detection.hpp"

namespace seqnms {

inline constexpr double kDefaultMatchIou = 0.5;

struct ScoredLabel {
  double score = 0.0;
  bool true_positive = false;
};

struct ClassMatches {
  /// One entry per detection of the class, in (frame, index) order.
  std::vector<ScoredLabel> labels;
  std::size_t num_gt = 0;
};

struct MatchResult {
  std::map<ClassId, ClassMatches> per_class;
  /// is_tp[t][i] for detection (t, i).
  std::vector<std::vector<bool>> is_tp;
  /// claimed[t][g] for ground-truth box (t, g).
  std::vector<std::vector<bool>> claimed;
};

/// Greedy matching within each (frame, class): detections in descending
/// score order (ties by index) claim the unclaimed ground-truth box of
/// largest IoU >= match_iou. Throws std::invalid_argument when the frame
/// counts differ.
MatchResult match_detections(const ClipDetections& dets, const GroundTruthClip& gt,
                             double match_iou = kDefaultMatchIou);

/// All-points interpolated average precision.
///
/// Labels are ranked by descending score (stable for ties). Precision is
/// replaced by its running maximum from the right and integrated over every
/// recall step. Returns std::nullopt when num_gt == 0.
std::optional<double> average_precision(std::span<const ScoredLabel> labels,
                                        std::size_t num_gt);

struct EvalReport {
  std::string method_name;
  /// Only classes with at least one ground-truth instance.
  std::map<ClassId, double> per_class_ap;
  double map = 0.0;
};

/// Pools detections of each class over every clip and frame into one ranked
/// list and computes per-class AP and their mean.
EvalReport evaluate(std::span<const ClipDetections> dets, std::span<const GroundTruthClip> gts,
                    double match_iou = kDefaultMatchIou, std::string method_name = {});

/// Per-class maximum AP over several reports of the same class set, averaged.
/// This is an upper envelope chosen on the evaluated data itself, not a
/// method that can be run on unseen clips.
EvalReport per_class_best(std::span<const EvalReport> reports);

/// Class-agnostic fraction of ground-truth boxes covered by at least one
/// proposal with IoU >= match_iou. Returns 0 when there is no ground truth.
double proposal_recall(const ClipDetections& proposals, const GroundTruthClip& gt,
                       double match_iou = kDefaultMatchIou);

}  // namespace seqnms
