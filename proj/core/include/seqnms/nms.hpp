#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqnms/detection.hpp"

namespace seqnms {

inline constexpr double kDefaultNmsThreshold = 0.3;

/// Greedy single-image NMS over detections of one class.
///
/// Repeatedly keeps the highest-scoring remaining detection and discards every
/// remaining detection whose IoU with it is strictly greater than
/// `iou_thresh`. Equal scores are visited in ascending index order. Returns
/// the kept indices in the order they were kept (descending score).
/// Throws std::invalid_argument unless 0 < iou_thresh < 1.
std::vector<std::size_t> nms_frame(std::span<const Detection> dets, double iou_thresh);

/// nms_frame applied to every (frame, class) group. Kept detections stay in
/// their original relative order within each frame.
ClipDetections nms_clip(const ClipDetections& clip, double iou_thresh);

}  // namespace seqnms
