#include "seqnms/nms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace seqnms {

namespace {

void check_threshold(double t) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("NMS IoU threshold must lie in (0, 1)");
}

}  // namespace

std::vector<std::size_t> nms_frame(std::span<const Detection> dets, double iou_thresh) {
  check_threshold(iou_thresh);
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  std::vector<bool> removed(dets.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (removed[i]) continue;
    kept.push_back(i);
    for (std::size_t m = k + 1; m < order.size(); ++m) {
      const std::size_t j = order[m];
      if (!removed[j] && iou(dets[i].box, dets[j].box) > iou_thresh) removed[j] = true;
    }
  }
  return kept;
}

ClipDetections nms_clip(const ClipDetections& clip, double iou_thresh) {
  check_threshold(iou_thresh);
  ClipDetections out;
  out.frames.reserve(clip.frames.size());
  for (const auto& frame : clip.frames) {
    const auto& dets = frame.detections;
    std::vector<bool> keep(dets.size(), false);

    std::vector<ClassId> classes;
    for (const auto& d : dets) classes.push_back(d.cls);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    for (ClassId c : classes) {
      std::vector<Detection> group;
      std::vector<std::size_t> where;
      for (std::size_t i = 0; i < dets.size(); ++i) {
        if (dets[i].cls == c) {
          group.push_back(dets[i]);
          where.push_back(i);
        }
      }
      for (std::size_t k : nms_frame(group, iou_thresh)) keep[where[k]] = true;
    }

    FrameDetections f;
    f.frame_index = frame.frame_index;
    for (std::size_t i = 0; i < dets.size(); ++i)
      if (keep[i]) f.detections.push_back(dets[i]);
    out.frames.push_back(std::move(f));
  }
  return out;
}

}  // namespace seqnms
