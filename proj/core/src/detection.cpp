#include "seqnms/detection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace seqnms {

ClipDetections ClipDetections::with_frames(std::size_t num_frames) {
  ClipDetections clip;
  clip.frames.resize(num_frames);
  for (std::size_t t = 0; t < num_frames; ++t) clip.frames[t].frame_index = t;
  return clip;
}

std::size_t ClipDetections::num_detections() const {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.detections.size();
  return n;
}

ClassSlice filter_by_class(const ClipDetections& clip, ClassId cls) {
  ClassSlice slice;
  slice.cls = cls;
  slice.clip.frames.reserve(clip.frames.size());
  slice.source.resize(clip.frames.size());
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    const auto& in = clip.frames[t];
    FrameDetections out;
    out.frame_index = in.frame_index;
    for (std::size_t i = 0; i < in.detections.size(); ++i) {
      if (in.detections[i].cls == cls) {
        out.detections.push_back(in.detections[i]);
        slice.source[t].push_back(i);
      }
    }
    slice.clip.frames.push_back(std::move(out));
  }
  return slice;
}

std::vector<ClassId> classes_in(const ClipDetections& clip) {
  std::vector<ClassId> out;
  for (const auto& f : clip.frames)
    for (const auto& d : f.detections) out.push_back(d.cls);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::string at(std::size_t t, std::size_t i) {
  std::ostringstream s;
  s << "at frame " << t << " index " << i;
  return s.str();
}

bool box_ok(const BBox& b) {
  return std::isfinite(b.x1()) && std::isfinite(b.y1()) && std::isfinite(b.x2()) &&
         std::isfinite(b.y2()) && b.x1() <= b.x2() && b.y1() <= b.y2();
}

}  // namespace

std::vector<Violation> validate(const ClipDetections& clip,
                                std::optional<std::size_t> num_classes) {
  std::vector<Violation> out;
  if (clip.frames.empty()) out.push_back({{}, {}, "clip has no frames"});
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    if (clip.frames[t].frame_index != t) {
      out.push_back({t, {}, "non-contiguous frame indices"});
      break;
    }
  }
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    const auto& dets = clip.frames[t].detections;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const auto& d = dets[i];
      if (!(d.score >= 0.0 && d.score <= 1.0))
        out.push_back({t, i, "score out of range " + at(t, i)});
      if (!box_ok(d.box)) out.push_back({t, i, "invalid box " + at(t, i)});
      if (num_classes && d.cls.value >= *num_classes)
        out.push_back({t, i, "class id out of range " + at(t, i)});
    }
  }
  return out;
}

std::vector<Violation> validate(const GroundTruthClip& gt, std::size_t num_frames,
                                std::optional<std::size_t> num_classes) {
  std::vector<Violation> out;
  if (gt.frames.size() != num_frames) {
    std::ostringstream s;
    s << "ground truth has " << gt.frames.size() << " frames, detections have "
      << num_frames;
    out.push_back({{}, {}, s.str()});
  }
  for (std::size_t t = 0; t < gt.frames.size(); ++t) {
    for (std::size_t i = 0; i < gt.frames[t].size(); ++i) {
      const auto& g = gt.frames[t][i];
      if (!box_ok(g.box)) out.push_back({t, i, "invalid ground-truth box " + at(t, i)});
      if (num_classes && g.cls.value >= *num_classes)
        out.push_back({t, i, "ground-truth class id out of range " + at(t, i)});
    }
  }
  return out;
}

std::vector<DetectionRef> clamp_scores(ClipDetections& clip) {
  std::vector<DetectionRef> changed;
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    auto& dets = clip.frames[t].detections;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      double& s = dets[i].score;
      if (std::isfinite(s) && (s < 0.0 || s > 1.0)) {
        s = std::clamp(s, 0.0, 1.0);
        changed.push_back({t, i});
      }
    }
  }
  return changed;
}

}  // namespace seqnms
