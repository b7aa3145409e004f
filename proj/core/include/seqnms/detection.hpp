#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqnms/geometry.hpp"

namespace seqnms {

/// Dense object-class index in [0, num_classes).
struct ClassId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(const ClassId&, const ClassId&) = default;
};

struct Detection {
  BBox box;
  double score = 0.0;  // in [0, 1]
  ClassId cls;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct FrameDetections {
  std::size_t frame_index = 0;
  std::vector<Detection> detections;

  friend bool operator==(const FrameDetections&, const FrameDetections&) = default;
};

/// Detections for a whole clip. Frame t lives at frames[t] and carries
/// frame_index == t. A detection is addressed by (t, i), where i is its
/// position inside frames[t].detections.
struct ClipDetections {
  std::vector<FrameDetections> frames;

  /// A clip of `num_frames` empty, correctly indexed frames.
  static ClipDetections with_frames(std::size_t num_frames);

  std::size_t num_frames() const { return frames.size(); }
  std::size_t num_detections() const;

  friend bool operator==(const ClipDetections&, const ClipDetections&) = default;
};

struct GroundTruthBox {
  BBox box;
  ClassId cls;
  std::optional<std::int64_t> track_id;

  friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

struct GroundTruthClip {
  std::vector<std::vector<GroundTruthBox>> frames;

  std::size_t num_frames() const { return frames.size(); }

  friend bool operator==(const GroundTruthClip&, const GroundTruthClip&) = default;
};

/// Location of a detection inside a clip.
struct DetectionRef {
  std::size_t frame = 0;
  std::size_t index = 0;

  friend constexpr auto operator<=>(const DetectionRef&, const DetectionRef&) = default;
};

/// A single-class view of a clip. `source[t][k]` is the index in the original
/// frame t of `clip.frames[t].detections[k]`.
struct ClassSlice {
  ClassId cls;
  ClipDetections clip;
  std::vector<std::vector<std::size_t>> source;
};

ClassSlice filter_by_class(const ClipDetections& clip, ClassId cls);

/// Sorted, de-duplicated list of classes that occur in the clip.
std::vector<ClassId> classes_in(const ClipDetections& clip);

struct Violation {
  std::optional<std::size_t> frame;
  std::optional<std::size_t> index;
  std::string message;
};

/// Checks every structural invariant of a clip and returns all violations
/// (empty when the clip is well formed). When `num_classes` is given, class
/// ids must also lie in [0, num_classes).
std::vector<Violation> validate(const ClipDetections& clip,
                                std::optional<std::size_t> num_classes = {});

/// Ground truth must match the detections' frame count.
std::vector<Violation> validate(const GroundTruthClip& gt, std::size_t num_frames,
                                std::optional<std::size_t> num_classes = {});

/// Clamps out-of-range (finite) scores into [0, 1] and returns the location
/// of every detection that was changed.
std::vector<DetectionRef> clamp_scores(ClipDetections& clip);

}  // namespace seqnms
