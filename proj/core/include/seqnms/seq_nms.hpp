#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "seqnms/detection.hpp"

namespace seqnms {

inline constexpr double kDefaultLinkThreshold = 0.5;
inline constexpr double kDefaultSuppressThreshold = 0.3;

enum class RescoreMode { Average, Max };

std::string_view to_string(RescoreMode mode);

struct SeqNmsConfig {
  /// Boxes in adjacent frames are linked iff IoU > link_thresh.
  double link_thresh = kDefaultLinkThreshold;
  /// Boxes in a selected frame are suppressed iff IoU > suppress_thresh.
  double suppress_thresh = kDefaultSuppressThreshold;
  RescoreMode rescore = RescoreMode::Average;

  /// Throws std::invalid_argument unless both thresholds lie in (0, 1).
  void validate() const;
};

/// Links between boxes of consecutive frames of a single-class clip.
///
/// Stored per destination box: predecessors(t, j) lists, in ascending order,
/// every box i of frame t - 1 with IoU(b_{t-1}[i], b_t[j]) > link_thresh.
class LinkGraph {
 public:
  struct Edge {
    std::uint32_t from = 0;  // index in frame t
    std::uint32_t to = 0;    // index in frame t + 1

    friend constexpr bool operator==(const Edge&, const Edge&) = default;
  };

  LinkGraph() = default;

  std::size_t num_frames() const { return offsets_.size(); }
  std::size_t frame_size(std::size_t t) const { return offsets_[t].size() - 1; }
  double link_thresh() const { return link_thresh_; }

  /// Linked boxes of frame t - 1 for box j of frame t (empty for t == 0).
  std::span<const std::uint32_t> predecessors(std::size_t t, std::size_t j) const;

  /// All edges between frame t and frame t + 1, ordered by (to, from).
  std::vector<Edge> edges(std::size_t t) const;

  std::size_t edge_count() const;

 private:
  friend LinkGraph build_links(const ClipDetections& clip, double link_thresh);

  double link_thresh_ = kDefaultLinkThreshold;
  // offsets_[t][j] .. offsets_[t][j + 1] indexes preds_[t].
  std::vector<std::vector<std::uint32_t>> offsets_;
  std::vector<std::vector<std::uint32_t>> preds_;
};

LinkGraph build_links(const ClipDetections& clip, double link_thresh);

/// One box per frame over the contiguous range [t_start, t_end].
struct Sequence {
  std::size_t t_start = 0;
  std::size_t t_end = 0;
  /// indices[k] is the box index in frame t_start + k.
  std::vector<std::size_t> indices;
  std::vector<double> raw_scores;
  std::vector<double> rescored;
  double seq_score = 0.0;  // sum of raw_scores

  std::size_t length() const { return indices.size(); }
  std::size_t index_at(std::size_t t) const { return indices[t - t_start]; }
};

/// Maximum-sum linked sequence by dynamic programming over the link graph.
///
/// Returns std::nullopt iff the clip has no detections. Among equal sums the
/// sequence ending in the earliest frame wins, then the smallest end index;
/// backtracking prefers the smallest predecessor index, and a predecessor is
/// only taken when its accumulated score is strictly positive.
/// `rescored` is a copy of `raw_scores`.
std::optional<Sequence> select_best_sequence(const ClipDetections& clip,
                                             const LinkGraph& graph);

/// Replaces every rescored value with the mean (Average) or maximum (Max) of
/// raw_scores. Throws std::invalid_argument on an empty sequence.
Sequence rescore(Sequence seq, RescoreMode mode);

/// Removes the sequence's boxes and, in each frame of [t_start, t_end], every
/// same-class box with IoU > suppress_thresh against the sequence box there.
/// Frames outside the range are returned unchanged.
ClipDetections suppress(const ClipDetections& clip, const Sequence& seq,
                        double suppress_thresh);

/// A sequence selected during seq_nms, with indices referring to the input
/// clip (not to the per-class view it was selected from).
struct SelectedSequence {
  ClassId cls;
  Sequence sequence;
};

struct SeqNmsTrace {
  ClipDetections output;
  /// In selection order, grouped by ascending class.
  std::vector<SelectedSequence> sequences;
};

/// Full Seq-NMS run: per class, repeatedly select the best sequence, rescore
/// it and suppress around it until no candidate boxes remain.
///
/// Output detections are the members of all selected sequences with their
/// rescored scores; geometry and class are untouched. Within a frame the
/// output keeps the input's relative order.
SeqNmsTrace seq_nms_trace(const ClipDetections& clip, const SeqNmsConfig& cfg);

ClipDetections seq_nms(const ClipDetections& clip, const SeqNmsConfig& cfg);

}  // namespace seqnms
