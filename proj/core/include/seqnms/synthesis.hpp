#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqnms/detection.hpp"

namespace seqnms {

enum class ScenarioKind {
  OcclusionDip,            // score dip only
  ScaleDip,                // score dip while the object shrinks
  BlurDip,                 // score dip with doubled box jitter
  SimilarObjectsAdjacent,  // two same-class look-alike tracks that cross
  SpuriousAccumulation,    // long chain of weak linked false positives
  Mixed,                   // per-track random dip kind, plus a spurious chain
};

inline constexpr ScenarioKind kAllScenarioKinds[] = {
    ScenarioKind::OcclusionDip,           ScenarioKind::ScaleDip,
    ScenarioKind::BlurDip,                ScenarioKind::SimilarObjectsAdjacent,
    ScenarioKind::SpuriousAccumulation,   ScenarioKind::Mixed,
};

/// Kebab-case name, e.g. "occlusion-dip".
std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

/// Parameters of one synthetic clip. All defaults are the documented suite
/// defaults.
struct Scenario {
  ScenarioKind kind = ScenarioKind::OcclusionDip;
  std::uint64_t seed = 0;

  std::size_t num_frames = 30;
  std::size_t track_count = 2;
  std::size_t num_classes = 3;
  double canvas_width = 640.0;
  double canvas_height = 480.0;

  double base_score = 0.9;
  /// Std-dev of additive Gaussian noise on every true-positive score.
  double score_noise = 0.03;

  /// Scores inside the dip window are multiplied by (1 - dip_depth); the
  /// dip_ramp frames on either side follow a raised-cosine transition.
  double dip_depth = 0.8;
  std::size_t dip_width = 10;
  std::size_t dip_ramp = 2;
  /// First frame of the dip window; drawn per track when unset.
  std::optional<std::size_t> dip_start;

  /// Std-dev of box-corner jitter as a fraction of box width/height.
  double jitter = 0.03;

  /// Per frame and per track, probability of one unlinked false positive.
  double fp_rate = 0.5;
  double fp_score_min = 0.3;
  double fp_score_max = 0.6;

  /// Probability that a true positive also gets a loose duplicate box.
  double duplicate_rate = 0.5;

  /// Each track is detected only in this many consecutive frames when set.
  std::optional<std::size_t> detected_frames;

  /// SpuriousAccumulation / Mixed: planted chain of weak linked false
  /// positives away from every object.
  std::size_t spurious_length = 20;
  double spurious_score = 0.15;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

struct SyntheticClip {
  std::string id;
  std::vector<std::string> class_labels;
  ClipDetections detections;
  GroundTruthClip ground_truth;
};

/// Deterministic per scenario (including seed).
SyntheticClip generate(const Scenario& scenario, std::string id = {});

/// Default parameters for one scenario kind with the given seed.
Scenario default_scenario(ScenarioKind kind, std::uint64_t seed);

inline constexpr std::size_t kClipsPerScenario = 5;

/// 5 clips of each of the 6 scenario kinds (30 clips), sorted by id.
std::vector<SyntheticClip> scenario_suite(std::uint64_t seed);

/// Only the clips of `kind` from scenario_suite(seed).
std::vector<SyntheticClip> scenario_suite(std::uint64_t seed, ScenarioKind kind);

/// Large single-class clip for throughput work: `boxes_per_frame` proposals
/// per frame, jittered around boxes_per_frame / 5 moving objects.
ClipDetections dense_clip(std::size_t num_frames, std::size_t boxes_per_frame,
                          std::uint64_t seed);

}  // namespace seqnms
