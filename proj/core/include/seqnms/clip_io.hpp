#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seqnms/detection.hpp"

namespace seqnms {

// Clip files are JSON documents:
//
//   {
//     "schema_version": 1,
//     "clip_id": "occlusion-dip-00",
//     "classes": ["class_0", "class_1"],
//     "frames": [
//       {"frame": 0, "detections": [{"box": [x1, y1, x2, y2], "score": 0.9, "class": 0}]}
//     ],
//     "ground_truth": [                       (optional)
//       {"frame": 0, "boxes": [{"box": [x1, y1, x2, y2], "class": 0, "track_id": 3}]}
//     ]
//   }
//
// Numbers are written in shortest round-trip form, so load(save(x)) == x.

inline constexpr int kClipSchemaVersion = 1;

struct ClipFile {
  std::string clip_id;
  std::vector<std::string> class_labels;
  ClipDetections detections;
  std::optional<GroundTruthClip> ground_truth;

  friend bool operator==(const ClipFile&, const ClipFile&) = default;
};

class ClipFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not parseable as JSON.
class ClipSyntaxError : public ClipFormatError {
 public:
  ClipSyntaxError(const std::string& what, std::size_t byte_offset)
      : ClipFormatError(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class ClipSchemaVersionError : public ClipFormatError {
 public:
  using ClipFormatError::ClipFormatError;
};

/// Valid JSON that does not have the clip-file structure.
class ClipSchemaError : public ClipFormatError {
 public:
  using ClipFormatError::ClipFormatError;
};

/// Structurally fine, but the clip breaks a data invariant.
class ClipValidationError : public ClipFormatError {
 public:
  ClipValidationError(const std::string& what, std::vector<Violation> violations)
      : ClipFormatError(what), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct LoadedClip {
  ClipFile file;
  /// Non-fatal issues, e.g. scores clamped into [0, 1].
  std::vector<std::string> warnings;
};

LoadedClip parse_clip(std::string_view text);
LoadedClip load_clip(const std::filesystem::path& path);

std::string serialize_clip(const ClipFile& clip);
void save_clip(const ClipFile& clip, const std::filesystem::path& path);

/// `path` itself when it is a file, otherwise every *.json directly inside
/// it, sorted by file name.
std::vector<std::filesystem::path> list_clip_files(const std::filesystem::path& path);

}  // namespace seqnms
