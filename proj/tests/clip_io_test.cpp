#include "seqnms/clip_io.hpp"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "seqnms/synthesis.hpp"
#include "test_support.hpp"

namespace seqnms {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("seqnms_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const char* kMinimal = R"({
  "schema_version": 1,
  "clip_id": "c1",
  "classes": ["cat", "dog"],
  "frames": [
    {"frame": 0, "detections": [{"box": [0, 0, 10, 10], "score": 0.5, "class": 1}]},
    {"frame": 1, "detections": []}
  ]
})";

TEST(ClipIoTest, ParsesMinimalFile) {
  const LoadedClip c = parse_clip(kMinimal);
  EXPECT_EQ(c.file.clip_id, "c1");
  EXPECT_EQ(c.file.class_labels, (std::vector<std::string>{"cat", "dog"}));
  ASSERT_EQ(c.file.detections.num_frames(), 2u);
  EXPECT_EQ(c.file.detections.frames[0].detections[0],
            (Detection{BBox(0, 0, 10, 10), 0.5, ClassId{1}}));
  EXPECT_FALSE(c.file.ground_truth);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(ClipIoProperty, SuiteRoundTripsExactly) {
  for (const auto& s : scenario_suite(2)) {
    const ClipFile f{s.id, s.class_labels, s.detections, s.ground_truth};
    const std::string text = serialize_clip(f);
    const LoadedClip back = parse_clip(text);
    EXPECT_EQ(back.file, f) << s.id;
    EXPECT_EQ(serialize_clip(back.file), text);
  }
}

TEST(ClipIoTest, SaveAndLoadThroughDisk) {
  const fs::path dir = temp_dir("disk");
  const auto s = generate(default_scenario(ScenarioKind::Mixed, 4), "mixed-x");
  const ClipFile f{s.id, s.class_labels, s.detections, s.ground_truth};
  save_clip(f, dir / "mixed-x.json");
  EXPECT_EQ(load_clip(dir / "mixed-x.json").file, f);
}

TEST(ClipIoTest, OutOfRangeScoreIsClampedWithWarning) {
  std::string text = kMinimal;
  text.replace(text.find("0.5"), 3, "1.7");
  const LoadedClip c = parse_clip(text);
  EXPECT_EQ(c.file.detections.frames[0].detections[0].score, 1.0);
  ASSERT_EQ(c.warnings.size(), 1u);
  EXPECT_NE(c.warnings[0].find("frame 0 index 0"), std::string::npos);
}

TEST(ClipIoTest, TruncatedFileReportsByteOffset) {
  const std::string text = std::string(kMinimal).substr(0, 60);
  try {
    parse_clip(text);
    FAIL() << "expected a syntax error";
  } catch (const ClipSyntaxError& e) {
    EXPECT_EQ(e.byte_offset(), 61u);
    EXPECT_NE(std::string(e.what()).find("byte 61"), std::string::npos);
  }
}

TEST(ClipIoTest, SchemaVersionMismatch) {
  std::string text = kMinimal;
  text.replace(text.find("\"schema_version\": 1"), 19, "\"schema_version\": 2");
  EXPECT_THROW(parse_clip(text), ClipSchemaVersionError);
}

TEST(ClipIoTest, MissingFieldIsSchemaError) {
  EXPECT_THROW(parse_clip(R"({"schema_version": 1, "clip_id": "x"})"), ClipSchemaError);
  EXPECT_THROW(parse_clip(R"({"schema_version": 1, "clip_id": "x", "frames": [
      {"frame": 0, "detections": [{"box": [0, 0, 1], "score": 0.5, "class": 0}]}]})"),
               ClipSchemaError);
  EXPECT_THROW(parse_clip("[]"), ClipSchemaError);
}

TEST(ClipIoTest, ValidationFailuresCarryLocations) {
  const char* text = R"({"schema_version": 1, "clip_id": "x", "classes": ["a"], "frames": [
      {"frame": 0, "detections": [{"box": [5, 0, 1, 1], "score": 0.5, "class": 0}]},
      {"frame": 2, "detections": [{"box": [0, 0, 1, 1], "score": 0.5, "class": 3}]}]})";
  try {
    parse_clip(text);
    FAIL() << "expected a validation error";
  } catch (const ClipValidationError& e) {
    std::vector<std::string> msgs;
    for (const auto& v : e.violations()) msgs.push_back(v.message);
    EXPECT_NE(std::find(msgs.begin(), msgs.end(), "invalid box at frame 0 index 0"), msgs.end());
    EXPECT_NE(std::find(msgs.begin(), msgs.end(), "non-contiguous frame indices"), msgs.end());
    EXPECT_NE(std::find(msgs.begin(), msgs.end(), "class id out of range at frame 1 index 0"),
              msgs.end());
  }
}

TEST(ClipIoTest, GroundTruthFrameCountChecked) {
  const char* text = R"({"schema_version": 1, "clip_id": "x", "frames": [
      {"frame": 0, "detections": []}, {"frame": 1, "detections": []}],
      "ground_truth": [{"frame": 0, "boxes": [{"box": [0, 0, 1, 1], "class": 0}]}]})";
  EXPECT_THROW(parse_clip(text), ClipValidationError);
}

TEST(ClipIoTest, ListsJsonFilesSorted) {
  const fs::path dir = temp_dir("list");
  for (const char* n : {"b.json", "a.json", "c.txt"}) std::ofstream(dir / n) << "{}";
  const auto files = list_clip_files(dir);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].filename(), "a.json");
  EXPECT_EQ(files[1].filename(), "b.json");
  EXPECT_EQ(list_clip_files(dir / "b.json").size(), 1u);
  EXPECT_THROW(list_clip_files(dir / "missing"), ClipFormatError);
  EXPECT_THROW(load_clip(dir / "missing.json"), ClipFormatError);
}

}  // namespace
}  // namespace seqnms
