#include "seqnms/synthesis.hpp"

#include <set>

#include <gtest/gtest.h>

#include "seqnms/evaluation.hpp"
#include "seqnms/nms.hpp"
#include "seqnms/seq_nms.hpp"

namespace seqnms {
namespace {

Scenario quiet(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  s.seed = 42;
  s.track_count = 1;
  s.score_noise = 0.0;
  s.fp_rate = 0.0;
  s.duplicate_rate = 0.0;
  return s;
}

TEST(ScenarioTest, KindNamesRoundTrip) {
  for (ScenarioKind k : kAllScenarioKinds) EXPECT_EQ(parse_scenario_kind(to_string(k)), k);
  EXPECT_FALSE(parse_scenario_kind("nope"));
}

TEST(ScenarioTest, InvalidParametersThrow) {
  auto bad = [](auto mutate) {
    Scenario s;
    mutate(s);
    EXPECT_THROW(generate(s), std::invalid_argument);
  };
  bad([](Scenario& s) { s.num_frames = 1; });
  bad([](Scenario& s) { s.dip_depth = 1.0; });
  bad([](Scenario& s) { s.dip_depth = 0.0; });
  bad([](Scenario& s) { s.fp_rate = 1.5; });
  bad([](Scenario& s) { s.duplicate_rate = -0.1; });
  bad([](Scenario& s) { s.dip_start = 25; });
  bad([](Scenario& s) { s.track_count = 0; });
  bad([](Scenario& s) {
    s.kind = ScenarioKind::SimilarObjectsAdjacent;
    s.track_count = 1;
  });
  bad([](Scenario& s) {
    s.kind = ScenarioKind::SpuriousAccumulation;
    s.spurious_length = 31;
  });
}

TEST(GenerateTest, OcclusionDipShapesScores) {
  Scenario s = quiet(ScenarioKind::OcclusionDip);
  s.num_frames = 10;
  s.base_score = 0.9;
  s.dip_start = 4;
  s.dip_width = 3;
  s.dip_ramp = 0;
  s.dip_depth = 1.0 - 0.2 / 0.9;
  const SyntheticClip c = generate(s);
  ASSERT_EQ(c.detections.num_frames(), 10u);
  for (std::size_t t = 0; t < 10; ++t) {
    ASSERT_EQ(c.detections.frames[t].detections.size(), 1u);
    const Detection& d = c.detections.frames[t].detections[0];
    const double expected = (t >= 4 && t <= 6) ? 0.2 : 0.9;
    EXPECT_NEAR(d.score, expected, 1e-9) << "frame " << t;
    ASSERT_EQ(c.ground_truth.frames[t].size(), 1u);
    EXPECT_GT(iou(d.box, c.ground_truth.frames[t][0].box), 0.7);
  }
}

TEST(GenerateTest, RaisedCosineRampIsMonotone) {
  Scenario s = quiet(ScenarioKind::OcclusionDip);
  s.num_frames = 20;
  s.dip_start = 8;
  s.dip_width = 4;
  s.dip_ramp = 3;
  const SyntheticClip c = generate(s);
  auto score = [&](std::size_t t) { return c.detections.frames[t].detections[0].score; };
  for (std::size_t t = 4; t < 8; ++t) EXPECT_GT(score(t), score(t + 1));
  for (std::size_t t = 11; t < 15; ++t) EXPECT_LT(score(t), score(t + 1));
  EXPECT_NEAR(score(4), 0.9, 1e-12);
  EXPECT_NEAR(score(15), 0.9, 1e-12);
}

TEST(GenerateTest, ScaleDipShrinksGroundTruth) {
  Scenario s = quiet(ScenarioKind::ScaleDip);
  s.dip_start = 10;
  const SyntheticClip c = generate(s);
  const double before = area(c.ground_truth.frames[2][0].box);
  const double inside = area(c.ground_truth.frames[14][0].box);
  EXPECT_LT(inside, 0.5 * before);
}

TEST(GenerateTest, SimilarObjectsShareClassAndCross) {
  const SyntheticClip c = generate(default_scenario(ScenarioKind::SimilarObjectsAdjacent, 3));
  const auto& first = c.ground_truth.frames.front();
  const auto& last = c.ground_truth.frames.back();
  ASSERT_EQ(first.size(), 2u);
  EXPECT_EQ(first[0].cls, first[1].cls);
  EXPECT_GT(first[1].box.x1(), first[0].box.x1());
  EXPECT_LT(last[1].box.x1(), last[0].box.x1());
}

TEST(GenerateTest, SpuriousChainIsSelectedBeforeStrongDetection) {
  Scenario s = quiet(ScenarioKind::SpuriousAccumulation);
  s.num_frames = 8;
  s.detected_frames = 1;
  s.spurious_length = 8;
  s.dip_width = 1;
  s.spurious_score = 0.15;
  s.base_score = 0.9;
  s.jitter = 0.0;
  const SyntheticClip c = generate(s);
  ASSERT_EQ(c.detections.num_detections(), 9u);

  const SeqNmsTrace trace = seq_nms_trace(c.detections, {});
  ASSERT_GE(trace.sequences.size(), 2u);
  const Sequence& first = trace.sequences[0].sequence;
  EXPECT_EQ(first.length(), 8u);
  EXPECT_NEAR(first.seq_score, 1.2, 1e-9);
  const Sequence& second = trace.sequences[1].sequence;
  EXPECT_EQ(second.length(), 1u);
  EXPECT_NEAR(second.seq_score, 0.9, 1e-12);
  for (std::size_t t = 0; t < 8; ++t)
    for (const auto& g : c.ground_truth.frames[t])
      EXPECT_EQ(iou(g.box, c.detections.frames[t].detections.back().box), 0.0);
}

TEST(GenerateTest, DeterministicPerSeed) {
  for (ScenarioKind k : kAllScenarioKinds) {
    const Scenario s = default_scenario(k, 17);
    const SyntheticClip a = generate(s);
    const SyntheticClip b = generate(s);
    EXPECT_EQ(a.detections, b.detections);
    EXPECT_EQ(a.ground_truth, b.ground_truth);
  }
  EXPECT_NE(generate(default_scenario(ScenarioKind::Mixed, 1)).detections,
            generate(default_scenario(ScenarioKind::Mixed, 2)).detections);
}

TEST(ScenarioSuiteTest, SizeValidityDeterminism) {
  const auto suite = scenario_suite(5);
  ASSERT_EQ(suite.size(), 30u);
  std::set<std::string> ids;
  for (const auto& c : suite) {
    ids.insert(c.id);
    EXPECT_TRUE(validate(c.detections, c.class_labels.size()).empty()) << c.id;
    EXPECT_TRUE(validate(c.ground_truth, c.detections.num_frames(), c.class_labels.size()).empty());
  }
  EXPECT_EQ(ids.size(), 30u);
  for (ScenarioKind k : kAllScenarioKinds) EXPECT_EQ(scenario_suite(5, k).size(), kClipsPerScenario);

  const auto again = scenario_suite(5);
  for (std::size_t i = 0; i < suite.size(); ++i) {
    EXPECT_EQ(suite[i].id, again[i].id);
    EXPECT_EQ(suite[i].detections, again[i].detections);
  }
}

TEST(ScenarioSuiteProperty, SeqNmsAverageBeatsNmsOnOcclusion) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<ClipDetections> nms, avg;
    std::vector<GroundTruthClip> gt;
    for (const auto& c : scenario_suite(seed, ScenarioKind::OcclusionDip)) {
      nms.push_back(nms_clip(c.detections, kDefaultNmsThreshold));
      avg.push_back(seq_nms(c.detections, {}));
      gt.push_back(c.ground_truth);
    }
    EXPECT_GT(evaluate(avg, gt).map, evaluate(nms, gt).map) << "seed " << seed;
  }
}

TEST(DenseClipTest, Shape) {
  const ClipDetections c = dense_clip(20, 100, 1);
  ASSERT_EQ(c.num_frames(), 20u);
  for (const auto& f : c.frames) EXPECT_EQ(f.detections.size(), 100u);
  EXPECT_TRUE(validate(c).empty());
  EXPECT_EQ(c, dense_clip(20, 100, 1));
}

}  // namespace
}  // namespace seqnms
