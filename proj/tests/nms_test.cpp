#include "seqnms/nms.hpp"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "seqnms/oracle.hpp"
#include "test_support.hpp"

namespace seqnms {
namespace {

using testing::det;
using testing::make_clip;
using Kept = std::vector<std::size_t>;

TEST(NmsFrameTest, IdenticalBoxesKeepHigher) {
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.8), det(0, 0, 10, 10, 0.9)};
  EXPECT_EQ(nms_frame(d, 0.3), Kept({1}));
}

TEST(NmsFrameTest, DisjointBoxesBothKept) {
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.8), det(50, 50, 60, 60, 0.9)};
  EXPECT_EQ(nms_frame(d, 0.3), Kept({1, 0}));
}

TEST(NmsFrameTest, ThreeBoxExample) {
  // IoU(A, B) = 0.5 > 0.3 suppresses B; C is far away.
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.9), det(0, 0, 10, 20, 0.8),
                                    det(100, 100, 110, 110, 0.7)};
  EXPECT_EQ(nms_frame(d, 0.3), Kept({0, 2}));
}

TEST(NmsFrameTest, EmptyInput) { EXPECT_TRUE(nms_frame({}, 0.3).empty()); }

TEST(NmsFrameTest, TiesBrokenByLowerIndex) {
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.5), det(1, 0, 11, 10, 0.5),
                                    det(50, 50, 60, 60, 0.5)};
  EXPECT_EQ(nms_frame(d, 0.3), Kept({0, 2}));
}

TEST(NmsFrameTest, StrictThreshold) {
  // IoU exactly 0.5 is not > 0.5.
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.9), det(0, 0, 10, 20, 0.8)};
  EXPECT_EQ(nms_frame(d, 0.5), Kept({0, 1}));
}

TEST(NmsFrameTest, RejectsBadThreshold) {
  const std::vector<Detection> d = {det(0, 0, 1, 1, 0.5)};
  EXPECT_THROW(nms_frame(d, 0.0), std::invalid_argument);
  EXPECT_THROW(nms_frame(d, 1.0), std::invalid_argument);
}

TEST(NmsFrameTest, GreedyKeptSetIsNotInclusionMonotone) {
  // A .9, B .8 (IoU(A,B) ~ 0.43), C .7 and D .6 each overlap B by ~0.54 and A
  // by ~0.27. At 0.3 B falls and C, D survive; at 0.5 B survives and removes
  // C and D. Raising the threshold shrinks the kept set here.
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.9), det(4, 0, 14, 10, 0.8),
                                    det(4, 3, 14, 13, 0.7), det(4, -3, 14, 7, 0.6)};
  EXPECT_EQ(nms_frame(d, 0.3), Kept({0, 2, 3}));
  EXPECT_EQ(nms_frame(d, 0.5), Kept({0, 1}));
}

TEST(NmsClipTest, SingleFrameMatchesNmsFrame) {
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.9), det(0, 0, 10, 20, 0.8),
                                    det(100, 100, 110, 110, 0.7)};
  const ClipDetections out = nms_clip(make_clip({d}), 0.3);
  ASSERT_EQ(out.num_frames(), 1u);
  EXPECT_EQ(out.frames[0].detections, (std::vector<Detection>{d[0], d[2]}));
}

TEST(NmsClipTest, EmptyFramesUnchanged) {
  const ClipDetections clip = ClipDetections::with_frames(4);
  EXPECT_EQ(nms_clip(clip, 0.3), clip);
}

TEST(NmsClipTest, AppliesPerFrame) {
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.9), det(0, 0, 10, 20, 0.8),
                                    det(100, 100, 110, 110, 0.7)};
  const ClipDetections out = nms_clip(make_clip({d, d}), 0.3);
  for (const auto& f : out.frames) EXPECT_EQ(f.detections, (std::vector<Detection>{d[0], d[2]}));
}

TEST(NmsClipTest, ClassesDoNotSuppressEachOther) {
  const std::vector<Detection> d = {det(0, 0, 10, 10, 0.9, 0), det(0, 0, 10, 10, 0.8, 1)};
  EXPECT_EQ(nms_clip(make_clip({d}), 0.3).frames[0].detections, d);
}

TEST(NmsProperty, InvariantsOnRandomFrames) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto d = oracle::random_frame(seed, 10);
    for (double th : {0.2, 0.3, 0.5, 0.7}) {
      const Kept kept = nms_frame(d, th);
      for (std::size_t a = 0; a < kept.size(); ++a) {
        for (std::size_t b = a + 1; b < kept.size(); ++b)
          EXPECT_LE(iou(d[kept[a]].box, d[kept[b]].box), th);
        if (a > 0) EXPECT_GE(d[kept[a - 1]].score, d[kept[a]].score);
      }
      EXPECT_EQ(std::set<std::size_t>(kept.begin(), kept.end()).size(), kept.size());
      EXPECT_EQ(kept, oracle::brute_force_nms(d, th));
    }
  }
}

TEST(NmsProperty, ClipOutputIsSubsetWithScoresUnmodified) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ClipDetections clip = testing::random_multiclass_clip(seed, 5, 10, 3);
    const ClipDetections out = nms_clip(clip, 0.3);
    for (std::size_t t = 0; t < clip.num_frames(); ++t) {
      const auto& in = clip.frames[t].detections;
      for (const auto& d : out.frames[t].detections)
        EXPECT_NE(std::find(in.begin(), in.end(), d), in.end());
    }
  }
}

}  // namespace
}  // namespace seqnms
