// Copyright 2026 The Purcell Swimmer Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "purcell/common/errors.h"
#include "purcell/gait/schedule.h"
#include "test_support.h"

namespace purcell {
namespace gait {
namespace {

using testing_support::TestRng;

std::vector<ControlSegment> Segs(
    std::initializer_list<ControlSegment> segments) {
  return segments;
}

GaitSpec Spec(double a, double b, double c, double t, int n,
              ExpansionForm form) {
  return {{a, b, c}, t, n, form};
}

TEST(CommutatorScheduleTest, UnitSquare) {
  EXPECT_EQ(CommutatorSchedule(1, 2, 1.0).segments,
            Segs({{1, 1, 1}, {2, 1, 1}, {1, -1, 1}, {2, -1, 1}}));
  EXPECT_EQ(CommutatorSchedule(1, 2, 1.0, 1.0, 2).segments,
            Segs({{1, -1, 1}, {2, -1, 1}, {1, 1, 1}, {2, 1, 1}}));
}

TEST(CommutatorScheduleTest, DurationIsSquareRootOfTau) {
  const ControlSchedule s = CommutatorSchedule(1, 2, 4.0);
  ASSERT_EQ(s.size(), 4u);
  for (const ControlSegment& seg : s.segments) EXPECT_EQ(seg.duration, 2.0);
}

TEST(CommutatorScheduleTest, SignedChannelsAndScale) {
  const ControlSchedule s = CommutatorSchedule(-2, 1, 1.0, 0.5);
  EXPECT_EQ(s.segments,
            Segs({{2, -0.5, 1}, {1, 1, 1}, {2, 0.5, 1}, {1, -1, 1}}));
  EXPECT_THROW(CommutatorSchedule(1, 1, 1.0), ValidationError);
  EXPECT_THROW(CommutatorSchedule(1, 3, 1.0), ValidationError);
  EXPECT_THROW(CommutatorSchedule(1, 2, -1.0), ValidationError);
}

TEST(CommutatorScheduleTest, VariantsAreCyclicShifts) {
  const ControlSchedule base = CommutatorSchedule(1, 2, 1.0);
  for (int v = 1; v < 4; ++v) {
    const ControlSchedule s = CommutatorSchedule(1, 2, 1.0, 1.0, v);
    ASSERT_EQ(s.size(), 4u);
    bool is_shift = false;
    for (int k = 0; k < 4; ++k) {
      bool same = true;
      for (int i = 0; i < 4; ++i) {
        same = same && s.segments[i] == base.segments[(i + k) % 4];
      }
      is_shift = is_shift || same;
    }
    EXPECT_TRUE(is_shift) << "variant " << v;
  }
}

TEST(SynthesizeTest, LiteralSegmentCounts) {
  const ControlSchedule x = Synthesize(Spec(1, 0, 0, 1, 1, ExpansionForm::kLiteral));
  EXPECT_EQ(x.size(), 4u);
  EXPECT_DOUBLE_EQ(x.total_duration(), 4.0);
  const ControlSchedule all =
      Synthesize(Spec(1, 1, 1, 1, 1, ExpansionForm::kLiteral));
  EXPECT_EQ(all.size(), 24u);
  EXPECT_TRUE(Synthesize(Spec(0, 0, 0, 1, 1, ExpansionForm::kLiteral)).empty());
  EXPECT_TRUE(
      Synthesize(Spec(0, 0, 0, 1, 1, ExpansionForm::kRederived)).empty());
}

TEST(SynthesizeTest, RejectsMalformedSpecs) {
  EXPECT_THROW(Synthesize(Spec(1, 0, 0, 0, 1, ExpansionForm::kLiteral)),
               ValidationError);
  EXPECT_THROW(Synthesize(Spec(1, 0, 0, 1, 0, ExpansionForm::kRederived)),
               ValidationError);
  EXPECT_THROW(
      Synthesize(Spec(std::nan(""), 0, 0, 1, 1, ExpansionForm::kLiteral)),
      ValidationError);
}

TEST(SynthesizeTest, EverySpecClosesInShape) {
  TestRng rng(12);
  for (ExpansionForm form : {ExpansionForm::kLiteral, ExpansionForm::kRederived}) {
    for (int i = 0; i < 30; ++i) {
      const GaitSpec spec =
          Spec(rng.Uniform(-2, 2), rng.Uniform(-2, 2), rng.Uniform(-2, 2),
               rng.Uniform(0.05, 2), 1 + i % 4, form);
      const ControlSchedule s = Synthesize(spec);
      EXPECT_LT(std::abs(SignedTravel(s, 1)), 1e-12);
      EXPECT_LT(std::abs(SignedTravel(s, 2)), 1e-12);
      for (const ControlSegment& seg : s.segments) {
        EXPECT_GT(seg.duration, 0.0);
        EXPECT_NE(seg.amplitude, 0.0);
      }
      ASSERT_TRUE(s.source.has_value());
      EXPECT_EQ(s.source->n, spec.n);
    }
  }
}

TEST(ConcatenateTest, Examples) {
  EXPECT_TRUE(Concatenate({}).empty());
  const ControlSchedule s = CommutatorSchedule(1, 2, 1.0);
  const std::vector<ControlSchedule> one{s};
  EXPECT_EQ(Concatenate(one).segments, s.segments);
  std::vector<ControlSchedule> variants;
  for (int v = 0; v < 4; ++v) {
    variants.push_back(CommutatorSchedule(1, 2, 1.0, 1.0, v));
  }
  const ControlSchedule composite = Concatenate(variants);
  EXPECT_EQ(composite.size(), 16u);
  for (int v = 0; v < 4; ++v) {
    for (int i = 0; i < 4; ++i) {
      EXPECT_EQ(composite.segments[4 * v + i], variants[v].segments[i]);
    }
  }
}

TEST(RepeatTest, Examples) {
  const ControlSchedule s = CommutatorSchedule(1, 2, 1.0);
  EXPECT_EQ(Repeat(s, 1).segments, s.segments);
  EXPECT_EQ(Repeat(s, 3).size(), 12u);
  EXPECT_THROW(Repeat(s, 0), ValidationError);
}

TEST(ReverseTest, IsAnInvolutionAndUndoesTravel) {
  TestRng rng(13);
  const ControlSchedule s =
      Synthesize(Spec(0.3, -1, 1, 0.5, 2, ExpansionForm::kRederived));
  const ControlSchedule r = Reverse(s);
  EXPECT_EQ(Reverse(r).segments, s.segments);
  ASSERT_EQ(r.size(), s.size());
  EXPECT_EQ(r.segments.front().channel, s.segments.back().channel);
  EXPECT_EQ(r.segments.front().amplitude, -s.segments.back().amplitude);
}

TEST(ReflectTest, SwapsAndNegates) {
  const ControlSchedule s = CommutatorSchedule(1, 2, 1.0, 0.5);
  EXPECT_EQ(Reflect(s, true, false).segments,
            Segs({{2, 0.5, 1}, {1, 1, 1}, {2, -0.5, 1}, {1, -1, 1}}));
  EXPECT_EQ(Reflect(s, false, true).segments,
            Segs({{1, -0.5, 1}, {2, -1, 1}, {1, 0.5, 1}, {2, 1, 1}}));
  EXPECT_EQ(Reflect(Reflect(s, true, true), true, true).segments, s.segments);
}

TEST(ShapeExcursionTest, Examples) {
  EXPECT_EQ(ComputeShapeExcursion({}).max(), 0.0);
  const ShapeExcursion unit = ComputeShapeExcursion(CommutatorSchedule(1, 2, 1.0));
  EXPECT_DOUBLE_EQ(unit.alpha1, 1.0);
  EXPECT_DOUBLE_EQ(unit.alpha2, 1.0);
  ControlSchedule half;
  for (const ControlSegment& seg : CommutatorSchedule(1, 2, 1.0).segments) {
    half.Append(seg.channel, seg.amplitude / 2, seg.duration);
  }
  EXPECT_DOUBLE_EQ(ComputeShapeExcursion(half).max(), 0.5);
}

TEST(ScheduleTest, AppendElidesZeroSegments) {
  ControlSchedule s;
  s.Append(1, 0.0, 1.0);
  s.Append(2, 1.0, 0.0);
  EXPECT_TRUE(s.empty());
  s.Append(2, 1.0, 0.5);
  EXPECT_EQ(s.size(), 1u);
}

TEST(ScheduleIoTest, RoundTripIsExact) {
  const ControlSchedule s =
      Synthesize(Spec(0.37, -1.1, 0.9, 0.3, 3, ExpansionForm::kRederived));
  std::stringstream io;
  WriteSchedule(io, s);
  const ControlSchedule back = ReadSchedule(io);
  EXPECT_EQ(back.segments, s.segments);
}

TEST(ScheduleIoTest, CommentsAndBlankLines) {
  std::istringstream in("# header\n\n1 0.5 2   # trailing\n  2 -1 0.25\n");
  EXPECT_EQ(ReadSchedule(in).segments, Segs({{1, 0.5, 2}, {2, -1, 0.25}}));
}

TEST(ScheduleIoTest, MalformedLinesNameTheLine) {
  for (const char* text : {"1 0.5\n", "3 1 1\n", "1 1 -2\n", "1 x 1\n",
                           "1 1 1 extra\n"}) {
    std::istringstream in(std::string("# ok\n") + text);
    try {
      ReadSchedule(in);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos)
          << e.what();
    }
  }
}

}  // namespace
}  // namespace gait
}  // namespace purcell
