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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "purcell/common/errors.h"
#include "purcell/gait/schedule.h"
#include "purcell/io/output.h"
#include "purcell/sim/simulator.h"

namespace purcell {
namespace io {
namespace {

std::size_t Count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

sim::Trajectory SampleTrajectory() {
  const model::SwimmerModel model(model::SwimmerParams::Default());
  gait::ControlSchedule s = gait::CommutatorSchedule(1, 2, 0.04);
  return sim::Simulate(s, {{0.1, -0.3}, {0.2, 0.1, 2.5}}, model);
}

TEST(TrajectoryCsvTest, OneSample) {
  sim::Trajectory t;
  t.samples.push_back({});
  const std::string csv = TrajectoryCsv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTrajectoryHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_THROW(TrajectoryCsv({}), ValidationError);
}

TEST(TrajectoryCsvTest, RoundTrip) {
  const sim::Trajectory t = SampleTrajectory();
  const std::string csv = TrajectoryCsv(t);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            t.samples.size() + 1);
  std::istringstream in(csv);
  const sim::Trajectory back = ReadTrajectoryCsv(in);
  ASSERT_EQ(back.samples.size(), t.samples.size());
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    const sim::TrajectorySample& a = t.samples[i];
    const sim::TrajectorySample& b = back.samples[i];
    EXPECT_NEAR(a.time, b.time, 1e-12);
    EXPECT_NEAR(a.shape.alpha1, b.shape.alpha1, 1e-12);
    EXPECT_NEAR(a.shape.alpha2, b.shape.alpha2, 1e-12);
    EXPECT_LT((a.pose.AsVector() - b.pose.AsVector()).norm(), 1e-12);
    EXPECT_LT((a.body_velocity.AsVector() - b.body_velocity.AsVector()).norm(),
              1e-12);
    EXPECT_EQ(a.segment, b.segment);
  }
}

TEST(TrajectoryCsvTest, Deterministic) {
  EXPECT_EQ(TrajectoryCsv(SampleTrajectory()), TrajectoryCsv(SampleTrajectory()));
}

TEST(TrajectoryCsvTest, MalformedInputNamesTheLine) {
  std::istringstream bad_header("t,x\n");
  EXPECT_THROW(ReadTrajectoryCsv(bad_header), ValidationError);
  std::istringstream short_row(std::string(kTrajectoryHeader) +
                               "\n0,0,0,0,0,0,0,0,0,0\n1,2\n");
  try {
    ReadTrajectoryCsv(short_row);
    ADD_FAILURE();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
        << e.what();
  }
}

TEST(RenderSvgTest, SinglePointIsAMarker) {
  Plot plot;
  plot.title = "one";
  plot.series.push_back({"p", {{0.5, 0.5}}, false});
  const std::string svg = RenderSvg(plot);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(Count(svg, "<circle"), 2u);  // marker and legend swatch
  EXPECT_EQ(Count(svg, "<polyline"), 0u);
}

TEST(RenderSvgTest, TwoSeriesAreStyledDifferently) {
  Plot plot;
  plot.kind = PlotKind::kTimeSeries;
  plot.series.push_back({"a", {{0, 0}, {1, 1}, {2, 0}}, false});
  plot.series.push_back({"b", {{0, 1}, {1, 0}, {2, 1}}, false});
  const std::string svg = RenderSvg(plot);
  ASSERT_EQ(Count(svg, "<polyline"), 2u);
  const auto first = svg.find("<polyline");
  const auto second = svg.find("<polyline", first + 1);
  const auto attrs = [&svg](std::size_t pos) {
    return svg.substr(pos, svg.find("points=", pos) - pos);
  };
  EXPECT_NE(attrs(first), attrs(second));
  EXPECT_NE(svg.find(">a<"), std::string::npos);
  EXPECT_NE(svg.find(">b<"), std::string::npos);
}

TEST(RenderSvgTest, CircleOverlay) {
  Plot plot;
  plot.series.push_back({"path", {{0, 0}, {1, 0}, {1, 1}}, false});
  plot.circle = PlotCircle{"fit", {0.5, 0.5}, 0.7};
  const std::string svg = RenderSvg(plot);
  EXPECT_EQ(Count(svg, "<circle"), 1u);
  EXPECT_NE(svg.find("stroke-dasharray=\"6 4\""), std::string::npos);
  EXPECT_EQ(svg, RenderSvg(plot));
}

TEST(RenderSvgTest, DenseSeriesIsThinned) {
  Plot plot;
  PlotSeries s{"dense", {}, false};
  for (int i = 0; i <= 100000; ++i) s.points.push_back({i * 1e-5, 0.0});
  plot.series.push_back(s);
  const std::string svg = RenderSvg(plot);
  EXPECT_LT(svg.size(), 40000u);
  EXPECT_THROW(RenderSvg(Plot{}), ValidationError);
}

TEST(WriteFileAtomicallyTest, CreatesDirectoriesAndLeavesNoPartial) {
  const auto dir =
      std::filesystem::temp_directory_path() / "purcell_output_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  WriteFileAtomically(dir / "a.txt", "hello\n");
  std::ifstream in(dir / "a.txt");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "hello");
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    EXPECT_EQ(entry.path().filename(), "a.txt");
  }
  std::filesystem::remove_all(dir.parent_path());
}

}  // namespace
}  // namespace io
}  // namespace purcell
