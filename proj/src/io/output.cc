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

#include "purcell/io/output.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "purcell/common/errors.h"

namespace purcell {
namespace io {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 6> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick spacing from {1, 2, 5} x 10^k giving about `target` intervals.
double NiceStep(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

struct Range {
  double lo{0.0};
  double hi{0.0};
  double span() const { return hi - lo; }
};

// Pads degenerate and tight ranges so every point sits inside the frame.
Range Pad(Range r) {
  double span = r.span();
  if (span <= 0.0) span = std::max(std::abs(r.lo), 1.0) * 0.1;
  const double mid = 0.5 * (r.lo + r.hi);
  return {mid - 0.55 * span, mid + 0.55 * span};
}

std::string Fmt(double v) { return fmt::format("{:.2f}", v); }

std::string TickLabel(double v, double step) {
  if (std::abs(v) < 1e-12 * step) v = 0.0;
  return fmt::format("{:.4g}", v);
}

}  // namespace

void WriteTrajectoryCsv(std::ostream& out, const sim::Trajectory& trajectory) {
  if (trajectory.samples.empty()) {
    throw ValidationError("cannot write an empty trajectory");
  }
  out << kTrajectoryHeader << '\n';
  for (const sim::TrajectorySample& s : trajectory.samples) {
    out << fmt::format(
        "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
        "{:.17g},{}\n",
        s.time, s.shape.alpha1, s.shape.alpha2, s.pose.x, s.pose.y,
        s.pose.theta, s.body_velocity.xi_x, s.body_velocity.xi_y,
        s.body_velocity.xi_theta, s.segment);
  }
}

std::string TrajectoryCsv(const sim::Trajectory& trajectory) {
  std::ostringstream out;
  WriteTrajectoryCsv(out, trajectory);
  return out.str();
}

sim::Trajectory ReadTrajectoryCsv(std::istream& in) {
  sim::Trajectory traj;
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw ValidationError("trajectory CSV line 1: unexpected header");
  }
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::array<double, 9> v{};
    int segment = 0;
    std::istringstream row(line);
    std::string cell;
    int column = 0;
    bool ok = true;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      if (column < 9) {
        v[column] = std::strtod(cell.c_str(), &end);
      } else if (column == 9) {
        segment = static_cast<int>(std::strtol(cell.c_str(), &end, 10));
      }
      if (column > 9 || cell.empty() || *end != '\0') ok = false;
      ++column;
    }
    if (!ok || column != 10) {
      throw ValidationError(fmt::format(
          "trajectory CSV line {}: expected 10 numeric fields", line_number));
    }
    traj.samples.push_back({v[0],
                            {v[1], v[2]},
                            {v[3], v[4], v[5]},
                            {v[6], v[7], v[8]},
                            segment});
  }
  return traj;
}

std::string RenderSvg(const Plot& plot) {
  Range xr{HUGE_VAL, -HUGE_VAL};
  Range yr{HUGE_VAL, -HUGE_VAL};
  auto include = [&](double x, double y) {
    xr.lo = std::min(xr.lo, x);
    xr.hi = std::max(xr.hi, x);
    yr.lo = std::min(yr.lo, y);
    yr.hi = std::max(yr.hi, y);
  };
  for (const PlotSeries& s : plot.series) {
    for (const Eigen::Vector2d& p : s.points) include(p.x(), p.y());
  }
  if (xr.lo > xr.hi) throw ValidationError("plot has no points");
  if (plot.circle) {
    const PlotCircle& c = *plot.circle;
    include(c.center.x() - c.radius, c.center.y() - c.radius);
    include(c.center.x() + c.radius, c.center.y() + c.radius);
  }
  xr = Pad(xr);
  yr = Pad(yr);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  if (plot.kind == PlotKind::kPathInPlane) {
    // Same scale on both axes: widen the range that is relatively narrower.
    const double scale = std::max(xr.span() / plot_w, yr.span() / plot_h);
    const double xm = 0.5 * (xr.lo + xr.hi);
    const double ym = 0.5 * (yr.lo + yr.hi);
    xr = {xm - 0.5 * scale * plot_w, xm + 0.5 * scale * plot_w};
    yr = {ym - 0.5 * scale * plot_h, ym + 0.5 * scale * plot_h};
  }
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / xr.span() * plot_w; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / yr.span() * plot_h; };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                     kWidth, kHeight);
  if (!plot.title.empty()) {
    out += fmt::format(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        Fmt(kLeft + plot_w / 2), Escape(plot.title));
  }

  // Grid, ticks and labels.
  out += "<g class=\"axes\" stroke=\"#cccccc\" stroke-width=\"1\">\n";
  const double xstep = NiceStep(xr.span(), 6);
  const double ystep = NiceStep(yr.span(), 6);
  std::string labels;
  for (long long k = std::llround(std::ceil(xr.lo / xstep));
       k * xstep <= xr.hi; ++k) {
    const double v = k * xstep;
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n",
                       Fmt(sx(v)), Fmt(kTop), Fmt(kTop + plot_h));
    labels += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        Fmt(sx(v)), Fmt(kTop + plot_h + 16), TickLabel(v, xstep));
  }
  for (long long k = std::llround(std::ceil(yr.lo / ystep));
       k * ystep <= yr.hi; ++k) {
    const double v = k * ystep;
    out += fmt::format("<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\"/>\n",
                       Fmt(sy(v)), Fmt(kLeft), Fmt(kLeft + plot_w));
    labels += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
        Fmt(kLeft - 6), Fmt(sy(v) + 4), TickLabel(v, ystep));
  }
  out += "</g>\n";
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      Fmt(kLeft), Fmt(kTop), Fmt(plot_w), Fmt(plot_h));
  out += labels;
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
      Fmt(kLeft + plot_w / 2), Fmt(kHeight - 16), Escape(plot.x_label));
  out += fmt::format(
      "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 18 {0})\">{1}</text>\n",
      Fmt(kTop + plot_h / 2), Escape(plot.y_label));

  // Data.
  std::string legend;
  int legend_row = 0;
  auto add_legend = [&](const std::string& label, const std::string& swatch) {
    const double y = kTop + 10 + 20 * legend_row++;
    legend += swatch;
    legend += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n",
                          Fmt(kWidth - kRight + 34), Fmt(y + 4), Escape(label));
  };
  if (plot.circle) {
    const PlotCircle& c = *plot.circle;
    const double r_px = c.radius / xr.span() * plot_w;
    out += fmt::format(
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#555555\" "
        "stroke-dasharray=\"6 4\"/>\n",
        Fmt(sx(c.center.x())), Fmt(sy(c.center.y())), Fmt(r_px));
    const double y = kTop + 10 + 20 * legend_row;
    add_legend(c.label, fmt::format(
                            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" "
                            "stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n",
                            Fmt(kWidth - kRight + 10), Fmt(y),
                            Fmt(kWidth - kRight + 28), Fmt(y)));
  }
  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const PlotSeries& s = plot.series[i];
    const char* color = kPalette[i % kPalette.size()];
    const double y = kTop + 10 + 20 * legend_row;
    if (s.markers || s.points.size() == 1) {
      out += fmt::format("<g fill=\"{}\">\n", color);
      for (const Eigen::Vector2d& p : s.points) {
        out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3.5\"/>\n",
                           Fmt(sx(p.x())), Fmt(sy(p.y())));
      }
      out += "</g>\n";
      add_legend(s.label, fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" "
                                      "fill=\"{}\"/>\n",
                                      Fmt(kWidth - kRight + 19), Fmt(y), color));
    } else {
      // Points closer than half a pixel to the last one drawn are dropped.
      std::string pts;
      Eigen::Vector2d last_px;
      for (std::size_t k = 0; k < s.points.size(); ++k) {
        const Eigen::Vector2d px(sx(s.points[k].x()), sy(s.points[k].y()));
        const bool final = k + 1 == s.points.size();
        if (k > 0 && !final && (px - last_px).norm() < 0.5) continue;
        last_px = px;
        if (!pts.empty()) pts += ' ';
        pts += Fmt(px.x()) + "," + Fmt(px.y());
      }
      out += fmt::format(
          "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
          "stroke-dasharray=\"{}\" points=\"{}\"/>\n",
          color, i == 0 ? "none" : "8 3", pts);
      add_legend(s.label,
                 fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" "
                             "stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                             Fmt(kWidth - kRight + 10), Fmt(y),
                             Fmt(kWidth - kRight + 28), Fmt(y), color));
    }
  }
  out += legend;
  out += "</svg>\n";
  return out;
}

void WriteFileAtomically(const std::filesystem::path& path,
                         const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error(fmt::format("cannot create directory {}: {}",
                                           path.parent_path().string(),
                                           ec.message()));
    }
  }
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    const std::string reason = ec.message();
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error(
        fmt::format("cannot write {}: {}", path.string(), reason));
  }
}

}  // namespace io
}  // namespace purcell
