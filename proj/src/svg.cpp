#include "tiltsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tiltsim {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;
constexpr size_t kMaxPointsPerSeries = 2000;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd",
                          "#d62728", "#8c564b"};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

// Round tick spacing to 1/2/5 times a power of ten.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0;
  if (frac <= 1.5) step = 1.0;
  else if (frac <= 3.5) step = 2.0;
  else if (frac <= 7.5) step = 5.0;
  return step * mag;
}

}  // namespace

std::string render_line_chart(const PlotSpec& spec) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : spec.series) {
    for (const Vec2& p : s.points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  if (!(xmin < xmax)) { xmin -= 1.0; xmax += 1.0; }
  if (!(ymin < ymax)) { ymin -= 1.0; ymax += 1.0; }

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  if (spec.equal_aspect) {
    const double sx = plot_w / (xmax - xmin);
    const double sy = plot_h / (ymax - ymin);
    if (sx < sy) {
      const double extra = (plot_h / sx - (ymax - ymin)) / 2.0;
      ymin -= extra;
      ymax += extra;
    } else {
      const double extra = (plot_w / sy - (xmax - xmin)) / 2.0;
      xmin -= extra;
      xmax += extra;
    }
  }

  auto px = [&](double x) {
    return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w;
  };
  auto py = [&](double y) {
    return kMarginTop + (ymax - y) / (ymax - ymin) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << spec.title << "</text>\n";

  // Axes, ticks, grid.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double xstep = nice_step(xmax - xmin);
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9 * xstep;
       x += xstep) {
    svg << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << kMarginTop
        << "\" x2=\"" << fmt(px(x)) << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kMarginTop + plot_h + 16
        << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin);
  for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9 * ystep;
       y += ystep) {
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(py(y))
        << "\" x2=\"" << kMarginLeft + plot_w << "\" y2=\"" << fmt(py(y))
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << fmt(py(y) + 4)
        << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
  }
  svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\""
      << kHeight - 12 << "\" text-anchor=\"middle\">" << spec.x_label
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")\">" << spec.y_label << "</text>\n";
  svg << "</g>\n";

  // Series.
  for (size_t i = 0; i < spec.series.size(); ++i) {
    const PlotSeries& s = spec.series[i];
    if (s.points.empty()) continue;
    const size_t stride =
        std::max<size_t>(1, s.points.size() / kMaxPointsPerSeries);
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t j = 0; j < s.points.size(); j += stride) {
      svg << fmt(px(s.points[j].x)) << "," << fmt(py(s.points[j].y)) << " ";
    }
    if ((s.points.size() - 1) % stride != 0) {
      svg << fmt(px(s.points.back().x)) << "," << fmt(py(s.points.back().y));
    }
    svg << "\"/>\n";
  }

  // Legend.
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (size_t i = 0; i < spec.series.size(); ++i) {
    const double ly = kMarginTop + 8 + 16 * static_cast<double>(i);
    svg << "<line x1=\"" << kMarginLeft + 8 << "\" y1=\"" << ly << "\" x2=\""
        << kMarginLeft + 30 << "\" y2=\"" << ly << "\" stroke=\""
        << kPalette[i % 6] << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kMarginLeft + 36 << "\" y=\"" << ly + 4 << "\">"
        << spec.series[i].label << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void write_line_chart(const std::filesystem::path& path, const PlotSpec& spec) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << render_line_chart(spec);
}

}  // namespace tiltsim
