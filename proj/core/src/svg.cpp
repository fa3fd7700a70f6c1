#include "halo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace halo {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 160.0;  // room for the legend
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;       // (lambda, T)
  std::vector<double> halfwidths;                      // empty for analytic
  bool analytic = false;
};

}  // namespace

std::string render_chart(const std::vector<AnalyzeRow>& analytic,
                         const std::vector<SweepRow>& simulated) {
  std::vector<Series> series;

  Series prop{"T_proportional", {}, {}, true};
  Series opt{"T_optimal", {}, {}, true};
  for (const auto& row : analytic) {
    prop.points.emplace_back(row.lambda, row.t_proportional);
    opt.points.emplace_back(row.lambda, row.t_optimal);
  }
  if (!prop.points.empty()) {
    series.push_back(prop);
    series.push_back(opt);
  }

  // Simulated points grouped per policy, assembled in first-seen order.
  std::vector<std::string> policy_order;
  std::map<std::string, Series> per_policy;
  for (const auto& row : simulated) {
    if (!row.simulated_t) continue;
    if (!per_policy.contains(row.policy)) {
      policy_order.push_back(row.policy);
      per_policy[row.policy] = Series{row.policy, {}, {}, false};
    }
    per_policy[row.policy].points.emplace_back(row.lambda, *row.simulated_t);
    per_policy[row.policy].halfwidths.push_back(row.ci_halfwidth.value_or(0.0));
  }
  for (const auto& name : policy_order) series.push_back(per_policy[name]);

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = 0.0;
  double y_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto [x, y] = s.points[i];
      const double hw = s.halfwidths.empty() ? 0.0 : s.halfwidths[i];
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y + hw);
    }
  }
  if (series.empty() || !(y_max > y_min)) {
    x_min = 0.0;
    x_max = 1.0;
    y_max = 1.0;
  }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  y_max *= 1.05;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto py = [&](double y) {
    return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  svg << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";

  // Axes with 5 ticks per side.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << coord(kMarginTop + plot_h)
      << "\" x2=\"" << coord(kMarginLeft + plot_w) << "\" y2=\"" << coord(kMarginTop + plot_h)
      << "\"/>\n";
  svg << "<line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << coord(kMarginTop) << "\" x2=\""
      << coord(kMarginLeft) << "\" y2=\"" << coord(kMarginTop + plot_h) << "\"/>\n";
  svg << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = x_min + (x_max - x_min) * t / 5.0;
    const double fy = y_min + (y_max - y_min) * t / 5.0;
    svg << "<text x=\"" << coord(px(fx)) << "\" y=\"" << coord(kMarginTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    svg << "<text x=\"" << coord(kMarginLeft - 8) << "\" y=\"" << coord(py(fy) + 4)
        << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  svg << "<text x=\"" << coord(kMarginLeft + plot_w / 2) << "\" y=\""
      << coord(kHeight - 15) << "\" text-anchor=\"middle\">arrival rate (req/s)</text>\n";
  svg << "<text x=\"18\" y=\"" << coord(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << coord(kMarginTop + plot_h / 2) << ")\">mean response time (s)</text>\n";
  svg << "</g>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    auto points = s.points;
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a].first < points[b].first; });

    if (points.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
          << (s.analytic ? "" : " stroke-dasharray=\"5 4\"") << " points=\"";
      for (std::size_t i : order) {
        svg << coord(px(points[i].first)) << ',' << coord(py(points[i].second)) << ' ';
      }
      svg << "\"/>\n";
    }
    for (std::size_t i : order) {
      const double cx = px(points[i].first);
      const double cy = py(points[i].second);
      svg << "<circle cx=\"" << coord(cx) << "\" cy=\"" << coord(cy) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
      if (!s.halfwidths.empty() && s.halfwidths[i] > 0.0) {
        const double y_lo = py(points[i].second - s.halfwidths[i]);
        const double y_hi = py(points[i].second + s.halfwidths[i]);
        svg << "<line x1=\"" << coord(cx) << "\" y1=\"" << coord(y_lo) << "\" x2=\""
            << coord(cx) << "\" y2=\"" << coord(y_hi) << "\" stroke=\"" << color
            << "\" stroke-width=\"1\"/>\n";
      }
    }
    // Legend entry.
    const double ly = kMarginTop + 10 + 20.0 * static_cast<double>(si);
    const double lx = kWidth - kMarginRight + 12;
    svg << "<line x1=\"" << coord(lx) << "\" y1=\"" << coord(ly) << "\" x2=\""
        << coord(lx + 24) << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"" << (s.analytic ? "" : " stroke-dasharray=\"5 4\"") << "/>\n";
    svg << "<text x=\"" << coord(lx + 30) << "\" y=\"" << coord(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace halo
