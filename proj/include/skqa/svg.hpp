#pragma once

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "skqa/errors.hpp"

namespace skqa {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool xlog = false;
  bool ylog = false;
};

namespace detail {

inline void svg_appendf(std::string& out, const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  out += buf;
}

inline std::string svg_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '&')
      r += "&amp;";
    else if (c == '<')
      r += "&lt;";
    else if (c == '>')
      r += "&gt;";
    else
      r += c;
  }
  return r;
}

}  // namespace detail

/// Self-contained SVG line plot; output is a pure function of its inputs.
inline std::string render_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec) {
  using detail::svg_appendf;
  constexpr double W = 800, H = 560;
  constexpr double L = 80, R = 180, T = 48, Bm = 64;  // margins, legend on the right
  const double plot_w = W - L - R, plot_h = H - T - Bm;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  auto tx = [&](double v) { return spec.xlog ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.ylog ? std::log10(v) : v; };

  bool any = false;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double vx = tx(s.x[i]), vy = ty(s.y[i]);
      if (!std::isfinite(vx) || !std::isfinite(vy)) continue;
      if (!any) {
        xmin = xmax = vx;
        ymin = ymax = vy;
        any = true;
      } else {
        xmin = std::min(xmin, vx);
        xmax = std::max(xmax, vx);
        ymin = std::min(ymin, vy);
        ymax = std::max(ymax, vy);
      }
    }
  if (any) {
    if (xmax - xmin < 1e-12) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
      ymin -= 0.5;
      ymax += 0.5;
    }
    const double padx = 0.04 * (xmax - xmin), pady = 0.06 * (ymax - ymin);
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;
  }

  auto px = [&](double v) { return L + (tx(v) - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double v) { return T + plot_h - (ty(v) - ymin) / (ymax - ymin) * plot_h; };

  std::string out;
  svg_appendf(out,
              "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
              "viewBox=\"0 0 %.0f %.0f\">\n",
              W, H, W, H);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg_appendf(out,
              "<text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
              "text-anchor=\"middle\">%s</text>\n",
              L + plot_w / 2, detail::svg_escape(spec.title).c_str());
  // Frame.
  svg_appendf(out,
              "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
              "stroke=\"black\"/>\n",
              L, T, plot_w, plot_h);

  // Ticks: decades on log axes, five even divisions otherwise.
  auto emit_xtick = [&](double raw, const std::string& label) {
    const double x = L + (raw - xmin) / (xmax - xmin) * plot_w;
    svg_appendf(out, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                x, T + plot_h, x, T + plot_h + 5);
    svg_appendf(out,
                "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"middle\">%s</text>\n",
                x, T + plot_h + 20, label.c_str());
  };
  auto emit_ytick = [&](double raw, const std::string& label) {
    const double y = T + plot_h - (raw - ymin) / (ymax - ymin) * plot_h;
    svg_appendf(out, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                L - 5, y, L, y);
    svg_appendf(out,
                "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"end\">%s</text>\n",
                L - 8, y + 4, label.c_str());
  };
  char lbl[48];
  auto fmt_tick = [&](double v, bool log_axis) {
    std::snprintf(lbl, sizeof lbl, log_axis ? "1e%.0f" : "%.4g", v);
    return std::string(lbl);
  };
  if (any) {
    auto ticks = [&](double lo, double hi, bool log_axis) {
      std::vector<double> t;
      if (log_axis) {
        for (double d = std::ceil(lo); d <= std::floor(hi) + 1e-9; d += 1.0) t.push_back(d);
        if (t.empty()) t = {lo, hi};
      } else {
        for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
      }
      return t;
    };
    for (double v : ticks(xmin, xmax, spec.xlog)) emit_xtick(v, fmt_tick(v, spec.xlog));
    for (double v : ticks(ymin, ymax, spec.ylog)) emit_ytick(v, fmt_tick(v, spec.ylog));
  }

  svg_appendf(out,
              "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" "
              "text-anchor=\"middle\">%s</text>\n",
              L + plot_w / 2, H - 20, detail::svg_escape(spec.xlabel).c_str());
  svg_appendf(out,
              "<text x=\"20\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" "
              "text-anchor=\"middle\" transform=\"rotate(-90 20 %.1f)\">%s</text>\n",
              T + plot_h / 2, T + plot_h / 2, detail::svg_escape(spec.ylabel).c_str());

  // Series.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = palette[si % 8];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(tx(s.x[i])) || !std::isfinite(ty(s.y[i]))) continue;
      char b[64];
      std::snprintf(b, sizeof b, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      pts += b;
    }
    if (!pts.empty()) {
      svg_appendf(out, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" points=\"%s\"/>\n",
                  color, pts.c_str());
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(tx(s.x[i])) || !std::isfinite(ty(s.y[i]))) continue;
        svg_appendf(out, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n", px(s.x[i]),
                    py(s.y[i]), color);
      }
    }
    // Legend entry.
    const double ly = T + 12 + 18.0 * static_cast<double>(si);
    svg_appendf(out, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                     "stroke-width=\"1.5\"/>\n",
                W - R + 10, ly, W - R + 34, ly, color);
    svg_appendf(out,
                "<text class=\"legend\" x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                "font-size=\"12\">%s</text>\n",
                W - R + 40, ly + 4, detail::svg_escape(s.label).c_str());
  }

  out += "</svg>\n";
  return out;
}

}  // namespace skqa
