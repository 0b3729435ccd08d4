#include "plasmoheat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "plasmoheat/csv.hpp"

namespace plasmoheat {

namespace {

constexpr double kW = 640.0, kH = 480.0;
constexpr double kMargin = 56.0;

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      const double d = 0.05 * (hi - lo);
      lo -= d;
      hi += d;
    }
  }
  double map(double v, double out_lo, double out_hi) const {
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

// Five-stop blue->yellow colormap.
std::string colormap(double s) {
  s = std::clamp(s, 0.0, 1.0);
  static const double stops[5][3] = {{68, 1, 84},
                                     {59, 82, 139},
                                     {33, 145, 140},
                                     {94, 201, 98},
                                     {253, 231, 37}};
  const double pos = s * 4.0;
  const int i = std::min(3, static_cast<int>(pos));
  const double a = pos - i;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(stops[i][0] + a * (stops[i + 1][0] - stops[i][0])),
                static_cast<int>(stops[i][1] + a * (stops[i + 1][1] - stops[i][1])),
                static_cast<int>(stops[i][2] + a * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

void open_svg(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
     << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<Series>& series, bool logx,
                      bool logy) {
  Range rx, ry;
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if ((logx && s.x[i] <= 0.0) || (logy && s.y[i] <= 0.0)) continue;
      rx.add(tx(s.x[i]));
      ry.add(ty(s.y[i]));
    }
  }
  if (!std::isfinite(rx.lo)) {
    rx.add(0.0);
    ry.add(0.0);
  }
  rx.pad();
  ry.pad();

  std::ostringstream os;
  open_svg(os, title);
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
     << kW - 2 * kMargin << "\" height=\"" << kH - 2 * kMargin
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
  // Axis ticks (4 per axis).
  for (int k = 0; k <= 4; ++k) {
    const double fx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
    const double px = rx.map(fx, kMargin, kW - kMargin);
    const double py = ry.map(fy, kH - kMargin, kMargin);
    os << "<text x=\"" << f2(px) << "\" y=\"" << f2(kH - kMargin + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << (logx ? "1e" + fmt_tick(fx) : fmt_tick(fx)) << "</text>\n";
    os << "<text x=\"" << f2(kMargin - 6) << "\" y=\"" << f2(py + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << (logy ? "1e" + fmt_tick(fy) : fmt_tick(fy)) << "</text>\n";
  }
  int ci = 0;
  for (const auto& s : series) {
    std::ostringstream pts;
    bool first = true;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if ((logx && s.x[i] <= 0.0) || (logy && s.y[i] <= 0.0)) continue;
      const double px = rx.map(tx(s.x[i]), kMargin, kW - kMargin);
      const double py = ry.map(ty(s.y[i]), kH - kMargin, kMargin);
      pts << (first ? "" : " ") << f2(px) << "," << f2(py);
      first = false;
    }
    const char* color = kPalette[ci % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    os << "<text x=\"" << f2(kW - kMargin - 6) << "\" y=\""
       << f2(kMargin + 16 + 16 * ci) << "\" text-anchor=\"end\" "
       << "font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
       << "\">" << s.label << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  write_text_atomic(path, os.str());
}

void write_tri_heatmap(const std::string& path, const std::string& title,
                       const InteriorMesh& mesh, const Vector& values) {
  Range rx, ry, rv;
  for (const auto& v : mesh.vertices) {
    rx.add(v.x);
    ry.add(v.y);
  }
  for (int q = 0; q < values.size(); ++q) rv.add(values[q]);
  rx.pad();
  ry.pad();
  if (!(rv.hi > rv.lo)) rv.hi = rv.lo + 1.0;

  // Preserve aspect ratio inside the frame.
  const double frame = kH - 2 * kMargin;
  const double span = std::max(rx.hi - rx.lo, ry.hi - ry.lo);
  auto px = [&](double x) {
    return kMargin + (x - 0.5 * (rx.lo + rx.hi) + 0.5 * span) / span * frame;
  };
  auto py = [&](double y) {
    return kH - kMargin - (y - 0.5 * (ry.lo + ry.hi) + 0.5 * span) / span * frame;
  };

  std::ostringstream os;
  open_svg(os, title);
  for (int q = 0; q < mesh.n_triangles(); ++q) {
    const auto& tri = mesh.triangles[q];
    const double s = (values[q] - rv.lo) / (rv.hi - rv.lo);
    os << "<polygon points=\"";
    for (int v = 0; v < 3; ++v) {
      const Vec2 p = mesh.vertices[tri[v]];
      os << (v ? " " : "") << f2(px(p.x)) << "," << f2(py(p.y));
    }
    os << "\" fill=\"" << colormap(s) << "\" stroke=\"none\"/>\n";
  }
  // Colorbar.
  const double bar_x = kMargin + frame + 24.0, bar_w = 18.0;
  const int nseg = 32;
  for (int k = 0; k < nseg; ++k) {
    const double y0 = kH - kMargin - frame * (k + 1.0) / nseg;
    os << "<rect x=\"" << f2(bar_x) << "\" y=\"" << f2(y0) << "\" width=\""
       << bar_w << "\" height=\"" << f2(frame / nseg + 0.5) << "\" fill=\""
       << colormap((k + 0.5) / nseg) << "\"/>\n";
  }
  os << "<text x=\"" << f2(bar_x + bar_w + 4) << "\" y=\""
     << f2(kH - kMargin + 4) << "\" font-family=\"sans-serif\" "
     << "font-size=\"11\">" << fmt_tick(rv.lo) << "</text>\n";
  os << "<text x=\"" << f2(bar_x + bar_w + 4) << "\" y=\""
     << f2(kH - kMargin - frame + 4) << "\" font-family=\"sans-serif\" "
     << "font-size=\"11\">" << fmt_tick(rv.hi) << "</text>\n";
  os << "</svg>\n";
  write_text_atomic(path, os.str());
}

void write_stem_chart(const std::string& path, const std::string& title,
                      const std::vector<double>& values) {
  Range ry;
  for (double v : values) ry.add(v);
  ry.add(0.0);
  ry.pad();
  std::ostringstream os;
  open_svg(os, title);
  const double y0 = ry.map(0.0, kH - kMargin, kMargin);
  os << "<line x1=\"" << kMargin << "\" y1=\"" << f2(y0) << "\" x2=\""
     << kW - kMargin << "\" y2=\"" << f2(y0) << "\" stroke=\"#888\"/>\n";
  const int n = static_cast<int>(values.size());
  for (int i = 0; i < n; ++i) {
    const double x = kMargin + (kW - 2 * kMargin) * (i + 0.5) / n;
    const double y = ry.map(values[i], kH - kMargin, kMargin);
    os << "<line x1=\"" << f2(x) << "\" y1=\"" << f2(y0) << "\" x2=\"" << f2(x)
       << "\" y2=\"" << f2(y) << "\" stroke=\"#1f77b4\"/>\n";
    os << "<circle cx=\"" << f2(x) << "\" cy=\"" << f2(y)
       << "\" r=\"2.2\" fill=\"#1f77b4\"/>\n";
  }
  os << "</svg>\n";
  write_text_atomic(path, os.str());
}

}  // namespace plasmoheat
