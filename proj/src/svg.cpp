#include "rpaths/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rpaths {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0, kMargin = 56.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin);
  }
  double py(double y) const {
    return kHeight - kMargin -
           (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
  }
};

void open_svg(std::ostringstream& s) {
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
    << kHeight << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostringstream& s, const Frame& f, const std::string& xl,
          const std::string& yl) {
  s << "<line x1=\"" << f.px(f.x_lo) << "\" y1=\"" << f.py(f.y_lo)
    << "\" x2=\"" << f.px(f.x_hi) << "\" y2=\"" << f.py(f.y_lo)
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << f.px(f.x_lo) << "\" y1=\"" << f.py(f.y_lo)
    << "\" x2=\"" << f.px(f.x_lo) << "\" y2=\"" << f.py(f.y_hi)
    << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
    << "\" text-anchor=\"middle\" font-size=\"13\">" << xl << "</text>\n"
    << "<text x=\"14\" y=\"" << kHeight / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 "
    << kHeight / 2 << ")\">" << yl << "</text>\n";
  // a few ticks
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x_lo + (f.x_hi - f.x_lo) * i / 4.0;
    const double y = f.y_lo + (f.y_hi - f.y_lo) * i / 4.0;
    s << "<text x=\"" << f.px(x) << "\" y=\"" << f.py(f.y_lo) + 16
      << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(x)
      << "</text>\n"
      << "<text x=\"" << f.px(f.x_lo) - 6 << "\" y=\"" << f.py(y) + 3
      << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(y) << "</text>\n";
  }
}

void polyline(std::ostringstream& s, const Frame& f,
              const std::vector<double>& xs, const std::vector<double>& ys,
              const std::string& color, const std::string& dash = "") {
  s << "<polyline fill=\"none\" stroke=\"" << color << "\"";
  if (!dash.empty()) s << " stroke-dasharray=\"" << dash << "\"";
  s << " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i)
    s << fmt(f.px(xs[i])) << "," << fmt(f.py(ys[i])) << " ";
  s << "\"/>\n";
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

bool qq_core(const std::vector<double>& law_q,
             const std::vector<double>& sample_q,
             const std::vector<double>& band_lo,
             const std::vector<double>& band_hi, const std::string& path) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : law_q) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : sample_q) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  Frame f{lo - pad, hi + pad, lo - pad, hi + pad};

  std::ostringstream s;
  open_svg(s);
  axes(s, f, "law quantiles", "sample quantiles");
  polyline(s, f, {f.x_lo, f.x_hi}, {f.x_lo, f.x_hi}, "#888888");
  if (!band_lo.empty()) {
    polyline(s, f, law_q, band_lo, "#bbbbbb", "4,3");
    polyline(s, f, law_q, band_hi, "#bbbbbb", "4,3");
  }
  for (std::size_t i = 0; i < law_q.size(); ++i) {
    s << "<circle cx=\"" << fmt(f.px(law_q[i])) << "\" cy=\""
      << fmt(f.py(sample_q[i])) << "\" r=\"1.6\" fill=\"#1f77b4\"/>\n";
  }
  s << "</svg>\n";
  return write_file(path, s.str());
}

}  // namespace

bool emit_qq_svg(const EmpiricalSample& sample, const LimitLaw& law,
                 const std::string& path) {
  if (sample.n == 0) throw std::invalid_argument("emit_qq_svg: empty sample");
  const long n = sample.n;
  // Cap the plotted points; quantile levels stay (i-0.5)/n of the full
  // sample, so thinning only drops markers, not information about the law.
  const long step = std::max(1L, n / 2000);
  std::vector<double> law_q, sample_q, band_lo, band_hi;
  const double d = dkw_bound(n, 0.05);
  for (long i = 1; i <= n; i += step) {
    const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(n);
    law_q.push_back(limit_quantile(law, p));
    sample_q.push_back(sample.values[static_cast<std::size_t>(i - 1)]);
    const double p_lo = std::max(1e-12, p - d);
    const double p_hi = std::min(1.0 - 1e-12, p + d);
    band_lo.push_back(limit_quantile(law, p_lo));
    band_hi.push_back(limit_quantile(law, p_hi));
  }
  return qq_core(law_q, sample_q, band_lo, band_hi, path);
}

bool emit_qq_svg(const EmpiricalSample& sample,
                 const EmpiricalSample& reference, const std::string& path) {
  if (sample.n == 0 || reference.n == 0)
    throw std::invalid_argument("emit_qq_svg: empty sample");
  const long n = sample.n;
  const long step = std::max(1L, n / 2000);
  std::vector<double> ref_q, sample_q;
  for (long i = 1; i <= n; i += step) {
    const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(n);
    ref_q.push_back(reference.quantile(p));
    sample_q.push_back(sample.values[static_cast<std::size_t>(i - 1)]);
  }
  return qq_core(ref_q, sample_q, {}, {}, path);
}

bool emit_overlay_svg(const std::vector<OverlayCurve>& curves,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& path) {
  if (curves.empty()) throw std::invalid_argument("emit_overlay_svg: no curves");
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& c : curves) {
    for (double v : c.x) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (double v : c.y) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
  Frame f{x_lo, x_hi, y_lo, y_hi};

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream s;
  open_svg(s);
  axes(s, f, x_label, y_label);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    polyline(s, f, curves[i].x, curves[i].y, colors[i % 4],
             i % 2 == 1 ? "5,3" : "");
    s << "<text x=\"" << kWidth - kMargin << "\" y=\""
      << kMargin + 14.0 * static_cast<double>(i)
      << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colors[i % 4]
      << "\">" << curves[i].name << "</text>\n";
  }
  s << "</svg>\n";
  return write_file(path, s.str());
}

}  // namespace rpaths
