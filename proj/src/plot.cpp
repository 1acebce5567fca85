#include "immunesim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "immunesim/errors.hpp"

namespace immunesim {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v, const char* fmt = "%.2f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::string render_svg(const TimeSeries& series, std::string_view component, std::string_view title) {
  const auto& ys = series.column(component);
  const auto& ts = series.times_hr;
  if (ys.empty()) throw ValidationError("nothing to plot for '" + std::string(component) + "'");

  double t0 = ts.front(), t1 = ts.back();
  double lo = *std::min_element(ys.begin(), ys.end());
  double hi = *std::max_element(ys.begin(), ys.end());
  if (t1 <= t0) t1 = t0 + 1.0;
  if (hi <= lo) {  // flat line: open a band around it
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
    lo -= pad;
    hi += pad;
  }

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto sx = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * pw; };
  const auto sy = [&](double v) { return kTop + (hi - v) / (hi - lo) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << (title.empty() ? component : title) << "</text>\n";
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n"
      << "</g>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = t0 + (t1 - t0) * i / 4.0;
    const double v = lo + (hi - lo) * i / 4.0;
    out << "<text x=\"" << num(sx(t)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
        << num(t, "%g") << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(sy(v) + 4) << "\" text-anchor=\"end\">"
        << num(v, "%.3g") << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">time [h]</text>\n";
  out << "</g>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < ys.size(); ++i) {
    out << (i ? " " : "") << num(sx(ts[i])) << ',' << num(sy(ys[i]));
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

std::vector<std::filesystem::path> write_svg_plots(const TimeSeries& series, const std::filesystem::path& dir,
                                                   std::string_view prefix) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& name : series.names) {
    const auto path = dir / (std::string(prefix) + name + ".svg");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << render_svg(series, name);
    written.push_back(path);
  }
  return written;
}

}  // namespace immunesim
