#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "fracmax/error.hpp"
#include "fracmax/harness.hpp"
#include "fracmax/io.hpp"

namespace fracmax {
namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Plot coordinates only need to be stable, not round-trippable.
std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  return f;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void emit_report(std::ostream& out, const Report& r) {
  out << kReportHeader << '\n';
  const std::string name(experiment_name(r.experiment));
  for (const ReportRow& row : r.rows) {
    out << name << ',' << format_double(row.h) << ',' << csv_cell(row.label) << ','
        << format_double(row.input_norm) << ',' << format_double(row.output_norm) << ','
        << format_double(row.ratio) << ',' << format_double(row.fitted_constant) << ','
        << csv_cell(row.witness) << ',' << (row.truncated ? 1 : 0) << '\n';
  }
  if (r.rows.empty() && r.notes.empty()) return;
  for (const std::string& n : r.notes) out << "# note: " << n << '\n';
  out << "# verdict: " << verdict_name(r.verdict) << '\n';
}

void emit_report(const std::string& path, const Report& r) {
  std::ofstream f = open_for_write(path);
  emit_report(f, r);
  if (!f) throw Error("write to '" + path + "' failed");
}

void render_svg(std::ostream& out, const Report& r) {
  constexpr double W = 640, H = 400, left = 70, right = 150, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  // Only finite points are drawn; a log axis also drops x <= 0.
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!r.log_x || x > 0.0);
  };
  auto tx = [&](double x) { return r.log_x ? std::log10(x) : x; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const PlotSeries& s : r.plots)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  const bool empty = !(x0 <= x1);
  if (empty) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(W) << "\" height=\""
      << fixed(H) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(left) << "\" y=\"20\" font-size=\"14\">"
      << xml_escape(std::string(experiment_name(r.experiment))) << " ("
      << verdict_name(r.verdict) << ")</text>\n";
  out << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw)
      << "\" height=\"" << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double xv = r.log_x ? std::pow(10.0, fx) : fx;
    const double sx = left + pw * k / 4.0;
    out << "<text x=\"" << fixed(sx) << "\" y=\"" << fixed(top + ph + 16)
        << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    const double yv = y0 + (y1 - y0) * k / 4.0;
    out << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(py(yv) + 4)
        << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(H - 10)
      << "\" text-anchor=\"middle\">" << xml_escape(r.plot_x_label) << (r.log_x ? " (log)" : "")
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << fixed(top + ph / 2) << "\" transform=\"rotate(-90 14 "
      << fixed(top + ph / 2) << ")\" text-anchor=\"middle\">" << xml_escape(r.plot_y_label)
      << "</text>\n";

  std::size_t idx = 0;
  for (const PlotSeries& s : r.plots) {
    const char* colour = kPalette[idx % std::size(kPalette)];
    std::string pts;
    std::string dots;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      const std::string cx = fixed(px(s.x[i])), cy = fixed(py(s.y[i]));
      pts += (pts.empty() ? "" : " ") + cx + "," + cy;
      dots += "<circle cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"2\" fill=\"" + colour + "\"/>\n";
    }
    if (!pts.empty())
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"" << pts << "\"/>\n";
    out << dots;
    const double ly = top + 14.0 * static_cast<double>(idx + 1);
    out << "<text x=\"" << fixed(left + pw + 10) << "\" y=\"" << fixed(ly) << "\" fill=\"" << colour
        << "\">" << xml_escape(s.name) << "</text>\n";
    ++idx;
  }
  if (empty)
    out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(top + ph / 2)
        << "\" text-anchor=\"middle\">no data</text>\n";
  out << "</svg>\n";
}

void render_svg(const std::string& path, const Report& r) {
  std::ofstream f = open_for_write(path);
  render_svg(f, r);
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace fracmax
