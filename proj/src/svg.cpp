#include "qprobe/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qprobe {

namespace {

constexpr double kWidth = 840, kHeight = 520;
constexpr double kLeft = 70, kRight = 30, kTop = 30, kBottom = 60;

struct Axes {
  double x_min, x_max;

  double px(double x) const {
    return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
  }
  // y axis is always the amplitude in [0, 1]
  double py(double y) const { return kTop + (1.0 - y) * (kHeight - kTop - kBottom); }
};

void open_svg(std::ostringstream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void draw_frame(std::ostringstream& out, const Axes& ax, const std::string& x_label) {
  out << "<g stroke=\"black\" fill=\"none\">"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\"/></g>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = i / 5.0;
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << ax.py(y) << "\" x2=\"" << kLeft
        << "\" y2=\"" << ax.py(y) << "\" stroke=\"black\"/>";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << ax.py(y) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(y) << "</text>\n";
  }
  for (int i = 0; i <= 6; ++i) {
    const double x = ax.x_min + (ax.x_max - ax.x_min) * i / 6.0;
    out << "<line x1=\"" << ax.px(x) << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
        << ax.px(x) << "\" y2=\"" << kHeight - kBottom + 4 << "\" stroke=\"black\"/>";
    out << "<text x=\"" << ax.px(x) << "\" y=\"" << kHeight - kBottom + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">"
        << format_double(std::round(x * 100.0) / 100.0) << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 18
      << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (kTop + kHeight - kBottom) / 2 << ")\">amplitude bound</text>\n";
}

void draw_series(std::ostringstream& out, const Axes& ax, const std::string& id,
                 const std::string& color, const std::string& dash,
                 const std::vector<std::pair<double, double>>& points,
                 const std::vector<double>& stds) {
  if (points.empty()) return;
  out << "<polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << color << "\"";
  if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
  out << " stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : points) out << ax.px(x) << ',' << ax.py(y) << ' ';
  out << "\"/>\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [x, y] = points[i];
    out << "<circle cx=\"" << ax.px(x) << "\" cy=\"" << ax.py(y)
        << "\" r=\"2.5\" fill=\"" << color << "\"/>";
    if (i < stds.size() && stds[i] > 0.0) {
      out << "<line x1=\"" << ax.px(x) << "\" y1=\"" << ax.py(std::min(1.0, y + stds[i]))
          << "\" x2=\"" << ax.px(x) << "\" y2=\"" << ax.py(std::max(0.0, y - stds[i]))
          << "\" stroke=\"" << color << "\"/>";
    }
  }
  out << '\n';
}

std::string render_rows(const std::vector<SweepCsvRow>& rows) {
  std::ostringstream out;
  open_svg(out);
  double x_min = 0.0, x_max = 1.0;
  bool any = false;
  for (const auto& r : rows) {
    if (std::isnan(r.thickness_mm)) continue;
    if (!any) {
      x_min = x_max = r.thickness_mm;
      any = true;
    }
    x_min = std::min(x_min, r.thickness_mm);
    x_max = std::max(x_max, r.thickness_mm);
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  Axes ax{x_min, x_max};
  draw_frame(out, ax, "quartz-plate thickness (mm)");

  const struct {
    const char* id;
    const char* color;
    double SweepCsvRow::* value;
    double SweepCsvRow::* std;
  } series[] = {
      {"lower_fid", "#1f4fd8", &SweepCsvRow::lower_fid, &SweepCsvRow::lower_fid_std},
      {"upper_fid", "#1f4fd8", &SweepCsvRow::upper_fid, &SweepCsvRow::upper_fid_std},
      {"lower_td", "#d82f2f", &SweepCsvRow::lower_td, &SweepCsvRow::lower_td_std},
      {"upper_td", "#d82f2f", &SweepCsvRow::upper_td, &SweepCsvRow::upper_td_std},
  };
  for (const auto& s : series) {
    std::vector<std::pair<double, double>> pts;
    std::vector<double> stds;
    for (const auto& r : rows) {
      if (std::isnan(r.*(s.value))) continue;
      pts.emplace_back(r.thickness_mm, r.*(s.value));
      stds.push_back(std::isnan(r.*(s.std)) ? 0.0 : r.*(s.std));
    }
    draw_series(out, ax, s.id, s.color, "", pts, stds);
  }

  // critical-amplitude guides from the first row that has one
  for (const auto& r : rows) {
    if (std::isnan(r.acrit)) continue;
    for (double y : {r.acrit, 1.0 - r.acrit}) {
      out << "<line x1=\"" << ax.px(x_min) << "\" y1=\"" << ax.py(y) << "\" x2=\""
          << ax.px(x_max) << "\" y2=\"" << ax.py(y)
          << "\" stroke=\"black\" stroke-dasharray=\"8 3 2 3\"/>\n";
    }
    break;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string render_sweep_svg(const std::vector<SweepCsvRow>& rows) { return render_rows(rows); }

std::string render_sweep_svg(const SweepReport& report) {
  std::vector<SweepCsvRow> rows;
  rows.reserve(report.rows.size());
  for (const auto& r : report.rows) {
    SweepCsvRow c{};
    if (!r.error.empty()) continue;
    c.thickness_mm = r.thickness_mm;
    c.tau = r.tau;
    c.lower_fid = r.bounds.lower_fid.value;
    c.upper_fid = r.bounds.upper_fid.value;
    c.lower_fid_std = r.bounds.lower_fid_std;
    c.upper_fid_std = r.bounds.upper_fid_std;
    c.lower_td = r.bounds.lower_td.value;
    c.upper_td = r.bounds.upper_td.value;
    c.lower_td_std = r.bounds.lower_td_std;
    c.upper_td_std = r.bounds.upper_td_std;
    c.acrit = r.a_crit ? *r.a_crit : std::nan("");
    rows.push_back(std::move(c));
  }
  return render_rows(rows);
}

std::string render_intervals_svg(const IntervalReport& report) {
  std::ostringstream out;
  open_svg(out);
  double x_min = 0.0, x_max = 1.0;
  if (!report.spans.empty()) {
    x_min = report.spans.front().tau_start;
    x_max = report.spans.back().tau_end;
  }
  Axes ax{x_min, x_max};
  draw_frame(out, ax, "rescaled time tau");
  for (const auto& span : report.spans) {
    const char* color = span.label == IntervalLabel::NonMarkovianVerified ? "#d82f2f"
                        : span.label == IntervalLabel::MarkovianVerified  ? "#2f9e44"
                                                                          : "#adb5bd";
    out << "<rect class=\"" << to_string(span.label) << "\" x=\"" << ax.px(span.tau_start)
        << "\" y=\"" << ax.py(0.75) << "\" width=\""
        << std::max(0.5, ax.px(span.tau_end) - ax.px(span.tau_start)) << "\" height=\""
        << ax.py(0.25) - ax.py(0.75) << "\" fill=\"" << color << "\"/>\n";
  }
  for (double y : {report.a_lo, report.a_hi}) {
    out << "<line x1=\"" << ax.px(x_min) << "\" y1=\"" << ax.py(y) << "\" x2=\""
        << ax.px(x_max) << "\" y2=\"" << ax.py(y)
        << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qprobe
