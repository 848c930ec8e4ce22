#include <algorithm>
#include <cstdio>
#include <sstream>

#include "brandmatch/campaign.hpp"

namespace brandmatch {
namespace {

std::string fixed(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string xml_escape(std::string_view s) {
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

}  // namespace

std::string render_target_summary(const TargetReport& report, std::size_t shown) {
  std::ostringstream out;
  out << "Campaign target for brand " << report.brand_id << "\n";
  out << "  users ranked:   " << report.ranked.size() << "\n";
  out << "  target size:    " << report.selected.size() << " (fraction "
      << report.config.value("target_fraction", 0.0) << ")\n";
  out << "  dataset sha256: " << report.dataset_digest << "\n\n";
  out << "  rank  " << pad("owner_id", 24) << "mu      k'  selected\n";
  const std::size_t n = std::min(shown, report.ranked.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = report.ranked[i];
    out << "  " << pad(std::to_string(i + 1), 6) << pad(r.owner_id, 24) << pad(fixed(r.match.overall), 8)
        << pad(std::to_string(r.match.k_prime), 4) << (r.selected ? "yes" : "") << "\n";
  }
  if (report.ranked.size() > n) out << "  ... " << report.ranked.size() - n << " more\n";
  out << "\n  per-category mu (count / mean / min / max)\n";
  for (const auto& [name, d] : report.distributions) {
    out << "    " << pad(name, 12) << d.count << " / " << fixed(d.mean) << " / " << fixed(d.min) << " / "
        << fixed(d.max) << "\n";
  }
  return out.str();
}

std::string render_group_table(const GroupMatchTable& table) {
  std::ostringstream out;
  out << "Average match (users x page topic class)\n";
  out << "  " << pad("", 8);
  for (auto c : GroupMatchTable::kClasses) out << pad(std::string(c), 14);
  out << "\n";
  for (std::size_t g = 0; g < table.cells.size(); ++g) {
    out << "  " << pad(std::string(to_string(GroupMatchTable::kGroups[g])), 8);
    for (const auto& cell : table.cells[g]) out << pad(cell.mean ? fixed(*cell.mean) : "undefined", 14);
    out << "\n";
  }
  if (table.users_without_group > 0) {
    out << "  (" << table.users_without_group << " users without a male/female gender excluded)\n";
  }
  return out.str();
}

std::string render_term_cloud(std::string_view title, const TermCloud& cloud, std::size_t shown) {
  std::ostringstream out;
  out << "Top terms: " << title << "\n";
  const std::size_t n = std::min(shown, cloud.size());
  for (std::size_t i = 0; i < n; ++i) out << "  " << pad(cloud[i].term, 20) << cloud[i].count << "\n";
  if (cloud.empty()) out << "  (no terms)\n";
  return out.str();
}

std::string render_group_table_svg(const GroupMatchTable& table) {
  constexpr int kWidth = 640;
  constexpr int kHeight = 360;
  constexpr int kLeft = 60;
  constexpr int kBottom = 300;
  constexpr int kTop = 30;
  constexpr int kGroupWidth = 140;
  constexpr int kBarWidth = 40;
  const char* colors[] = {"#4a78b5", "#c8507a"};

  double top_value = 0.0;
  for (const auto& row : table.cells) {
    for (const auto& cell : row) top_value = std::max(top_value, cell.mean.value_or(0.0));
  }
  if (top_value <= 0.0) top_value = 1.0;
  const double scale = (kBottom - kTop) / top_value;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "  <text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\">Average match by page topic class</text>\n";
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kWidth - 20 << "\" y2=\"" << kBottom
      << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom
      << "\" stroke=\"black\"/>\n";
  svg << "  <text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">" << fixed(top_value, 3)
      << "</text>\n";
  svg << "  <text x=\"" << kLeft - 6 << "\" y=\"" << kBottom << "\" text-anchor=\"end\">0</text>\n";
  for (std::size_t c = 0; c < GroupMatchTable::kClasses.size(); ++c) {
    const int x0 = kLeft + 20 + static_cast<int>(c) * kGroupWidth;
    for (std::size_t g = 0; g < table.cells.size(); ++g) {
      const auto& cell = table.cells[g][c];
      if (!cell.mean) continue;
      const double h = *cell.mean * scale;
      svg << "  <rect x=\"" << x0 + static_cast<int>(g) * (kBarWidth + 4) << "\" y=\"" << fixed(kBottom - h, 2)
          << "\" width=\"" << kBarWidth << "\" height=\"" << fixed(h, 2) << "\" fill=\"" << colors[g] << "\"><title>"
          << to_string(GroupMatchTable::kGroups[g]) << " / " << GroupMatchTable::kClasses[c] << ": "
          << fixed(*cell.mean) << "</title></rect>\n";
    }
    svg << "  <text x=\"" << x0 + kBarWidth << "\" y=\"" << kBottom + 18 << "\" text-anchor=\"middle\">"
        << xml_escape(GroupMatchTable::kClasses[c]) << "</text>\n";
  }
  for (std::size_t g = 0; g < table.cells.size(); ++g) {
    const int y = kBottom + 40;
    const int x = kLeft + static_cast<int>(g) * 120;
    svg << "  <rect x=\"" << x << "\" y=\"" << y - 10 << "\" width=\"12\" height=\"12\" fill=\"" << colors[g]
        << "\"/>\n";
    svg << "  <text x=\"" << x + 18 << "\" y=\"" << y << "\">" << to_string(GroupMatchTable::kGroups[g])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace brandmatch
