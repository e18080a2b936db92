#include "rrd/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "rrd/error.hpp"

namespace rrd {

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

void write_pair_csv_row(std::ostream& out, const PairRecord& rec) {
  out << rec.stream_index << ',' << rec.raw_size << ',' << rec.reduced_size << ','
      << rec.distance << ',' << format_fixed(rec.ratio_raw()) << ',';
  if (const auto r = rec.ratio_reduced()) out << format_fixed(*r);
  out << '\n';
}

void write_pair_csv(std::ostream& out, std::span<const PairRecord> records) {
  out << kPairCsvHeader << '\n';
  for (const auto& rec : records) write_pair_csv_row(out, rec);
}

namespace {

template <class T>
T field_as(std::string_view field, std::size_t line) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": bad field '" +
                                       std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == s.npos ? s.npos : pos - start));
    if (pos == s.npos) return out;
    start = pos + 1;
  }
}

}  // namespace

std::vector<PairRecord> read_pair_csv(std::istream& in) {
  std::vector<PairRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line == kPairCsvHeader) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected 6 fields");
    }
    PairRecord rec;
    rec.stream_index = field_as<std::uint64_t>(fields[0], line_no);
    rec.raw_size = field_as<std::size_t>(fields[1], line_no);
    rec.reduced_size = field_as<std::size_t>(fields[2], line_no);
    rec.distance = field_as<std::uint64_t>(fields[3], line_no);
    if (rec.raw_size == 0 || rec.reduced_size > rec.raw_size) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": inconsistent sizes");
    }
    out.push_back(rec);
  }
  return out;
}

void write_bucket_csv(std::ostream& out, std::span<const BucketRow> rows) {
  out << kBucketCsvHeader << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_fixed(*v) : std::string(); };
  for (const auto& row : rows) {
    out << row.range.lo << ',' << row.range.hi << ',' << row.count << ','
        << opt(row.avg_reduced_fraction) << ',' << opt(row.avg_ratio) << ','
        << opt(row.sd_ratio) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << kHistogramCsvHeader << '\n';
  for (const auto& [lo, count] : h.bins) out << lo << ',' << count << '\n';
  out << "# n=" << h.target_reduced_size << " mean=" << format_fixed(h.stats.mean, 4)
      << " sd=" << format_fixed(h.stats.sd, 4) << " count=" << h.stats.count << '\n';
}

void write_histogram_svg(std::ostream& out, const Histogram& h) {
  constexpr double kWidth = 760;
  constexpr double kHeight = 420;
  constexpr double kMargin = 50;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">reduced size " << h.target_reduced_size
      << ": n=" << h.stats.count << " mean=" << format_fixed(h.stats.mean, 2)
      << " sd=" << format_fixed(h.stats.sd, 2) << "</text>\n";
  if (h.bins.empty()) {
    out << "</svg>\n";
    return;
  }

  const double x_lo = static_cast<double>(h.bins.front().first);
  const double x_hi = static_cast<double>(h.bins.back().first + h.bin_width);
  std::uint64_t max_count = 0;
  for (const auto& b : h.bins) max_count = std::max(max_count, b.second);
  // Normal density scaled to expected counts per bin.
  const double total = static_cast<double>(h.stats.count);
  const double sd = h.stats.sd > 0 ? h.stats.sd : 1.0;
  auto expected = [&](double x) {
    const double z = (x - h.stats.mean) / sd;
    return total * static_cast<double>(h.bin_width) * std::exp(-0.5 * z * z) /
           (sd * std::sqrt(2 * std::numbers::pi));
  };
  const double y_max = std::max(static_cast<double>(max_count), expected(h.stats.mean)) * 1.05;
  auto px = [&](double x) { return kMargin + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kMargin + plot_h - y / y_max * plot_h; };

  for (const auto& [lo, count] : h.bins) {
    const double x0 = px(static_cast<double>(lo));
    const double x1 = px(static_cast<double>(lo + h.bin_width));
    out << "<rect x=\"" << format_fixed(x0, 2) << "\" y=\""
        << format_fixed(py(static_cast<double>(count)), 2) << "\" width=\""
        << format_fixed(std::max(x1 - x0 - 0.5, 0.5), 2) << "\" height=\""
        << format_fixed(plot_h - (py(static_cast<double>(count)) - kMargin), 2)
        << "\" fill=\"#7a9cc6\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
  constexpr int kSteps = 200;
  for (int i = 0; i <= kSteps; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / kSteps;
    // Bars span [lo, lo + width); centre the curve on the bar midpoints.
    out << format_fixed(px(x), 2) << ',' << format_fixed(py(expected(x - 0.5 * h.bin_width)), 2)
        << (i < kSteps ? " " : "");
  }
  out << "\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin + plot_h << "\" x2=\""
      << kMargin + plot_w << "\" y2=\"" << kMargin + plot_h << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 16
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << h.bins.front().first << "</text>\n";
  out << "<text x=\"" << kMargin + plot_w << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
      << h.bins.back().first + h.bin_width << "</text>\n";
  out << "</svg>\n";
}

}  // namespace rrd
