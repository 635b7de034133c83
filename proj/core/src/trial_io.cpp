#include "doseeffect/trial_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "doseeffect/error.hpp"
#include "doseeffect/skew_normal.hpp"

namespace doseeffect {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& reason) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + reason);
}

double field_number(std::string_view field, std::size_t line, std::string_view name) {
  double value = 0.0;
  if (!parse_number(field, value)) {
    parse_error(line, "non-numeric " + std::string(name) + " '" + std::string(field) + "'");
  }
  return value;
}

// Reads the header; returns false when the stream has no header at all.
bool read_header(std::istream& input, std::string& line) {
  while (std::getline(input, line)) {
    if (!trim(line).empty()) return true;
  }
  return false;
}

}  // namespace

std::string format_number(double value, int significant_digits) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                    std::chars_format::general, significant_digits);
  return std::string(buf.data(), result.ptr);
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), out);
  return result.ec == std::errc() && result.ptr == text.data() + text.size() &&
         std::isfinite(out);
}

std::vector<DoseCohort> parse_csv(std::istream& input) {
  std::string line;
  if (!read_header(input, line)) {
    throw Error(ErrorCode::EmptyInput, "input is empty");
  }
  const auto header = split_fields(line);
  if (header.size() != 2 || header[0] != "dose" || header[1] != "value") {
    parse_error(1, "expected header 'dose,value'");
  }

  std::map<double, std::vector<double>> grouped;
  std::size_t line_no = 1;
  while (std::getline(input, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2) parse_error(line_no, "expected 2 fields");
    const double dose = field_number(fields[0], line_no, "dose");
    const double value = field_number(fields[1], line_no, "value");
    if (dose < 0.0) {
      throw Error(ErrorCode::NegativeDose,
                  "line " + std::to_string(line_no) + ": dose " + std::string(fields[0]));
    }
    grouped[dose].push_back(value);
  }
  if (grouped.empty()) {
    throw Error(ErrorCode::EmptyInput, "no observations after the header");
  }

  std::vector<DoseCohort> cohorts;
  cohorts.reserve(grouped.size());
  for (auto& [dose, values] : grouped) cohorts.push_back({dose, std::move(values)});
  return cohorts;
}

std::vector<SummaryRow> parse_summary_csv(std::istream& input) {
  std::string line;
  if (!read_header(input, line)) {
    throw Error(ErrorCode::EmptyInput, "input is empty");
  }
  const auto header = split_fields(line);
  const bool has_n = header.size() == 5 && header[4] == "n";
  if ((header.size() != 4 && !has_n) || header[0] != "dose" || header[1] != "mean" ||
      header[2] != "sd" || header[3] != "skew") {
    parse_error(1, "expected header 'dose,mean,sd,skew[,n]'");
  }

  std::vector<SummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(input, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      parse_error(line_no, "expected " + std::to_string(header.size()) + " fields");
    }
    SummaryRow row{field_number(fields[0], line_no, "dose"),
                   field_number(fields[1], line_no, "mean"),
                   field_number(fields[2], line_no, "sd"),
                   field_number(fields[3], line_no, "skew"), 0};
    if (row.dose < 0.0) {
      throw Error(ErrorCode::NegativeDose, "line " + std::to_string(line_no));
    }
    if (!(row.sd_hat > 0.0)) parse_error(line_no, "sd must be positive");
    if (has_n) {
      const double n = field_number(fields[4], line_no, "n");
      if (n < 0.0 || n != std::floor(n)) parse_error(line_no, "n must be a count");
      row.n = static_cast<std::size_t>(n);
    }
    rows.push_back(row);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyInput, "no summary rows after the header");
  }
  std::sort(rows.begin(), rows.end(),
            [](const SummaryRow& a, const SummaryRow& b) { return a.dose < b.dose; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].dose == rows[i - 1].dose) {
      throw Error(ErrorCode::ParseError,
                  "duplicate summary dose " + format_number(rows[i].dose, 17));
    }
  }
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const DoseCohort> cohorts) {
  std::vector<SummaryRow> rows;
  rows.reserve(cohorts.size());
  for (const auto& cohort : cohorts) {
    MomentTriple m;
    try {
      m = estimate_moments(cohort.observations);
    } catch (const Error& e) {
      throw Error(ErrorCode::DegenerateCohort,
                  "dose " + format_number(cohort.dose, 17) + ": " + e.what());
    }
    rows.push_back({cohort.dose, m.mu, m.sigma, m.gamma, cohort.observations.size()});
  }
  return rows;
}

void emit_summary(std::span<const SummaryRow> rows, std::ostream& out) {
  out << "dose,mean,sd,skew,n\n";
  for (const auto& row : rows) {
    out << format_number(row.dose, 6) << ',' << format_number(row.mean_hat, 6) << ','
        << format_number(row.sd_hat, 6) << ',' << format_number(row.skew_hat, 6) << ','
        << row.n << '\n';
  }
}

void emit_observations(std::span<const DoseCohort> cohorts, std::ostream& out) {
  out << "dose,value\n";
  for (const auto& cohort : cohorts) {
    const std::string dose = format_number(cohort.dose, 17);
    for (double v : cohort.observations) out << dose << ',' << format_number(v, 17) << '\n';
  }
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t steps) {
  if (steps == 0) return {};
  if (steps == 1) return {0.5 * (lo + hi)};
  std::vector<double> grid(steps);
  const double denom = static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / denom;
  }
  return grid;
}

void emit_curve_points(const Curve& curve, double lo, double hi, std::size_t steps,
                       std::ostream& out) {
  out << "x,y\n";
  for (double x : uniform_grid(lo, hi, steps)) {
    out << format_number(x, 10) << ',' << format_number(curve(x), 10) << '\n';
  }
}

void emit_curve_svg(const Curve& curve, double lo, double hi, std::size_t steps,
                    std::string_view title, std::ostream& out) {
  constexpr double width = 800.0;
  constexpr double height = 500.0;
  constexpr double left = 70.0;
  constexpr double right = 30.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;
  constexpr int ticks = 5;

  const auto xs = uniform_grid(lo, hi, std::max<std::size_t>(steps, 2));
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (double x : xs) ys.push_back(curve(x));
  auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
  double ymin = *ymin_it;
  double ymax = *ymax_it;
  if (ymax == ymin) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double xspan = hi > lo ? hi - lo : 1.0;
  auto px = [&](double x) { return left + (x - lo) / xspan * (width - left - right); };
  auto py = [&](double y) {
    return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom);
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
         "height=\"500\" viewBox=\"0 0 800 500\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n";

  // Axes.
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\""
      << width - right << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= ticks; ++i) {
    const double xv = lo + (hi - lo) * i / ticks;
    const double yv = ymin + (ymax - ymin) * i / ticks;
    out << "<line x1=\"" << format_number(px(xv), 6) << "\" y1=\"" << height - bottom
        << "\" x2=\"" << format_number(px(xv), 6) << "\" y2=\"" << height - bottom + 5
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << format_number(px(xv), 6) << "\" y=\"" << height - bottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << format_number(xv, 4) << "</text>\n"
        << "<line x1=\"" << left - 5 << "\" y1=\"" << format_number(py(yv), 6)
        << "\" x2=\"" << left << "\" y2=\"" << format_number(py(yv), 6)
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << format_number(py(yv) + 4, 6)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << format_number(yv, 4) << "</text>\n";
  }

  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != 0) out << ' ';
    out << format_number(px(xs[i]), 7) << ',' << format_number(py(ys[i]), 7);
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace doseeffect
