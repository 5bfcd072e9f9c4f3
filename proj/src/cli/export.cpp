#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "typel/cli.hpp"
#include "typel/linalg.hpp"

namespace typel::cli {

std::string format_double(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

ProjectedPoint project_point(const CVector& z, const std::optional<Eigen::MatrixXd>& projection) {
  const Eigen::Index d = z.size();
  const Complex last = z(d - 1);
  if (std::abs(last) <= 1e-12 * z.norm()) return {std::nan(""), std::nan(""), std::nan(""), false};
  const CVector y = z / last;
  if (!projection) return {y(0).real(), y(1).real(), y(2).real(), true};
  Eigen::VectorXd real(2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    real(2 * i) = y(i).real();
    real(2 * i + 1) = y(i).imag();
  }
  const Eigen::Vector3d p = *projection * real;
  return {p(0), p(1), p(2), true};
}

std::string cloud_to_csv(const LimitCloud& cloud, const std::optional<Eigen::MatrixXd>& projection) {
  std::ostringstream out;
  const Eigen::Index d = cloud.seed_plane.basis().rows();
  out << "word_length";
  for (Eigen::Index i = 0; i < d; ++i) out << ",z" << i << "_re,z" << i << "_im";
  out << ",proj_x,proj_y,proj_z\n";
  for (const auto& p : cloud.points) {
    const CVector z = normalize_projective(p.point);
    out << p.word_length;
    for (Eigen::Index i = 0; i < d; ++i)
      out << ',' << format_double(z(i).real()) << ',' << format_double(z(i).imag());
    const ProjectedPoint q = project_point(z, projection);
    out << ',' << format_double(q.x) << ',' << format_double(q.y) << ',' << format_double(q.z) << '\n';
  }
  return out.str();
}

std::string cloud_to_ply(const LimitCloud& cloud, const std::optional<Eigen::MatrixXd>& projection) {
  std::vector<ProjectedPoint> pts;
  pts.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    const ProjectedPoint q = project_point(normalize_projective(p.point), projection);
    if (q.finite && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z)) pts.push_back(q);
  }
  std::ostringstream out;
  out << "ply\nformat ascii 1.0\ncomment typel limit cloud\nelement vertex " << pts.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (const auto& q : pts)
    out << format_double(static_cast<float>(q.x), 9) << ' ' << format_double(static_cast<float>(q.y), 9) << ' '
        << format_double(static_cast<float>(q.z), 9) << '\n';
  return out.str();
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double field_value(std::string_view s, std::size_t line) {
  if (s == "nan") return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("cloud line " + std::to_string(line) + ": malformed number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<CloudRow> parse_cloud_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    std::string_view line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = pos + 1;
  }
  if (lines.empty()) throw ConfigError("cloud line 1: missing header");
  const auto header = split_fields(lines[0]);
  const std::size_t width = header.size();
  if (width < 4 || header[0] != "word_length" || header[width - 3] != "proj_x" || header[width - 2] != "proj_y" ||
      header[width - 1] != "proj_z")
    throw ConfigError("cloud line 1: expected header word_length,...,proj_x,proj_y,proj_z");
  if ((width - 4) % 2 != 0) throw ConfigError("cloud line 1: coordinate columns must come in re/im pairs");

  std::vector<CloudRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_fields(lines[i]);
    if (f.size() != width)
      throw ConfigError("cloud line " + std::to_string(i + 1) + ": expected " + std::to_string(width) +
                        " fields, found " + std::to_string(f.size()));
    int len = 0;
    const auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), len);
    if (f[0].empty() || ec != std::errc() || ptr != f[0].data() + f[0].size() || len < 0)
      throw ConfigError("cloud line " + std::to_string(i + 1) + ": malformed word length '" + std::string(f[0]) + "'");
    for (std::size_t j = 1; j < width; ++j) field_value(f[j], i + 1);
    CloudRow row;
    row.word_length = len;
    row.x = field_value(f[width - 3], i + 1);
    row.y = field_value(f[width - 2], i + 1);
    row.finite = std::isfinite(row.x) && std::isfinite(row.y);
    rows.push_back(row);
  }
  return rows;
}

std::string cloud_svg(const std::vector<CloudRow>& rows) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  constexpr double width = 640, height = 480, margin = 40, legend_w = 120;
  const double plot_w = width - 2 * margin - legend_w, plot_h = height - 2 * margin;

  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool any = false;
  std::map<int, std::size_t> counts;
  for (const auto& r : rows) {
    ++counts[r.word_length];
    if (!r.finite) continue;
    if (!any) {
      xmin = xmax = r.x;
      ymin = ymax = r.y;
      any = true;
    }
    xmin = std::min(xmin, r.x);
    xmax = std::max(xmax, r.x);
    ymin = std::min(ymin, r.y);
    ymax = std::max(ymax, r.y);
  }
  if (!any) xmin = ymin = -1, xmax = ymax = 1;
  if (xmax - xmin <= 0) xmin -= 1, xmax += 1;
  if (ymax - ymin <= 0) ymin -= 1, ymax += 1;

  std::map<int, const char*> color;
  std::size_t c = 0;
  for (const auto& [len, count] : counts) color[len] = palette[c++ % 10];

  const auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * plot_w; };
  const auto sy = [&](double y) { return margin + (ymax - y) / (ymax - ymin) * plot_h; };
  const auto f = [](double v) { return format_double(v, 6); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << margin << "\" y=\"" << height - 12 << "\" font-size=\"11\" font-family=\"sans-serif\">x: "
      << f(xmin) << " .. " << f(xmax) << "   y: " << f(ymin) << " .. " << f(ymax) << "</text>\n";
  out << "<g id=\"points\">\n";
  for (const auto& r : rows) {
    if (!r.finite) continue;
    out << "<circle cx=\"" << f(sx(r.x)) << "\" cy=\"" << f(sy(r.y)) << "\" r=\"1.5\" fill=\"" << color[r.word_length]
        << "\"/>\n";
  }
  out << "</g>\n<g id=\"legend\" font-size=\"12\" font-family=\"sans-serif\">\n";
  const double lx = width - margin - legend_w + 16;
  out << "<text x=\"" << lx << "\" y=\"" << margin + 4 << "\">word length</text>\n";
  if (counts.empty()) out << "<text x=\"" << lx << "\" y=\"" << margin + 22 << "\">(no points)</text>\n";
  double ly = margin + 22;
  for (const auto& [len, count] : counts) {
    out << "<rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\"" << color[len]
        << "\"/>\n<text x=\"" << lx + 16 << "\" y=\"" << ly << "\">" << len << " (" << count << ")</text>\n";
    ly += 18;
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace typel::cli
