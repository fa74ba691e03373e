#include "lpflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lpflow/errors.hpp"

namespace lpflow {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json number_list(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

}  // namespace

nlohmann::json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw ArgumentError("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ArgumentError("no column named " + name);
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

void Table::write_csv(const std::filesystem::path& path) const {
  auto os = open_out(path);
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
    os << '\n';
  }
}

void Plot::write_svg(const std::filesystem::path& path) const {
  const double W = 640, H = 400, L = 70, R = 160, T = 40, B = 50;
  auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& [name, ys] : series)
    for (std::size_t i = 0; i < ys.size() && i < x.size(); ++i) {
      if (!std::isfinite(ys[i]) || (log_y && ys[i] <= 0)) continue;
      const double yy = ty(ys[i]);
      if (first) {
        x0 = x1 = x[i];
        y0 = y1 = yy;
        first = false;
      }
      x0 = std::min(x0, x[i]);
      x1 = std::max(x1, x[i]);
      y0 = std::min(y0, yy);
      y1 = std::max(y1, yy);
    }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\" text-anchor=\"middle\">" << y_label << (log_y ? " (log10)" : "") << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4, yv = y0 + (y1 - y0) * t / 4;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"10\">"
       << fmt(std::round(xv * 1000) / 1000).substr(0, 8) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << H - B - (yv - y0) / (y1 - y0) * (H - T - B) + 3
       << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(std::round(yv * 1000) / 1000).substr(0, 8)
       << "</text>\n";
  }
  std::size_t c = 0;
  for (const auto& [name, ys] : series) {
    const char* color = colors[c % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ys.size() && i < x.size(); ++i)
      if (std::isfinite(ys[i]) && !(log_y && ys[i] <= 0)) os << px(x[i]) << ',' << py(ys[i]) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (c + 1) << "\" font-size=\"11\" fill=\"" << color
       << "\">" << name << "</text>\n";
    ++c;
  }
  os << "</svg>\n";
  auto out = open_out(path);
  out << os.str();
}

double ExperimentReport::max() const {
  double m = 0.0;
  for (double r : ratios) m = std::max(m, r);
  return m;
}

double ExperimentReport::min() const {
  if (ratios.empty()) return 0.0;
  return *std::min_element(ratios.begin(), ratios.end());
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["estimate_id"] = estimate_id;
  j["s"] = json_number(s);
  j["p"] = json_number(p);
  j["q"] = json_number(q);
  j["d"] = d;
  j["n"] = n;
  j["seeds"] = seeds;
  j["ratios"] = number_list(ratios);
  j["max"] = json_number(max());
  j["calibration_max"] = calibration_max ? json_number(*calibration_max) : nlohmann::json(nullptr);
  nlohmann::json tabs = nlohmann::json::object();
  for (const auto& [name, t] : tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) rows.push_back(number_list(r));
    tabs[name] = {{"columns", t.columns}, {"rows", rows}};
  }
  j["tables"] = tabs;
  j["notes"] = notes;
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

nlohmann::json to_json(const RatioReport& r) {
  nlohmann::json j;
  j["estimate_id"] = r.estimate_id;
  std::vector<std::string> specs;
  for (const auto& s : r.specs) specs.push_back(s.describe());
  j["spec"] = specs;
  j["n_samples"] = r.ratios.size();
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["ratios"] = number_list(r.ratios);
  j["max"] = json_number(r.max());
  j["median"] = json_number(r.median());
  return j;
}

void write_report(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto os = open_out(dir / "report.json");
  os << r.to_json().dump(2) << '\n';
  for (const auto& [name, t] : r.tables) t.write_csv(dir / "tables" / (name + ".csv"));
  for (const auto& [name, p] : r.plots) p.write_svg(dir / "plots" / (name + ".svg"));
}

void write_report(const RatioReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto os = open_out(dir / "report.json");
  os << to_json(r).dump(2) << '\n';
  Table t{{"sample", "ratio"}, {}};
  for (std::size_t i = 0; i < r.ratios.size(); ++i) t.add_row({static_cast<double>(i), r.ratios[i]});
  t.write_csv(dir / "tables" / "ratios.csv");
}

}  // namespace lpflow
