#include <algorithm>
#include <cmath>
#include <sstream>

#include "cli.hpp"
#include "dimerlab/analysis.hpp"

namespace dimerlab::cli {

namespace {

struct Panel {
  std::string title, xlabel, ylabel;
  std::vector<double> x, y;
  std::vector<std::string> labels;  // optional per-point annotation
  bool line = false;                // least-squares line through the points
};

std::string num(double v, int prec = 4) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(prec);
  os << v;
  return os.str();
}

std::string render(const Config& c, const Panel& p) {
  const double W = 640, H = 440, left = 70, right = 20, top = 40, bottom = 50;
  if (p.x.empty()) throw Error("InvalidInput", "nothing to plot");
  double x0 = *std::min_element(p.x.begin(), p.x.end()), x1 = *std::max_element(p.x.begin(), p.x.end());
  double y0 = *std::min_element(p.y.begin(), p.y.end()), y1 = *std::max_element(p.y.begin(), p.y.end());
  if (x1 == x0) x0 -= 1, x1 += 1;
  if (y1 == y0) y0 -= 1, y1 += 1;
  const double px = 0.05 * (x1 - x0), py = 0.08 * (y1 - y0);
  x0 -= px, x1 += px, y0 -= py, y1 += py;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto sy = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- dimerlab " << kVersion << " command=" << c.command << " config_hash=" << hex64(c.hash())
     << " seed=" << c.seed() << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << p.title << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
     << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\">" << num(xv, 3)
       << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << num(yv, 3)
       << "</text>\n";
  }
  os << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << p.xlabel
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << (top + H - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (top + H - bottom) / 2 << ")\">" << p.ylabel << "</text>\n";
  if (p.line && p.x.size() >= 3) {
    const FitResult f = linear_fit(p.x, p.y, {});
    os << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(f.intercept + f.slope * x0) << "\" x2=\"" << sx(x1)
       << "\" y2=\"" << sy(f.intercept + f.slope * x1) << "\" stroke=\"#c03030\"/>\n";
    os << "<text x=\"" << left + 8 << "\" y=\"" << top + 16 << "\" fill=\"#c03030\">slope " << num(f.slope, 5)
       << " (R^2 " << num(f.r2, 5) << ")</text>\n";
  }
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    os << "<circle cx=\"" << sx(p.x[i]) << "\" cy=\"" << sy(p.y[i]) << "\" r=\"3\" fill=\"#2050a0\"/>\n";
    if (i < p.labels.size() && !p.labels[i].empty())
      os << "<text x=\"" << sx(p.x[i]) + 5 << "\" y=\"" << sy(p.y[i]) - 5 << "\" font-size=\"10\">" << p.labels[i]
         << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

int need(const CsvData& d, const std::vector<std::string>& names) {
  const int i = d.column(names);
  if (i < 0) throw Error("InvalidInput", "missing column " + names.front());
  return i;
}

}  // namespace

std::string plot_svg(const Config& c, const CsvData& d, const std::string& kind) {
  Panel p;
  if (kind == "variance") {
    const int ir = need(d, {"r"}), iv = need(d, {"value", "variance", "v"});
    for (const auto& row : d.rows)
      if (row[ir] > 0 && std::isfinite(row[iv])) {
        p.x.push_back(std::log(row[ir]));
        p.y.push_back(row[iv]);
      }
    p.title = "height cumulant against ln r";
    p.xlabel = "ln r";
    p.ylabel = "value";
    p.line = true;
  } else if (kind == "decay") {
    // Distance from an r column, else |(dx, dy)|.
    const int ir = d.column({"r"});
    const int ix = ir >= 0 ? -1 : need(d, {"dx"}), iy = ir >= 0 ? -1 : need(d, {"dy"});
    const int iv = need(d, {"value", "exact", "mean", "residual", "v"});
    for (const auto& row : d.rows) {
      const double r = ir >= 0 ? row[ir] : std::hypot(row[ix], row[iy]);
      if (r > 0 && std::isfinite(row[iv]) && row[iv] != 0.0) {
        p.x.push_back(std::log10(r));
        p.y.push_back(std::log10(std::abs(row[iv])));
      }
    }
    p.title = "correlation decay";
    p.xlabel = "log10 r";
    p.ylabel = "log10 |value|";
    p.line = true;
  } else if (kind == "scales") {
    const int ih = need(d, {"h"}), is = need(d, {"sup_norm"}), ic = need(d, {"decay_c"}), i2 = need(d, {"r2"});
    for (const auto& row : d.rows) {
      p.x.push_back(row[ih]);
      p.y.push_back(std::log2(row[is]));
      p.labels.push_back("c=" + num(row[ic], 3) + " R2=" + num(row[i2], 3));
    }
    p.title = "single-scale amplitudes and decay fits";
    p.xlabel = "h";
    p.ylabel = "log2 sup |G^(h)|";
    p.line = true;
  } else {
    throw Error("InvalidConfig", "plot kind must be variance, decay or scales");
  }
  return render(c, p);
}

}  // namespace dimerlab::cli
