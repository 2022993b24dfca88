#include "twoscvrp/render.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace twoscvrp {
namespace {

uint64_t Fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Hex(double r, double g, double b) {
  char buf[8];
  auto c = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c(r), c(g), c(b));
  return buf;
}

// HSL to hex with a lightness multiplier for shading faces.
std::string Shade(const std::string& id, double light) {
  uint64_t h = Fnv1a(id);
  double hue = static_cast<double>(h % 360);
  double sat = 0.55 + static_cast<double>((h >> 16) % 30) / 100.0;
  double lum = std::clamp((0.50 + static_cast<double>((h >> 32) % 15) / 100.0) * light, 0.0, 1.0);
  double c = (1 - std::fabs(2 * lum - 1)) * sat;
  double x = c * (1 - std::fabs(std::fmod(hue / 60.0, 2.0) - 1));
  double m = lum - c / 2;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue / 60)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  return Hex(r + m, g + m, b + m);
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Escape(const std::string& s) {
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

class Svg {
 public:
  void Polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill, double opacity = 1.0) {
    body_ << "  <polygon points=\"";
    for (size_t p = 0; p < pts.size(); ++p) {
      body_ << (p ? " " : "") << Num(pts[p].first) << ',' << Num(pts[p].second);
      Extend(pts[p].first, pts[p].second);
    }
    body_ << "\" fill=\"" << fill << "\" stroke=\"#333333\" stroke-width=\"1\"";
    if (opacity < 1.0) body_ << " fill-opacity=\"" << Num(opacity) << '"';
    body_ << "/>\n";
  }
  void Rect(double x, double y, double w, double h, const std::string& fill) {
    Polygon({{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}, fill);
  }
  void Text(double x, double y, const std::string& text, int size = 12) {
    body_ << "  <text x=\"" << Num(x) << "\" y=\"" << Num(y) << "\" font-family=\"sans-serif\" font-size=\"" << size
          << "\" text-anchor=\"middle\">" << Escape(text) << "</text>\n";
    Extend(x - size * 0.3 * text.size(), y - size);
    Extend(x + size * 0.3 * text.size(), y + 2);
  }
  std::string Finish(const std::string& title) const {
    const double pad = 16;
    double x0 = min_x_ - pad, y0 = min_y_ - pad - 20;
    double w = max_x_ - min_x_ + 2 * pad, h = max_y_ - min_y_ + 2 * pad + 20;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << Num(x0) << ' ' << Num(y0) << ' ' << Num(w) << ' '
       << Num(h) << "\" width=\"" << Num(w) << "\" height=\"" << Num(h) << "\">\n";
    os << "  <title>" << Escape(title) << "</title>\n";
    os << "  <text x=\"" << Num(x0 + w / 2) << "\" y=\"" << Num(y0 + 18)
       << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << Escape(title) << "</text>\n";
    os << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  void Extend(double x, double y) {
    min_x_ = std::min(min_x_, x);
    max_x_ = std::max(max_x_, x);
    min_y_ = std::min(min_y_, y);
    max_y_ = std::max(max_y_, y);
  }
  std::ostringstream body_;
  double min_x_ = 0, max_x_ = 0, min_y_ = 0, max_y_ = 0;
};

// Fixed 30 degree isometric axes: x runs down-right, y down-left, z up.
std::pair<double, double> Iso(double x, double y, double z, double s) {
  const double c = std::cos(M_PI / 6), h = std::sin(M_PI / 6);
  return {(x - y) * c * s, (x + y) * h * s - z * s};
}

void IsoBox(Svg& svg, const std::array<double, 3>& lo, const std::array<double, 3>& hi, const std::string& id,
            double s, double opacity) {
  auto P = [&](double x, double y, double z) { return Iso(x, y, z, s); };
  svg.Polygon({P(lo[0], lo[1], hi[2]), P(hi[0], lo[1], hi[2]), P(hi[0], hi[1], hi[2]), P(lo[0], hi[1], hi[2])},
              Shade(id, 1.25), opacity);
  svg.Polygon({P(hi[0], lo[1], lo[2]), P(hi[0], hi[1], lo[2]), P(hi[0], hi[1], hi[2]), P(hi[0], lo[1], hi[2])},
              Shade(id, 0.95), opacity);
  svg.Polygon({P(lo[0], hi[1], lo[2]), P(hi[0], hi[1], lo[2]), P(hi[0], hi[1], hi[2]), P(lo[0], hi[1], hi[2])},
              Shade(id, 0.75), opacity);
}

std::string RouteText(const Instance& in, const std::vector<int>& route) {
  std::string out;
  for (size_t p = 0; p < route.size(); ++p) {
    int d = route[p];
    out += (p ? " > " : "");
    out += d >= 0 && d < static_cast<int>(in.travel.destinations.size()) ? in.travel.destinations[d] : "?";
  }
  return out;
}

SvgFile PalletIso(const Instance& in, const Solution& sol, int j, const RenderOptions& opt) {
  Svg svg;
  const double s = opt.scale;
  const auto& dims = *in.pallets[j].dims;
  // Pallet base as a thin slab under the boxes.
  IsoBox(svg, {0, 0, -0.2}, {double(dims[0]), double(dims[1]), 0}, in.pallets[j].id + "#base", s, 0.35);
  std::vector<int> boxes;
  for (int i = 0; i < in.num_boxes(); ++i)
    if (sol.box_to_pallet[i] == j) boxes.push_back(i);
  const auto& pl = *sol.boxes_3d;
  // Painter's order: far and low first.
  std::stable_sort(boxes.begin(), boxes.end(), [&](int a, int b) {
    Rational ka = pl[a].lo[0] + pl[a].lo[1] + pl[a].lo[2], kb = pl[b].lo[0] + pl[b].lo[1] + pl[b].lo[2];
    return ka < kb;
  });
  for (int i : boxes) {
    std::array<double, 3> lo, hi;
    for (int a = 0; a < 3; ++a) {
      lo[a] = pl[i].lo[a].ToDouble();
      hi[a] = pl[i].hi[a].ToDouble();
    }
    IsoBox(svg, lo, hi, in.boxes[i].id, s, 1.0);
    auto c = Iso((lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, hi[2], s);
    svg.Text(c.first, c.second + 4, in.boxes[i].id + " " + in.travel.destinations[in.boxes[i].destination], 10);
  }
  return {"pallet_" + in.pallets[j].id + ".svg", svg.Finish("pallet " + in.pallets[j].id)};
}

SvgFile PalletBar(const Instance& in, const Solution& sol, int j, const RenderOptions& opt) {
  Svg svg;
  const double s = opt.scale, width = 3 * s;
  const double cap = static_cast<double>(in.pallets[j].capacity);
  svg.Rect(0, -cap * s, width, cap * s, "#f4f4f4");
  double level = 0;
  for (int i = 0; i < in.num_boxes(); ++i) {
    if (sol.box_to_pallet[i] != j) continue;
    double v = static_cast<double>(in.boxes[i].volume);
    svg.Rect(0, -(level + v) * s, width, v * s, Shade(in.boxes[i].id, 1.0));
    svg.Text(width / 2, -(level + v / 2) * s + 4,
             in.boxes[i].id + " " + in.travel.destinations[in.boxes[i].destination], 10);
    level += v;
  }
  svg.Text(width / 2, 16, "load " + Num(level) + " / " + Num(cap), 11);
  return {"pallet_" + in.pallets[j].id + ".svg", svg.Finish("pallet " + in.pallets[j].id)};
}

SvgFile TruckTop(const Instance& in, const Solution& sol, int k, const RenderOptions& opt) {
  Svg svg;
  const double s = opt.scale;
  std::vector<int> pallets;
  for (int j = 0; j < in.num_pallets(); ++j)
    if (sol.pallet_to_truck[j] == k) pallets.push_back(j);
  const bool placed = sol.pallets_2d && in.trucks[k].floor;
  double floor_x = 0, floor_y = 0;
  if (placed) {
    floor_x = static_cast<double>((*in.trucks[k].floor)[0]);
    floor_y = static_cast<double>((*in.trucks[k].floor)[1]);
    svg.Rect(0, 0, floor_x * s, floor_y * s, "#eeeeee");
    for (int j : pallets) {
      const auto& p = (*sol.pallets_2d)[j];
      double x0 = p.lo[0].ToDouble(), y0 = p.lo[1].ToDouble();
      double x1 = p.hi[0].ToDouble(), y1 = p.hi[1].ToDouble();
      svg.Rect(x0 * s, y0 * s, (x1 - x0) * s, (y1 - y0) * s, Shade(in.pallets[j].id, 1.0));
      svg.Text((x0 + x1) / 2 * s, (y0 + y1) / 2 * s + 4, in.pallets[j].id, 11);
    }
  } else {
    // Schematic strip: pallets in id order, width by capacity.
    double x = 0;
    for (int j : pallets) {
      double w = static_cast<double>(in.pallets[j].capacity);
      svg.Rect(x * s, 0, w * s, 2 * s, Shade(in.pallets[j].id, 1.0));
      svg.Text((x + w / 2) * s, s + 4, in.pallets[j].id, 11);
      x += w;
    }
    floor_x = std::max(x, 1.0);
    floor_y = 2;
  }
  svg.Text(floor_x * s / 2, floor_y * s + 20, RouteText(in, sol.routes[k]), 11);
  return {"truck_" + in.trucks[k].id + ".svg", svg.Finish("truck " + in.trucks[k].id)};
}

}  // namespace

std::string ColorFor(const std::string& id) { return Shade(id, 1.0); }

std::vector<SvgFile> RenderSolution(const Instance& in, const Solution& sol, const RenderOptions& opt) {
  if (static_cast<int>(sol.box_to_pallet.size()) != in.num_boxes() ||
      static_cast<int>(sol.pallet_to_truck.size()) != in.num_pallets() ||
      static_cast<int>(sol.routes.size()) != in.num_trucks()) {
    throw std::invalid_argument("render: solution does not match the instance");
  }
  std::vector<SvgFile> out;
  const bool iso = sol.boxes_3d && in.is_3d();
  for (int j = 0; j < in.num_pallets(); ++j) {
    if (sol.pallet_to_truck[j] < 0) continue;
    out.push_back(iso ? PalletIso(in, sol, j, opt) : PalletBar(in, sol, j, opt));
  }
  for (int k = 0; k < in.num_trucks(); ++k) {
    if (sol.routes[k].empty()) continue;
    out.push_back(TruckTop(in, sol, k, opt));
  }
  return out;
}

}  // namespace twoscvrp
