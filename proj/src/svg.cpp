#include "izone/svg.hpp"

#include <array>
#include <cstdio>
#include <sstream>

namespace izone::svg {

namespace {

constexpr double kMargin = 48.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

Canvas::Canvas(double width, double height, double x_min, double x_max,
               double y_min, double y_max, std::string title)
    : width_(width), height_(height), x_min_(x_min), x_max_(x_max),
      y_min_(y_min), y_max_(y_max) {
  if (x_max_ <= x_min_) x_max_ = x_min_ + 1.0;
  if (y_max_ <= y_min_) y_max_ = y_min_ + 1.0;
  std::ostringstream os;
  os << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin / 2)
     << "\" width=\"" << fmt(width_ - 1.5 * kMargin) << "\" height=\""
     << fmt(height_ - 1.5 * kMargin)
     << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n"
     << "<text x=\"" << fmt(width_ / 2) << "\" y=\"" << fmt(kMargin / 2 - 8)
     << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">"
     << title << "</text>\n";
  body_ = os.str();
}

double Canvas::px(double x) const {
  return kMargin + (x - x_min_) / (x_max_ - x_min_) * (width_ - 1.5 * kMargin);
}

double Canvas::py(double y) const {
  return height_ - kMargin +
         (y_min_ - y) / (y_max_ - y_min_) * (height_ - 1.5 * kMargin);
}

void Canvas::circle(double x, double y, double radius_px,
                    const std::string& fill) {
  body_ += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) +
           "\" r=\"" + fmt(radius_px) + "\" fill=\"" + fill +
           "\" fill-opacity=\"0.75\"/>\n";
}

void Canvas::cross(double x, double y, double half_px,
                   const std::string& stroke) {
  const double cx = px(x), cy = py(y);
  std::ostringstream os;
  os << "<path d=\"M " << fmt(cx - half_px) << " " << fmt(cy - half_px) << " L "
     << fmt(cx + half_px) << " " << fmt(cy + half_px) << " M "
     << fmt(cx - half_px) << " " << fmt(cy + half_px) << " L "
     << fmt(cx + half_px) << " " << fmt(cy - half_px) << "\" stroke=\""
     << stroke << "\" stroke-width=\"2.5\" fill=\"none\"/>\n";
  body_ += os.str();
}

void Canvas::polyline(const std::vector<std::pair<double, double>>& points,
                      const std::string& stroke) {
  if (points.empty()) return;
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << stroke
     << "\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : points)
    os << fmt(px(x)) << "," << fmt(py(y)) << " ";
  os << "\"/>\n";
  body_ += os.str();
}

void Canvas::label(double x, double y, const std::string& text) {
  body_ += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(py(y)) +
           "\" font-size=\"9\" font-family=\"sans-serif\">" + text + "</text>\n";
}

std::string Canvas::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
     << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_)
     << " " << fmt(height_) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << body_ << "</svg>\n";
  return os.str();
}

const std::string& zone_color(int zone) {
  static const std::array<std::string, 10> palette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[size_t(zone) % palette.size()];
}

}  // namespace izone::svg
