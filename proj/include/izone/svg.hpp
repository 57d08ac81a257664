#pragma once

#include <string>
#include <vector>

namespace izone::svg {

// Tiny deterministic SVG scatter/line canvas; data coordinates are mapped
// into a fixed viewport with a small margin.
class Canvas {
 public:
  Canvas(double width, double height, double x_min, double x_max, double y_min,
         double y_max, std::string title);

  void circle(double x, double y, double radius_px, const std::string& fill);
  void cross(double x, double y, double half_px, const std::string& stroke);
  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& stroke);
  void label(double x, double y, const std::string& text);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  double width_, height_;
  double x_min_, x_max_, y_min_, y_max_;
  std::string body_;
};

// fixed palette cycled by zone index
const std::string& zone_color(int zone);

}  // namespace izone::svg
