#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "phigeo/types.hpp"

namespace phigeo {

// Minimal deterministic SVG canvas for foliation and trace plots: world
// coordinates are complex numbers, y points up, output bytes depend only on
// the drawing calls.
class SvgCanvas {
 public:
  SvgCanvas(int width_px, int height_px, double x_min, double x_max,
            double y_min, double y_max);

  void polyline(const std::vector<Complex>& pts, const std::string& stroke,
                double stroke_px = 1.0);
  void line(Complex a, Complex b, const std::string& stroke,
            double stroke_px = 1.0);
  void circle(Complex center, double world_radius, const std::string& stroke,
              const std::string& fill = "none", double stroke_px = 1.0);
  void dot(Complex center, double px_radius, const std::string& fill);
  void text(Complex at, const std::string& label, int font_px = 12,
            const std::string& fill = "#333333");

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  int w_, h_;
  double x0_, x1_, y0_, y1_;
  std::ostringstream body_;
};

}  // namespace phigeo
