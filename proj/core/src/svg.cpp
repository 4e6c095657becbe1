#include "phigeo/svg.hpp"

#include <cmath>

namespace phigeo {

namespace {

// fixed two-decimal pixel coordinates keep files small and byte-stable
std::string px_str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgCanvas::SvgCanvas(int width_px, int height_px, double x_min, double x_max,
                     double y_min, double y_max)
    : w_(width_px), h_(height_px), x0_(x_min), x1_(x_max), y0_(y_min),
      y1_(y_max) {
  if (width_px <= 0 || height_px <= 0 || !(x_max > x_min) || !(y_max > y_min))
    throw Error(Errc::parameter, "degenerate canvas");
}

double SvgCanvas::px(double x) const {
  return (x - x0_) / (x1_ - x0_) * w_;
}

double SvgCanvas::py(double y) const {
  return (y1_ - y) / (y1_ - y0_) * h_;
}

void SvgCanvas::polyline(const std::vector<Complex>& pts,
                         const std::string& stroke, double stroke_px) {
  if (pts.size() < 2) return;
  body_ << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"" << px_str(stroke_px) << "\" points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) body_ << ' ';
    body_ << px_str(px(pts[i].real())) << ',' << px_str(py(pts[i].imag()));
  }
  body_ << "\"/>\n";
}

void SvgCanvas::line(Complex a, Complex b, const std::string& stroke,
                     double stroke_px) {
  body_ << "<line x1=\"" << px_str(px(a.real())) << "\" y1=\""
        << px_str(py(a.imag())) << "\" x2=\"" << px_str(px(b.real()))
        << "\" y2=\"" << px_str(py(b.imag())) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"" << px_str(stroke_px) << "\"/>\n";
}

void SvgCanvas::circle(Complex center, double world_radius,
                       const std::string& stroke, const std::string& fill,
                       double stroke_px) {
  double rx = world_radius / (x1_ - x0_) * w_;
  body_ << "<circle cx=\"" << px_str(px(center.real())) << "\" cy=\""
        << px_str(py(center.imag())) << "\" r=\"" << px_str(rx)
        << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << px_str(stroke_px) << "\" fill=\"" << fill << "\"/>\n";
}

void SvgCanvas::dot(Complex center, double px_radius, const std::string& fill) {
  body_ << "<circle cx=\"" << px_str(px(center.real())) << "\" cy=\""
        << px_str(py(center.imag())) << "\" r=\"" << px_str(px_radius)
        << "\" fill=\"" << fill << "\"/>\n";
}

void SvgCanvas::text(Complex at, const std::string& label, int font_px,
                     const std::string& fill) {
  body_ << "<text x=\"" << px_str(px(at.real())) << "\" y=\""
        << px_str(py(at.imag())) << "\" font-size=\"" << font_px
        << "\" font-family=\"monospace\" fill=\"" << fill << "\">"
        << escape_text(label) << "</text>\n";
}

std::string SvgCanvas::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_
      << "\" height=\"" << h_ << "\" viewBox=\"0 0 " << w_ << ' ' << h_
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

}  // namespace phigeo
