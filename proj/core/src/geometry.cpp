#include "seqnms/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seqnms {

BBox::BBox(double x1, double y1, double x2, double y2)
    : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!std::isfinite(x1) || !std::isfinite(y1) || !std::isfinite(x2) ||
      !std::isfinite(y2)) {
    throw std::invalid_argument("BBox: non-finite coordinate");
  }
  if (x1 > x2 || y1 > y2) {
    std::ostringstream msg;
    msg << "BBox: inverted corners " << *this;
    throw std::invalid_argument(msg.str());
  }
}

BBox BBox::translated(double dx, double dy) const {
  return BBox(x1_ + dx, y1_ + dy, x2_ + dx, y2_ + dy);
}

double area(const BBox& b) { return b.width() * b.height(); }

double iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double ih = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = area(a) + area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::ostream& operator<<(std::ostream& os, const BBox& b) {
  return os << '(' << b.x1() << ", " << b.y1() << ", " << b.x2() << ", "
            << b.y2() << ')';
}

}  // namespace seqnms
