#pragma once

#include <ostream>

namespace seqnms {

/// Axis-aligned rectangle with real-valued corners, in pixels.
///
/// Corners are continuous coordinates: area is (x2 - x1) * (y2 - y1) with no
/// +1 pixel correction. Zero-area boxes are valid. The constructor rejects
/// non-finite coordinates and inverted corners with std::invalid_argument,
/// so every BBox in existence satisfies x1 <= x2 and y1 <= y2.
class BBox {
 public:
  constexpr BBox() = default;
  BBox(double x1, double y1, double x2, double y2);

  constexpr double x1() const { return x1_; }
  constexpr double y1() const { return y1_; }
  constexpr double x2() const { return x2_; }
  constexpr double y2() const { return y2_; }
  constexpr double width() const { return x2_ - x1_; }
  constexpr double height() const { return y2_ - y1_; }

  BBox translated(double dx, double dy) const;

  friend constexpr bool operator==(const BBox&, const BBox&) = default;

 private:
  double x1_ = 0.0;
  double y1_ = 0.0;
  double x2_ = 0.0;
  double y2_ = 0.0;
};

double area(const BBox& b);

/// Intersection over union. Two boxes whose union has zero area have IoU 0.
double iou(const BBox& a, const BBox& b);

std::ostream& operator<<(std::ostream& os, const BBox& b);

}  // namespace seqnms
