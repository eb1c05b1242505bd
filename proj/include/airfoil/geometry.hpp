#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "airfoil/errors.hpp"

namespace airfoil::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

/// Bernstein basis polynomial B_{n,i}(t) = C(n,i) t^i (1-t)^(n-i).
/// Throws ArgumentError for i outside [0, n] or t outside [0, 1].
double bernstein(int n, int i, double t);

/// Quartic Bezier curve over five control points. Control point
/// x-coordinates must be non-decreasing (the curve is a single-valued
/// surface segment) and all coordinates finite.
class BezierCurve {
 public:
  static constexpr int kDegree = 4;
  static constexpr int kPoints = 5;

  explicit BezierCurve(const std::array<Vec2, kPoints>& control_points);

  const std::array<Vec2, kPoints>& control_points() const { return pts_; }
  Vec2 control_point(int i) const { return pts_.at(static_cast<size_t>(i)); }

  /// C(t) = sum_i B_{4,i}(t) P_i. Interpolates P0 at t=0 and P4 at t=1
  /// exactly; lies in the control-point convex hull.
  Vec2 point(double t) const;

  /// Hodograph C'(t) = 4 sum_i B_{3,i}(t) (P_{i+1} - P_i).
  Vec2 derivative(double t) const;

  /// Solve x(t) = x for t in [0,1] by bisection. x(t) is monotone
  /// non-decreasing because the control x-coordinates are.
  double parameter_at_x(double x) const;

 private:
  std::array<Vec2, kPoints> pts_;
};

/// Index of one control point inside a ControlPolygon.
struct PointRef {
  int curve = 0;  // 0 upper-front, 1 upper-rear, 2 lower-front, 3 lower-rear
  int point = 0;  // 0..4 along the curve
  bool operator==(const PointRef&) const = default;
};

enum CurveIndex : int {
  kUpperFront = 0,  // leading edge -> crest
  kUpperRear = 1,   // crest -> trailing edge
  kLowerFront = 2,  // leading edge -> trough
  kLowerRear = 3,   // trough -> trailing edge
};

struct PolygonConfig {
  double x_thickness = 0.3;  // chordwise station of maximum thickness
  double thickness = 0.12;   // maximum thickness, chord fraction
  bool symmetric = true;     // lower surface mirrors the upper
  bool c1_clamping = true;   // clamp joint neighbours to +-thickness/2
  double y_box = 0.25;       // saturation bound for every point's |y|
};

/// Four quartic Bezier curves plus the mutability mask, clamp table and
/// per-point displacement box. This is the optimizer's genotype. Instances
/// are immutable; displacement returns a new polygon.
class ControlPolygon {
 public:
  ControlPolygon(std::array<BezierCurve, 4> curves,
                 std::array<std::array<bool, 5>, 4> mutable_mask,
                 std::vector<std::pair<PointRef, double>> clamps,
                 bool symmetric, double y_box);

  const BezierCurve& curve(int i) const {
    return curves_.at(static_cast<size_t>(i));
  }
  Vec2 point(PointRef r) const;
  bool is_mutable(PointRef r) const;
  bool symmetric_mode() const { return symmetric_; }
  double y_box() const { return y_box_; }
  const std::vector<std::pair<PointRef, double>>& clamps() const {
    return clamps_;
  }

  /// Mutable points in visitation order: curve by curve, then point index.
  std::vector<PointRef> mutable_points() const;

  /// Returns a polygon with the referenced point's y moved by dy,
  /// saturated to [-y_box, y_box]. In symmetric mode the mirrored lower
  /// point follows with the exact negated y. Throws ConstraintError if the
  /// point is not mutable.
  ControlPolygon with_displacement(PointRef r, double dy) const;

  /// Replaces control-point y values wholesale (used by the fitter).
  /// Clamped and endpoint y values in `ys` must match the stored ones.
  ControlPolygon with_y_values(
      const std::array<std::array<double, 5>, 4>& ys) const;

  bool operator==(const ControlPolygon& other) const;

 private:
  std::array<BezierCurve, 4> curves_;
  std::array<std::array<bool, 5>, 4> mutable_;
  std::vector<std::pair<PointRef, double>> clamps_;
  bool symmetric_;
  double y_box_;
};

/// Closed surface polyline, m panels, traversed trailing edge -> upper
/// surface -> leading edge -> lower surface -> trailing edge. The first
/// and last of the m+1 points coincide.
///
/// Construction checks structural sanity (point count, finiteness,
/// closure). Shape validity -- self-intersection, negative thickness -- is
/// reported by validate_profile and enforced at the solver boundary, so an
/// invalid candidate shape can still be built and diagnosed.
class AirfoilProfile {
 public:
  explicit AirfoilProfile(std::vector<Vec2> points);

  int panel_count() const { return static_cast<int>(pts_.size()) - 1; }
  const std::vector<Vec2>& points() const { return pts_; }
  Vec2 point(int i) const { return pts_.at(static_cast<size_t>(i)); }

 private:
  std::vector<Vec2> pts_;
};

struct ProfileDiagnostics {
  bool is_closed = false;
  bool has_self_intersection = false;
  double min_thickness = 0.0;
  double max_thickness = 0.0;
};

/// Standard NACA 4-digit half-thickness law with the closed trailing edge
/// coefficient (-0.1036 on the x^4 term).
double naca4_half_thickness(double x, double thickness);

/// Ground-truth NACA 4-digit profile sampled with cosine spacing in x,
/// in the canonical traversal order. Used as the fitting target.
AirfoilProfile naca4_profile(int panels, double thickness);

/// Builds the constrained NACA0012 control polygon template: endpoints at
/// the leading and trailing edges, crest/trough pinned to
/// (x_thickness, +-thickness/2), interior x stations frozen, mask marking
/// exactly the unclamped interior points. Interior y values are seeded
/// with a straight line between the curve endpoints; fit_polygon refines
/// them.
ControlPolygon build_naca0012_polygon(const PolygonConfig& config);

/// Least-squares fit of the free control-point y values so the polygon
/// reproduces `target`. Solved per curve over the Bernstein basis at the
/// parameters matching the target's x stations. Fixed and clamped points
/// are untouched. Throws ArgumentError for an empty target and SolverError
/// for a rank-deficient basis.
ControlPolygon fit_polygon(const AirfoilProfile& target,
                           const ControlPolygon& polygon_template);

/// Convenience: template construction plus NACA fit, the shape every
/// episode starts from.
ControlPolygon initial_naca0012_polygon(const PolygonConfig& config);

/// Samples the polygon into a closed profile with m panels (m >= 40,
/// divisible by 4), m/4 per curve, cosine-spaced parameters.
AirfoilProfile sample_profile(const ControlPolygon& polygon, int panels);

/// Closure, pairwise self-intersection and vertical thickness report.
/// Diagnostics only; never throws.
ProfileDiagnostics validate_profile(const AirfoilProfile& profile);

/// Plain-text coordinate file: name line, then "x y" pairs in traversal
/// order with 12 significant digits. This is what the XFOIL adapter feeds
/// to the external process.
void write_coordinate_file(const AirfoilProfile& profile,
                           const std::string& name,
                           const std::filesystem::path& path);

/// Inverse of write_coordinate_file; returns the profile and its name.
std::pair<AirfoilProfile, std::string> read_coordinate_file(
    const std::filesystem::path& path);

}  // namespace airfoil::geom
