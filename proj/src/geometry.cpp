#include "airfoil/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace airfoil::geom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kClosureTol = 1e-12;

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

std::string point_name(PointRef r) {
  std::ostringstream os;
  os << "curve " << r.curve << " point " << r.point;
  return os.str();
}

}  // namespace

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

double bernstein(int n, int i, double t) {
  if (n < 0 || i < 0 || i > n)
    throw ArgumentError("bernstein: index out of range");
  if (!(t >= 0.0 && t <= 1.0))
    throw ArgumentError("bernstein: t outside [0,1]");
  double binom = 1.0;
  for (int k = 1; k <= i; ++k)
    binom = binom * static_cast<double>(n - i + k) / static_cast<double>(k);
  double ti = 1.0;
  for (int k = 0; k < i; ++k) ti *= t;
  double si = 1.0;
  for (int k = 0; k < n - i; ++k) si *= 1.0 - t;
  return binom * ti * si;
}

BezierCurve::BezierCurve(const std::array<Vec2, kPoints>& control_points)
    : pts_(control_points) {
  for (const Vec2& p : pts_)
    if (!finite(p)) throw ArgumentError("BezierCurve: non-finite coordinate");
  for (int i = 1; i < kPoints; ++i)
    if (pts_[i].x < pts_[i - 1].x)
      throw ArgumentError("BezierCurve: control x-coordinates must be "
                          "non-decreasing");
}

Vec2 BezierCurve::point(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw ArgumentError("BezierCurve::point: t outside [0,1]");
  Vec2 sum{0.0, 0.0};
  for (int i = 0; i <= kDegree; ++i) {
    const double w = bernstein(kDegree, i, t);
    sum.x += w * pts_[static_cast<size_t>(i)].x;
    sum.y += w * pts_[static_cast<size_t>(i)].y;
  }
  return sum;
}

Vec2 BezierCurve::derivative(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw ArgumentError("BezierCurve::derivative: t outside [0,1]");
  Vec2 sum{0.0, 0.0};
  for (int i = 0; i < kDegree; ++i) {
    const double w = bernstein(kDegree - 1, i, t);
    const Vec2 d = pts_[static_cast<size_t>(i) + 1] - pts_[static_cast<size_t>(i)];
    sum.x += w * d.x;
    sum.y += w * d.y;
  }
  return sum * static_cast<double>(kDegree);
}

double BezierCurve::parameter_at_x(double x) const {
  const double x0 = pts_.front().x;
  const double x1 = pts_.back().x;
  if (x <= x0) return 0.0;
  if (x >= x1) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (point(mid).x < x)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ControlPolygon::ControlPolygon(
    std::array<BezierCurve, 4> curves,
    std::array<std::array<bool, 5>, 4> mutable_mask,
    std::vector<std::pair<PointRef, double>> clamps, bool symmetric,
    double y_box)
    : curves_(std::move(curves)),
      mutable_(mutable_mask),
      clamps_(std::move(clamps)),
      symmetric_(symmetric),
      y_box_(y_box) {
  auto same = [](Vec2 a, Vec2 b) { return norm(a - b) <= kClosureTol; };
  const auto& uf = curves_[kUpperFront].control_points();
  const auto& ur = curves_[kUpperRear].control_points();
  const auto& lf = curves_[kLowerFront].control_points();
  const auto& lr = curves_[kLowerRear].control_points();
  if (!same(uf.back(), ur.front()) || !same(lf.back(), lr.front()))
    throw ArgumentError("ControlPolygon: curve joints do not coincide");
  if (!same(uf.front(), lf.front()))
    throw ArgumentError("ControlPolygon: front curves must share the "
                        "leading edge");
  if (!same(ur.back(), lr.back()))
    throw ArgumentError("ControlPolygon: rear curves must share the "
                        "trailing edge");
  for (const auto& [ref, value] : clamps_) {
    if (std::abs(point(ref).y - value) > kClosureTol)
      throw ArgumentError("ControlPolygon: clamped point " +
                          point_name(ref) + " violates its clamp value");
    if (is_mutable(ref))
      throw ArgumentError("ControlPolygon: clamped point " +
                          point_name(ref) + " cannot be mutable");
  }
  if (symmetric_) {
    for (int c : {kUpperFront, kUpperRear}) {
      for (int i = 0; i < 5; ++i) {
        const Vec2 up = curves_[static_cast<size_t>(c)].control_point(i);
        const Vec2 lo = curves_[static_cast<size_t>(c) + 2].control_point(i);
        if (up.x != lo.x || up.y != -lo.y)
          throw ArgumentError("ControlPolygon: symmetric mode requires the "
                              "lower curves to mirror the upper ones");
        if (mutable_[static_cast<size_t>(c) + 2][static_cast<size_t>(i)])
          throw ArgumentError("ControlPolygon: mirrored lower points may "
                              "not be independently mutable");
      }
    }
  }
}

Vec2 ControlPolygon::point(PointRef r) const {
  if (r.curve < 0 || r.curve > 3 || r.point < 0 || r.point > 4)
    throw ArgumentError("ControlPolygon::point: reference out of range");
  return curves_[static_cast<size_t>(r.curve)].control_point(r.point);
}

bool ControlPolygon::is_mutable(PointRef r) const {
  if (r.curve < 0 || r.curve > 3 || r.point < 0 || r.point > 4)
    throw ArgumentError("ControlPolygon::is_mutable: reference out of range");
  return mutable_[static_cast<size_t>(r.curve)][static_cast<size_t>(r.point)];
}

std::vector<PointRef> ControlPolygon::mutable_points() const {
  std::vector<PointRef> out;
  for (int c = 0; c < 4; ++c)
    for (int p = 0; p < 5; ++p)
      if (mutable_[static_cast<size_t>(c)][static_cast<size_t>(p)])
        out.push_back({c, p});
  return out;
}

ControlPolygon ControlPolygon::with_displacement(PointRef r, double dy) const {
  if (!is_mutable(r))
    throw ConstraintError("displacement targets immutable " + point_name(r));
  std::array<std::array<double, 5>, 4> ys;
  for (int c = 0; c < 4; ++c)
    for (int p = 0; p < 5; ++p)
      ys[static_cast<size_t>(c)][static_cast<size_t>(p)] =
          point({c, p}).y;
  double moved = ys[static_cast<size_t>(r.curve)][static_cast<size_t>(r.point)] + dy;
  moved = std::clamp(moved, -y_box_, y_box_);
  ys[static_cast<size_t>(r.curve)][static_cast<size_t>(r.point)] = moved;
  if (symmetric_ && r.curve <= kUpperRear)
    ys[static_cast<size_t>(r.curve) + 2][static_cast<size_t>(r.point)] = -moved;
  return with_y_values(ys);
}

ControlPolygon ControlPolygon::with_y_values(
    const std::array<std::array<double, 5>, 4>& ys) const {
  std::array<std::array<Vec2, 5>, 4> pts;
  for (int c = 0; c < 4; ++c)
    for (int p = 0; p < 5; ++p)
      pts[static_cast<size_t>(c)][static_cast<size_t>(p)] = {
          point({c, p}).x, ys[static_cast<size_t>(c)][static_cast<size_t>(p)]};
  std::array<BezierCurve, 4> curves{
      BezierCurve(pts[0]), BezierCurve(pts[1]), BezierCurve(pts[2]),
      BezierCurve(pts[3])};
  return ControlPolygon(std::move(curves), mutable_, clamps_, symmetric_,
                        y_box_);
}

bool ControlPolygon::operator==(const ControlPolygon& other) const {
  for (int c = 0; c < 4; ++c)
    for (int p = 0; p < 5; ++p)
      if (!(point({c, p}) == other.point({c, p}))) return false;
  return mutable_ == other.mutable_ && clamps_ == other.clamps_ &&
         symmetric_ == other.symmetric_ && y_box_ == other.y_box_;
}

AirfoilProfile::AirfoilProfile(std::vector<Vec2> points)
    : pts_(std::move(points)) {
  if (pts_.size() < 4)
    throw ArgumentError("AirfoilProfile: needs at least four points");
  for (const Vec2& p : pts_)
    if (!finite(p)) throw ArgumentError("AirfoilProfile: non-finite point");
  if (norm(pts_.front() - pts_.back()) > kClosureTol)
    throw ArgumentError("AirfoilProfile: polyline is not closed");
}

double naca4_half_thickness(double x, double thickness) {
  if (!(x >= 0.0 && x <= 1.0))
    throw ArgumentError("naca4_half_thickness: x outside [0,1]");
  // Closed trailing edge variant: the x^4 coefficient is -0.1036 so the
  // thickness vanishes exactly at x = 1.
  return 5.0 * thickness *
         (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x +
          0.2843 * x * x * x - 0.1036 * x * x * x * x);
}

AirfoilProfile naca4_profile(int panels, double thickness) {
  if (panels < 4 || panels % 2 != 0)
    throw ArgumentError("naca4_profile: panel count must be even and >= 4");
  const int half = panels / 2;
  std::vector<Vec2> pts;
  pts.reserve(static_cast<size_t>(panels) + 1);
  // Upper surface TE -> LE, cosine spacing in x.
  for (int k = 0; k <= half; ++k) {
    const double x = 0.5 * (1.0 + std::cos(kPi * k / half));
    pts.push_back({x, naca4_half_thickness(x, thickness)});
  }
  // Lower surface LE -> TE, skipping the shared leading edge.
  for (int k = half - 1; k >= 0; --k) {
    const double x = 0.5 * (1.0 + std::cos(kPi * k / half));
    pts.push_back({x, -naca4_half_thickness(x, thickness)});
  }
  pts.front() = {1.0, 0.0};
  pts.back() = {1.0, 0.0};
  return AirfoilProfile(std::move(pts));
}

ControlPolygon build_naca0012_polygon(const PolygonConfig& config) {
  if (config.thickness <= 0.0)
    throw ConfigError("build_naca0012_polygon: thickness must be positive");
  if (!(config.x_thickness > 0.0 && config.x_thickness < 1.0))
    throw ConfigError("build_naca0012_polygon: x_thickness must lie in (0,1)");
  if (config.y_box <= 0.0)
    throw ConfigError("build_naca0012_polygon: y_box must be positive");

  const double xt = config.x_thickness;
  const double h = config.thickness / 2.0;

  // Interior x stations are frozen here and never move. The front curves
  // pin P1 directly above/below the leading edge, which gives the curve a
  // vertical nose tangent; a quartic with uniformly spaced x cannot track
  // the sqrt(x) nose within the fit tolerance. Remaining stations are
  // uniform.
  const std::array<double, 5> front_x{0.0, 0.0, xt / 3.0, 2.0 * xt / 3.0, xt};
  const std::array<double, 5> rear_x{xt, xt + (1.0 - xt) / 4.0,
                                     xt + (1.0 - xt) / 2.0,
                                     xt + 3.0 * (1.0 - xt) / 4.0, 1.0};

  auto seed_y = [](double y0, double y1, int i) {
    return y0 + (y1 - y0) * static_cast<double>(i) / 4.0;
  };
  std::array<std::array<Vec2, 5>, 4> pts;
  for (int i = 0; i < 5; ++i) {
    pts[kUpperFront][static_cast<size_t>(i)] = {front_x[static_cast<size_t>(i)],
                                                seed_y(0.0, h, i)};
    pts[kUpperRear][static_cast<size_t>(i)] = {rear_x[static_cast<size_t>(i)],
                                               seed_y(h, 0.0, i)};
    pts[kLowerFront][static_cast<size_t>(i)] = {front_x[static_cast<size_t>(i)],
                                                -seed_y(0.0, h, i)};
    pts[kLowerRear][static_cast<size_t>(i)] = {rear_x[static_cast<size_t>(i)],
                                               -seed_y(h, 0.0, i)};
  }

  std::vector<std::pair<PointRef, double>> clamps;
  if (config.c1_clamping) {
    pts[kUpperFront][3].y = h;
    pts[kUpperRear][1].y = h;
    pts[kLowerFront][3].y = -h;
    pts[kLowerRear][1].y = -h;
    clamps = {{{kUpperFront, 3}, h},
              {{kUpperRear, 1}, h},
              {{kLowerFront, 3}, -h},
              {{kLowerRear, 1}, -h}};
  }

  std::array<std::array<bool, 5>, 4> mask{};
  for (int c = 0; c < 4; ++c) {
    if (config.symmetric && c >= kLowerFront) continue;
    for (int p = 1; p <= 3; ++p) mask[static_cast<size_t>(c)][static_cast<size_t>(p)] = true;
  }
  for (const auto& [ref, value] : clamps)
    mask[static_cast<size_t>(ref.curve)][static_cast<size_t>(ref.point)] = false;

  std::array<BezierCurve, 4> curves{BezierCurve(pts[0]), BezierCurve(pts[1]),
                                    BezierCurve(pts[2]), BezierCurve(pts[3])};
  return ControlPolygon(std::move(curves), mask, std::move(clamps),
                        config.symmetric, config.y_box);
}

namespace {

// Target samples for one curve: (t on the curve, target y).
struct CurveSamples {
  std::vector<double> t;
  std::vector<double> y;
};

// Splits the closed profile into upper and lower surfaces at the leading
// edge (the point of minimum x) and collects, for each curve of the
// template, the target points falling in its x span.
std::array<CurveSamples, 4> collect_samples(const AirfoilProfile& target,
                                            const ControlPolygon& tmpl) {
  const auto& pts = target.points();
  size_t le = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (pts[i].x < pts[le].x) le = i;

  std::array<CurveSamples, 4> out;
  auto add = [&](int curve, Vec2 p) {
    const BezierCurve& c = tmpl.curve(curve);
    const double x0 = c.control_points().front().x;
    const double x1 = c.control_points().back().x;
    if (p.x < x0 - 1e-12 || p.x > x1 + 1e-12) return;
    out[static_cast<size_t>(curve)].t.push_back(
        c.parameter_at_x(std::clamp(p.x, x0, x1)));
    out[static_cast<size_t>(curve)].y.push_back(p.y);
  };
  // Upper surface: indices 0..le (TE -> LE).
  for (size_t i = 0; i <= le; ++i) {
    add(kUpperFront, pts[i]);
    add(kUpperRear, pts[i]);
  }
  // Lower surface: le..end.
  for (size_t i = le; i < pts.size(); ++i) {
    add(kLowerFront, pts[i]);
    add(kLowerRear, pts[i]);
  }
  return out;
}

}  // namespace

ControlPolygon fit_polygon(const AirfoilProfile& target,
                           const ControlPolygon& polygon_template) {
  if (target.points().empty() || target.panel_count() < 4)
    throw ArgumentError("fit_polygon: target profile is empty");

  const auto samples = collect_samples(target, polygon_template);
  std::array<std::array<double, 5>, 4> ys;
  for (int c = 0; c < 4; ++c)
    for (int p = 0; p < 5; ++p)
      ys[static_cast<size_t>(c)][static_cast<size_t>(p)] =
          polygon_template.point({c, p}).y;

  const bool mirror = polygon_template.symmetric_mode();
  for (int c = 0; c < 4; ++c) {
    if (mirror && c >= kLowerFront) {
      // Lower curves follow the upper fit exactly.
      for (int p = 0; p < 5; ++p)
        ys[static_cast<size_t>(c)][static_cast<size_t>(p)] =
            -ys[static_cast<size_t>(c) - 2][static_cast<size_t>(p)];
      continue;
    }
    std::vector<int> free;
    for (int p = 0; p < 5; ++p)
      if (polygon_template.is_mutable({c, p})) free.push_back(p);
    if (free.empty()) continue;

    const CurveSamples& s = samples[static_cast<size_t>(c)];
    if (s.t.size() < free.size())
      throw ArgumentError("fit_polygon: too few target points over curve " +
                          std::to_string(c));

    Eigen::MatrixXd basis(static_cast<Eigen::Index>(s.t.size()),
                          static_cast<Eigen::Index>(free.size()));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(s.t.size()));
    for (size_t k = 0; k < s.t.size(); ++k) {
      double fixed_part = 0.0;
      for (int p = 0; p < 5; ++p) {
        const double w = bernstein(4, p, s.t[k]);
        if (std::find(free.begin(), free.end(), p) == free.end())
          fixed_part += w * ys[static_cast<size_t>(c)][static_cast<size_t>(p)];
      }
      rhs(static_cast<Eigen::Index>(k)) = s.y[k] - fixed_part;
      for (size_t j = 0; j < free.size(); ++j)
        basis(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
            bernstein(4, free[j], s.t[k]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    if (qr.rank() < static_cast<Eigen::Index>(free.size()))
      throw SolverError("fit_polygon: rank-deficient Bernstein basis over "
                        "curve " + std::to_string(c));
    const Eigen::VectorXd sol = qr.solve(rhs);
    for (size_t j = 0; j < free.size(); ++j)
      ys[static_cast<size_t>(c)][static_cast<size_t>(free[j])] =
          sol(static_cast<Eigen::Index>(j));
  }
  return polygon_template.with_y_values(ys);
}

ControlPolygon initial_naca0012_polygon(const PolygonConfig& config) {
  const ControlPolygon tmpl = build_naca0012_polygon(config);
  return fit_polygon(naca4_profile(400, config.thickness), tmpl);
}

AirfoilProfile sample_profile(const ControlPolygon& polygon, int panels) {
  if (panels < 40 || panels % 4 != 0)
    throw ArgumentError("sample_profile: panel count must be >= 40 and "
                        "divisible by 4");
  const int per_curve = panels / 4;
  auto cosine_t = [per_curve](int j) {
    return 0.5 * (1.0 - std::cos(kPi * j / per_curve));
  };

  std::vector<Vec2> pts;
  pts.reserve(static_cast<size_t>(panels) + 1);
  // TE -> crest (upper rear reversed), including both endpoints.
  for (int j = per_curve; j >= 0; --j)
    pts.push_back(polygon.curve(kUpperRear).point(cosine_t(j)));
  // crest -> LE (upper front reversed), skipping the shared crest.
  for (int j = per_curve - 1; j >= 0; --j)
    pts.push_back(polygon.curve(kUpperFront).point(cosine_t(j)));
  // LE -> trough, skipping the shared leading edge.
  for (int j = 1; j <= per_curve; ++j)
    pts.push_back(polygon.curve(kLowerFront).point(cosine_t(j)));
  // trough -> TE, skipping the shared trough.
  for (int j = 1; j <= per_curve; ++j)
    pts.push_back(polygon.curve(kLowerRear).point(cosine_t(j)));
  return AirfoilProfile(std::move(pts));
}

namespace {

// Proper or touching intersection between segments ab and cd.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
    const double v = cross(q - p, r - p);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
  };
  auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Piecewise-linear lookup of y at station x over an open polyline.
// Returns false when x is outside the polyline's x range.
bool interp_y(const std::vector<Vec2>& line, double x, double* y) {
  for (size_t i = 0; i + 1 < line.size(); ++i) {
    const double x0 = line[i].x, x1 = line[i + 1].x;
    if ((x0 <= x && x <= x1) || (x1 <= x && x <= x0)) {
      if (x0 == x1) {
        *y = 0.5 * (line[i].y + line[i + 1].y);
      } else {
        const double f = (x - x0) / (x1 - x0);
        *y = line[i].y + f * (line[i + 1].y - line[i].y);
      }
      return true;
    }
  }
  return false;
}

}  // namespace

ProfileDiagnostics validate_profile(const AirfoilProfile& profile) {
  ProfileDiagnostics diag;
  const auto& pts = profile.points();
  const int m = profile.panel_count();
  diag.is_closed = norm(pts.front() - pts.back()) <= kClosureTol;

  for (int i = 0; i < m && !diag.has_self_intersection; ++i) {
    for (int j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // they share the closing point
      if (segments_intersect(pts[static_cast<size_t>(i)],
                             pts[static_cast<size_t>(i) + 1],
                             pts[static_cast<size_t>(j)],
                             pts[static_cast<size_t>(j) + 1])) {
        diag.has_self_intersection = true;
        break;
      }
    }
  }

  // Vertical thickness over matched x stations: split at the leading edge
  // (minimum x), evaluate upper minus lower at every vertex station.
  size_t le = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (pts[i].x < pts[le].x) le = i;
  std::vector<Vec2> upper(pts.begin(), pts.begin() + static_cast<long>(le) + 1);
  std::vector<Vec2> lower(pts.begin() + static_cast<long>(le), pts.end());
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = -std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<Vec2>& stations) {
    for (const Vec2& p : stations) {
      double yu, yl;
      if (interp_y(upper, p.x, &yu) && interp_y(lower, p.x, &yl)) {
        tmin = std::min(tmin, yu - yl);
        tmax = std::max(tmax, yu - yl);
      }
    }
  };
  scan(upper);
  scan(lower);
  if (!std::isfinite(tmin)) {
    tmin = 0.0;
    tmax = 0.0;
  }
  diag.min_thickness = tmin;
  diag.max_thickness = tmax;
  return diag;
}

void write_coordinate_file(const AirfoilProfile& profile,
                           const std::string& name,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw IoError("write_coordinate_file: cannot open " + path.string());
  out << name << "\n";
  char buf[80];
  for (const Vec2& p : profile.points()) {
    std::snprintf(buf, sizeof(buf), " %.12g  %.12g\n", p.x, p.y);
    out << buf;
  }
  if (!out) throw IoError("write_coordinate_file: write failed");
}

std::pair<AirfoilProfile, std::string> read_coordinate_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("read_coordinate_file: cannot open " + path.string());
  std::string name;
  std::getline(in, name);
  std::vector<Vec2> pts;
  double x, y;
  while (in >> x >> y) pts.push_back({x, y});
  return {AirfoilProfile(std::move(pts)), name};
}

}  // namespace airfoil::geom
