#include "airfoil/aero.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace airfoil::aero {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinPanelLength = 1e-5;

struct PanelFrame {
  geom::Vec2 start;
  geom::Vec2 mid;
  double len = 0.0;
  double cos_t = 0.0;  // tangent direction
  double sin_t = 0.0;
};

// Velocity induced at `p` by panel j carrying a unit-strength constant
// source and, independently, a unit-strength constant vortex. Computed in
// the panel frame (x along the tangent, y toward the body interior for
// the counterclockwise traversal) and rotated to global axes. `self` marks
// evaluation at the panel's own midpoint, where the limits from the fluid
// side apply.
void influence(const PanelFrame& pj, geom::Vec2 p, bool self,
               geom::Vec2* source, geom::Vec2* vortex) {
  double us, vs, uv, vv;
  if (self) {
    us = 0.0;
    vs = -0.5;
    uv = 0.5;
    vv = 0.0;
  } else {
    const double dx = p.x - pj.start.x;
    const double dy = p.y - pj.start.y;
    const double xl = dx * pj.cos_t + dy * pj.sin_t;
    const double yl = -dx * pj.sin_t + dy * pj.cos_t;
    const double r1 = std::hypot(xl, yl);
    const double r2 = std::hypot(xl - pj.len, yl);
    const double beta =
        std::atan2(yl, xl - pj.len) - std::atan2(yl, xl);
    const double lnr = std::log(r1 / r2);
    us = lnr / (2.0 * kPi);
    vs = beta / (2.0 * kPi);
    uv = -beta / (2.0 * kPi);
    vv = lnr / (2.0 * kPi);
  }
  *source = {us * pj.cos_t - vs * pj.sin_t, us * pj.sin_t + vs * pj.cos_t};
  *vortex = {uv * pj.cos_t - vv * pj.sin_t, uv * pj.sin_t + vv * pj.cos_t};
}

}  // namespace

CpDistribution solve_cp_panel(const geom::AirfoilProfile& profile,
                              double alpha_deg) {
  const geom::ProfileDiagnostics diag = geom::validate_profile(profile);
  if (!diag.is_closed)
    throw GeometryError("solve_cp_panel: profile is not closed");
  if (diag.has_self_intersection)
    throw GeometryError("solve_cp_panel: profile self-intersects");
  if (diag.min_thickness < 0.0)
    throw GeometryError("solve_cp_panel: negative thickness");

  const int m = profile.panel_count();
  std::vector<PanelFrame> panels(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const geom::Vec2 a = profile.point(i);
    const geom::Vec2 b = profile.point(i + 1);
    PanelFrame& f = panels[static_cast<size_t>(i)];
    f.start = a;
    f.mid = (a + b) * 0.5;
    f.len = geom::norm(b - a);
    if (f.len < kMinPanelLength) {
      std::ostringstream os;
      os << "solve_cp_panel: panel " << i << " length " << f.len
         << " below the 1e-5 chord guard";
      throw GeometryError(os.str());
    }
    f.cos_t = (b.x - a.x) / f.len;
    f.sin_t = (b.y - a.y) / f.len;
  }

  const double alpha = alpha_deg * kPi / 180.0;
  const geom::Vec2 vinf{std::cos(alpha), std::sin(alpha)};

  // Unknowns: m source strengths plus the global vortex strength.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  // Tangential influence matrices, reused for the surface speed below.
  Eigen::MatrixXd Ts(m, m), Tv(m, m);

  for (int i = 0; i < m; ++i) {
    const PanelFrame& pi = panels[static_cast<size_t>(i)];
    const geom::Vec2 normal{pi.sin_t, -pi.cos_t};  // outward
    const geom::Vec2 tangent{pi.cos_t, pi.sin_t};
    double vortex_normal_sum = 0.0;
    for (int j = 0; j < m; ++j) {
      geom::Vec2 s, v;
      influence(panels[static_cast<size_t>(j)], pi.mid, i == j, &s, &v);
      A(i, j) = geom::dot(s, normal);
      vortex_normal_sum += geom::dot(v, normal);
      Ts(i, j) = geom::dot(s, tangent);
      Tv(i, j) = geom::dot(v, tangent);
    }
    A(i, m) = vortex_normal_sum;
    b(i) = -geom::dot(vinf, normal);
  }

  // Kutta condition: tangential velocities on the two trailing-edge
  // panels cancel along the traversal.
  for (int i : {0, m - 1}) {
    const PanelFrame& pi = panels[static_cast<size_t>(i)];
    const geom::Vec2 tangent{pi.cos_t, pi.sin_t};
    for (int j = 0; j < m; ++j) {
      A(m, j) += Ts(i, j);
      A(m, m) += Tv(i, j);
    }
    b(m) += -geom::dot(vinf, tangent);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    std::ostringstream os;
    os << "solve_cp_panel: system is numerically singular "
       << "(reciprocal condition estimate " << rcond << ")";
    throw SolverError(os.str());
  }
  const Eigen::VectorXd sol = lu.solve(b);

  CpDistribution out;
  out.alpha = alpha_deg;
  out.backend = CpBackend::panel;
  out.cp.resize(static_cast<size_t>(m));
  const double gamma = sol(m);
  for (int i = 0; i < m; ++i) {
    const PanelFrame& pi = panels[static_cast<size_t>(i)];
    double vt = vinf.x * pi.cos_t + vinf.y * pi.sin_t;
    for (int j = 0; j < m; ++j) vt += sol(j) * Ts(i, j) + gamma * Tv(i, j);
    out.cp[static_cast<size_t>(i)] = 1.0 - vt * vt;
  }
  return out;
}

AeroMeasures compute_measures(const CpDistribution& cp,
                              const geom::AirfoilProfile& profile) {
  const int m = profile.panel_count();
  if (static_cast<int>(cp.cp.size()) != m)
    throw ArgumentError("compute_measures: Cp length does not match the "
                        "panel count");
  double lm = 0.0, dm = 0.0;
  for (int i = 0; i < m; ++i) {
    const geom::Vec2 d = profile.point(i + 1) - profile.point(i);
    lm += 0.5 * cp.cp[static_cast<size_t>(i)] * d.x;
    dm -= 0.5 * cp.cp[static_cast<size_t>(i)] * d.y;
  }
  AeroMeasures out;
  out.lift_measure = lm;
  out.drag_measure = dm;
  return out;
}

double reward_from_measures(const AeroMeasures& measures, RewardMode mode,
                            const RewardOptions& options) {
  if (mode == RewardMode::lift_max) return measures.lift_measure;
  if (options.literal_ra)
    return -measures.drag_measure - measures.lift_measure;
  return -measures.drag_measure - std::abs(measures.lift_measure);
}

}  // namespace airfoil::aero
