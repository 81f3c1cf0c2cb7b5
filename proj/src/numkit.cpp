#include "ruled/numkit.hpp"

#include <algorithm>
#include <cmath>

namespace ruled {

VecX fd_weights(double x0, const VecX& nodes, int order) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  const Index n = nodes.size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, order + 1);
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c(0, 0) = 1.0;
  for (Index i = 1; i < n; ++i) {
    Index mn = std::min<Index>(i, order);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[i] - x0;
    for (Index j = 0; j < i; ++j) {
      double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (Index k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (Index k = mn; k >= 1; --k)
        c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(order);
}

namespace {

int stencil_width(int order) {
  switch (order) {
    case 1: return 5;
    case 2: return 6;
    case 3: return 7;
    default: throw Error("derive: order must be 1, 2 or 3");
  }
}

}  // namespace

VecX derive(const VecX& y, double h, int order) {
  const Index n = y.size();
  const int w = stencil_width(order);
  if (n < 9) throw Error("derive: grid too short (need at least 9 samples)");
  if (!(h > 0)) throw Error("derive: step must be positive");

  VecX out(n);
  // weight cache per window offset; offsets are in units of h
  std::vector<VecX> cache(w);
  VecX offs(w);
  for (Index i = 0; i < n; ++i) {
    Index start = std::clamp<Index>(i - w / 2, 0, n - w);
    Index rel = i - start;  // position of the target inside the window
    if (cache[rel].size() == 0) {
      for (int k = 0; k < w; ++k) offs[k] = static_cast<double>(k - rel);
      cache[rel] = fd_weights(0.0, offs, order);
    }
    double acc = 0;
    for (int k = 0; k < w; ++k) acc += cache[rel][k] * y[start + k];
    out[i] = acc / std::pow(h, order);
  }
  return out;
}

Mat3X derive(const Mat3X& y, double h, int order) {
  Mat3X out(3, y.cols());
  for (int r = 0; r < 3; ++r)
    out.row(r) = derive(VecX(y.row(r).transpose()), h, order).transpose();
  return out;
}

namespace {

template <typename T>
T fd_point_impl(const std::function<T(double)>& f, double u, double step,
                double lo, double hi, int order, int w = 5) {
  double start = u - (w / 2) * step;
  if (start < lo) start = lo;
  if (start + (w - 1) * step > hi) start = hi - (w - 1) * step;
  VecX nodes(w);
  for (int k = 0; k < w; ++k) nodes[k] = start + k * step;
  VecX wts = fd_weights(u, nodes, order);
  // The weights of any derivative stencil sum to zero, so a constant
  // offset cancels exactly; subtracting the center value makes that
  // cancellation hold in floating point too (roundoff then scales with
  // the local variation of f, not its absolute magnitude).
  T center = f(u);
  T acc = wts[0] * (f(nodes[0]) - center);
  for (int k = 1; k < w; ++k) acc += wts[k] * (f(nodes[k]) - center);
  return acc;
}

}  // namespace

double fd_point(const ScalarFn& f, double u, double step, double lo, double hi,
                int order) {
  return fd_point_impl<double>(f, u, step, lo, hi, order);
}

Vec3 fd_point(const CurveFn& f, double u, double step, double lo, double hi,
              int order) {
  return fd_point_impl<Vec3>(f, u, step, lo, hi, order);
}

ConstancyVerdict is_constant(const VecX& v, double tol) {
  return is_constant(v, std::vector<char>(v.size(), 1), tol);
}

ConstancyVerdict is_constant(const VecX& v, const std::vector<char>& keep,
                             double tol) {
  if (v.size() < 9) throw Error("is_constant: need at least 9 samples");
  double sum = 0;
  Index cnt = 0;
  for (Index i = 0; i < v.size(); ++i) {
    if (!keep[i]) continue;
    if (!std::isfinite(v[i]))
      throw Error("is_constant: non-finite sample");
    sum += v[i];
    ++cnt;
  }
  if (cnt == 0) throw Error("is_constant: all samples masked out");
  double mean = sum / static_cast<double>(cnt);
  double ss = 0;
  for (Index i = 0; i < v.size(); ++i)
    if (keep[i]) ss += (v[i] - mean) * (v[i] - mean);
  double residual = std::sqrt(ss / static_cast<double>(cnt)) /
                    (1.0 + std::fabs(mean));
  return {residual < tol, mean, residual, tol};
}

namespace {

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
const double kGLx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                        0.5384693101056831, 0.9061798459386640};
const double kGLw[5] = {0.2369268850561891, 0.4786286704993665,
                        0.5688888888888889, 0.4786286704993665,
                        0.2369268850561891};

double gl_panel(const ScalarFn& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int k = 0; k < 5; ++k) acc += kGLw[k] * f(mid + half * kGLx[k]);
  return acc * half;
}

}  // namespace

ArcLengthMap arc_length_reparam(const CurveFn& c, double ua, double ub,
                                Index n) {
  if (!(ub > ua)) throw Error("arc_length_reparam: degenerate range");
  if (n < 9) throw Error("arc_length_reparam: need at least 9 samples");
  const double span = ub - ua;
  // A 7-node stencil puts the h^6 truncation error below the 1e-10
  // length contract at this step, and the relatively wide step keeps
  // evaluation roundoff jitter small: sample-position jitter in the
  // inverted u(s) table is amplified by later 1/h stencil factors.
  const double fd_step = span * 1e-3;
  ScalarFn speed = [&](double u) {
    return fd_point_impl<Vec3>(c, u, fd_step, ua, ub, 1, 7).norm();
  };

  // Regularity probe.
  const Index probe = 4 * n;
  for (Index i = 0; i <= probe; ++i) {
    double u = ua + span * static_cast<double>(i) / static_cast<double>(probe);
    if (speed(u) <= 1e-9)
      throw GeometryError("arc_length_reparam: curve not regular (||dc/du|| ~ 0)");
  }

  // Cumulative length at panel boundaries.
  const Index panels = 4 * n;
  VecX ug(panels + 1), len(panels + 1);
  len[0] = 0;
  ug[0] = ua;
  for (Index p = 0; p < panels; ++p) {
    double a = ua + span * static_cast<double>(p) / static_cast<double>(panels);
    double b = ua + span * static_cast<double>(p + 1) / static_cast<double>(panels);
    ug[p + 1] = b;
    len[p + 1] = len[p] + gl_panel(speed, a, b);
    if (!(len[p + 1] > len[p]))
      throw Error("arc_length_reparam: non-monotone length table");
  }

  ArcLengthMap map;
  map.ua = ua;
  map.ub = ub;
  map.total = len[panels];
  map.grid = {0.0, map.total / static_cast<double>(n - 1), n};
  map.u_of_s.resize(n);
  map.u_of_s[0] = ua;
  map.u_of_s[n - 1] = ub;

  Index p = 0;
  for (Index i = 1; i < n - 1; ++i) {
    double s = map.grid.at(i);
    while (p + 1 < panels && len[p + 1] < s) ++p;
    // Hermite seed on panel p: length is monotone with known slope.
    double l0 = len[p], l1 = len[p + 1];
    double u0 = ug[p], u1 = ug[p + 1];
    double t = (s - l0) / (l1 - l0);
    double sp0 = speed(u0), sp1 = speed(u1);
    double du = u1 - u0;
    // cubic Hermite of u(l) with du/dl = 1/speed at the ends
    double m0 = du == 0 ? 0 : 1.0 / sp0 * (l1 - l0) / du;
    double m1 = du == 0 ? 0 : 1.0 / sp1 * (l1 - l0) / du;
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    // Hermite seed for u(l); u(0)=u0, u(1)=u1 in panel-local coordinates.
    double u = u0 + du * (h10 * m0 + h01 + h11 * m1);
    u = std::clamp(u, u0, u1);
    // Newton on L(u) - s with partial-panel quadrature for L(u).
    // Converge far below the 1e-12 contract: downstream stencils divide
    // sample positions by the grid step, so slack here is amplified.
    const double newton_tol = 1e-15 * std::max(1.0, map.total);
    for (int it = 0; it < 40; ++it) {
      double resid = l0 + gl_panel(speed, u0, u) - s;
      if (std::fabs(resid) < newton_tol) break;
      double sp = speed(u);
      u -= resid / sp;
      u = std::clamp(u, ua, ub);
    }
    map.u_of_s[i] = u;
  }
  return map;
}

StrictionFrameField integrate_frenet(const ScalarFn& k1fn, const ScalarFn& k2fn,
                                     const ScalarFn& phifn, const Mat3& frame0,
                                     const Vec3& c0, const UniformGrid& grid) {
  if (grid.n < 9) throw Error("integrate_frenet: grid too short");
  Mat3 gram = frame0.transpose() * frame0;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-10 ||
      std::fabs(frame0.determinant() - 1.0) > 1e-8)
    throw GeometryError(
        "integrate_frenet: initial frame not orthonormal right-handed");

  using State = Eigen::Matrix<double, 12, 1>;
  auto pack = [](const Vec3& c, const Vec3& q, const Vec3& h, const Vec3& a) {
    State y;
    y << c, q, h, a;
    return y;
  };
  auto deriv = [&](const State& y, double s) {
    Vec3 q = y.segment<3>(3), h = y.segment<3>(6), a = y.segment<3>(9);
    double k1 = k1fn(s), k2 = k2fn(s), phi = phifn(s);
    return pack(std::cos(phi) * q + std::sin(phi) * a, k1 * h,
                -k1 * q + k2 * a, -k2 * h);
  };

  StrictionFrameField ff;
  ff.grid = grid;
  ff.c.resize(3, grid.n);
  ff.q.resize(3, grid.n);
  ff.h.resize(3, grid.n);
  ff.a.resize(3, grid.n);
  ff.k1.resize(grid.n);
  ff.k2.resize(grid.n);
  ff.valid.assign(grid.n, 1);
  ff.u_of_s = grid.points();

  State y = pack(c0, frame0.col(0), frame0.col(1), frame0.col(2));
  const double h = grid.h;
  for (Index i = 0; i < grid.n; ++i) {
    double s = grid.at(i);
    ff.c.col(i) = y.segment<3>(0);
    ff.q.col(i) = y.segment<3>(3);
    ff.h.col(i) = y.segment<3>(6);
    ff.a.col(i) = y.segment<3>(9);
    ff.k1[i] = k1fn(s);
    ff.k2[i] = k2fn(s);
    if (i + 1 == grid.n) break;
    State f1 = deriv(y, s);
    State f2 = deriv(y + 0.5 * h * f1, s + 0.5 * h);
    State f3 = deriv(y + 0.5 * h * f2, s + 0.5 * h);
    State f4 = deriv(y + h * f3, s + h);
    y += h / 6.0 * (f1 + 2 * f2 + 2 * f3 + f4);
    // Gram-Schmidt: keep q, project h, rebuild a.
    Vec3 q = y.segment<3>(3).normalized();
    Vec3 hh = y.segment<3>(6) - y.segment<3>(6).dot(q) * q;
    hh.normalize();
    y.segment<3>(3) = q;
    y.segment<3>(6) = hh;
    y.segment<3>(9) = q.cross(hh);
  }
  return ff;
}

}  // namespace ruled
