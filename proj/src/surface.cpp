#include "ruled/surface.hpp"

#include <algorithm>
#include <cmath>

namespace ruled {

namespace {

constexpr double kCylEps = 1e-7;      // max ||q'|| below this => cylindrical
constexpr double kTorsalFrac = 1e-4;  // ||q'|| < frac * max => near-torsal
constexpr double kDevTol = 1e-6;      // developability, scaled

// Local Lagrange interpolation on up to 6 nodes around x.
Index window_start(const VecX& xs, double x, int w) {
  auto it = std::lower_bound(xs.data(), xs.data() + xs.size(), x);
  Index i = it - xs.data();
  return std::clamp<Index>(i - w / 2, 0, std::max<Index>(0, xs.size() - w));
}

double lagrange1(const VecX& xs, const VecX& ys, Index start, int w, double x) {
  double acc = 0;
  for (int j = 0; j < w; ++j) {
    double lj = 1;
    for (int k = 0; k < w; ++k) {
      if (k == j) continue;
      lj *= (x - xs[start + k]) / (xs[start + j] - xs[start + k]);
    }
    acc += lj * ys[start + j];
  }
  return acc;
}

Vec3 lagrange3(const VecX& xs, const Mat3X& ys, double x) {
  int w = static_cast<int>(std::min<Index>(6, xs.size()));
  Index start = window_start(xs, x, w);
  Vec3 acc = Vec3::Zero();
  for (int j = 0; j < w; ++j) {
    double lj = 1;
    for (int k = 0; k < w; ++k) {
      if (k == j) continue;
      lj *= (x - xs[start + k]) / (xs[start + j] - xs[start + k]);
    }
    acc += lj * ys.col(start + j);
  }
  return acc;
}

}  // namespace

Vec3 SampleTable::eval_f(double x) const { return lagrange3(u, f, x); }
Vec3 SampleTable::eval_q(double x) const { return lagrange3(u, q, x); }

RuledSurfaceSpec RuledSurfaceSpec::analytic(const std::array<Expr, 3>& base,
                                            const std::array<Expr, 3>& director,
                                            double ua, double ub, Index samples,
                                            std::string name) {
  if (!(ub > ua)) throw Error("surface spec: degenerate parameter range");
  RuledSurfaceSpec s;
  auto be = std::make_shared<std::array<Expr, 3>>(base);
  auto de = std::make_shared<std::array<Expr, 3>>(director);
  s.f_ = [be](double u) {
    return Vec3((*be)[0].eval(u), (*be)[1].eval(u), (*be)[2].eval(u));
  };
  s.qraw_ = [de](double u) {
    return Vec3((*de)[0].eval(u), (*de)[1].eval(u), (*de)[2].eval(u));
  };
  s.ua_ = ua;
  s.ub_ = ub;
  s.samples_ = samples;
  s.name_ = std::move(name);
  s.base_exprs_ = be;
  s.dir_exprs_ = de;
  return s;
}

RuledSurfaceSpec RuledSurfaceSpec::sampled(VecX u, Mat3X f, Mat3X q,
                                           std::string name) {
  if (u.size() < 9) throw Error("surface spec: need at least 9 samples");
  if (f.cols() != u.size() || q.cols() != u.size())
    throw Error("surface spec: table column mismatch");
  for (Index i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1]))
      throw Error("surface spec: sample parameters not increasing");
  auto tab = std::make_shared<SampleTable>();
  tab->u = std::move(u);
  tab->f = std::move(f);
  tab->q = std::move(q);
  RuledSurfaceSpec s;
  s.f_ = [tab](double x) { return tab->eval_f(x); };
  s.qraw_ = [tab](double x) { return tab->eval_q(x); };
  s.ua_ = tab->u[0];
  s.ub_ = tab->u[tab->u.size() - 1];
  s.samples_ = tab->u.size();
  s.name_ = std::move(name);
  s.table_ = tab;
  return s;
}

Vec3 RuledSurfaceSpec::base(double u) const {
  if (!f_) throw Error("empty surface spec");
  return f_(u);
}

Vec3 RuledSurfaceSpec::director(double u) const {
  if (!qraw_) throw Error("empty surface spec");
  Vec3 q = qraw_(u);
  double nrm = q.norm();
  if (nrm <= 1e-9)
    throw GeometryError("director vanishes (||q|| <= 1e-9)");
  return q / nrm;
}

RuledSurfaceSpec RuledSurfaceSpec::transformed(const Mat3& rot,
                                               const Vec3& shift) const {
  RuledSurfaceSpec s = *this;
  CurveFn f = f_, q = qraw_;
  s.f_ = [rot, shift, f](double u) { return Vec3(rot * f(u) + shift); };
  s.qraw_ = [rot, q](double u) { return Vec3(rot * q(u)); };
  s.base_exprs_.reset();
  s.dir_exprs_.reset();
  s.table_.reset();
  return s;
}

RuledSurfaceSpec RuledSurfaceSpec::scaled(double lambda) const {
  RuledSurfaceSpec s = *this;
  CurveFn f = f_;
  s.f_ = [lambda, f](double u) { return Vec3(lambda * f(u)); };
  s.base_exprs_.reset();
  s.dir_exprs_.reset();
  s.table_.reset();
  return s;
}

RuledSurfaceSpec RuledSurfaceSpec::reparametrized(double alpha,
                                                  double beta) const {
  if (alpha == 0) throw Error("reparametrized: alpha must be non-zero");
  RuledSurfaceSpec s = *this;
  CurveFn f = f_, q = qraw_;
  s.f_ = [alpha, beta, f](double u) { return f(alpha * u + beta); };
  s.qraw_ = [alpha, beta, q](double u) { return q(alpha * u + beta); };
  double a = (ua_ - beta) / alpha, b = (ub_ - beta) / alpha;
  s.ua_ = std::min(a, b);
  s.ub_ = std::max(a, b);
  s.base_exprs_.reset();
  s.dir_exprs_.reset();
  s.table_.reset();
  return s;
}

const std::array<Expr, 3>* RuledSurfaceSpec::analytic_base() const {
  return base_exprs_.get();
}
const std::array<Expr, 3>* RuledSurfaceSpec::analytic_director() const {
  return dir_exprs_.get();
}

namespace {

struct DerivSamples {
  VecX u;
  Mat3X f, q, fp, qp;  // f, unit q and their u-derivatives
  VecX w;              // ||q'||
  double wmax = 0, fpmax = 0;
};

DerivSamples sample_derivatives(const RuledSurfaceSpec& spec, Index n) {
  DerivSamples d;
  const double ua = spec.ua(), ub = spec.ub();
  const double step = (ub - ua) * 1e-3;
  d.u = VecX::LinSpaced(n, ua, ub);
  d.f.resize(3, n);
  d.q.resize(3, n);
  d.fp.resize(3, n);
  d.qp.resize(3, n);
  d.w.resize(n);
  CurveFn f = [&spec](double u) { return spec.base(u); };
  CurveFn q = [&spec](double u) { return spec.director(u); };
  for (Index i = 0; i < n; ++i) {
    d.f.col(i) = f(d.u[i]);
    d.q.col(i) = q(d.u[i]);
    d.fp.col(i) = fd_point(f, d.u[i], step, ua, ub);
    d.qp.col(i) = fd_point(q, d.u[i], step, ua, ub);
    d.w[i] = d.qp.col(i).norm();
  }
  d.wmax = d.w.maxCoeff();
  d.fpmax = d.fp.colwise().norm().maxCoeff();
  return d;
}

void require_noncylindrical(const DerivSamples& d) {
  if (d.wmax < kCylEps)
    throw GeometryError("cylindrical: striction curve undefined (Eq. 4)");
}

// Linear fill of masked entries from the nearest valid neighbours.
void fill_masked(VecX& v, const std::vector<char>& valid) {
  const Index n = v.size();
  Index i = 0;
  while (i < n) {
    if (valid[i]) {
      ++i;
      continue;
    }
    Index j = i;
    while (j < n && !valid[j]) ++j;
    Index lo = i - 1, hi = j;  // valid anchors (may fall off either end)
    for (Index k = i; k < j; ++k) {
      if (lo < 0 && hi >= n)
        throw GeometryError("striction: no valid rulings to interpolate from");
      if (lo < 0)
        v[k] = v[hi];
      else if (hi >= n)
        v[k] = v[lo];
      else {
        double t = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
        v[k] = (1 - t) * v[lo] + t * v[hi];
      }
    }
    i = j;
  }
}

}  // namespace

VecX distribution_parameter(const RuledSurfaceSpec& spec, const VecX& ugrid) {
  const double step = (spec.ub() - spec.ua()) * 1e-3;
  CurveFn f = [&spec](double u) { return spec.base(u); };
  CurveFn q = [&spec](double u) { return spec.director(u); };
  VecX w(ugrid.size()), det(ugrid.size());
  for (Index i = 0; i < ugrid.size(); ++i) {
    Vec3 fp = fd_point(f, ugrid[i], step, spec.ua(), spec.ub());
    Vec3 qq = q(ugrid[i]);
    Vec3 qp = fd_point(q, ugrid[i], step, spec.ua(), spec.ub());
    w[i] = qp.norm();
    det[i] = fp.dot(qq.cross(qp));
  }
  if (w.maxCoeff() < kCylEps)
    throw GeometryError("cylindrical: striction curve undefined (Eq. 4)");
  VecX d(ugrid.size());
  std::vector<char> valid(ugrid.size(), 1);
  for (Index i = 0; i < ugrid.size(); ++i) {
    if (w[i] < kTorsalFrac * w.maxCoeff()) {
      valid[i] = 0;
      d[i] = 0;
    } else {
      d[i] = det[i] / (w[i] * w[i]);
    }
  }
  fill_masked(d, valid);
  return d;
}

Vec3 surface_normal(const RuledSurfaceSpec& spec, double u, double v) {
  const double step = (spec.ub() - spec.ua()) * 1e-3;
  CurveFn f = [&spec](double x) { return spec.base(x); };
  CurveFn q = [&spec](double x) { return spec.director(x); };
  Vec3 ru = fd_point(f, u, step, spec.ua(), spec.ub()) +
            v * fd_point(q, u, step, spec.ua(), spec.ub());
  Vec3 rv = q(u);
  Vec3 cr = ru.cross(rv);
  double nrm = cr.norm();
  if (nrm <= 1e-12)
    throw GeometryError("surface_normal: singular point (r_u x r_v ~ 0)");
  return cr / nrm;
}

Vec3 asymptotic_normal(const RuledSurfaceSpec& spec, double u) {
  const double step = (spec.ub() - spec.ua()) * 1e-3;
  CurveFn q = [&spec](double x) { return spec.director(x); };
  Vec3 qq = q(u);
  Vec3 qp = fd_point(q, u, step, spec.ua(), spec.ub());
  double w = qp.norm();
  if (w < kCylEps)
    throw GeometryError("cylindrical: asymptotic normal undefined");
  return qq.cross(qp) / w;
}

StrictionData striction_curve(const RuledSurfaceSpec& spec, Index n) {
  DerivSamples ds = sample_derivatives(spec, n);
  require_noncylindrical(ds);

  StrictionData out;
  out.u = ds.u;
  out.scale = std::max(ds.fpmax, 1e-300);
  out.v0.resize(n);
  out.d.resize(n);
  out.valid.assign(n, 1);
  for (Index i = 0; i < n; ++i) {
    if (ds.w[i] < kTorsalFrac * ds.wmax) {
      out.valid[i] = 0;
      out.v0[i] = 0;
      out.d[i] = 0;
      continue;
    }
    double den = ds.qp.col(i).squaredNorm();
    out.v0[i] = -ds.qp.col(i).dot(ds.fp.col(i)) / den;
    out.d[i] = ds.fp.col(i).dot(ds.q.col(i).cross(ds.qp.col(i))) / den;
  }
  fill_masked(out.v0, out.valid);
  fill_masked(out.d, out.valid);
  out.c.resize(3, n);
  for (Index i = 0; i < n; ++i)
    out.c.col(i) = ds.f.col(i) + out.v0[i] * ds.q.col(i);

  // Developability from the determinant itself (no division): torsal
  // rulings are exactly the zero set of det(f', q, q').
  double det_max = 0;
  for (Index i = 0; i < n; ++i)
    det_max = std::max(det_max,
                       std::fabs(ds.fp.col(i).dot(ds.q.col(i).cross(ds.qp.col(i)))));
  out.developable = det_max < kDevTol * ds.fpmax * ds.wmax;

  // Contiguous invalid runs -> reported torsal windows.
  Index i = 0;
  while (i < n) {
    if (out.valid[i]) {
      ++i;
      continue;
    }
    Index j = i;
    while (j < n && !out.valid[j]) ++j;
    out.torsal_windows.emplace_back(out.u[i], out.u[j - 1]);
    i = j;
  }
  return out;
}

CurveFn striction_evaluator(const RuledSurfaceSpec& spec, Index n) {
  Index fine = std::max<Index>(4 * n, 4096);
  auto data = std::make_shared<StrictionData>(striction_curve(spec, fine));
  auto base = std::make_shared<RuledSurfaceSpec>(spec);
  return [data, base](double u) {
    int w = 6;
    Index start = window_start(data->u, u, w);
    double v0 = lagrange1(data->u, data->v0, start, w, u);
    return Vec3(base->base(u) + v0 * base->director(u));
  };
}

}  // namespace ruled
