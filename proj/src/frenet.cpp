#include "ruled/frenet.hpp"

#include <algorithm>
#include <cmath>

namespace ruled {

namespace {

constexpr double kCurvEps = 1e-8;
constexpr double kMaskFrac = 1e-3;  // |k1| below this fraction of max => masked
constexpr int kMaskDilate = 8;      // covers nested FD stencils

void dilate_mask(std::vector<char>& valid, int radius) {
  const Index n = static_cast<Index>(valid.size());
  std::vector<char> out(valid.begin(), valid.end());
  for (Index i = 0; i < n; ++i) {
    if (valid[i]) continue;
    for (Index j = std::max<Index>(0, i - radius);
         j <= std::min<Index>(n - 1, i + radius); ++j)
      out[j] = 0;
  }
  valid.swap(out);
}

}  // namespace

StrictionFrameField ruled_apparatus(const RuledSurfaceSpec& spec, Index n) {
  if (n < 16) throw Error("ruled_apparatus: need at least 16 samples");

  CurveFn c_of_u = striction_evaluator(spec, n);
  ArcLengthMap arc = arc_length_reparam(c_of_u, spec.ua(), spec.ub(), n);

  StrictionFrameField ff;
  ff.grid = arc.grid;
  ff.u_of_s = arc.u_of_s;
  ff.c.resize(3, n);
  ff.q.resize(3, n);
  for (Index i = 0; i < n; ++i) {
    ff.c.col(i) = c_of_u(arc.u_of_s[i]);
    ff.q.col(i) = spec.director(arc.u_of_s[i]);
  }

  const double hs = ff.grid.h;
  Mat3X qp = derive(ff.q, hs, 1);
  VecX w = qp.colwise().norm();
  double wmax = w.maxCoeff();
  Index seed;
  w.maxCoeff(&seed);
  if (wmax < kCurvEps)
    throw GeometryError("cylindrical: striction curve undefined (Eq. 4)");

  // Sign-continued central normal: march outward from the strongest
  // sample, flipping so <h_i, h_prev> >= 0; hold direction where the
  // derivative is too small to trust.  k1 = <q', h> is then signed.
  ff.h.resize(3, n);
  ff.k1.resize(n);
  ff.valid.assign(n, 1);
  const double hold = kMaskFrac * wmax;
  ff.h.col(seed) = qp.col(seed) / w[seed];
  auto continue_to = [&](Index i, Index prev) {
    if (w[i] < hold) {
      ff.h.col(i) = ff.h.col(prev);
    } else {
      Vec3 cand = qp.col(i) / w[i];
      ff.h.col(i) = cand.dot(ff.h.col(prev)) >= 0 ? cand : Vec3(-cand);
    }
  };
  for (Index i = seed + 1; i < n; ++i) continue_to(i, i - 1);
  for (Index i = seed - 1; i >= 0; --i) continue_to(i, i + 1);
  for (Index i = 0; i < n; ++i) {
    ff.k1[i] = qp.col(i).dot(ff.h.col(i));
    if (std::fabs(ff.k1[i]) < hold) ff.valid[i] = 0;
  }
  double k1lead = ff.k1[seed];
  if (k1lead < 0) {
    ff.h = -ff.h;
    ff.k1 = -ff.k1;
  }

  ff.a.resize(3, n);
  for (Index i = 0; i < n; ++i)
    ff.a.col(i) = ff.q.col(i).cross(ff.h.col(i));

  Mat3X hp = derive(ff.h, hs, 1);
  ff.k2.resize(n);
  for (Index i = 0; i < n; ++i) ff.k2[i] = hp.col(i).dot(ff.a.col(i));

  // Torsal bands (in s) before dilation.
  Index i = 0;
  while (i < n) {
    if (ff.valid[i]) {
      ++i;
      continue;
    }
    Index j = i;
    while (j < n && !ff.valid[j]) ++j;
    ff.torsal_windows.emplace_back(ff.grid.at(i), ff.grid.at(j - 1));
    i = j;
  }
  dilate_mask(ff.valid, kMaskDilate);

  // Consistency: <da/ds, h> must equal -k2 on trusted samples.
  Mat3X ap = derive(ff.a, hs, 1);
  double kscale = std::max({1.0, ff.k1.cwiseAbs().maxCoeff(),
                            ff.k2.cwiseAbs().maxCoeff()});
  for (Index k = ff.trim; k < n - ff.trim; ++k) {
    if (!ff.valid[k]) continue;
    if (std::fabs(ap.col(k).dot(ff.h.col(k)) + ff.k2[k]) > 1e-4 * kscale)
      throw Error("ruled_apparatus: frame consistency check failed");
  }
  return ff;
}

CurveFrenetField curve_apparatus(const UniformGrid& grid, const Mat3X& c) {
  if (grid.n < 9 || c.cols() != grid.n)
    throw Error("curve_apparatus: bad grid");
  CurveFrenetField cf;
  cf.grid = grid;
  cf.t = derive(c, grid.h, 1);
  Mat3X cpp = derive(c, grid.h, 2);
  cf.kappa = cpp.colwise().norm();
  double kmax = 0;
  for (Index i = cf.trim; i < grid.n - cf.trim; ++i)
    kmax = std::max(kmax, cf.kappa[i]);
  if (kmax < kCurvEps)
    throw GeometryError(
        "curve_apparatus: curvature ~ 0 (straight segment, frame undefined)");
  for (Index i = cf.trim; i < grid.n - cf.trim; ++i)
    if (cf.kappa[i] < kCurvEps)
      throw GeometryError("curve_apparatus: curvature vanishes on interior");
  cf.n.resize(3, grid.n);
  for (Index i = 0; i < grid.n; ++i) {
    double k = std::max(cf.kappa[i], kCurvEps);
    cf.n.col(i) = cpp.col(i) / k;
  }
  cf.b.resize(3, grid.n);
  for (Index i = 0; i < grid.n; ++i)
    cf.b.col(i) = cf.t.col(i).cross(cf.n.col(i));
  Mat3X np = derive(cf.n, grid.h, 1);
  cf.tau.resize(grid.n);
  for (Index i = 0; i < grid.n; ++i) cf.tau[i] = np.col(i).dot(cf.b.col(i));
  return cf;
}

HelixVerdicts helix_tests(const CurveFrenetField& cf, double tol) {
  HelixVerdicts out;
  const Index n = cf.grid.n;
  std::vector<char> keep(n, 0);
  for (Index i = cf.trim; i < n - cf.trim; ++i) keep[i] = 1;

  double tau_max = 0;
  for (Index i = cf.trim; i < n - cf.trim; ++i)
    tau_max = std::max(tau_max, std::fabs(cf.tau[i]));
  Index usable = 0, interior = 0;
  std::vector<char> keep_ratio = keep;
  for (Index i = cf.trim; i < n - cf.trim; ++i) {
    ++interior;
    if (std::fabs(cf.tau[i]) > std::max(kCurvEps, kMaskFrac * tau_max))
      ++usable;
    else
      keep_ratio[i] = 0;
  }
  if (tau_max < 1e-6 || usable * 4 < interior * 3) {
    out.general_helix = Verdict::NotApplicable;
    out.note = "tau ~ 0, planar";
  } else {
    VecX ratio(n);
    for (Index i = 0; i < n; ++i)
      ratio[i] = cf.tau[i] == 0 ? 0 : cf.kappa[i] / cf.tau[i];
    out.ratio = is_constant(ratio, keep_ratio, tol);
    out.general_helix = out.ratio.is_constant ? Verdict::Yes : Verdict::No;
  }

  // sigma in Wronskian form: no division by kappa or tau.
  VecX kp = derive(cf.kappa, cf.grid.h, 1);
  VecX tp = derive(cf.tau, cf.grid.h, 1);
  VecX sigma(n);
  for (Index i = 0; i < n; ++i) {
    double k2t2 = cf.kappa[i] * cf.kappa[i] + cf.tau[i] * cf.tau[i];
    sigma[i] = (tp[i] * cf.kappa[i] - cf.tau[i] * kp[i]) /
               std::pow(std::max(k2t2, kCurvEps * kCurvEps), 1.5);
  }
  out.sigma = is_constant(sigma, keep, tol);
  out.slant_helix = out.sigma.is_constant ? Verdict::Yes : Verdict::No;
  return out;
}

RuledSurfaceSpec spec_from_field(const StrictionFrameField& ff,
                                 std::string name) {
  return RuledSurfaceSpec::sampled(ff.u_of_s, ff.c, ff.q, std::move(name));
}

Vec3 sample_field(const StrictionFrameField& ff, const Mat3X& field, double s) {
  const Index n = ff.size();
  const int w = 6;
  Index i = static_cast<Index>(std::floor((s - ff.grid.s0) / ff.grid.h));
  Index start = std::clamp<Index>(i - w / 2 + 1, 0, n - w);
  Vec3 acc = Vec3::Zero();
  for (int j = 0; j < w; ++j) {
    double lj = 1;
    double xj = ff.grid.at(start + j);
    for (int k = 0; k < w; ++k) {
      if (k == j) continue;
      lj *= (s - ff.grid.at(start + k)) / (xj - ff.grid.at(start + k));
    }
    acc += lj * field.col(start + j);
  }
  return acc;
}

double s_of_u(const StrictionFrameField& ff, double u) {
  const VecX& t = ff.u_of_s;
  const Index n = t.size();
  if (n < 2) throw Error("s_of_u: empty parameter table");
  const bool inc = t[n - 1] > t[0];
  double lo = inc ? t[0] : t[n - 1], hi = inc ? t[n - 1] : t[0];
  double slack = std::fabs(t[n - 1] - t[0]) / static_cast<double>(n - 1);
  if (u < lo - slack || u > hi + slack)
    throw Error("s_of_u: parameter outside the field's range");
  u = std::clamp(u, lo, hi);
  Index a = 0, b = n - 1;
  while (b - a > 1) {
    Index m = (a + b) / 2;
    if ((t[m] <= u) == inc)
      a = m;
    else
      b = m;
  }
  double frac = t[b] == t[a] ? 0.0 : (u - t[a]) / (t[b] - t[a]);
  return ff.grid.at(a) + frac * ff.grid.h;
}

}  // namespace ruled
