#include "ruled/slant.hpp"

#include <algorithm>
#include <cmath>

namespace ruled {

namespace {

constexpr double kCurvEps = 1e-8;
constexpr double kRelFloor = 1e-3;  // relative floor for "non-zero curvature"

std::vector<char> interior_keep(const StrictionFrameField& ff) {
  std::vector<char> keep(ff.size(), 0);
  for (Index i = ff.trim; i < ff.size() - ff.trim; ++i)
    keep[i] = ff.valid[i];
  return keep;
}

// Applies the "non-zero curvatures" hypothesis: drops samples where
// |x| is below the floor; reports whether enough interior survives
// (>= 75%) for the test to be meaningful.
bool restrict_nonzero(const VecX& x, std::vector<char>& keep) {
  double xmax = 0;
  Index interior = 0;
  for (Index i = 0; i < x.size(); ++i)
    if (keep[i]) {
      xmax = std::max(xmax, std::fabs(x[i]));
      ++interior;
    }
  if (interior == 0) return false;
  double floor = std::max(kCurvEps, kRelFloor * xmax);
  Index kept = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (!keep[i]) continue;
    if (std::fabs(x[i]) < floor)
      keep[i] = 0;
    else
      ++kept;
  }
  return xmax > kCurvEps && kept * 4 >= interior * 3;
}

}  // namespace

TestOutcome q_slant_test(const StrictionFrameField& ff, double tol,
                         double* theta, Vec3* axis) {
  TestOutcome out;
  std::vector<char> keep = interior_keep(ff);
  std::vector<char> keep1 = keep;
  if (!restrict_nonzero(ff.k1, keep1)) {
    out.note = "k1 ~ 0";
    return out;
  }
  if (!restrict_nonzero(ff.k2, keep1)) {
    out.note = "k2 ~ 0";
    return out;
  }
  VecX ratio(ff.size());
  for (Index i = 0; i < ff.size(); ++i)
    ratio[i] = ff.k2[i] == 0 ? 0 : ff.k1[i] / ff.k2[i];
  out.stats = is_constant(ratio, keep1, tol);
  out.verdict = out.stats.is_constant ? Verdict::Yes : Verdict::No;
  if (out.verdict == Verdict::Yes) {
    double th = std::atan(out.stats.mean);
    if (theta) *theta = th;
    if (axis) {
      Vec3 acc = Vec3::Zero();
      for (Index i = 0; i < ff.size(); ++i)
        if (keep1[i])
          acc += std::cos(th) * ff.q.col(i) + std::sin(th) * ff.a.col(i);
      *axis = acc.normalized();
    }
  }
  return out;
}

VecX det_samples(const Mat3X& v, double h) {
  Mat3X d1 = derive(v, h, 1), d2 = derive(v, h, 2), d3 = derive(v, h, 3);
  VecX out(v.cols());
  for (Index i = 0; i < v.cols(); ++i)
    out[i] = d1.col(i).dot(d2.col(i).cross(d3.col(i)));
  return out;
}

namespace {

TestOutcome det_test_impl(const StrictionFrameField& ff, const Mat3X& field,
                          double tol, double dscale, bool degenerate,
                          const char* degenerate_note) {
  TestOutcome out;
  if (degenerate) {
    out.note = degenerate_note;
    return out;
  }
  std::vector<char> keep = interior_keep(ff);
  VecX det = det_samples(field, ff.grid.h);
  double dmax = 0;
  for (Index i = 0; i < ff.size(); ++i)
    if (keep[i]) dmax = std::max(dmax, std::fabs(det[i]));
  out.stats.mean = dmax;
  out.max_residual = dmax / dscale;
  out.stats.residual = out.max_residual;
  out.stats.tol = tol;
  out.stats.is_constant = out.max_residual < tol;
  out.verdict = out.stats.is_constant ? Verdict::Yes : Verdict::No;
  return out;
}

}  // namespace

TestOutcome det_q_test(const StrictionFrameField& ff, double tol) {
  double k1max = ff.k1.cwiseAbs().maxCoeff();
  double k2max = ff.k2.cwiseAbs().maxCoeff();
  double dscale = std::max(k1max * k1max * k1max, 1e-300) *
                  std::max(1.0, k2max * k2max);
  return det_test_impl(ff, ff.q, tol, dscale, k1max < kCurvEps,
                       "degenerate: k1 ~ 0, non-zero-curvature hypothesis violated");
}

TestOutcome det_a_test(const StrictionFrameField& ff, double tol) {
  double k2max = ff.k2.cwiseAbs().maxCoeff();
  double dscale = std::max(1.0, std::pow(k2max, 5));
  return det_test_impl(ff, ff.a, tol, dscale, k2max < kCurvEps,
                       "degenerate: k2 ~ 0, non-zero-curvature hypothesis violated");
}

TestOutcome eq15_residual(const StrictionFrameField& ff, double tol) {
  TestOutcome out;
  std::vector<char> keep = interior_keep(ff);
  std::vector<char> keep1 = keep;
  if (!restrict_nonzero(ff.k1, keep1)) {
    out.note = "k1 ~ 0";
    return out;
  }
  const double h = ff.grid.h;
  Mat3X q1 = derive(ff.q, h, 1), q3 = derive(ff.q, h, 3);
  Mat3X h1 = derive(ff.h, h, 1);
  VecX k1p = derive(ff.k1, h, 1), k1pp = derive(ff.k1, h, 2);
  double worst = 0;
  for (Index i = 0; i < ff.size(); ++i) {
    if (!keep1[i]) continue;
    double m = k1pp[i] / ff.k1[i] -
               (ff.k1[i] * ff.k1[i] + ff.k2[i] * ff.k2[i]);
    Vec3 r = q3.col(i) - m * q1.col(i) - 3.0 * k1p[i] * h1.col(i);
    worst = std::max(worst, r.norm() / std::max(1.0, q3.col(i).norm()));
  }
  out.max_residual = worst;
  out.stats.residual = worst;
  out.stats.tol = tol;
  out.stats.is_constant = worst < tol;
  out.verdict = out.stats.is_constant ? Verdict::Yes : Verdict::No;
  return out;
}

TestOutcome h_slant_test(const StrictionFrameField& ff, double tol,
                         double* sigma_mean, Vec3* axis) {
  TestOutcome out;
  std::vector<char> keep = interior_keep(ff);
  double k1max = ff.k1.cwiseAbs().maxCoeff();
  double k2max = ff.k2.cwiseAbs().maxCoeff();
  if (std::max(k1max, k2max) < kCurvEps) {
    out.note = "k1^2 + k2^2 ~ 0";
    return out;
  }
  const double h = ff.grid.h;
  VecX k1p = derive(ff.k1, h, 1), k2p = derive(ff.k2, h, 1);
  VecX sigma(ff.size());
  for (Index i = 0; i < ff.size(); ++i) {
    double mag = ff.k1[i] * ff.k1[i] + ff.k2[i] * ff.k2[i];
    sigma[i] = (k2p[i] * ff.k1[i] - ff.k2[i] * k1p[i]) /
               std::pow(std::max(mag, kCurvEps * kCurvEps), 1.5);
  }
  out.stats = is_constant(sigma, keep, tol);
  out.verdict = out.stats.is_constant ? Verdict::Yes : Verdict::No;
  if (sigma_mean) *sigma_mean = out.stats.mean;
  if (out.verdict == Verdict::Yes && axis) {
    double d = out.stats.mean;
    Vec3 acc = Vec3::Zero();
    for (Index i = 0; i < ff.size(); ++i) {
      if (!keep[i]) continue;
      double root =
          std::sqrt(ff.k1[i] * ff.k1[i] + ff.k2[i] * ff.k2[i]);
      acc += ff.k2[i] / root * ff.q.col(i) + d * ff.h.col(i) +
             ff.k1[i] / root * ff.a.col(i);
    }
    *axis = acc.normalized();
  }
  return out;
}

double k2_closed_form(double theta, double s) {
  if (!(theta > 0) || theta >= M_PI / 2 - 1e-12)
    throw GeometryError("k2_closed_form: theta = pi/2 excluded (need 0 < theta < pi/2)");
  double t = std::tan(theta);
  if (std::fabs(s) >= t)
    throw GeometryError("k2_closed_form: |s| >= tan(theta), outside domain");
  return s / std::sqrt(t * t - s * s);
}

double thm42_axis_check(const StrictionFrameField& ff, double theta,
                        bool flip_sign) {
  std::vector<char> keep = interior_keep(ff);
  for (Index i = 0; i < ff.size(); ++i)
    if (keep[i] && std::fabs(ff.k1[i] - 1.0) > 1e-6)
      throw GeometryError("thm42_axis_check: hypothesis k1 == 1 violated");
  double t2 = std::tan(theta) * std::tan(theta);
  double sign = flip_sign ? -1.0 : 1.0;
  Mat3X u(3, ff.size());
  for (Index i = 0; i < ff.size(); ++i) {
    double s = ff.u_of_s[i];
    double rad = t2 - s * s;
    if (rad < 0)
      throw GeometryError("thm42_axis_check: |s| > tan(theta) on the grid");
    u.col(i) = std::cos(theta) *
               (s * ff.q.col(i) + ff.h.col(i) +
                sign * std::sqrt(rad) * ff.a.col(i));
  }
  Mat3X up = derive(u, ff.grid.h, 1);
  double worst = 0;
  for (Index i = 0; i < ff.size(); ++i)
    if (keep[i]) worst = std::max(worst, up.col(i).norm());
  return worst;
}

TestOutcome a_slant_test(const StrictionFrameField& ff, double tol,
                         double* theta, Vec3* axis) {
  TestOutcome out = q_slant_test(ff, tol, theta, axis);
  out.note = out.note.empty() ? "delegated to q-slant test"
                              : out.note + "; delegated to q-slant test";
  return out;
}

ClassificationReport classify(const StrictionFrameField& ff,
                              const SlantTolerances& tol,
                              const StrictionData* striction) {
  ClassificationReport rep;
  rep.tolerances = tol;
  rep.samples_used = ff.size();
  rep.torsal_windows = ff.torsal_windows;

  std::vector<char> keep = interior_keep(ff);
  double k1max = 0, k2max = 0;
  for (Index i = 0; i < ff.size(); ++i) {
    if (!keep[i]) continue;
    k1max = std::max(k1max, std::fabs(ff.k1[i]));
    k2max = std::max(k2max, std::fabs(ff.k2[i]));
  }
  rep.conoid = (k1max > kCurvEps && k2max < 1e-6 * std::max(1.0, k1max))
                   ? Verdict::Yes
                   : Verdict::No;

  // Developability: Def 2.1 (distribution parameter) when striction
  // data is available, Thm 2.1 (c' == q along the striction line)
  // otherwise.
  if (striction) {
    rep.developable = striction->developable ? Verdict::Yes : Verdict::No;
  } else {
    Mat3X cp = derive(ff.c, ff.grid.h, 1);
    double worst = 0;
    for (Index i = ff.trim; i < ff.size() - ff.trim; ++i) {
      Vec3 tvec = cp.col(i).normalized();
      worst = std::max(worst, std::min((tvec - ff.q.col(i)).norm(),
                                       (tvec + ff.q.col(i)).norm()));
    }
    rep.developable = worst < 1e-5 ? Verdict::Yes : Verdict::No;
  }

  double theta;
  Vec3 axis;
  TestOutcome ratio = q_slant_test(ff, tol.ratio, &theta, &axis);
  if (rep.conoid == Verdict::Yes && ratio.verdict == Verdict::NotApplicable)
    ratio.note = "k2 ~ 0, conoid";
  rep.tests["ratio"] = ratio;
  rep.q_slant = ratio.verdict;
  if (ratio.verdict == Verdict::Yes) {
    rep.theta_q = theta;
    rep.axis_q = axis;
  }
  rep.a_slant = rep.q_slant;
  rep.tests["a_slant"] = a_slant_test(ff, tol.ratio);

  rep.tests["det_q"] = det_q_test(ff, tol.det);
  rep.tests["det_a"] = det_a_test(ff, tol.det);
  rep.tests["eq15"] = eq15_residual(ff, tol.eq15);

  double sigma_mean;
  Vec3 axis_h;
  TestOutcome sig = h_slant_test(ff, tol.sigma, &sigma_mean, &axis_h);
  rep.tests["sigma"] = sig;
  rep.h_slant = sig.verdict;
  if (sig.verdict != Verdict::NotApplicable) rep.sigma_mean = sigma_mean;
  if (sig.verdict == Verdict::Yes) rep.axis_h = axis_h;

  if (rep.developable == Verdict::Yes) {
    try {
      CurveFrenetField cf = curve_apparatus(ff.grid, ff.c);
      HelixVerdicts hx = helix_tests(cf, std::max(tol.ratio, tol.sigma));
      rep.striction_helix = hx;
      if (hx.general_helix != Verdict::NotApplicable &&
          rep.q_slant != Verdict::NotApplicable &&
          hx.general_helix != rep.q_slant)
        rep.warnings.push_back(
            "developable cross-check disagreement: striction-line "
            "general-helix verdict differs from the q-slant verdict");
      if (hx.slant_helix != Verdict::NotApplicable &&
          rep.h_slant != Verdict::NotApplicable &&
          hx.slant_helix != rep.h_slant)
        rep.warnings.push_back(
            "developable cross-check disagreement: striction-line "
            "slant-helix verdict differs from the h-slant verdict");
    } catch (const GeometryError& e) {
      rep.warnings.push_back(std::string("striction-line helix tests skipped: ") +
                             e.what());
    }
  }
  return rep;
}

ClassificationReport classify(const RuledSurfaceSpec& spec,
                              const SlantTolerances& tol) {
  StrictionData sd = striction_curve(spec, tol.samples);
  StrictionFrameField ff = ruled_apparatus(spec, tol.samples);
  ClassificationReport rep = classify(ff, tol, &sd);
  rep.input_name = spec.name();
  for (auto& w : sd.torsal_windows)
    rep.torsal_windows.push_back(w);  // u-ranges appended after s-ranges
  return rep;
}

}  // namespace ruled
