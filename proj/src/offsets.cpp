#include "ruled/offsets.hpp"

#include <cmath>
#include <sstream>

namespace ruled {

RuledSurfaceSpec bertrand_offset(const StrictionFrameField& ff, double alpha,
                                 double R) {
  if (!std::isfinite(alpha) || !std::isfinite(R))
    throw Error("bertrand_offset: non-finite parameters");
  if (std::fabs(std::fabs(alpha) - M_PI / 2) < 1e-12)
    throw GeometryError("bertrand_offset: alpha = +-pi/2 degenerate");
  const Index n = ff.size();
  Mat3X f2(3, n), q2(3, n);
  for (Index i = 0; i < n; ++i) {
    f2.col(i) = ff.c.col(i) + R * ff.h.col(i);
    q2.col(i) = std::cos(alpha) * ff.q.col(i) + std::sin(alpha) * ff.a.col(i);
  }
  std::ostringstream name;
  name << "bertrand(alpha=" << alpha << ",R=" << R << ")";
  return RuledSurfaceSpec::sampled(ff.u_of_s, f2, q2, name.str());
}

RuledSurfaceSpec mannheim_construct(const StrictionFrameField& ff, double beta0,
                                    double R) {
  if (!std::isfinite(beta0) || !std::isfinite(R))
    throw Error("mannheim_construct: non-finite parameters");
  const Index n = ff.size();
  // beta(s) = beta0 - integral_0^s k1, composite trapezoid on the grid.
  VecX beta(n);
  beta[0] = beta0;
  for (Index i = 1; i < n; ++i)
    beta[i] = beta[i - 1] - 0.5 * ff.grid.h * (ff.k1[i - 1] + ff.k1[i]);
  Mat3X f2(3, n), q2(3, n);
  for (Index i = 0; i < n; ++i) {
    f2.col(i) = ff.c.col(i) + R * ff.a.col(i);
    q2.col(i) =
        std::cos(beta[i]) * ff.q.col(i) + std::sin(beta[i]) * ff.h.col(i);
  }
  std::ostringstream name;
  name << "mannheim(beta0=" << beta0 << ",R=" << R << ")";
  return RuledSurfaceSpec::sampled(ff.u_of_s, f2, q2, name.str());
}

bool mannheim_verify(const StrictionFrameField& ff1,
                     const StrictionFrameField& ff2, double tol) {
  const Index n = ff2.size();
  double worst = 1.0;
  Index used = 0;
  for (Index i = ff2.trim; i < n - ff2.trim; ++i) {
    if (!ff2.valid[i]) continue;
    // the offset's original parameter is the source's own parameter;
    // invert the source's u_of_s table to find the matching arc length
    double s1 = s_of_u(ff1, ff2.u_of_s[i]);
    double ss = (s1 - ff1.grid.s0) / ff1.grid.h;
    Index j = static_cast<Index>(std::llround(ss));
    Vec3 a1;
    if (j >= 0 && j < ff1.size() && std::fabs(ss - j) < 1e-9)
      a1 = ff1.a.col(j);
    else
      a1 = sample_field(ff1, ff1.a, s1).normalized();
    worst = std::min(worst, std::fabs(a1.dot(ff2.h.col(i))));
    ++used;
  }
  if (used == 0) throw Error("mannheim_verify: no trusted samples to compare");
  return worst > 1.0 - tol;
}

}  // namespace ruled
