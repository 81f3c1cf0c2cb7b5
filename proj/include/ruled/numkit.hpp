#pragma once

#include <functional>

#include "ruled/types.hpp"

namespace ruled {

using ScalarFn = std::function<double(double)>;
using CurveFn = std::function<Vec3(double)>;

/// Margin (in samples) at each grid end that classification statistics
/// must exclude: one-sided stencils are noisier than central ones.
inline constexpr int kTrimMargin = 4;

/// Finite-difference weights for the m-th derivative at x0 from
/// arbitrary nodes (Fornberg's algorithm).  Exact on polynomials of
/// degree <= nodes.size()-1.
VecX fd_weights(double x0, const VecX& nodes, int order);

/// Derivative of uniformly sampled data.  Interior stencils are central
/// (widths 5/6/7 for orders 1/2/3, at least fourth-order accurate);
/// stencils near the ends shift one-sided at the same width.
/// Grid must have at least 9 samples.
VecX derive(const VecX& y, double h, int order);
Mat3X derive(const Mat3X& y, double h, int order);

/// Derivative of a callable at a point by a 5-node stencil of spacing
/// `step`, shifted to stay inside [lo, hi].
double fd_point(const ScalarFn& f, double u, double step, double lo, double hi,
                int order = 1);
Vec3 fd_point(const CurveFn& f, double u, double step, double lo, double hi,
              int order = 1);

/// Constancy detection; residual = stddev/(1+|mean|).  Rejects
/// non-finite input.  The masked variants restrict statistics to
/// samples with keep[i] != 0.
ConstancyVerdict is_constant(const VecX& v, double tol);
ConstancyVerdict is_constant(const VecX& v, const std::vector<char>& keep,
                             double tol);

/// Arc-length table of a regular curve on [ua, ub].
struct ArcLengthMap {
  double ua = 0, ub = 0;
  double total = 0;             // curve length
  UniformGrid grid;             // uniform in s, s0 = 0
  VecX u_of_s;                  // parameter value at each s sample
};

/// Reparametrizes `c` by arc length: composite 5-point Gauss-Legendre
/// over 4n panels for the cumulative length, inversion by monotone
/// Hermite interpolation refined with Newton to |residual| < 1e-12.
/// Throws GeometryError if the curve is not regular on the interval.
ArcLengthMap arc_length_reparam(const CurveFn& c, double ua, double ub,
                                Index n);

/// Integrates the ruled-surface Frenet system
///   dq/ds = k1 h,  dh/ds = -k1 q + k2 a,  da/ds = -k2 h,
///   dc/ds = cos(phi) q + sin(phi) a
/// with classical RK4 and per-step Gram-Schmidt re-orthonormalization
/// (q kept, h projected, a = q x h).  frame0 columns are {q0, h0, a0}
/// and must be orthonormal right-handed to 1e-10.
StrictionFrameField integrate_frenet(const ScalarFn& k1, const ScalarFn& k2,
                                     const ScalarFn& phi, const Mat3& frame0,
                                     const Vec3& c0, const UniformGrid& grid);

}  // namespace ruled
