#pragma once

#include "ruled/surface.hpp"

namespace ruled {

/// Full striction-line apparatus of a ruled surface: striction curve,
/// arc-length reparametrization, frame {q, h, a} and invariants k1, k2
/// on a uniform arc-length grid of n samples.
///
/// h is continued through isolated zeros of ||dq/ds|| so the frame
/// stays continuous; k1 is the signed component <dq/ds, h> and the
/// overall sign is fixed so that the k1 of largest magnitude is
/// positive.  Samples where |k1| is below 1e-3 of its maximum (dilated
/// by the stencil radius) are masked out of `valid`.
StrictionFrameField ruled_apparatus(const RuledSurfaceSpec& spec,
                                    Index n = 1024);

/// Classical Frenet apparatus of a unit-speed curve sampled on a
/// uniform arc-length grid.  Throws GeometryError when the curvature
/// vanishes on the interior (frame undefined on straight segments).
CurveFrenetField curve_apparatus(const UniformGrid& grid, const Mat3X& c);

/// Curve-level helix tests: Lancret ratio kappa/tau for general
/// helices, and the sigma function
///   sigma = (tau' kappa - tau kappa') / (kappa^2 + tau^2)^(3/2)
/// for slant helices.
struct HelixVerdicts {
  Verdict general_helix = Verdict::NotApplicable;
  ConstancyVerdict ratio;
  Verdict slant_helix = Verdict::NotApplicable;
  ConstancyVerdict sigma;
  std::string note;
};
HelixVerdicts helix_tests(const CurveFrenetField& cf, double tol);

/// Frame field -> sampled surface spec (f = striction curve, q =
/// ruling); the round-trip partner of integrate_frenet.
RuledSurfaceSpec spec_from_field(const StrictionFrameField& ff,
                                 std::string name = "");

/// Interpolates one of the field's per-sample vector quantities at an
/// arbitrary parameter value (6-point Lagrange on the s-grid).
Vec3 sample_field(const StrictionFrameField& ff, const Mat3X& field, double s);

/// Inverts the field's u_of_s table (strictly monotone): the arc
/// length at which the original parameter equals u.  Throws when u is
/// outside the table's range by more than a grid step.
double s_of_u(const StrictionFrameField& ff, double u);

}  // namespace ruled
