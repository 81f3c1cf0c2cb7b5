#pragma once

#include "ruled/frenet.hpp"

namespace ruled {

/// Bertrand offset of a frame field: striction line displaced along the
/// central normal, ruling rotated by a constant angle in the q-a plane:
///   c2 = c1 + R h1,   q2 = cos(alpha) q1 + sin(alpha) a1.
/// Then q2' = (cos(alpha) k1 - sin(alpha) k2) h1, so the offset shares
/// central normals with the source wherever that factor is non-zero;
/// intervals where it vanishes are torsal for the offset and are
/// reported through the re-derived field's torsal windows.
RuledSurfaceSpec bertrand_offset(const StrictionFrameField& ff, double alpha,
                                 double R);

/// Mannheim partner: q2 = cos(beta) q1 + sin(beta) h1 with
/// beta(s) = beta0 - integral of k1 (composite trapezoid), and
/// c2 = c1 + R a1.  With beta' = -k1 the q1- and h1-components of q2'
/// cancel, leaving q2' = sin(beta) k2 a1: the offset's central normal
/// is +-a1 by construction.
RuledSurfaceSpec mannheim_construct(const StrictionFrameField& ff,
                                    double beta0, double R);

/// True iff min over trusted interior samples of |<a1(s), h2(s)>|
/// exceeds 1 - tol.  Both fields must share the same s-grid step and
/// size (corresponding points by equal parameter).
bool mannheim_verify(const StrictionFrameField& ff1,
                     const StrictionFrameField& ff2, double tol);

}  // namespace ruled
