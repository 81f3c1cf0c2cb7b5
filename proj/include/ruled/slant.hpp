#pragma once

#include <map>
#include <optional>

#include "ruled/frenet.hpp"

namespace ruled {

struct SlantTolerances {
  double ratio = 1e-3;   // constancy of k1/k2
  double sigma = 1e-3;   // constancy of the sigma function
  double det = 1e-6;     // determinant zero-tests, scaled
  double eq15 = 1e-2;    // third-derivative identity residual
  double axis = 1e-3;    // axis drift
  Index samples = 1024;
};

/// Outcome of one slant test: three-state verdict plus the statistics
/// that produced it.
struct TestOutcome {
  Verdict verdict = Verdict::NotApplicable;
  ConstancyVerdict stats;
  double max_residual = 0;  // for residual-style tests
  std::string note;
};

struct ClassificationReport {
  std::string input_name;
  bool cylindrical = false;
  Verdict developable = Verdict::NotApplicable;
  Verdict conoid = Verdict::NotApplicable;
  Verdict q_slant = Verdict::NotApplicable;
  Verdict h_slant = Verdict::NotApplicable;
  Verdict a_slant = Verdict::NotApplicable;  // == q_slant by definition

  std::optional<double> theta_q;  // radians, set iff q_slant
  std::optional<Vec3> axis_q;
  std::optional<Vec3> axis_h;
  std::optional<double> sigma_mean;

  std::map<std::string, TestOutcome> tests;  // ratio, det_q, det_a, eq15, sigma
  std::optional<HelixVerdicts> striction_helix;  // run when developable
  std::vector<std::pair<double, double>> torsal_windows;
  std::vector<std::string> warnings;
  SlantTolerances tolerances;
  Index samples_used = 0;
};

/// Ratio test (k1/k2 constant).  On success also reports
/// theta = atan(mean ratio) and the axis cos(theta) q + sin(theta) a.
TestOutcome q_slant_test(const StrictionFrameField& ff, double tol,
                         double* theta = nullptr, Vec3* axis = nullptr);

/// det(q', q'', q''') zero-test, scaled by (max k1)^3 max(1, max k2^2).
TestOutcome det_q_test(const StrictionFrameField& ff, double tol);

/// det(a', a'', a''') zero-test, scaled by max(1, max |k2|^5).
TestOutcome det_a_test(const StrictionFrameField& ff, double tol);

/// Residual of q''' = m q' + 3 k1' h' with m = k1''/k1 - (k1^2 + k2^2).
TestOutcome eq15_residual(const StrictionFrameField& ff, double tol);

/// sigma-function test (h-slant).  sigma is computed in Wronskian form
///   (k2' k1 - k2 k1') / (k1^2 + k2^2)^(3/2)
/// and the axis from the mean of (k2 q + d (k1^2+k2^2)^(1/2) h + k1 a).
TestOutcome h_slant_test(const StrictionFrameField& ff, double tol,
                         double* sigma_mean = nullptr, Vec3* axis = nullptr);

/// Closed-form second curvature of an h-slant surface with k1 == 1:
/// k2(s) = s / sqrt(tan(theta)^2 - s^2) (positive branch).
double k2_closed_form(double theta, double s);

/// Drift max ||du/ds|| of the axis
///   u(s) = cos(theta) (s q + h + sqrt(tan(theta)^2 - s^2) a)
/// over the interior; requires k1 == 1 within 1e-6.  `flip_sign`
/// selects the wrong branch pairing (for contrast tests).
double thm42_axis_check(const StrictionFrameField& ff, double theta,
                        bool flip_sign = false);

/// a-slant delegates to the q-slant test.
TestOutcome a_slant_test(const StrictionFrameField& ff, double tol,
                         double* theta = nullptr, Vec3* axis = nullptr);

/// Full classification of a frame field / surface spec.
ClassificationReport classify(const StrictionFrameField& ff,
                              const SlantTolerances& tol = {},
                              const StrictionData* striction = nullptr);
ClassificationReport classify(const RuledSurfaceSpec& spec,
                              const SlantTolerances& tol = {});

}  // namespace ruled
