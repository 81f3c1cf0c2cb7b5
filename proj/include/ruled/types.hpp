#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace ruled {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using Mat3X = Eigen::Matrix3Xd;
using Index = Eigen::Index;

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text (expressions, files).
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg), offset(offset) {}
  std::size_t offset;
};

/// Evaluation outside a function's domain (sqrt of a negative, log of
/// a non-positive value, division by zero).
struct EvalError : Error {
  using Error::Error;
};

/// Degenerate geometry: the requested quantity is undefined for this
/// input (cylindrical surface, vanishing curvature, singular point).
struct GeometryError : Error {
  using Error::Error;
};

/// Uniform sample grid s0 + i*h, i = 0..n-1.
struct UniformGrid {
  double s0 = 0.0;
  double h = 1.0;
  Index n = 0;

  double at(Index i) const { return s0 + static_cast<double>(i) * h; }
  double back() const { return at(n - 1); }
  VecX points() const {
    return VecX::LinSpaced(n, s0, s0 + static_cast<double>(n - 1) * h);
  }
};

/// Three-state verdict: theorems with non-vanishing hypotheses must be
/// able to answer "not applicable" rather than "no".
enum class Verdict { Yes, No, NotApplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "not_applicable";
  }
}

/// Constancy decision for a sampled scalar quantity.
/// residual = stddev / (1 + |mean|), so the verdict is scale-aware.
struct ConstancyVerdict {
  bool is_constant = false;
  double mean = 0.0;
  double residual = 0.0;
  double tol = 0.0;
};

/// Striction-line frame field of a ruled surface: samples of the
/// striction curve c, the frame {q, h, a} and the invariants k1, k2
/// on a uniform arc-length grid.
///
/// k1 carries a sign: the frame is continued through isolated zeros of
/// ||dq/ds|| so that h stays continuous (the overall sign is fixed by
/// making the k1 of largest magnitude positive).  `valid` masks samples
/// where |k1| is too small for frame-derived statistics; `trim` is the
/// margin classifiers must exclude at each end.
struct StrictionFrameField {
  UniformGrid grid;           // arc length s
  Mat3X c, q, h, a;           // one column per sample
  VecX k1, k2;
  int trim = 4;
  std::vector<char> valid;    // per-sample usability for statistics
  VecX u_of_s;                // original parameter at each s sample
  std::vector<std::pair<double, double>> torsal_windows;  // in s

  Index size() const { return grid.n; }
};

/// Classical Frenet apparatus of a unit-speed space curve.
struct CurveFrenetField {
  UniformGrid grid;
  Mat3X t, n, b;
  VecX kappa, tau;
  int trim = 4;
};

}  // namespace ruled
