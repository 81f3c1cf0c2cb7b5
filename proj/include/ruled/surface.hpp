#pragma once

#include <array>
#include <memory>
#include <optional>

#include "ruled/expr.hpp"
#include "ruled/numkit.hpp"

namespace ruled {

/// Sampled curve table: columns of f and q at increasing parameter
/// values.  Evaluation between samples is local 6-point Lagrange
/// interpolation.
struct SampleTable {
  VecX u;
  Mat3X f;
  Mat3X q;

  Vec3 eval_f(double x) const;
  Vec3 eval_q(double x) const;
};

/// Ruled surface r(u, v) = f(u) + v q(u).
///
/// The director is normalized on ingest: director() returns q/||q|| and
/// requires ||q|| > 1e-9.  A spec is an immutable value; transformed
/// and reparametrized copies share the underlying source.
class RuledSurfaceSpec {
 public:
  RuledSurfaceSpec() = default;

  static RuledSurfaceSpec analytic(const std::array<Expr, 3>& base,
                                   const std::array<Expr, 3>& director,
                                   double ua, double ub, Index samples = 1024,
                                   std::string name = "");
  static RuledSurfaceSpec sampled(VecX u, Mat3X f, Mat3X q,
                                  std::string name = "");

  Vec3 base(double u) const;
  Vec3 director(double u) const;  // unit
  Vec3 point(double u, double v) const { return base(u) + v * director(u); }

  double ua() const { return ua_; }
  double ub() const { return ub_; }
  Index samples() const { return samples_; }
  const std::string& name() const { return name_; }

  /// Rigid motion: f -> R f + t, q -> R q.
  RuledSurfaceSpec transformed(const Mat3& rot, const Vec3& shift) const;
  /// Uniform scaling of the base curve only: f -> lambda f.
  RuledSurfaceSpec scaled(double lambda) const;
  /// Parameter substitution u -> alpha u + beta (range adjusted).
  RuledSurfaceSpec reparametrized(double alpha, double beta) const;

  // Serialization payloads; empty when the spec was built another way.
  const std::array<Expr, 3>* analytic_base() const;
  const std::array<Expr, 3>* analytic_director() const;
  std::shared_ptr<const SampleTable> table() const { return table_; }

 private:
  CurveFn f_, qraw_;
  double ua_ = 0, ub_ = 1;
  Index samples_ = 1024;
  std::string name_;
  std::shared_ptr<const std::array<Expr, 3>> base_exprs_, dir_exprs_;
  std::shared_ptr<const SampleTable> table_;
};

/// Striction apparatus over the surface's u-grid.
struct StrictionData {
  VecX u;                     // sample parameters
  Mat3X c;                    // striction curve samples
  VecX v0;                    // strictional distance
  VecX d;                     // distribution parameter (where defined)
  std::vector<char> valid;    // 0 where the ruling is near-torsal in q'
  bool developable = false;
  double scale = 1.0;         // max ||f'|| over the grid
  std::vector<std::pair<double, double>> torsal_windows;  // u-ranges
};

/// Distribution parameter d = det(f', q, q') / <q', q'> per sample.
/// Throws GeometryError for cylindrical surfaces (q' ~ 0 everywhere).
VecX distribution_parameter(const RuledSurfaceSpec& spec, const VecX& ugrid);

/// Unit surface normal at (u, v); throws at singular points.
Vec3 surface_normal(const RuledSurfaceSpec& spec, double u, double v);

/// Asymptotic normal (central tangent) a = (q x q') / ||q'||.
Vec3 asymptotic_normal(const RuledSurfaceSpec& spec, double u);

/// Striction curve c = f - (<q', f'>/<q', q'>) q with strictional
/// distance, distribution parameter and developability flag.
/// Isolated near-torsal rulings (q' ~ 0 inside an otherwise regular
/// surface) get v0 filled by interpolation from valid neighbours and
/// are reported in torsal_windows; a surface with q' ~ 0 everywhere is
/// cylindrical and throws GeometryError.
StrictionData striction_curve(const RuledSurfaceSpec& spec, Index n);

/// Striction-curve evaluator at arbitrary u (v0 interpolated from a
/// fine precomputed grid); used by the arc-length pipeline.
CurveFn striction_evaluator(const RuledSurfaceSpec& spec, Index n);

}  // namespace ruled
