#pragma once

#include <iosfwd>

#include "ruled/slant.hpp"

namespace ruled {

/// Description of a "curvatures" surface file: the surface is
/// synthesized by integrating the frame equations with the given
/// curvature profiles and striction angle phi.
struct CurvatureSpec {
  Expr k1, k2, phi;
  double sa = 0, sb = 1;
  Index samples = 1024;
  std::string name;

  StrictionFrameField integrate() const;
  RuledSurfaceSpec to_spec() const;  // f = c, q = q on the s-grid
};

/// Loaded surface input: either a ready spec or a curvature profile
/// (kept separate so classification can report the synthesis route).
struct SurfaceInput {
  std::optional<RuledSurfaceSpec> spec;
  std::optional<CurvatureSpec> curvatures;

  RuledSurfaceSpec resolve() const;
  std::string name() const;
};

/// Builtin fixtures.  Known names: example-6-1, example-6-2, helicoid,
/// helix-tangent-developable, const-k1-k2, thm-4-2.
SurfaceInput builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// Surface file I/O.  JSON kinds: analytic, sampled (external CSV),
/// builtin, curvatures.  A path ending in .csv is read as a bare
/// sample table; the prefix "builtin:" resolves a builtin by name.
SurfaceInput load_surface(const std::string& path_or_ref);
void save_surface_json(const SurfaceInput& in, const std::string& path);
std::string surface_json(const SurfaceInput& in);

/// Sample CSV (header u,fx,fy,fz,qx,qy,qz, 17 significant digits).
void save_csv(const RuledSurfaceSpec& spec, const std::string& path,
              Index n = 0);
RuledSurfaceSpec load_csv(const std::string& path);

/// Wavefront OBJ export: nu x nv vertices in u-major order, quad
/// faces, deterministic 9-significant-digit formatting.
void export_obj(const RuledSurfaceSpec& spec, double v_min, double v_max,
                Index nu, Index nv, std::ostream& os);
void export_obj(const RuledSurfaceSpec& spec, double v_min, double v_max,
                Index nu, Index nv, const std::string& path);

/// Report serialization (schema-stable JSON with provenance) and the
/// human-readable text rendering.
std::string report_json(const ClassificationReport& rep,
                        const std::string& input_hash);
std::string report_text(const ClassificationReport& rep);

/// FNV-1a hash of a byte string, as fixed-width hex; used to pin
/// builtin fixtures and to record input provenance.
std::string fnv1a_hex(const std::string& bytes);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ruled
