#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ruled/offsets.hpp"
#include "ruled/workbench.hpp"

namespace {

using namespace ruled;

std::pair<double, double> parse_range(const std::string& text) {
  auto pos = text.find(':');
  if (pos == std::string::npos)
    throw Error("range must be A:B, got '" + text + "'");
  return {std::stod(text.substr(0, pos)), std::stod(text.substr(pos + 1))};
}

std::string input_hash(const std::string& ref, const SurfaceInput& in) {
  if (ref.rfind("builtin:", 0) == 0 || in.curvatures ||
      (in.spec && in.spec->analytic_base())) {
    try {
      return fnv1a_hex(surface_json(in));
    } catch (const Error&) {
      // sampled builtins fall through to hashing the reference
    }
  }
  std::ifstream f(ref, std::ios::binary);
  if (f) {
    std::ostringstream ss;
    ss << f.rdbuf();
    return fnv1a_hex(ss.str());
  }
  return fnv1a_hex(ref);
}

StrictionFrameField field_of(const SurfaceInput& in, Index samples) {
  if (in.curvatures) return in.curvatures->integrate();
  return ruled_apparatus(*in.spec, samples);
}

int run(int argc, char** argv) {
  CLI::App app{"ruled surface classifier and toolbox"};
  app.require_subcommand(1);

  // classify
  auto* cls = app.add_subcommand("classify", "classify a ruled surface");
  std::string cls_input, cls_report;
  SlantTolerances tol;
  bool cls_text = false;
  cls->add_option("--input", cls_input, "surface file, CSV, or builtin:NAME")
      ->required();
  cls->add_option("--tol-ratio", tol.ratio, "ratio-constancy tolerance");
  cls->add_option("--tol-sigma", tol.sigma, "sigma-constancy tolerance");
  cls->add_option("--tol-det", tol.det, "determinant zero-test tolerance");
  cls->add_option("--samples", tol.samples, "arc-length grid size");
  cls->add_option("--report", cls_report, "write JSON report here");
  cls->add_flag("--text", cls_text, "print a text report");

  // generate
  auto* gen = app.add_subcommand("generate",
                                 "synthesize a surface from curvature profiles");
  std::string gen_k1, gen_k2, gen_phi = "0", gen_range, gen_out;
  double gen_theta = -1;
  Index gen_samples = 1024;
  gen->add_option("--k1", gen_k1, "first curvature expression")->required();
  gen->add_option("--k2", gen_k2, "second curvature expression");
  gen->add_option("--theta", gen_theta,
                  "build k2 from the closed form s/sqrt(tan(theta)^2-s^2)");
  gen->add_option("--phi", gen_phi, "striction angle expression");
  gen->add_option("--range", gen_range, "parameter range A:B")->required();
  gen->add_option("--samples", gen_samples, "sample count");
  gen->add_option("--out", gen_out, "output file (.json or .csv)")->required();

  // export
  auto* exp = app.add_subcommand("export", "export a surface mesh (OBJ)");
  std::string exp_input, exp_vrange, exp_out;
  Index exp_nu = 64, exp_nv = 8;
  exp->add_option("--input", exp_input, "surface input")->required();
  exp->add_option("--v-range", exp_vrange, "ruling parameter range A:B")
      ->required();
  exp->add_option("--nu", exp_nu, "samples along the base curve");
  exp->add_option("--nv", exp_nv, "samples along the rulings");
  exp->add_option("--out", exp_out, "output OBJ path")->required();

  // offset
  auto* off = app.add_subcommand("offset", "Bertrand / Mannheim offsets");
  std::string off_input, off_kind, off_out;
  double off_alpha = 0, off_dist = 0, off_beta0 = 0;
  Index off_samples = 1024;
  off->add_option("--input", off_input, "surface input")->required();
  off->add_option("--kind", off_kind, "bertrand or mannheim")->required();
  off->add_option("--alpha", off_alpha, "Bertrand director rotation (rad)");
  off->add_option("--dist", off_dist, "striction-line offset distance");
  off->add_option("--beta0", off_beta0, "Mannheim initial phase (rad)");
  off->add_option("--samples", off_samples, "arc-length grid size");
  off->add_option("--out", off_out, "output CSV path")->required();

  // builtin
  auto* blt = app.add_subcommand("builtin", "builtin fixture surfaces");
  std::string blt_name, blt_out;
  bool blt_list = false;
  blt->add_flag("--list", blt_list, "list builtin names");
  blt->add_option("--name", blt_name, "builtin name");
  blt->add_option("--out", blt_out, "write the surface file here");

  CLI11_PARSE(app, argc, argv);

  if (cls->parsed()) {
    SurfaceInput in = load_surface(cls_input);
    ClassificationReport rep = classify(in.resolve(), tol);
    if (rep.input_name.empty()) rep.input_name = in.name();
    if (!cls_report.empty()) {
      std::ofstream f(cls_report, std::ios::binary);
      if (!f) throw Error("cannot write '" + cls_report + "'");
      f << report_json(rep, input_hash(cls_input, in));
    }
    if (cls_text)
      std::cout << report_text(rep);
    else if (cls_report.empty())
      std::cout << report_json(rep, input_hash(cls_input, in));
    return 0;
  }

  if (gen->parsed()) {
    auto [a, b] = parse_range(gen_range);
    if (gen_theta >= 0) {
      if (!gen_k2.empty())
        throw Error("generate: give either --k2 or --theta, not both");
      // validity check rejects theta = pi/2 and out-of-domain ranges
      k2_closed_form(gen_theta, a);
      k2_closed_form(gen_theta, b);
      double t = std::tan(gen_theta);
      char buf[64];
      std::snprintf(buf, sizeof buf, "s/sqrt(%.17g-s^2)", t * t);
      gen_k2 = buf;
    } else if (gen_k2.empty()) {
      throw Error("generate: --k2 or --theta required");
    }
    CurvatureSpec cs{Expr::parse(gen_k1), Expr::parse(gen_k2),
                     Expr::parse(gen_phi), a, b, gen_samples, ""};
    SurfaceInput in;
    in.curvatures = cs;
    if (gen_out.size() > 4 && gen_out.substr(gen_out.size() - 4) == ".csv")
      save_csv(cs.to_spec(), gen_out);
    else
      save_surface_json(in, gen_out);
    return 0;
  }

  if (exp->parsed()) {
    auto [va, vb] = parse_range(exp_vrange);
    SurfaceInput in = load_surface(exp_input);
    export_obj(in.resolve(), va, vb, exp_nu, exp_nv, exp_out);
    return 0;
  }

  if (off->parsed()) {
    SurfaceInput in = load_surface(off_input);
    StrictionFrameField ff = field_of(in, off_samples);
    RuledSurfaceSpec out;
    if (off_kind == "bertrand")
      out = bertrand_offset(ff, off_alpha, off_dist);
    else if (off_kind == "mannheim")
      out = mannheim_construct(ff, off_beta0, off_dist);
    else
      throw Error("offset: --kind must be bertrand or mannheim");
    save_csv(out, off_out);
    return 0;
  }

  if (blt->parsed()) {
    if (blt_list) {
      for (const auto& n : builtin_names()) std::cout << n << "\n";
      return 0;
    }
    if (blt_name.empty()) throw Error("builtin: --list or --name required");
    SurfaceInput in = builtin(blt_name);
    if (blt_out.empty()) {
      std::cout << surface_json(in);
    } else if (blt_out.size() > 4 &&
               blt_out.substr(blt_out.size() - 4) == ".csv") {
      save_csv(in.resolve(), blt_out);
    } else {
      save_surface_json(in, blt_out);
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ruled::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
