#include "ruled/workbench.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ruled {

using nlohmann::json;

StrictionFrameField CurvatureSpec::integrate() const {
  if (!(sb > sa)) throw Error("curvatures: degenerate range");
  if (samples < 64) throw Error("curvatures: need samples >= 64");
  UniformGrid grid{sa, (sb - sa) / static_cast<double>(samples - 1), samples};
  Expr k1e = k1, k2e = k2, phie = phi;
  return integrate_frenet([k1e](double s) { return k1e.eval(s); },
                          [k2e](double s) { return k2e.eval(s); },
                          [phie](double s) { return phie.eval(s); },
                          Mat3::Identity(), Vec3::Zero(), grid);
}

RuledSurfaceSpec CurvatureSpec::to_spec() const {
  StrictionFrameField ff = integrate();
  return spec_from_field(ff, name);
}

RuledSurfaceSpec SurfaceInput::resolve() const {
  if (spec) return *spec;
  if (curvatures) return curvatures->to_spec();
  throw Error("empty surface input");
}

std::string SurfaceInput::name() const {
  if (spec) return spec->name();
  if (curvatures) return curvatures->name;
  return "";
}

namespace {

std::array<Expr, 3> parse3(const std::vector<std::string>& texts,
                           const std::string& var) {
  if (texts.size() != 3) throw Error("surface file: need 3 component expressions");
  return {Expr::parse(texts[0], var), Expr::parse(texts[1], var),
          Expr::parse(texts[2], var)};
}

SurfaceInput analytic_input(const std::vector<std::string>& base,
                            const std::vector<std::string>& dir, double a,
                            double b, Index samples, const std::string& name,
                            const std::string& var = "s") {
  SurfaceInput in;
  in.spec = RuledSurfaceSpec::analytic(parse3(base, var), parse3(dir, var), a,
                                       b, samples, name);
  return in;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"example-6-1", "example-6-2",  "helicoid",
          "helix-tangent-developable", "const-k1-k2", "thm-4-2"};
}

SurfaceInput builtin(const std::string& name) {
  if (name == "example-6-1") {
    return analytic_input(
        {"(1/3)*(1+s)^(3/2)", "(1/3)*(1-s)^(3/2)", "s/sqrt(2)"},
        {"(1/2)*(1+s)^(1/2)", "-(1/2)*(1-s)^(1/2)", "1/sqrt(2)"}, -0.5, 0.5,
        1024, name);
  }
  if (name == "example-6-2") {
    return analytic_input(
        {"25/612*sin(18*s) - 9/1700*sin(50*s)",
         "-25/612*cos(18*s) + 9/1700*cos(50*s)", "15/272*sin(16*s)"},
        {"50/68*cos(18*s) - 18/68*cos(50*s)",
         "50/68*sin(18*s) - 18/68*sin(50*s)", "15/17*cos(16*s)"},
        0.02, 0.18, 1024, name);
  }
  if (name == "helicoid") {
    return analytic_input({"0", "0", "s"}, {"cos(s)", "sin(s)", "0"}, 0.0,
                          6.283185307179586, 1024, name);
  }
  if (name == "helix-tangent-developable") {
    return analytic_input(
        {"cos(s/sqrt(2))", "sin(s/sqrt(2))", "s/sqrt(2)"},
        {"-sin(s/sqrt(2))/sqrt(2)", "cos(s/sqrt(2))/sqrt(2)", "1/sqrt(2)"},
        0.0, 4.0, 1024, name);
  }
  if (name == "const-k1-k2") {
    SurfaceInput in;
    CurvatureSpec cs{Expr::parse("2"), Expr::parse("1"), Expr::parse("0"),
                     0.0, 3.0, 2000, name};
    in.curvatures = cs;
    return in;
  }
  if (name == "thm-4-2") {
    SurfaceInput in;
    CurvatureSpec cs{Expr::parse("1"), Expr::parse("s/sqrt(1-s^2)"),
                     Expr::parse("0"), -0.6, 0.6, 1024, name};
    in.curvatures = cs;
    return in;
  }
  throw Error("unknown builtin surface '" + name + "'");
}

namespace {

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

SurfaceInput load_surface(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) return builtin(ref.substr(8));
  if (ends_with(ref, ".csv")) {
    SurfaceInput in;
    in.spec = load_csv(ref);
    return in;
  }
  json j;
  try {
    j = json::parse(slurp(ref));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("surface file: ") + e.what(), e.byte);
  }
  std::string kind = j.at("kind").get<std::string>();
  std::string name = j.value("name", "");
  if (kind == "builtin") return builtin(j.at("name").get<std::string>());
  if (kind == "sampled") {
    SurfaceInput in;
    in.spec = load_csv(j.at("path").get<std::string>());
    return in;
  }
  if (kind == "analytic") {
    auto range = j.at("range");
    Index samples = j.value("samples", Index(1024));
    if (samples < 64) throw Error("surface file: samples must be >= 64");
    return analytic_input(j.at("base").get<std::vector<std::string>>(),
                          j.at("director").get<std::vector<std::string>>(),
                          range.at(0).get<double>(), range.at(1).get<double>(),
                          samples, name, j.value("param", "s"));
  }
  if (kind == "curvatures") {
    auto range = j.at("range");
    std::string var = j.value("param", "s");
    CurvatureSpec cs{Expr::parse(j.at("k1").get<std::string>(), var),
                     Expr::parse(j.at("k2").get<std::string>(), var),
                     Expr::parse(j.value("phi", "0"), var),
                     range.at(0).get<double>(), range.at(1).get<double>(),
                     j.value("samples", Index(1024)), name};
    if (cs.samples < 64) throw Error("surface file: samples must be >= 64");
    SurfaceInput in;
    in.curvatures = cs;
    return in;
  }
  throw Error("surface file: unknown kind '" + kind + "'");
}

std::string surface_json(const SurfaceInput& in) {
  json j;
  if (in.curvatures) {
    const CurvatureSpec& cs = *in.curvatures;
    j["kind"] = "curvatures";
    j["k1"] = cs.k1.text();
    j["k2"] = cs.k2.text();
    j["phi"] = cs.phi.text();
    j["range"] = {cs.sa, cs.sb};
    j["samples"] = cs.samples;
    if (!cs.name.empty()) j["name"] = cs.name;
  } else if (in.spec && in.spec->analytic_base()) {
    j["kind"] = "analytic";
    j["param"] = "s";
    json base = json::array(), dir = json::array();
    for (int k = 0; k < 3; ++k) {
      base.push_back((*in.spec->analytic_base())[k].text());
      dir.push_back((*in.spec->analytic_director())[k].text());
    }
    j["base"] = base;
    j["director"] = dir;
    j["range"] = {in.spec->ua(), in.spec->ub()};
    j["samples"] = in.spec->samples();
    if (!in.spec->name().empty()) j["name"] = in.spec->name();
  } else {
    throw Error(
        "surface_json: sampled surfaces serialize to CSV, not JSON");
  }
  return j.dump(2) + "\n";
}

void save_surface_json(const SurfaceInput& in, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << surface_json(in);
}

void save_csv(const RuledSurfaceSpec& spec, const std::string& path, Index n) {
  if (n == 0) n = spec.samples();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << "u,fx,fy,fz,qx,qy,qz\n";
  char buf[512];
  for (Index i = 0; i < n; ++i) {
    double u = spec.ua() + (spec.ub() - spec.ua()) * static_cast<double>(i) /
                               static_cast<double>(n - 1);
    Vec3 fv = spec.base(u), qv = spec.director(u);
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", u, fv[0],
                  fv[1], fv[2], qv[0], qv[1], qv[2]);
    f << buf;
  }
}

RuledSurfaceSpec load_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line.rfind("u,fx,fy,fz,qx,qy,qz", 0) != 0)
    throw ParseError("sample CSV: missing header u,fx,fy,fz,qx,qy,qz", 0);
  std::vector<double> us;
  std::vector<Vec3> fs, qs;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[7];
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &v[0], &v[1],
                    &v[2], &v[3], &v[4], &v[5], &v[6]) != 7)
      throw ParseError("sample CSV: bad row at line " + std::to_string(lineno),
                       lineno);
    us.push_back(v[0]);
    fs.emplace_back(v[1], v[2], v[3]);
    qs.emplace_back(v[4], v[5], v[6]);
  }
  Index n = static_cast<Index>(us.size());
  if (n < 9) throw Error("sample CSV: need at least 9 rows");
  VecX u(n);
  Mat3X fm(3, n), qm(3, n);
  for (Index i = 0; i < n; ++i) {
    u[i] = us[i];
    fm.col(i) = fs[i];
    qm.col(i) = qs[i];
  }
  return RuledSurfaceSpec::sampled(std::move(u), std::move(fm), std::move(qm),
                                   path);
}

void export_obj(const RuledSurfaceSpec& spec, double v_min, double v_max,
                Index nu, Index nv, std::ostream& os) {
  if (nu < 2 || nv < 2) throw Error("export_obj: need nu, nv >= 2");
  char buf[256];
  for (Index i = 0; i < nu; ++i) {
    double u = spec.ua() + (spec.ub() - spec.ua()) * static_cast<double>(i) /
                               static_cast<double>(nu - 1);
    for (Index j = 0; j < nv; ++j) {
      double v = v_min + (v_max - v_min) * static_cast<double>(j) /
                             static_cast<double>(nv - 1);
      Vec3 p = spec.point(u, v);
      std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", p[0], p[1], p[2]);
      os << buf;
    }
  }
  for (Index i = 0; i + 1 < nu; ++i) {
    for (Index j = 0; j + 1 < nv; ++j) {
      long long a = i * nv + j + 1;  // 1-based, u-major
      long long b = (i + 1) * nv + j + 1;
      std::snprintf(buf, sizeof buf, "f %lld %lld %lld %lld\n", a, b, b + 1,
                    a + 1);
      os << buf;
    }
  }
}

void export_obj(const RuledSurfaceSpec& spec, double v_min, double v_max,
                Index nu, Index nv, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  export_obj(spec, v_min, v_max, nu, nv, f);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

namespace {

json verdict_json(const TestOutcome& t) {
  json j;
  j["state"] = to_string(t.verdict);
  j["mean"] = t.stats.mean;
  j["residual"] = t.stats.residual;
  j["tolerance"] = t.stats.tol;
  j["max_residual"] = t.max_residual;
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

json constancy_json(const ConstancyVerdict& v) {
  return json{{"is_constant", v.is_constant},
              {"mean", v.mean},
              {"residual", v.residual},
              {"tolerance", v.tol}};
}

json vec_json(const Vec3& v) { return json{v[0], v[1], v[2]}; }

}  // namespace

std::string report_json(const ClassificationReport& rep,
                        const std::string& input_hash) {
  json j;
  j["tool_version"] = kToolVersion;
  j["input"] = {{"name", rep.input_name}, {"hash", input_hash}};
  j["grid"] = {{"samples", rep.samples_used}};
  j["tolerances"] = {{"ratio", rep.tolerances.ratio},
                     {"sigma", rep.tolerances.sigma},
                     {"det", rep.tolerances.det},
                     {"eq15", rep.tolerances.eq15},
                     {"axis", rep.tolerances.axis},
                     {"samples", rep.tolerances.samples}};
  j["flags"] = {{"cylindrical", rep.cylindrical},
                {"developable", to_string(rep.developable)},
                {"conoid", to_string(rep.conoid)},
                {"q_slant", to_string(rep.q_slant)},
                {"h_slant", to_string(rep.h_slant)},
                {"a_slant", to_string(rep.a_slant)}};
  j["theta_q"] = rep.theta_q ? json(*rep.theta_q) : json(nullptr);
  j["axis_q"] = rep.axis_q ? vec_json(*rep.axis_q) : json(nullptr);
  j["axis_h"] = rep.axis_h ? vec_json(*rep.axis_h) : json(nullptr);
  j["sigma"] = rep.sigma_mean ? json(*rep.sigma_mean) : json(nullptr);
  json tests = json::object();
  for (const auto& [name, t] : rep.tests) tests[name] = verdict_json(t);
  j["tests"] = tests;
  if (rep.striction_helix) {
    const HelixVerdicts& hx = *rep.striction_helix;
    j["striction_helix"] = {{"general_helix", to_string(hx.general_helix)},
                            {"ratio", constancy_json(hx.ratio)},
                            {"slant_helix", to_string(hx.slant_helix)},
                            {"sigma", constancy_json(hx.sigma)}};
    if (!hx.note.empty()) j["striction_helix"]["note"] = hx.note;
  } else {
    j["striction_helix"] = nullptr;
  }
  json tw = json::array();
  for (auto& w : rep.torsal_windows) tw.push_back({w.first, w.second});
  j["torsal_windows"] = tw;
  j["warnings"] = rep.warnings;
  return j.dump(2) + "\n";
}

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string verdict_line(const char* label, Verdict v, const std::string& extra,
                         const std::string& note) {
  std::string line = std::string(label) + ": ";
  if (v == Verdict::NotApplicable)
    line += "not applicable" + (note.empty() ? "" : " (" + note + ")");
  else
    line += std::string(to_string(v)) + extra;
  return line + "\n";
}

}  // namespace

std::string report_text(const ClassificationReport& rep) {
  std::string out;
  if (!rep.input_name.empty()) out += "input: " + rep.input_name + "\n";
  out += verdict_line("developable", rep.developable, "", "");
  out += verdict_line("conoid", rep.conoid, "", "");
  {
    std::string extra, note;
    auto it = rep.tests.find("ratio");
    if (it != rep.tests.end()) note = it->second.note;
    if (rep.theta_q) extra = " (theta = " + fmt("%.4f", *rep.theta_q) + ")";
    out += verdict_line("q-slant", rep.q_slant, extra, note);
  }
  out += verdict_line("a-slant", rep.a_slant, "", "same as q-slant");
  {
    std::string extra, note;
    auto it = rep.tests.find("sigma");
    if (it != rep.tests.end()) {
      note = it->second.note;
      if (rep.h_slant != Verdict::NotApplicable)
        extra = " (sigma = " + fmt("%.4f", it->second.stats.mean) +
                ", residual = " + fmt("%.2e", it->second.stats.residual) + ")";
    }
    out += verdict_line("h-slant", rep.h_slant, extra, note);
  }
  for (const char* name : {"det_q", "det_a", "eq15"}) {
    auto it = rep.tests.find(name);
    if (it == rep.tests.end()) continue;
    out += verdict_line(name, it->second.verdict,
                        " (residual = " + fmt("%.2e", it->second.max_residual) +
                            ")",
                        it->second.note);
  }
  if (rep.striction_helix) {
    out += verdict_line("striction line general helix",
                        rep.striction_helix->general_helix, "",
                        rep.striction_helix->note);
    out += verdict_line("striction line slant helix",
                        rep.striction_helix->slant_helix, "", "");
  }
  for (auto& w : rep.torsal_windows)
    out += "torsal window: [" + fmt("%.6g", w.first) + ", " +
           fmt("%.6g", w.second) + "]\n";
  for (auto& w : rep.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace ruled
