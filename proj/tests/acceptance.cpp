// Acceptance suite: ten end-to-end criteria at pinned tolerances.
// Prints one "PASS"/"FAIL" line per criterion; exit code 0 iff all pass.
// argv[1] (optional) is the path to the ruled CLI binary for criterion 10.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ruled/offsets.hpp"
#include "ruled/slant.hpp"
#include "ruled/workbench.hpp"

using namespace ruled;

namespace {

int failures = 0;

void report(int num, const char* what, bool ok, const std::string& detail) {
  std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", num, what,
              detail.empty() ? "" : " - ", detail.c_str());
  if (!ok) ++failures;
}

void run(int num, const char* what, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(num, what, ok, detail);
}

bool trusted(const StrictionFrameField& ff, Index i) {
  return i >= ff.trim && i < ff.size() - ff.trim && ff.valid[i];
}

std::string fmt(const char* f, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// --- criterion 1: example-6-2 curvature reproduction ------------------------

bool crit1(std::string& detail) {
  StrictionFrameField ff =
      ruled_apparatus(builtin("example-6-2").resolve(), 1024);
  double worst = 0;
  for (Index i = 0; i < ff.size(); ++i) {
    if (!trusted(ff, i)) continue;
    double s = ff.u_of_s[i];  // the fixture's base curve is unit speed in u
    double k1 = (510.0 / 17) * std::sin(16 * s);
    double k2 = (510.0 / 17) * std::cos(16 * s);
    double scale = std::max(std::abs(k1), std::abs(k2));
    worst = std::max(worst, std::abs(ff.k1[i] - k1) / scale);
    worst = std::max(worst, std::abs(ff.k2[i] - k2) / scale);
  }
  detail = "max relative error " + fmt("%.2e", worst);
  return worst < 1e-3;
}

// --- criterion 2: example-6-2 sigma constant --------------------------------

bool crit2(std::string& detail) {
  StrictionFrameField ff =
      ruled_apparatus(builtin("example-6-2").resolve(), 1024);
  double sigma = 0;
  TestOutcome out = h_slant_test(ff, 1e-3, &sigma);
  detail = "sigma " + fmt("%.6f", sigma) + ", residual " +
           fmt("%.2e", out.stats.residual);
  return out.verdict == Verdict::Yes &&
         std::abs(sigma - (-136.0 / 255)) < 1e-3 && out.stats.residual < 1e-3;
}

// --- criterion 3: example-6-1 -----------------------------------------------

bool crit3(std::string& detail) {
  RuledSurfaceSpec spec = builtin("example-6-1").resolve();
  StrictionData sd = striction_curve(spec, 1024);
  if (!sd.developable || sd.v0.cwiseAbs().maxCoeff() >= 1e-9) {
    detail = "developable/v0 check failed, max|v0| = " +
             fmt("%.2e", sd.v0.cwiseAbs().maxCoeff());
    return false;
  }
  // c' = q along the striction line
  CurveFn c = striction_evaluator(spec, 1024);
  double cq = 0;
  for (int i = 1; i < 40; ++i) {
    double u = spec.ua() + (spec.ub() - spec.ua()) * i / 40.0;
    Vec3 cp = fd_point(c, u, 1e-4, spec.ua(), spec.ub(), 1);
    cq = std::max(cq, (cp - spec.director(u)).norm());
  }
  if (cq >= 1e-6) {
    detail = "max||c' - q|| = " + fmt("%.2e", cq);
    return false;
  }
  StrictionFrameField ff = ruled_apparatus(spec, 1024);
  TestOutcome dq = det_q_test(ff, 1e-6);
  TestOutcome qs = q_slant_test(ff, 1e-3);
  TestOutcome as = a_slant_test(ff, 1e-3);
  CurveFrenetField cf = curve_apparatus(ff.grid, ff.c);
  HelixVerdicts hv = helix_tests(cf, 1e-3);
  detail = "det residual " + fmt("%.2e", dq.max_residual) + ", theta ok, helix " +
           to_string(hv.general_helix);
  return dq.verdict == Verdict::Yes && qs.verdict == Verdict::Yes &&
         as.verdict == Verdict::Yes && hv.general_helix == Verdict::Yes &&
         cq < 1e-6;
}

// --- criterion 4: classifier-equivalence suite ------------------------------

StrictionFrameField random_fixture(std::mt19937& rng, bool make_slant) {
  // low-order trigonometric polynomials bounded away from zero
  std::uniform_real_distribution<double> amp(0.2, 0.6), base(1.5, 3.0),
      freq(0.5, 2.0), phase(0.0, 6.28), lam(0.4, 2.5);
  double b1 = base(rng), a1 = amp(rng) * b1, w1 = freq(rng), p1 = phase(rng);
  auto k1 = [=](double s) { return b1 + a1 * std::sin(w1 * s + p1); };
  std::function<double(double)> k2;
  if (make_slant) {
    double l = lam(rng);
    k2 = [=](double s) { return l * k1(s); };
  } else {
    double b2 = base(rng), a2 = amp(rng) * b2, w2 = freq(rng), p2 = phase(rng);
    // different frequency guarantees a non-constant ratio
    k2 = [=](double s) { return b2 + a2 * std::sin((w2 + w1 + 0.7) * s + p2); };
  }
  auto phi = [](double) { return 0.0; };
  UniformGrid g{0.0, 3.0 / 1499, 1500};
  return integrate_frenet(k1, k2, phi, Mat3::Identity(), Vec3::Zero(), g);
}

bool crit4(std::string& detail) {
  std::mt19937 rng(987654321);
  int checked = 0;
  double worst_id = 0;
  for (int t = 0; t < 20; ++t) {
    bool make_slant = t % 2 == 0;
    StrictionFrameField ff = random_fixture(rng, make_slant);

    TestOutcome ratio = q_slant_test(ff, 1e-3);
    TestOutcome dq = det_q_test(ff, 1e-6);
    TestOutcome da = det_a_test(ff, 1e-6);
    TestOutcome e15 = eq15_residual(ff, 1e-2);
    std::array<Verdict, 4> vs{ratio.verdict, dq.verdict, da.verdict,
                              e15.verdict};
    for (Verdict v : vs) {
      if (v == Verdict::NotApplicable) {
        detail = "fixture " + std::to_string(t) + ": unexpected not-applicable";
        return false;
      }
      if (v != vs[0]) {
        detail = "fixture " + std::to_string(t) + ": verdicts disagree (" +
                 std::string(to_string(vs[0])) + " vs " + to_string(v) + ")";
        return false;
      }
    }
    if ((vs[0] == Verdict::Yes) != make_slant) {
      detail = "fixture " + std::to_string(t) + ": wrong verdict " +
               to_string(vs[0]);
      return false;
    }

    // identity magnitudes: |det(q',q'',q''')| vs |k1^3 k2^2 (k1/k2)'|
    // and |det(a',a'',a''')| vs |k2^5 (k1/k2)'|, relative agreement 1e-2
    Mat3X qp = derive(ff.q, ff.grid.h, 1), qpp = derive(ff.q, ff.grid.h, 2),
          qppp = derive(ff.q, ff.grid.h, 3);
    Mat3X ap = derive(ff.a, ff.grid.h, 1), app = derive(ff.a, ff.grid.h, 2),
          appp = derive(ff.a, ff.grid.h, 3);
    VecX k1p = derive(ff.k1, ff.grid.h, 1), k2p = derive(ff.k2, ff.grid.h, 1);
    double dscale = 0;
    for (Index i = 0; i < ff.size(); ++i)
      if (trusted(ff, i))
        dscale = std::max(dscale, std::abs(std::pow(ff.k1[i], 3)) *
                                      std::max(1.0, ff.k2[i] * ff.k2[i]));
    int margin = 3 * ff.trim;  // third derivatives need extra interior room
    for (Index i = margin; i < ff.size() - margin; ++i) {
      if (!ff.valid[i]) continue;
      double wr = k1p[i] * ff.k2[i] - ff.k1[i] * k2p[i];  // k2^2 (k1/k2)'
      double idq = std::pow(ff.k1[i], 3) * wr;
      double ida = std::pow(ff.k2[i], 3) * wr;
      double det_q =
          qp.col(i).dot(qpp.col(i).cross(qppp.col(i)));
      double det_a =
          ap.col(i).dot(app.col(i).cross(appp.col(i)));
      double floor_q = std::max(1.0, std::abs(idq));
      double floor_a = std::max(1.0, std::abs(ida));
      worst_id = std::max(
          worst_id, std::abs(std::abs(det_q) - std::abs(idq)) / floor_q);
      worst_id = std::max(
          worst_id, std::abs(std::abs(det_a) - std::abs(ida)) / floor_a);
      ++checked;
    }
    (void)dscale;
  }
  detail = "20 fixtures, identity deviation " + fmt("%.2e", worst_id) + " over " +
           std::to_string(checked) + " samples";
  return worst_id < 1e-2;
}

// --- criterion 5: generator round trip --------------------------------------

bool crit5(std::string& detail) {
  StrictionFrameField gen = builtin("const-k1-k2").curvatures->integrate();
  StrictionFrameField ff = ruled_apparatus(spec_from_field(gen), 1024);
  double w1 = 0, w2 = 0;
  for (Index i = 0; i < ff.size(); ++i) {
    if (!trusted(ff, i)) continue;
    w1 = std::max(w1, std::abs(ff.k1[i] - 2.0));
    w2 = std::max(w2, std::abs(ff.k2[i] - 1.0));
  }
  double theta = 0;
  Vec3 axis;
  TestOutcome qs = q_slant_test(ff, 1e-3, &theta, &axis);
  double drift = 0;
  for (Index i = 0; i < ff.size(); ++i) {
    if (!trusted(ff, i)) continue;
    Vec3 u = std::cos(theta) * ff.q.col(i) + std::sin(theta) * ff.a.col(i);
    drift = std::max(drift, (u - axis).norm());
  }
  detail = "k1 err " + fmt("%.2e", w1) + ", k2 err " + fmt("%.2e", w2) +
           ", theta " + fmt("%.7f", theta) + ", axis drift " +
           fmt("%.2e", drift);
  return w1 < 1e-4 && w2 < 1e-4 && qs.verdict == Verdict::Yes &&
         std::abs(theta - std::atan(2.0)) < 1e-4 && drift < 1e-3;
}

// --- criterion 6: closed-form curvature fixture -----------------------------

bool crit6(std::string& detail) {
  StrictionFrameField ff = builtin("thm-4-2").curvatures->integrate();
  double sigma = 0;
  TestOutcome hs = h_slant_test(ff, 1e-3, &sigma);
  double drift = thm42_axis_check(ff, M_PI / 4);
  detail = "sigma " + fmt("%.6f", sigma) + ", axis drift " + fmt("%.2e", drift);
  return hs.verdict == Verdict::Yes && std::abs(sigma - 1.0) < 1e-3 &&
         drift < 1e-3;
}

// --- criterion 7: Bertrand offsets stay h-slant -----------------------------

bool crit7(std::string& detail) {
  StrictionFrameField ff =
      ruled_apparatus(builtin("example-6-2").resolve(), 1024);
  const std::array<std::pair<double, double>, 3> params{
      {{0.3, 0.2}, {-0.5, 1.0}, {1.0, 0.0}}};
  for (auto [alpha, R] : params) {
    StrictionFrameField off =
        ruled_apparatus(bertrand_offset(ff, alpha, R), 1024);
    TestOutcome hs = h_slant_test(off, 1e-2);
    if (hs.verdict != Verdict::Yes || hs.stats.residual >= 1e-2) {
      detail = "alpha=" + fmt("%.2f", alpha) + ": verdict " +
               to_string(hs.verdict) + ", residual " +
               fmt("%.2e", hs.stats.residual);
      return false;
    }
    double worst = 2.0;
    for (Index i = 0; i < off.size(); ++i) {
      if (!trusted(off, i)) continue;
      Vec3 h1 = sample_field(ff, ff.h, s_of_u(ff, off.u_of_s[i])).normalized();
      worst = std::min(worst, std::abs(h1.dot(off.h.col(i))));
    }
    if (worst <= 1 - 1e-5) {
      detail = "alpha=" + fmt("%.2f", alpha) +
               ": min|<h2,h1>| = " + fmt("%.8f", worst);
      return false;
    }
  }
  detail = "3 offsets h-slant with shared central normals";
  return true;
}

// --- criterion 8: Mannheim partner ------------------------------------------

bool crit8(std::string& detail) {
  StrictionFrameField ff = builtin("const-k1-k2").curvatures->integrate();
  double theta = 0;
  Vec3 u_q;
  if (q_slant_test(ff, 1e-3, &theta, &u_q).verdict != Verdict::Yes) {
    detail = "source fixture not q-slant";
    return false;
  }
  StrictionFrameField off =
      ruled_apparatus(mannheim_construct(ff, 0.4, 0.5), 1024);
  if (!mannheim_verify(ff, off, 1e-5)) {
    detail = "mannheim_verify failed";
    return false;
  }
  VecX dots(off.size());
  std::vector<char> keep(off.size(), 0);
  for (Index i = 0; i < off.size(); ++i) {
    dots[i] = u_q.dot(off.h.col(i));
    keep[i] = trusted(off, i);
  }
  ConstancyVerdict cv = is_constant(dots, keep, 1e-3);
  detail = "<h2,u_q> residual " + fmt("%.2e", cv.residual);
  return cv.residual < 1e-3;
}

// --- criterion 9: invariance suite ------------------------------------------

bool crit9(std::string& detail) {
  RuledSurfaceSpec spec = builtin("example-6-2").resolve();

  // rigid motion: k1, k2 unchanged to 1e-9 (relative to curvature scale)
  Mat3 R = Eigen::AngleAxisd(0.9, Vec3(1, -2, 2).normalized()).toRotationMatrix();
  StrictionFrameField a = ruled_apparatus(spec, 1024);
  StrictionFrameField b =
      ruled_apparatus(spec.transformed(R, Vec3(5, -3, 1)), 1024);
  double kscale = a.k1.cwiseAbs().maxCoeff();
  double wk = 0;
  for (Index i = 0; i < a.size(); ++i) {
    if (!trusted(a, i) || !trusted(b, i)) continue;
    wk = std::max(wk, std::abs(a.k1[i] - b.k1[i]) / kscale);
    wk = std::max(wk, std::abs(a.k2[i] - b.k2[i]) / kscale);
  }
  if (wk >= 1e-9) {
    detail = "rigid-motion curvature drift " + fmt("%.2e", wk);
    return false;
  }

  // reparametrization: boolean flags unchanged
  ClassificationReport ra = classify(spec);
  ClassificationReport rb = classify(spec.reparametrized(2.0, 1.0));
  if (ra.developable != rb.developable || ra.q_slant != rb.q_slant ||
      ra.h_slant != rb.h_slant || ra.a_slant != rb.a_slant ||
      ra.conoid != rb.conoid) {
    detail = "reparametrization changed a flag";
    return false;
  }

  // scale: f -> 10 f leaves k1/k2 unchanged within 1e-6, flags unchanged
  ClassificationReport rc = classify(spec.scaled(10.0));
  if (ra.q_slant != rc.q_slant || ra.h_slant != rc.h_slant ||
      ra.developable != rc.developable || ra.conoid != rc.conoid) {
    detail = "scaling changed a flag";
    return false;
  }
  StrictionFrameField c = ruled_apparatus(spec.scaled(10.0), 1024);
  double wr = 0;
  for (Index i = 0; i < a.size(); ++i) {
    if (!trusted(a, i) || !trusted(c, i)) continue;
    if (std::abs(a.k2[i]) < 0.1 * kscale) continue;  // ratio ill-conditioned
    wr = std::max(wr,
                  std::abs(a.k1[i] / a.k2[i] - c.k1[i] / c.k2[i]) /
                      std::max(1.0, std::abs(a.k1[i] / a.k2[i])));
  }
  detail = "rigid " + fmt("%.1e", wk) + ", ratio drift " + fmt("%.1e", wr);
  return wr < 1e-6;
}

// --- criterion 10: degenerate handling via the CLI --------------------------

int run_cli(const std::string& cli, const std::string& args, std::string& out) {
  std::string cmd = cli + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return -1;
  char buf[4096];
  out.clear();
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = pclose(p);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool crit10(const std::string& cli, std::string& detail) {
  if (cli.empty()) {
    detail = "no CLI path given";
    return false;
  }
  // cylinder -> exit 2 with the documented degenerate-geometry message
  std::string fixture = "/tmp/ruled-acceptance-cylinder.json";
  {
    std::FILE* f = std::fopen(fixture.c_str(), "w");
    if (!f) {
      detail = "cannot write fixture";
      return false;
    }
    std::fputs(
        "{\"kind\":\"analytic\",\"base\":[\"cos(s)\",\"sin(s)\",\"0\"],"
        "\"director\":[\"0\",\"0\",\"1\"],\"range\":[0,6.283],\"samples\":256}"
        "\n",
        f);
    std::fclose(f);
  }
  std::string out;
  int rc = run_cli(cli, "classify --input " + fixture, out);
  std::remove(fixture.c_str());
  if (rc != 2 || out.find("cylindrical: striction curve undefined (Eq. 4)") ==
                     std::string::npos) {
    detail = "cylinder: exit " + std::to_string(rc) + ", output: " + out;
    return false;
  }

  // helicoid -> conoid flag, q-slant not applicable
  rc = run_cli(cli, "classify --input builtin:helicoid --text", out);
  if (rc != 0 || out.find("conoid: yes") == std::string::npos ||
      out.find("q-slant: not applicable") == std::string::npos) {
    detail = "helicoid: exit " + std::to_string(rc) + ", output: " + out;
    return false;
  }

  // theta = pi/2 request -> rejected with exit 2
  rc = run_cli(cli,
               "generate --k1 1 --theta 1.5707963267948966 --range -0.5:0.5 "
               "--out /tmp/ruled-acceptance-gen.json",
               out);
  if (rc != 2) {
    detail = "theta=pi/2: exit " + std::to_string(rc) + ", output: " + out;
    return false;
  }
  detail = "cylinder exit 2, conoid not-applicable, theta=pi/2 rejected";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";

  run(1, "example-6-2 curvature reproduction", crit1);
  run(2, "example-6-2 sigma constant -8/15", crit2);
  run(3, "example-6-1 developable q-slant", crit3);
  run(4, "classifier-equivalence suite", crit4);
  run(5, "generator round trip", crit5);
  run(6, "closed-form curvature fixture", crit6);
  run(7, "Bertrand offsets h-slant", crit7);
  run(8, "Mannheim partner", crit8);
  run(9, "invariance suite", crit9);
  run(10, "degenerate handling (CLI)",
      [&](std::string& d) { return crit10(cli, d); });

  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASSED"
                                    : "SOME CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
