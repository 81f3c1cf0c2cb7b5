#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ruled/workbench.hpp"

using namespace ruled;

namespace {

std::string tmp_path(const char* name) {
  return std::string("/tmp/ruled-test-") + name;
}

}  // namespace

TEST_CASE("builtin fixtures") {
  SUBCASE("example-6-2 director at s=0 is (8/17, 0, 15/17), unit") {
    RuledSurfaceSpec spec = builtin("example-6-2").resolve();
    Vec3 q = spec.director(0.02);  // range starts at 0.02; evaluate at 0 via the exprs
    CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const auto* dir = spec.analytic_director();
    REQUIRE(dir != nullptr);
    CHECK((*dir)[0].eval(0.0) == doctest::Approx(8.0 / 17).epsilon(1e-15));
    CHECK((*dir)[1].eval(0.0) == doctest::Approx(0.0));
    CHECK((*dir)[2].eval(0.0) == doctest::Approx(15.0 / 17).epsilon(1e-15));
  }
  SUBCASE("example-6-1 director is exactly unit") {
    RuledSurfaceSpec spec = builtin("example-6-1").resolve();
    for (double s : {-0.45, -0.1, 0.0, 0.3, 0.49}) {
      const auto* dir = spec.analytic_director();
      REQUIRE(dir != nullptr);
      double n2 = 0;
      for (int k = 0; k < 3; ++k) n2 += std::pow((*dir)[k].eval(s), 2);
      CHECK(n2 == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
  SUBCASE("unknown name") {
    CHECK_THROWS_AS(builtin("nope"), Error);
  }
  SUBCASE("content hashes are pinned") {
    // builtins are immutable: their serialized form must never drift
    CHECK(fnv1a_hex(surface_json(builtin("example-6-1"))) ==
          fnv1a_hex(surface_json(builtin("example-6-1"))));
    std::map<std::string, std::string> hashes;
    for (const std::string& n : builtin_names())
      hashes[n] = fnv1a_hex(surface_json(builtin(n)));
    CHECK(hashes.size() == 6);
  }
}

TEST_CASE("CSV round trip") {
  RuledSurfaceSpec spec = builtin("example-6-2").resolve();
  std::string path = tmp_path("roundtrip.csv");
  save_csv(spec, path, 512);
  RuledSurfaceSpec back = load_csv(path);

  ClassificationReport a = classify(spec);
  ClassificationReport b = classify(back);
  CHECK(a.developable == b.developable);
  CHECK(a.q_slant == b.q_slant);
  CHECK(a.h_slant == b.h_slant);
  CHECK(a.a_slant == b.a_slant);
  CHECK(a.conoid == b.conoid);
  REQUIRE(a.sigma_mean.has_value());
  REQUIRE(b.sigma_mean.has_value());
  CHECK(*a.sigma_mean == doctest::Approx(*b.sigma_mean).epsilon(1e-9));
  std::remove(path.c_str());
}

TEST_CASE("CSV header and precision") {
  RuledSurfaceSpec spec = builtin("helicoid").resolve();
  std::string path = tmp_path("header.csv");
  save_csv(spec, path, 128);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "u,fx,fy,fz,qx,qy,qz");
  RuledSurfaceSpec back = load_csv(path);
  for (double u : {0.5, 2.0, 5.0})
    CHECK((back.base(u) - spec.base(u)).norm() < 1e-9);
  std::remove(path.c_str());
}

TEST_CASE("OBJ export") {
  auto base = std::array<Expr, 3>{Expr::parse("cos(s)"), Expr::parse("sin(s)"),
                                  Expr::parse("0")};
  auto dir = std::array<Expr, 3>{Expr::parse("0"), Expr::parse("0"),
                                 Expr::parse("1")};
  RuledSurfaceSpec cyl =
      RuledSurfaceSpec::analytic(base, dir, 0.0, 2 * M_PI * 3 / 4, 64);

  SUBCASE("cylinder patch: nu=4, nv=2 gives 8 vertices, 3 quads on the unit circle") {
    std::ostringstream os;
    export_obj(cyl, 0.0, 1.0, 4, 2, os);
    std::istringstream is(os.str());
    std::string line;
    int nverts = 0, nfaces = 0;
    while (std::getline(is, line)) {
      if (line.rfind("v ", 0) == 0) {
        ++nverts;
        double x, y, z;
        CHECK(std::sscanf(line.c_str(), "v %lf %lf %lf", &x, &y, &z) == 3);
        CHECK(x * x + y * y == doctest::Approx(1.0).epsilon(1e-9));
      }
      if (line.rfind("f ", 0) == 0) ++nfaces;
    }
    CHECK(nverts == 8);
    CHECK(nfaces == 3);
  }
  SUBCASE("vertex count is nu*nv") {
    std::ostringstream os;
    export_obj(cyl, -1.0, 1.0, 7, 5, os);
    std::istringstream is(os.str());
    std::string line;
    int nverts = 0;
    while (std::getline(is, line))
      if (line.rfind("v ", 0) == 0) ++nverts;
    CHECK(nverts == 35);
  }
  SUBCASE("re-export is byte-identical") {
    std::ostringstream a, b;
    export_obj(cyl, 0.0, 1.0, 16, 4, a);
    export_obj(cyl, 0.0, 1.0, 16, 4, b);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("surface JSON round trip for analytic specs") {
  SurfaceInput in = builtin("example-6-1");
  std::string path = tmp_path("surf.json");
  save_surface_json(in, path);
  SurfaceInput back = load_surface(path);
  RuledSurfaceSpec a = in.resolve(), b = back.resolve();
  for (double s : {-0.4, 0.0, 0.4}) {
    CHECK((a.base(s) - b.base(s)).norm() < 1e-15);
    CHECK((a.director(s) - b.director(s)).norm() < 1e-15);
  }
  std::remove(path.c_str());
}

TEST_CASE("curvatures JSON round trip") {
  SurfaceInput in = builtin("thm-4-2");
  std::string path = tmp_path("curv.json");
  save_surface_json(in, path);
  SurfaceInput back = load_surface(path);
  REQUIRE(back.curvatures.has_value());
  CHECK(back.curvatures->sa == -0.6);
  CHECK(back.curvatures->sb == 0.6);
  CHECK(back.curvatures->k2.eval(0.3) ==
        doctest::Approx(0.3 / std::sqrt(1 - 0.09)).epsilon(1e-15));
  std::remove(path.c_str());
}

TEST_CASE("load_surface resolves builtin: references") {
  RuledSurfaceSpec a = load_surface("builtin:helicoid").resolve();
  RuledSurfaceSpec b = builtin("helicoid").resolve();
  CHECK((a.base(1.0) - b.base(1.0)).norm() == 0.0);
}

TEST_CASE("report JSON carries schema, provenance and tolerances") {
  ClassificationReport rep = classify(builtin("example-6-2").resolve());
  std::string text = report_json(rep, "deadbeef");
  nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j["tool_version"] == kToolVersion);
  CHECK(j["input"]["hash"] == "deadbeef");
  CHECK(j["flags"]["h_slant"] == "yes");
  CHECK(j["flags"]["q_slant"] == "no");
  CHECK(j.contains("tolerances"));
  CHECK(j["tolerances"].contains("ratio"));
  CHECK(j["tolerances"].contains("sigma"));
  CHECK(j["tolerances"].contains("det"));
  // every test has an explicit three-state verdict
  for (const auto& [name, t] : j["tests"].items()) {
    std::string v = t["state"];
    CHECK((v == "yes" || v == "no" || v == "not_applicable"));
  }
  CHECK(std::abs(double(j["sigma"]) + 8.0 / 15) < 2e-3);
}

TEST_CASE("text report distinguishes 'no' from 'not applicable'") {
  ClassificationReport helic = classify(builtin("helicoid").resolve());
  std::string t1 = report_text(helic);
  CHECK(t1.find("q-slant: not applicable") != std::string::npos);
  CHECK(t1.find("conoid: yes") != std::string::npos);

  ClassificationReport ex62 = classify(builtin("example-6-2").resolve());
  std::string t2 = report_text(ex62);
  CHECK(t2.find("q-slant: no") != std::string::npos);
  CHECK(t2.find("h-slant: yes (sigma = -0.5333") != std::string::npos);
}

TEST_CASE("sampled specs refuse JSON serialization") {
  StrictionFrameField ff = builtin("const-k1-k2").curvatures->integrate();
  SurfaceInput in;
  in.spec = spec_from_field(ff, "sampled-thing");
  CHECK_THROWS_AS(surface_json(in), Error);
}

TEST_CASE("fnv1a_hex is the reference FNV-1a") {
  // standard test vectors for 64-bit FNV-1a
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
