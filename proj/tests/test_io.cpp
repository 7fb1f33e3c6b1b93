#include <gtest/gtest.h>

#include <numbers>

#include "striplab/io.hpp"

using namespace striplab;

namespace {

void expect_same_set(const CompactSet& a, const CompactSet& b) {
  EXPECT_EQ(a.kind(), b.kind());
  EXPECT_EQ(to_json_value(a), to_json_value(b));
  const auto ga = discretize(a, 0.01);
  const auto gb = discretize(b, 0.01);
  ASSERT_EQ(ga.size(), gb.size());
  for (std::size_t i = 0; i < ga.size(); ++i) EXPECT_EQ(ga.points[i], gb.points[i]);
}

}  // namespace

TEST(Json, ComplexForms) {
  EXPECT_EQ(complex_from_json(json::parse("[0.5, -2]")), cplx(0.5, -2.0));
  EXPECT_EQ(complex_from_json(json(3.0)), cplx(3.0, 0.0));
  EXPECT_THROW(complex_from_json(json::parse("[1]")), InvalidArgument);
  EXPECT_THROW(complex_from_json(json::parse("\"x\"")), InvalidArgument);
  const std::vector<cplx> zs{cplx(0.1, 0.2), cplx(-1e-300, 1e300)};
  EXPECT_EQ(complex_list_from_json(json::parse(to_json_value(zs).dump())), zs);
}

TEST(Json, SetsRoundTrip) {
  const std::vector<CompactSet> sets{
      CompactSet::segment(0.6, cplx(0.6, 0.2)),
      CompactSet::arc(0.75, 0.1, 0.0, 1.5 * std::numbers::pi),
      CompactSet::polyline({0.6, cplx(0.7, 0.1), cplx(0.8, 0.0)}),
      CompactSet::point_set({0.75, cplx(0.8, 0.1)}),
      CompactSet::cantor_product(fat_cantor(3), 0.0, 0.1, 0.2, 0.6, FiberMode::edges),
  };
  for (const auto& K : sets) expect_same_set(K, build_set(json::parse(to_json_value(K).dump())));
}

TEST(Json, CantorProductByDepth) {
  const auto K = build_set(json::parse(R"({"variant": "cantor_product", "depth": 2, "y_lo": 0, "y_hi": 0.1})"));
  const auto& cp = std::get<CantorProduct>(K.shape());
  EXPECT_EQ(cp.spans().size(), 4u);
  EXPECT_EQ(cp.fibers, FiberMode::solid);
  EXPECT_EQ(cp.scale, 1.0);
}

TEST(Json, SetErrorsAreInvalidSpec) {
  const char* bad[] = {
      R"([1, 2])",
      R"({"variant": "circle"})",
      R"({"variant": "segment", "a": [0, 0]})",
      R"({"variant": "segment", "a": [0, 0], "b": [0, 0]})",
      R"({"variant": "arc", "center": 0, "radius": 1, "angle_start": 0, "angle_end": 6.3})",
      R"({"variant": "polyline", "vertices": [0, 1, 1]})",
      R"({"variant": "polyline", "vertices": [0, 1, [1, 1], 0]})",
      R"({"variant": "points", "points": []})",
      R"({"variant": "cantor_product", "y_lo": 0, "y_hi": 1})",
      R"({"variant": "cantor_product", "intervals": [], "y_lo": 0, "y_hi": 1})",
      R"({"variant": "cantor_product", "depth": 1, "y_lo": 0, "y_hi": 1, "fibers": "dots"})",
      R"({"variant": "segment", "a": "zero", "b": 1})",
  };
  for (const char* text : bad) EXPECT_THROW(build_set(json::parse(text)), InvalidSpec) << text;
}

TEST(Json, PolynomialsRoundTrip) {
  const Polynomial p({cplx(1.0, 2.0), cplx(0.0, -1.0), cplx(3.0, 0.0)}, Frame{cplx(0.75, 0.1), 0.2});
  const Polynomial q = polynomial_from_json(json::parse(to_json_value(p).dump()));
  EXPECT_EQ(q.coeffs(), p.coeffs());
  EXPECT_EQ(q.frame().center, p.frame().center);
  EXPECT_EQ(q.frame().scale, p.frame().scale);
  const Polynomial plain = polynomial_from_json(json::parse(R"({"coeffs": [1, [0, 1]]})"));
  EXPECT_EQ(plain.frame().center, cplx{});
  EXPECT_EQ(plain.frame().scale, 1.0);

  const FactoredPolynomial fp{cplx(2.0, -1.0), {cplx(0.7, 0.3), cplx(0.8, -0.01)}, Frame{0.75, 0.5}};
  const FactoredPolynomial back = factored_from_json(json::parse(to_json_value(fp).dump()));
  EXPECT_EQ(back.leading, fp.leading);
  EXPECT_EQ(back.roots, fp.roots);
  EXPECT_EQ(back.frame.center, fp.frame.center);
  EXPECT_EQ(back.frame.scale, fp.frame.scale);
}

TEST(Json, TargetsRoundTrip) {
  const std::vector<TargetSpec> specs{BuiltinTarget{"conj"}, BuiltinTarget{"abs"}, BuiltinTarget{"identity"},
                                      BuiltinTarget{"constant", cplx(1.0, -0.5)}, SampledTarget{{1.0, cplx(0.0, 1.0)}},
                                      ZetaTarget{}};
  for (const auto& s : specs) {
    const json j = to_json_value(s);
    EXPECT_EQ(to_json_value(target_from_json(json::parse(j.dump()))), j);
  }
  EXPECT_THROW(target_from_json(json::parse(R"({"kind": "builtin", "name": "sin"})")), InvalidArgument);
  EXPECT_THROW(target_from_json(json::parse(R"({"kind": "builtin", "name": "constant"})")), InvalidArgument);
  EXPECT_THROW(target_from_json(json::parse(R"({"kind": "table"})")), InvalidArgument);
  EXPECT_THROW(target_from_json(json::parse(R"({"name": "conj"})")), InvalidArgument);
}

TEST(Json, ReportsCarryAllFields) {
  ScanReport r;
  r.trace = {{0.0, 0.1}, {1.0, 0.4}};
  r.hit_intervals = {{0.0, 0.5}};
  r.empirical_density = 0.5;
  r.eps = 0.3;
  const json j = to_json_value(r);
  for (const char* key : {"trace", "hit_intervals", "empirical_density", "best_t", "best_D", "eps", "step", "t_start",
                          "t_end", "truncated", "grid_size", "covering_radius", "warnings"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["trace"][1][1].get<double>(), 0.4);

  RepairCertificate c;
  c.moved_roots.push_back({0, 0.75, cplx(0.75, 0.01), 0.01});
  const json cj = to_json_value(c, FactoredPolynomial{});
  EXPECT_EQ(cj["moved_roots"][0]["distance_moved"].get<double>(), 0.01);
  EXPECT_TRUE(cj.contains("polynomial"));

  const json zv = to_json_value(ZetaValue{cplx(1.0, 2.0), 1e-20});
  EXPECT_EQ(complex_from_json(zv["value"]), cplx(1.0, 2.0));
}
