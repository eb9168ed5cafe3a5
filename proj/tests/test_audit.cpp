#include <gtest/gtest.h>

#include "fdepth/audit.hpp"

using namespace fdepth;

namespace {
GridPtr unit101() { return Grid::uniform(0.0, 1.0, 101); }

FunctionalSample two_constants(double a, double b) {
  const auto g = unit101();
  return FunctionalSample({constant_curve(g, a), constant_curve(g, b)});
}

GaussianProcess default_gp() { return GaussianProcess(AuditConfig{}.gp()); }
}  // namespace

TEST(AuditP1, HDepthScalingViolates) {
  const auto s = two_constants(0.0, 1.0);
  const auto g = s.grid();
  const auto v = audit_p1(DepthKind::h, inline_measure(s), affine_map(std::sqrt(2.0)), {},
                          {constant_curve(g, 0.0)});
  EXPECT_EQ(v.status, Status::violated);
  EXPECT_NEAR(v.evidence["before"][0].get<double>(), 0.320456, 1e-6);
  EXPECT_NEAR(v.evidence["after"][0].get<double>(), 0.272852, 1e-6);
  ASSERT_TRUE(v.evidence.contains("witness"));
}

TEST(AuditP1, RandomTukeyScalingSatisfied) {
  const auto s = two_constants(0.0, 1.0);
  const auto v = audit_p1(DepthKind::rt, inline_measure(s), affine_map(std::sqrt(2.0)), {},
                          {constant_curve(s.grid(), 0.0)});
  EXPECT_EQ(v.status, Status::satisfied);
}

TEST(AuditP1, IdentityMapIsTriviallySatisfied) {
  const auto s = default_gp().sample(50, 3);
  for (auto k : kAllDepths) EXPECT_EQ(audit_p1(k, inline_measure(s), affine_map(1.0), {}).status, Status::satisfied);
}

TEST(AuditP1, WitnessReplaysBitExactly) {
  const auto s = default_gp().sample(40, 9);
  const auto v = audit_p1(DepthKind::h, s, 4.0);
  ASSERT_EQ(v.status, Status::violated);
  const auto& w = v.evidence["witness"];
  const auto replayed = replay_witness(w);
  ASSERT_EQ(replayed.size(), w["entries"].size());
  for (std::size_t i = 0; i < replayed.size(); ++i) EXPECT_EQ(replayed[i], w["entries"][i]["value"].get<double>());
}

TEST(AuditP2G, ModifiedHalfRegionSatisfied) {
  const auto v = audit_p2g(DepthKind::mhr, default_gp(), 2000, 20, 1, {});
  EXPECT_EQ(v.status, Status::satisfied);
  EXPECT_NEAR(v.evidence["zero_depth_mean"].get<double>(), 0.5, 0.05);
}

TEST(AuditP2G, BandDepthOrderThreeSatisfied) {
  DepthParams p;
  p.J = 3;
  EXPECT_EQ(audit_p2g(DepthKind::bd, default_gp(), 150, 20, 2, p).status, Status::satisfied);
}

// The zero curve beats every level curve for the half-region depth: the
// log-concave Gaussian law gives the largest one-sided probability at level 0.
TEST(AuditP2G, HalfRegionZeroCurveIsDeepest) {
  const auto v = audit_p2g(DepthKind::hr, default_gp(), 2000, 20, 3, {});
  EXPECT_EQ(v.status, Status::satisfied);
  for (const auto& p : v.evidence["probes"]) {
    if (p["probe"].get<int>() <= 6) {
      EXPECT_LT(p["mean_diff"].get<double>(), 0.0);
    }
  }
}

TEST(AuditP2G, SmallSampleIsInapplicable) {
  EXPECT_EQ(audit_p2g(DepthKind::mhr, default_gp(), 50, 20, 1, {}).status, Status::inapplicable);
}

TEST(AuditP3, BandDepthTie) {
  const auto g = unit101();
  const auto v = audit_p3(DepthKind::bd, g, {});
  EXPECT_EQ(v.status, Status::violated);
  EXPECT_EQ(v.evidence["D_z"].get<double>(), 0.75);
  EXPECT_EQ(v.evidence["D_y"].get<double>(), 0.5);
  EXPECT_EQ(v.evidence["D_x"].get<double>(), 0.5);
}

TEST(AuditP3, RandomTukeyTie) {
  const auto v = audit_p3(DepthKind::rt, unit101(), {});
  EXPECT_EQ(v.status, Status::violated);
  EXPECT_EQ(v.evidence["D_x"].get<double>(), 0.5);
  EXPECT_EQ(v.evidence["D_y"].get<double>(), 0.5);
}

TEST(AuditP3, TripleMustSatisfyDistanceConditions) {
  const auto g = unit101();
  const auto m = named_atomic_measure("counterexample_p3", g);
  // y = 0.1 and x = 0.2 put y further from z than x is.
  EXPECT_THROW(audit_p3_atomic(DepthKind::bd, m, constant_curve(g, 1), constant_curve(g, 0.1),
                               constant_curve(g, 0.2), {}, {}),
               ParameterError);
}

TEST(AuditP3, HDepthRaysStrictlyDecrease) {
  const auto v = audit_p3_rays(DepthKind::h, default_gp(), 500, 10, 4, {});
  EXPECT_EQ(v.status, Status::satisfied);
}

TEST(AuditP3, ViolationWitnessReplays) {
  const auto v = audit_p3(DepthKind::mhr, unit101(), {});
  ASSERT_EQ(v.status, Status::violated);
  const auto r = replay_witness(v.evidence["witness"]);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_EQ(r[i], v.evidence["witness"]["entries"][i]["value"].get<double>());
  }
}

TEST(AuditP4, SampleMeanProbeSatisfied) {
  const auto m = gp_measure(default_gp(), 300, 5);
  const auto& s = std::get<FunctionalSample>(m.law);
  for (auto k : kAllDepths) {
    const auto v = audit_p4(k, m, {s.pointwise_mean()}, {0.5, 0.1, 0.02, 0.004, 1e-3}, {0.05, 0.01}, 200, 6, {});
    EXPECT_EQ(v.status, Status::satisfied) << depth_id(k);
  }
}

TEST(AuditP4, HalfRegionAtAtomLevel) {
  const auto g = unit101();
  const auto m = inline_measure(counterexample_p3(g).as_sample());
  const auto v = audit_p4(DepthKind::hr, m, {constant_curve(g, 1.0)}, {0.5, 0.1}, {0.05, 0.01}, 200, 7, {});
  EXPECT_EQ(v.status, Status::satisfied);
}

TEST(AuditP4, SingleCurveSample) {
  const auto g = unit101();
  const auto x = curve_from(g, [](double v) { return std::sin(v); });
  const auto m = inline_measure(FunctionalSample({x}));
  EXPECT_EQ(audit_p4(DepthKind::hr, m, {x}, {0.1}, {0.05}, 50, 1, {}).status, Status::satisfied);
}

TEST(AuditP5, HDepthIncreasesUnderShrink) {
  const auto m = named_atomic_measure("counterexample_p5", unit101());
  EXPECT_EQ(audit_p5(DepthKind::h, m, 2.5, 0.5, {}).status, Status::satisfied);
}

TEST(AuditP5, BandAndHalfRegionDepthsUnchanged) {
  const auto m = named_atomic_measure("counterexample_p5", unit101());
  for (auto k : {DepthKind::rt, DepthKind::bd, DepthKind::mbd, DepthKind::hr, DepthKind::mhr}) {
    const auto v = audit_p5(k, m, 2.5, 0.5, {});
    EXPECT_EQ(v.status, Status::violated) << depth_id(k);
    const auto r = replay_witness(v.evidence["witness"]);
    EXPECT_EQ(r[0], v.evidence["witness"]["entries"][0]["value"].get<double>());
    EXPECT_EQ(r[1], v.evidence["witness"]["entries"][1]["value"].get<double>());
  }
}

TEST(AuditP5, NoAdmissibleDeltaIsInapplicable) {
  const auto m = named_atomic_measure("counterexample_p3", unit101());
  EXPECT_EQ(audit_p5(DepthKind::mbd, m, 1.0, 0.5, {}).status, Status::inapplicable);
}

TEST(AuditP6, HDepthConvergesAndIsStable) {
  AuditConfig c;
  const auto v = audit_p6(DepthKind::h, default_gp(), c, 10, {});
  EXPECT_EQ(v.status, Status::satisfied);
  EXPECT_GE(v.evidence["convergence"]["replicates_improved"].get<int>(), 16);
}

TEST(AuditP6, ZeroContaminationChangesNothing) {
  const auto gp = default_gp();
  const auto base = gp.sample(200, 1);
  Distribution out = AtomicDistribution({constant_curve(gp.grid(), 50.0)}, {1.0});
  const auto mixed = contaminate(base, out, 0.0, 2);
  const auto zero = constant_curve(gp.grid(), 0.0);
  for (auto k : kAllDepths) {
    EXPECT_EQ(make_depth(k, base, {})(zero), make_depth(k, mixed, {})(zero));
  }
}

TEST(AuditP6, UnderpoweredConfig) {
  AuditConfig c;
  c.n = 50;
  EXPECT_EQ(audit_p6(DepthKind::mhr, default_gp(), c, 1, {}).status, Status::inapplicable);
}

TEST(AuditConfig, JsonRoundTripAndValidation) {
  AuditConfig c;
  c.seed = 77;
  c.p6_eps = {0.3, 0.1};
  const auto back = AuditConfig::from_json(c.to_json());
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.p6_eps, c.p6_eps);
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_THROW(AuditConfig::from_json({{"replicates", 1}}), ParameterError);
  EXPECT_THROW(AuditConfig::from_json({{"n", "many"}}), ParameterError);
}

TEST(AuditReport, MarkdownAndJsonShape) {
  AuditReport r;
  for (auto k : kAllDepths) {
    for (auto p : kAllProperties) r.cells[static_cast<int>(k)][static_cast<int>(p)].status = Golden::expected(k, p);
  }
  EXPECT_TRUE(r.matches_golden());
  const auto j = r.to_json();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["matrix"]["D_h"], "✗✓✓✓✓✓");
  EXPECT_EQ(j["matrix"]["D_HR"], "✓✗✗✓✗✓");
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_EQ(j["cells"].size(), 36u);
  const auto md = r.to_markdown();
  EXPECT_NE(md.find("| D_MHR | ✓ | ✓ | ✗ | ✓ | ✗ | ✓ |"), std::string::npos) << md;
  r.cells[0][0].status = Status::inapplicable;
  EXPECT_FALSE(r.matches_golden());
  EXPECT_EQ(r.inapplicable().size(), 1u);
}

TEST(Statistics, QuantileType7) {
  EXPECT_DOUBLE_EQ(stats::quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(stats::quantile({0.25, 0.25, 0.5, 0.5}, 0.3), 0.25);
  EXPECT_DOUBLE_EQ(stats::median({3, 1, 2}), 2.0);
}
