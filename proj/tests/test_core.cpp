#include <gtest/gtest.h>

#include <sstream>

#include "fdepth/core.hpp"
#include "fdepth/csv.hpp"
#include "oracles.hpp"

using namespace fdepth;

namespace {
GridPtr unit101() { return Grid::uniform(0.0, 1.0, 101); }
}  // namespace

TEST(Grid, RejectsInvalidPoints) {
  EXPECT_THROW(Grid({0.0}), DomainError);
  EXPECT_THROW(Grid({0.0, 0.0, 1.0}), DomainError);
  EXPECT_THROW(Grid({1.0, 0.5}), DomainError);
  EXPECT_THROW(Grid({0.0, std::nan("")}), DomainError);
}

TEST(Grid, TrapezoidWeightsMatchOracle) {
  const std::vector<double> p{0.0, 0.1, 0.35, 0.4, 1.0, 2.5};
  const Grid g(p);
  const auto w = oracle::trapezoid_weights(p);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(g.weight(i), w[i]);
  EXPECT_NEAR(g.length(), 2.5, 1e-12 * 2.5);
}

TEST(Grid, UniformEndsExactly) {
  const auto g = Grid::uniform(-1.0, 3.0, 7);
  EXPECT_EQ(g->front(), -1.0);
  EXPECT_EQ(g->back(), 3.0);
  EXPECT_EQ(g->size(), 7u);
}

TEST(Curve, RejectsNonFiniteAndSizeMismatch) {
  const auto g = Grid::uniform(0.0, 1.0, 3);
  EXPECT_THROW(Curve(g, {0.0, 1.0}), DomainError);
  EXPECT_THROW(Curve(g, {0.0, std::numeric_limits<double>::infinity(), 1.0}), DataError);
}

TEST(Distance, L2OfIdenticalCurvesIsZero) {
  const auto g = unit101();
  const auto x = curve_from(g, [](double v) { return std::sin(5 * v); });
  EXPECT_EQ(l2_distance(x, x), 0.0);
}

TEST(Distance, L2OfUnitConstantGap) {
  const auto g = unit101();
  EXPECT_NEAR(l2_distance(constant_curve(g, 1.0), constant_curve(g, 0.0)), 1.0, 1e-10);
}

TEST(Distance, L2OfConstantsTwoAndMinusOne) {
  const auto g = unit101();
  EXPECT_NEAR(l2_distance(constant_curve(g, 2.0), constant_curve(g, -1.0)), 3.0, 1e-10);
}

TEST(Distance, L2AgreesWithSegmentOracle) {
  const auto g = Grid::uniform(0.0, 2.0, 37);
  const auto x = curve_from(g, [](double v) { return v * v - 1; });
  const auto y = curve_from(g, [](double v) { return std::cos(3 * v); });
  const auto p = oracle::points(*g);
  EXPECT_NEAR(l2_distance(x, y), oracle::l2(p, oracle::values(x), oracle::values(y)), 1e-12);
}

TEST(Distance, SupExamples) {
  const auto g = unit101();
  const auto x = constant_curve(g, 2.0);
  EXPECT_EQ(sup_distance(x, x), 0.0);
  EXPECT_EQ(sup_distance(x, constant_curve(g, -1.0)), 3.0);
  EXPECT_EQ(sup_distance(curve_from(g, [](double v) { return v; }), constant_curve(g, 0.0)), 1.0);
}

TEST(Distance, GridMismatchIsDomainError) {
  const auto a = Grid::uniform(0.0, 1.0, 11);
  const auto b = Grid::uniform(0.0, 1.0, 12);
  EXPECT_THROW(l2_distance(constant_curve(a, 0), constant_curve(b, 0)), DomainError);
  EXPECT_THROW(sup_distance(constant_curve(a, 0), constant_curve(b, 0)), DomainError);
}

TEST(Distance, EqualGridsInDistinctObjectsAreCompatible) {
  const auto a = Grid::uniform(0.0, 1.0, 11);
  const auto b = Grid::uniform(0.0, 1.0, 11);
  EXPECT_NEAR(sup_distance(constant_curve(a, 1), constant_curve(b, 0)), 1.0, 0.0);
}

TEST(LebesgueFraction, AllAndNone) {
  const auto g = unit101();
  EXPECT_DOUBLE_EQ(lebesgue_fraction(Mask(101, true), *g), 1.0);
  EXPECT_DOUBLE_EQ(lebesgue_fraction(Mask(101, false), *g), 0.0);
}

TEST(LebesgueFraction, InitialThirtyPercent) {
  const auto g = unit101();
  Mask m(101);
  for (std::size_t i = 0; i < 101; ++i) m[i] = g->point(i) <= 0.3 + 1e-12;
  EXPECT_NEAR(lebesgue_fraction(m, *g), 0.3, 0.01);
}

TEST(LebesgueFraction, LengthMismatch) {
  EXPECT_THROW(lebesgue_fraction(Mask(5, true), *unit101()), DomainError);
}

TEST(FunctionalSample, WeightValidation) {
  const auto g = unit101();
  std::vector<Curve> c{constant_curve(g, 0), constant_curve(g, 1)};
  EXPECT_THROW(FunctionalSample(c, {0.7, 0.7}), ParameterError);
  EXPECT_THROW(FunctionalSample(c, {-0.5, 1.5}), ParameterError);
  EXPECT_THROW(FunctionalSample(std::vector<Curve>{}), DomainError);
  const FunctionalSample s(c);
  EXPECT_TRUE(s.uniform());
  EXPECT_DOUBLE_EQ(s.weight(1), 0.5);
  EXPECT_FALSE(FunctionalSample(c, {0.25, 0.75}).uniform());
}

TEST(FunctionalSample, MixedGridsRejected) {
  std::vector<Curve> c{constant_curve(Grid::uniform(0, 1, 5), 0), constant_curve(Grid::uniform(0, 2, 5), 0)};
  EXPECT_THROW(FunctionalSample{c}, DomainError);
}

TEST(Csv, ReadsGridAndCurves) {
  std::istringstream in("0,0.5,1\n1,2,3\n\n-1,+2.5,1e-3\n");
  const auto s = read_sample(in);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.grid()->size(), 3u);
  EXPECT_EQ(s.curve(1)[1], 2.5);
}

TEST(Csv, ReportsLineOfBadCell) {
  std::istringstream in("0,1\n1,2\n3,abc\n");
  try {
    read_sample(in);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Csv, RejectsRaggedRowsAndDenseNaN) {
  std::istringstream ragged("0,1,2\n1,2\n");
  EXPECT_THROW(read_sample(ragged), DataError);
  std::istringstream nan("0,1,2\n1,NaN,2\n");
  EXPECT_THROW(read_sample(nan), DataError);
  std::istringstream empty("");
  EXPECT_THROW(read_sample(empty), DataError);
}

TEST(Csv, SparseModeKeepsNaN) {
  std::istringstream in("0,1,2\n1,,2\n1,NaN,3\n");
  const auto t = read_csv_table(in, true);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_TRUE(std::isnan(t.rows[0][1]));
  EXPECT_TRUE(std::isnan(t.rows[1][1]));
}

TEST(Csv, TaggedRowsAreSeparated) {
  std::istringstream in("0,1\n1,2\nL,0,0\nU,3,3\n");
  const auto t = read_csv_table(in);
  EXPECT_EQ(t.rows.size(), 1u);
  ASSERT_EQ(t.tagged.size(), 2u);
  EXPECT_EQ(t.tagged[1].tag, "U");
}

TEST(Csv, RoundTripIsBitExact) {
  const auto g = Grid::uniform(0.0, 1.0, 9);
  std::vector<Curve> c{curve_from(g, [](double v) { return std::exp(v) / 3.0; }),
                       curve_from(g, [](double v) { return -1e-300 * v + 1.0 / 7.0; })};
  std::ostringstream out;
  write_sample(out, FunctionalSample(c));
  std::istringstream in(out.str());
  const auto back = read_sample(in);
  EXPECT_TRUE(*back.grid() == *g);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_TRUE(back.curve(i) == c[i]);
}
