#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "pit/concentrate.hpp"
#include "pit/errors.hpp"
#include "pit/linalg.hpp"
#include "pit/verify.hpp"

using namespace pit;

namespace {

const std::uint64_t kMersenne61 = 2305843009213693951ULL;

Matrix mat2(Scalar a, Scalar b, Scalar c, Scalar d) {
  Matrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

std::string prov(const PointSet& ps, const std::string& key) {
  for (const auto& [k, v] : ps.provenance().params)
    if (k == key) return v;
  return "";
}

Roabp invertible_sample(std::uint64_t seed, std::uint64_t modulus = 10007) {
  InstanceSpec spec;
  spec.cls = InstanceClass::InvertibleRoabp;
  spec.params.n = 5;
  spec.params.d = 4;
  spec.params.w = 2;
  spec.params.s = 3;
  spec.params.delta = 2;
  spec.seed = seed;
  spec.modulus = modulus;
  return std::get<Roabp>(generate_instance(spec));
}

Roabp width2_sample(std::uint64_t seed, std::size_t singular) {
  InstanceSpec spec;
  spec.cls = InstanceClass::Width2Roabp;
  spec.params.n = 4;
  spec.params.d = 3;
  spec.params.s = 2;
  spec.params.delta = 1;
  spec.params.singular = singular;
  spec.seed = seed;
  spec.modulus = kMersenne61;
  return std::get<Roabp>(generate_instance(spec));
}

}  // namespace

TEST(Ell, Values) {
  EXPECT_EQ(ell_parameter(1, 1, kUnboundedSupport), 1u);
  EXPECT_EQ(ell_parameter(2, 2, 1), 3u);
  EXPECT_EQ(ell_parameter(2, 2, kUnboundedSupport), 7u);  // ceil(log2 8) = 3
  EXPECT_EQ(ell_parameter(2, 3, kUnboundedSupport), 9u);  // ceil(log2 12) = 4
  EXPECT_EQ(ell_parameter(3, 1, 2), 5u);
}

TEST(Concentration, ConstantIsConcentrated) {
  Field f(101);
  MatPoly c = MatPoly::constant(f, 2, mat2(1, 2, 3, 4));
  for (std::size_t b = 1; b < 4; ++b) {
    auto rp = concentration_rank(c, nullptr, b, Concentration::Support);
    EXPECT_EQ(rp.low, 1u);
    EXPECT_EQ(rp.full, 1u);
  }
  EXPECT_THROW(concentration_rank(c, nullptr, 1, Concentration::Block), PreconditionError);
}

TEST(Concentration, BlockSupportWSquared) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    InstanceSpec spec;
    spec.cls = InstanceClass::Roabp;
    spec.params.n = 5;
    spec.params.d = 4;
    spec.params.w = 2;
    spec.params.s = 3;
    spec.params.invertible_constant = true;
    spec.params.target = Target::Any;
    spec.seed = seed;
    Roabp r = std::get<Roabp>(generate_instance(spec));
    auto blocks = layer_blocks(r);
    auto D = expand(r).matrix_part;
    // layer_blocks wraps the interior blocks with the two boundary blocks
    std::vector<std::vector<std::size_t>> interior(blocks.begin() + 1, blocks.end() - 1);
    EXPECT_TRUE(concentration_rank(D, &interior, 4, Concentration::Block).concentrated()) << seed;
  }
}

TEST(Shift, SingularLayerIsPrecondition) {
  Field f(101);
  MatPoly L(f, 1, 2);
  L.add_term({0}, mat2(1, 2, 2, 4));
  L.add_term({1}, mat2(2, 4, 4, 8));
  Roabp r = Roabp::with_constant_boundaries(f, 1, {{0}}, {L}, {1, 0}, {0, 1});
  EXPECT_THROW(find_concentrating_shift(r), PreconditionError);
}

TEST(Shift, UnivariateLayersWithInvertibleConstants) {
  Field f(10007);
  Rng rng(41);
  std::vector<MatPoly> layers;
  for (std::size_t i = 0; i < 3; ++i) {
    MatPoly L(f, 3, 2);
    L.add_term(ExponentVector(3, 0), Matrix::identity(2));
    ExponentVector e(3, 0);
    e[i] = 1;
    L.add_term(e, mat2(rng.scalar(f), rng.scalar(f), rng.scalar(f), rng.scalar(f)));
    layers.push_back(L);
  }
  Roabp r = Roabp::with_constant_boundaries(f, 3, {{0}, {1}, {2}}, layers, {1, 2}, {3, 4});
  auto s = find_concentrating_shift(r);
  EXPECT_GE(s.ell, 1u);
  EXPECT_EQ(s.offsets.size(), 3u);
  for (auto a : s.map.exponents) EXPECT_GE(a, 1u);
}

TEST(Shift, ShiftedLayersAreConcentrated) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Roabp r = invertible_sample(seed);
    auto s = find_concentrating_shift(r);
    for (const auto& L : r.layers()) {
      MatPoly shifted = shift(L, s.offsets);
      EXPECT_TRUE(concentration_rank(shifted, nullptr, s.ell, Concentration::Support).concentrated()) << seed;
    }
  }
}

TEST(LowSupport, Counts) {
  Field f(101);
  auto one = low_support_hitting_set(f, 4, 2, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.at(0), (std::vector<Scalar>{0, 0, 0, 0}));

  auto six = low_support_hitting_set(f, 3, 1, 2);
  EXPECT_EQ(six.size(), 6u);
  std::set<std::vector<Scalar>> pts;
  for (std::uint64_t i = 0; i < six.size(); ++i) {
    auto p = six.at(i);
    EXPECT_EQ(std::count(p.begin(), p.end(), 0u), 2);
    pts.insert(p);
  }
  EXPECT_EQ(pts.size(), 6u);
  EXPECT_EQ(formula_size(six), std::optional<std::uint64_t>(6));
}

TEST(LowSupport, HitsConcentratedPolynomials) {
  Field f(10007);
  Rng rng(42);
  for (int t = 0; t < 30; ++t) {
    // a support-2 term keeps the polynomial 3-concentrated
    ScalarPoly p(f, 5);
    ExponentVector low(5, 0);
    low[rng.below(5)] = 1 + rng.below(2);
    low[rng.below(5)] = 1 + rng.below(2);
    p.add_term(low, rng.nonzero(f));
    for (int k = 0; k < 3; ++k) {
      ExponentVector e(5);
      for (auto& x : e) x = static_cast<std::uint32_t>(rng.below(3));
      p.add_term(e, rng.nonzero(f));
    }
    auto ps = low_support_hitting_set(f, 5, 2, 3);
    bool hit = false;
    for (std::uint64_t i = 0; i < ps.size() && !hit; ++i) hit = eval_poly(p, ps.at(i)) != 0;
    EXPECT_TRUE(hit);
  }
}

TEST(InvertibleSet, WitnessAndSize) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Roabp r = invertible_sample(seed);
    PointSet ps = invertible_hitting_set(r, Mode::Whitebox);
    auto rep = verify_hitting_property(r, ps);
    EXPECT_TRUE(rep.pass) << seed;
    EXPECT_FALSE(rep.zero);
    EXPECT_TRUE(rep.size_matches());
  }
}

TEST(Width2, FactorizeSingularConstantLayer) {
  Field f(7);
  Rng rng(43);
  MatPoly L1 = MatPoly::constant(f, 2, mat2(1, 2, 3, 6));
  MatPoly L2(f, 2, 2);
  L2.add_term({0, 0}, Matrix::identity(2));
  L2.add_term({0, 1}, mat2(2, 5, 1, 3));
  Roabp r = Roabp::with_constant_boundaries(f, 2, {{0}, {1}}, {L1, L2}, {2, 5}, {4, 1});
  auto fac = factorize_width2(r);
  EXPECT_FALSE(fac.zero);
  EXPECT_EQ(fac.singular, (std::vector<std::size_t>{0}));
  EXPECT_EQ(fac.alpha, ScalarPoly::constant(f, 2, 1));
  ASSERT_EQ(fac.chain.size(), 2u);
  const auto& col = fac.chain[0].right().vec;
  const auto& row = fac.chain[1].left().vec;
  EXPECT_EQ(col[0], ScalarPoly::constant(f, 2, 1));
  EXPECT_EQ(col[1], ScalarPoly::constant(f, 2, 3));
  EXPECT_EQ(row[0], ScalarPoly::constant(f, 2, 1));
  EXPECT_EQ(row[1], ScalarPoly::constant(f, 2, 2));
  for (int t = 0; t < 20; ++t) {
    auto pt = oracle::random_point(rng, f, 2);
    EXPECT_EQ(evaluate(r, pt), f.mul(evaluate(fac.chain[0], pt), evaluate(fac.chain[1], pt)));
  }
}

TEST(Width2, FactorizeInvertibleAndZero) {
  Roabp r = invertible_sample(3, kMersenne61);
  auto fac = factorize_width2(r);
  ASSERT_EQ(fac.chain.size(), 1u);
  EXPECT_EQ(fac.alpha, ScalarPoly::constant(r.field(), r.n(), 1));
  EXPECT_TRUE(fac.singular.empty());

  Field f(101);
  MatPoly zero(f, 1, 2);
  Roabp z = Roabp::with_constant_boundaries(f, 1, {{0}}, {zero}, {1, 1}, {1, 1});
  EXPECT_TRUE(factorize_width2(z).zero);
  PointSet ps = width2_hitting_set(z, Mode::Whitebox);
  EXPECT_EQ(ps.size(), 1u);
  EXPECT_EQ(formula_size(ps), std::optional<std::uint64_t>(1));
}

TEST(Width2, FactorizationIdentity) {
  Rng rng(44);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Roabp r = width2_sample(seed, 2);
    auto fac = factorize_width2(r);
    ASSERT_FALSE(fac.zero);
    for (const auto& c : fac.chain)
      for (const auto& L : c.layers()) EXPECT_FALSE(det_poly(L.grid()).is_zero());
    for (int t = 0; t < 20; ++t) {
      auto pt = oracle::random_point(rng, r.field(), r.n());
      Scalar prod = 1;
      for (const auto& c : fac.chain) prod = r.field().mul(prod, evaluate(c, pt));
      EXPECT_EQ(r.field().mul(eval_poly(fac.alpha, pt), evaluate(r, pt)), prod);
    }
  }
}

TEST(Width2, SizeFormulaAndWitness) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Roabp r = width2_sample(seed, seed % 3);
    PointSet ps = width2_hitting_set(r, Mode::Whitebox);
    std::uint64_t d = r.depth(), delta = std::max<std::uint32_t>(r.degree_bound(), 1);
    std::uint64_t h = std::stoull(prov(ps, "anchors"));
    EXPECT_EQ(ps.size(), 1 + (d + 2) * (d + 2) * delta * h);
    auto rep = verify_hitting_property(r, ps);
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(rep.size_matches());
  }
}

TEST(Width2, InvertibleInstanceHitByAnchors) {
  Roabp r = width2_sample(7, 0);
  PointSet ps = width2_hitting_set(r, Mode::Whitebox);
  std::uint64_t h = std::stoull(prov(ps, "anchors"));
  auto rep = verify_hitting_property(r, ps);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_LT(*rep.witness, h);
  bool beyond = false;
  for (std::uint64_t u = h; u < ps.size() && !beyond; ++u) beyond = evaluate(r, ps.at(u)) != 0;
  EXPECT_TRUE(beyond);
}

TEST(Lagrange, Examples) {
  Field f(101);
  LagrangeCurve one(f, {{5, 6}}, {3});
  EXPECT_EQ(one(0), (std::vector<Scalar>{5, 6}));
  EXPECT_EQ(one(77), (std::vector<Scalar>{5, 6}));

  LagrangeCurve two(f, {{1, 2}, {3, 7}}, {0, 1});
  EXPECT_EQ(two(0), (std::vector<Scalar>{1, 2}));
  EXPECT_EQ(two(1), (std::vector<Scalar>{3, 7}));
  EXPECT_EQ(two(2), (std::vector<Scalar>{5, 12}));  // straight line

  EXPECT_THROW(LagrangeCurve(f, {{1}, {2}}, {4, 4}), PreconditionError);
  EXPECT_THROW(LagrangeCurve(Field(3), {{1}, {2}, {0}}, {0, 1, 2}), CapabilityError);
}

TEST(Lagrange, RandomAnchorsAndNodes) {
  Field f(101);
  Rng rng(45);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<Scalar>> anchors;
    for (int i = 0; i < 4; ++i) anchors.push_back(oracle::random_point(rng, f, 3));
    std::vector<Scalar> nodes;
    while (nodes.size() < 4) {
      Scalar b = rng.scalar(f);
      if (std::find(nodes.begin(), nodes.end(), b) == nodes.end()) nodes.push_back(b);
    }
    LagrangeCurve c(f, anchors, nodes);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(c(nodes[i]), anchors[i]);
  }
}
