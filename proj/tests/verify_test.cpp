#include <gtest/gtest.h>

#include <set>

#include "pit/concentrate.hpp"
#include "pit/depth3.hpp"
#include "pit/errors.hpp"
#include "pit/io.hpp"
#include "pit/rng.hpp"
#include "pit/verify.hpp"

using namespace pit;

namespace {

InstanceSpec spec_for(InstanceClass cls, std::uint64_t seed) {
  InstanceSpec s;
  s.cls = cls;
  s.seed = seed;
  if (cls == InstanceClass::Width2Roabp) s.modulus = 2305843009213693951ULL;
  if (cls == InstanceClass::SumSml || cls == InstanceClass::Depth3Distance) {
    s.params.n = 8;
    s.params.k = 3;
  }
  return s;
}

}  // namespace

TEST(Params, SetAndDescribe) {
  InstanceParams p;
  set_param(p, "n=7");
  set_param(p, "target=zero");
  set_param(p, "mu=inf");
  EXPECT_EQ(p.n, 7u);
  EXPECT_EQ(p.target, Target::Zero);
  EXPECT_EQ(p.mu, kUnboundedSupport);
  EXPECT_THROW(set_param(p, "bogus=1"), ParseError);
  EXPECT_THROW(set_param(p, "n"), ParseError);
  EXPECT_NE(describe(p).find("n=7"), std::string::npos);
  EXPECT_EQ(parse_instance_class("width2-roabp"), InstanceClass::Width2Roabp);
  EXPECT_THROW(parse_instance_class("roabps"), ParseError);
}

TEST(Generate, SameSeedSameBytes) {
  for (auto cls : {InstanceClass::Roabp, InstanceClass::InvertibleRoabp, InstanceClass::Width2Roabp,
                   InstanceClass::Depth3Distance, InstanceClass::SumSml}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto a = dump_circuit(generate_instance(spec_for(cls, seed)));
      auto b = dump_circuit(generate_instance(spec_for(cls, seed)));
      EXPECT_EQ(a, b);
      EXPECT_NE(a, dump_circuit(generate_instance(spec_for(cls, seed + 100))));
    }
  }
}

TEST(Generate, InvertibleLayersHaveNonzeroDeterminant) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Roabp r = std::get<Roabp>(generate_instance(spec_for(InstanceClass::InvertibleRoabp, seed)));
    for (const auto& L : r.layers()) EXPECT_FALSE(det_poly(L.grid()).is_zero());
  }
}

TEST(Generate, SumSmlPartitionCount) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    InstanceSpec s = spec_for(InstanceClass::SumSml, seed);
    s.params.c = 2;
    s.params.k = 4;
    auto c = std::get<Depth3Circuit>(generate_instance(s));
    std::set<Partition> parts;
    for (const auto& g : c.gates()) parts.insert(gate_partition(g, c.n()));
    EXPECT_LE(parts.size(), 2u);
  }
}

TEST(Generate, NonzeroTargetIsNonzero) {
  for (auto cls : {InstanceClass::Roabp, InstanceClass::InvertibleRoabp, InstanceClass::Depth3Distance,
                   InstanceClass::SumSml}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_FALSE(oracle_is_zero(generate_instance(spec_for(cls, seed))));
  }
}

TEST(Oracle, Examples) {
  Field f(101);
  Gate g;
  g.scale = 5;
  g.forms = {LinearForm{1, {{0, 2}}}, LinearForm{3, {{1, 1}}}};
  Gate h = g;
  h.scale = f.neg(5);
  EXPECT_TRUE(oracle_is_zero(Depth3Circuit(f, 2, {g, h})));
  Gate mono;
  mono.scale = 1;
  mono.forms = {LinearForm{0, {{0, 1}}}};
  EXPECT_FALSE(oracle_is_zero(Depth3Circuit(f, 2, {mono})));
}

TEST(Oracle, AgreesWithGridOnThreeVariables) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    InstanceSpec s;
    s.params.n = 3;
    s.params.d = 3;
    s.params.delta = 2;
    s.params.target = seed % 3 == 0 ? Target::Zero : Target::Any;
    s.seed = seed;
    auto inst = generate_instance(s);
    std::size_t n = instance_n(inst);
    std::uint64_t deg = expand_instance(inst).max_total_degree();
    bool grid_zero = true;
    std::vector<Scalar> pt(n, 0);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= deg + 1;
    for (std::uint64_t k = 0; k < total; ++k) {
      std::uint64_t rest = k;
      for (std::size_t i = 0; i < n; ++i) {
        pt[i] = rest % (deg + 1);
        rest /= deg + 1;
      }
      grid_zero &= evaluate_instance(inst, pt) == 0;
    }
    EXPECT_EQ(oracle_is_zero(inst), grid_zero) << seed;
  }
}

TEST(HittingProperty, VacuousAndEmpty) {
  InstanceSpec s;
  s.params.target = Target::Zero;
  auto zero = generate_instance(s);
  PointSet some(instance_n(zero), {"explicit", {}});
  some.push_back(std::vector<Scalar>(instance_n(zero), 1));
  auto rep = verify_hitting_property(zero, some);
  EXPECT_TRUE(rep.zero);
  EXPECT_TRUE(rep.pass);

  s.params.target = Target::Nonzero;
  auto nz = generate_instance(s);
  PointSet empty(instance_n(nz), {"explicit", {}});
  auto miss = verify_hitting_property(nz, empty);
  EXPECT_FALSE(miss.pass);
  EXPECT_FALSE(miss.witness.has_value());

  PointSet wrong(instance_n(nz) + 1, {"explicit", {}});
  EXPECT_THROW(verify_hitting_property(nz, wrong), StructuralError);
}

TEST(Campaign, IdenticalAcrossJobCounts) {
  CampaignOptions o;
  o.cls = InstanceClass::Roabp;
  o.samples = 12;
  o.seed = 99;
  o.jobs = 1;
  auto one = run_campaign(o);
  o.jobs = 4;
  auto four = run_campaign(o);
  EXPECT_EQ(one.text(), four.text());
  EXPECT_TRUE(one.ok());
  EXPECT_EQ(one.passed, 12u);
  EXPECT_EQ(run_campaign(o).text(), four.text());
}

TEST(Campaign, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
}
