#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "pit/errors.hpp"
#include "pit/isolate.hpp"
#include "pit/kron.hpp"
#include "pit/linalg.hpp"
#include "pit/verify.hpp"

using namespace pit;

namespace {

Matrix scalar1(Scalar c) {
  Matrix m(1, 1);
  m(0, 0) = c;
  return m;
}

Matrix diag(Scalar a, Scalar b) {
  Matrix m(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

MatPoly product(const std::vector<MatPoly>& fs) {
  MatPoly p = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) p = poly_mul(p, fs[i]);
  return p;
}

Roabp sample(std::uint64_t seed, Target target = Target::Nonzero) {
  InstanceSpec spec;
  spec.params.n = 5;
  spec.params.d = 4;
  spec.params.w = 3;
  spec.params.s = 3;
  spec.params.target = target;
  spec.seed = seed;
  return std::get<Roabp>(generate_instance(spec));
}

}  // namespace

TEST(Greedy, Examples) {
  Field f(7);
  std::vector<GreedyItem> items;
  for (std::uint64_t k = 0; k < 3; ++k) items.push_back({k, {static_cast<std::uint32_t>(k)}, scalar1(3 + k)});
  EXPECT_EQ(greedy_basis(f, items), (std::vector<std::size_t>{0}));
  items[1].weight = 0;
  EXPECT_THROW(greedy_basis(f, items), PreconditionError);
  items[1].weight = 1;

  for (auto& it : items) it.coeff = scalar1(0);
  EXPECT_TRUE(greedy_basis(f, items).empty());
}

TEST(Greedy, PrefixSpansMatchAllItems) {
  Field f(101);
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::uint64_t> weights(8);
    std::iota(weights.begin(), weights.end(), 0);
    rng.shuffle(weights);
    std::vector<std::vector<Scalar>> vecs;
    for (int i = 0; i < 8; ++i) {
      std::vector<Scalar> v(3);
      for (auto& x : v) x = rng.below(3) ? rng.scalar(f) : 0;
      vecs.push_back(v);
    }
    auto basis = greedy_basis_vectors(f, weights, vecs);
    for (std::uint64_t cut = 0; cut < 8; ++cut) {
      std::vector<std::vector<Scalar>> all, chosen;
      for (std::size_t i = 0; i < vecs.size(); ++i)
        if (weights[i] <= cut) all.push_back(vecs[i]);
      for (auto i : basis)
        if (weights[i] <= cut) chosen.push_back(vecs[i]);
      EXPECT_EQ(oracle::subset_rank(f, chosen), chosen.size());
      EXPECT_EQ(chosen.size(), oracle::subset_rank(f, all));
    }
  }
}

TEST(Isolation, DiagonalProduct) {
  Field f(101);
  MatPoly a(f, 2, 2), b(f, 2, 2);
  a.add_term({0, 0}, diag(1, 0));
  a.add_term({1, 0}, diag(0, 1));
  b.add_term({0, 0}, diag(1, 0));
  b.add_term({0, 1}, diag(0, 1));
  auto res = construct_isolating_weights({a, b});
  MatPoly D = poly_mul(a, b);
  ASSERT_EQ(D.sparsity(), 2u);
  EXPECT_TRUE(is_basis_isolating(res.weight.combined, D));
  EXPECT_EQ(res.trace.isolated.size(), 2u);
}

TEST(Isolation, SingleFactorOneRound) {
  Field f(101);
  Rng rng(3);
  MatPoly a(f, 2, 2);
  for (std::uint32_t i = 0; i <= 2; ++i) {
    Matrix m(2, 2);
    for (auto& x : m.data) x = rng.scalar(f);
    a.add_term({i, 2 - i}, m);
  }
  auto res = construct_isolating_weights({a});
  EXPECT_EQ(res.trace.rounds.size(), 1u);
  EXPECT_TRUE(is_basis_isolating(res.weight.combined, a));
}

TEST(Isolation, BasisIsolatingExamples) {
  Field f(101);
  MatPoly single(f, 2, 2);
  single.add_term({1, 1}, Matrix::identity(2));
  EXPECT_TRUE(is_basis_isolating(WeightFn({1, 1}), single));

  MatPoly tie(f, 2, 2);
  tie.add_term({1, 0}, Matrix::identity(2));
  tie.add_term({0, 1}, Matrix::identity(2));
  EXPECT_FALSE(is_basis_isolating(WeightFn({1, 1}), tie));
  EXPECT_TRUE(is_basis_isolating(naive_kronecker(2, 1), tie));
  EXPECT_EQ(isolated_basis(naive_kronecker(2, 1), tie), (std::vector<ExponentVector>{{1, 0}}));
}

TEST(Isolation, RandomProductsAreIsolated) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Roabp r = sample(seed);
    auto factors = isolation_factors(r);
    auto res = construct_isolating_weights(factors);
    MatPoly D = product(factors);
    EXPECT_TRUE(is_basis_isolating(res.weight.combined, D)) << seed;
    // |S| equals the dimension of the coefficient span
    std::vector<std::vector<Scalar>> coeffs;
    for (const auto& [e, m] : D.terms()) coeffs.push_back(m.data);
    EXPECT_EQ(res.trace.isolated.size(), rank_over_field(r.field(), coeffs));
  }
}

TEST(CandidateWeights, SmallFamilies) {
  auto one = enumerate_candidate_weights(2, 1, 2, 1, 1);
  EXPECT_EQ(one.round_count(), 1u);
  EXPECT_EQ(one.size(), one.round_primes(0).size());

  auto fam = enumerate_candidate_weights(2, 2, 2, 1, 1);
  std::uint64_t prod = 1;
  for (std::size_t r = 0; r < fam.round_count(); ++r) prod *= fam.round_primes(r).size();
  EXPECT_EQ(fam.size(), prod);
  EXPECT_EQ(fam.at(0).combined, fam.member(std::vector<std::size_t>(fam.round_count(), 0)).combined);
}

TEST(CandidateWeights, ConstructedPrimesGiveIsolatingMember) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Roabp r = sample(seed);
    auto factors = isolation_factors(r);
    auto res = construct_isolating_weights(factors);
    auto fam = enumerate_candidate_weights(r.n(), factors.size(), std::max<std::size_t>(r.sparsity_bound(), 1),
                                           r.width(), std::max<std::uint32_t>(r.degree_bound(), 1));
    ASSERT_EQ(fam.round_count(), res.trace.rounds.size());
    std::vector<std::size_t> choice(fam.round_count(), 0);
    for (std::size_t k = 0; k < choice.size(); ++k) {
      if (res.trace.rounds[k].skipped) continue;
      const auto& ps = fam.round_primes(k);
      auto it = std::find(ps.begin(), ps.end(), res.trace.rounds[k].prime);
      ASSERT_TRUE(it != ps.end()) << "round " << k;
      choice[k] = static_cast<std::size_t>(it - ps.begin());
    }
    EXPECT_TRUE(is_basis_isolating(fam.member(choice).combined, product(factors))) << seed;
  }
}

TEST(RoabpHittingSet, WhiteboxSizeAndWitness) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Roabp r = sample(seed);
    PointSet ps = roabp_hitting_set(r, Mode::Whitebox);
    auto rep = verify_hitting_property(r, ps);
    EXPECT_TRUE(rep.pass);
    EXPECT_FALSE(rep.zero);
    EXPECT_TRUE(rep.size_matches());
    auto iso = construct_isolating_weights(isolation_factors(r));
    EXPECT_EQ(ps.size(), 1 + iso.weight_max - iso.weight_min);
  }
}

TEST(RoabpHittingSet, ZeroInstanceIsVacuous) {
  Roabp r = sample(5, Target::Zero);
  PointSet ps = roabp_hitting_set(r, Mode::Whitebox);
  auto rep = verify_hitting_property(r, ps);
  EXPECT_TRUE(rep.zero);
  EXPECT_TRUE(rep.pass);
  EXPECT_FALSE(rep.witness.has_value());
}

TEST(RoabpHittingSet, BlackboxOnTinyInstance) {
  Field f(10007);
  MatPoly a(f, 2, 1), b(f, 2, 1);
  a.add_term({1, 0}, Matrix::identity(1));
  a.add_term({0, 0}, Matrix::identity(1));
  b.add_term({0, 1}, Matrix::identity(1));
  Roabp r = Roabp::with_constant_boundaries(f, 2, {{0}, {1}}, {a, b}, {1}, {1});
  PointSet ps = roabp_hitting_set(r, Mode::Blackbox);
  auto rep = verify_hitting_property(r, ps);
  EXPECT_TRUE(rep.pass);
  EXPECT_TRUE(rep.witness.has_value());
}
