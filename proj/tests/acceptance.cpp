// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>

#include "oracles.hpp"
#include "pit/concentrate.hpp"
#include "pit/depth3.hpp"
#include "pit/errors.hpp"
#include "pit/isolate.hpp"
#include "pit/kron.hpp"
#include "pit/linalg.hpp"
#include "pit/verify.hpp"

using namespace pit;

namespace {

const std::uint64_t kMersenne61 = 2305843009213693951ULL;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t c = 1;
  for (std::uint64_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

// Draws instances with seeds derive_seed(base, 0), derive_seed(base, 1), ...
// and keeps those accepted by keep until `want` are collected.
template <class T>
std::vector<T> draw(InstanceSpec spec, std::uint64_t base, std::size_t want,
                    const std::function<bool(const T&)>& keep = nullptr) {
  std::vector<T> out;
  for (std::uint64_t i = 0; out.size() < want; ++i) {
    if (i > 50 * want) throw InternalError("could not draw enough instances");
    spec.seed = derive_seed(base, i);
    T inst = std::get<T>(generate_instance(spec));
    if (!keep || keep(inst)) out.push_back(std::move(inst));
  }
  return out;
}

MatPoly product(const std::vector<MatPoly>& fs) {
  MatPoly p = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) p = poly_mul(p, fs[i]);
  return p;
}

// 1. Whitebox ROABP hitting sets.
Outcome roabp_completeness() {
  CampaignOptions o;
  o.cls = InstanceClass::Roabp;
  o.params.n = 5;
  o.params.d = 4;
  o.params.w = 3;
  o.params.s = 3;
  o.params.delta = 2;
  o.samples = 200;
  o.seed = 1;
  o.modulus = 10007;
  o.jobs = 4;
  auto rep = run_campaign(o);
  bool ok = rep.passed == 200 && rep.vacuous == 0 && rep.ok();
  return {ok, fmt("witness %zu/200, vacuous %zu, errors %zu, size mismatches %zu, max size %llu", rep.passed,
                  rep.vacuous, rep.errors, rep.size_mismatches, static_cast<unsigned long long>(rep.max_size))};
}

// 2. The constructed weight is basis isolating and C(t) starts at t^{w(m*)}.
Outcome basis_isolation() {
  InstanceSpec spec;
  spec.params.n = 5;
  spec.params.d = 4;
  spec.params.w = 2;
  spec.params.s = 3;
  spec.params.delta = 2;
  auto rs = draw<Roabp>(spec, 2, 100, [](const Roabp& r) { return r.width() == 2; });
  std::size_t isolating = 0, lowest = 0;
  for (const auto& r : rs) {
    auto factors = isolation_factors(r);
    auto iso = construct_isolating_weights(factors);
    const WeightFn& W = iso.weight.combined;
    if (is_basis_isolating(W, product(factors))) ++isolating;

    ScalarPoly c = expand(r).scalar_part;
    UniPoly u = weighted_substitute(r, W);
    std::uint64_t best = UINT64_MAX;
    std::size_t at_best = 0;
    ExponentVector m;
    Scalar cm = 0;
    for (const auto& [e, coeff] : c.terms()) {
      std::uint64_t we = W.weight(e);
      if (we < best) best = we, at_best = 0, m = e, cm = coeff;
      if (we == best) ++at_best;
    }
    bool in_s = std::find(iso.trace.isolated.begin(), iso.trace.isolated.end(), m) != iso.trace.isolated.end();
    bool low_ok = !u.is_zero() && at_best == 1 && in_s && best < u.coeffs.size() && u.coeffs[best] == cm;
    for (std::uint64_t k = 0; low_ok && k < best; ++k) low_ok = u.coeffs[k] == 0;
    if (low_ok) ++lowest;
  }
  return {isolating == 100 && lowest == 100,
          fmt("isolating %zu/100, lowest term t^w(m*) %zu/100", isolating, lowest)};
}

// 3. Separating primes within the cutoff.
Outcome kronecker() {
  Rng rng(derive_seed(3, 0));
  std::size_t found = 0;
  std::uint64_t worst_prime = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng.below(8);
    std::uint32_t delta = static_cast<std::uint32_t>(1 + rng.below(3));
    std::uint64_t monos = 1;
    for (std::size_t i = 0; i < n; ++i) monos *= delta + 1;
    std::uint64_t cap = std::min<std::uint64_t>(50, monos * (monos - 1) / 2);
    std::size_t want = 1 + rng.below(cap);
    PairSet a(n, delta);
    std::set<std::pair<ExponentVector, ExponentVector>> seen;
    while (a.size() < want) {
      ExponentVector x(n), y(n);
      for (auto& v : x) v = static_cast<std::uint32_t>(rng.below(delta + 1));
      for (auto& v : y) v = static_cast<std::uint32_t>(rng.below(delta + 1));
      if (x == y || !seen.insert(std::minmax(x, y)).second) continue;
      a.add(x, y);
    }
    try {
      Separator s = first_separating_weight(n, delta, a, 4);
      bool ok = s.prime <= s.cutoff && s.cutoff == kron_cutoff(n, delta, a.size(), 4);
      for (const auto& pr : a.pairs()) {
        std::uint64_t wa = 0, wb = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::uint64_t wi = 1;
          for (std::size_t k = 0; k < i; ++k) wi = wi * (delta + 1) % s.prime;
          if (wi == 0) wi = s.prime;
          wa += wi * pr.a[i];
          wb += wi * pr.b[i];
        }
        ok &= wa != wb;
      }
      if (ok) ++found;
      worst_prime = std::max(worst_prime, s.prime);
    } catch (const InternalError&) {
    }
  }
  return {found == 100, fmt("separator within cutoff %zu/100, largest prime used %llu", found,
                            static_cast<unsigned long long>(worst_prime))};
}

// 4. Distance-delta circuits become ROABPs computing the same polynomial.
Outcome distance_reduction() {
  InstanceSpec spec;
  spec.cls = InstanceClass::Depth3Distance;
  spec.params.n = 8;
  spec.params.k = 3;
  spec.params.delta = 2;
  spec.params.target = Target::Any;
  auto cs = draw<Depth3Circuit>(spec, 4, 100);
  std::size_t equal = 0, within = 0, max_width = 0, max_delta = 0;
  for (const auto& c : cs) {
    auto order = best_gate_order(c);
    auto red = circuit_to_roabp(c, order.order);
    if (expand(red.roabp).scalar_part == expand(c)) ++equal;
    std::size_t bound = c.k() * static_cast<std::size_t>(std::pow(c.n() + 1, order.distance));
    if (order.distance <= 2 && red.roabp.width() <= red.width_bound && red.width_bound <= bound) ++within;
    max_width = std::max(max_width, red.roabp.width());
    max_delta = std::max(max_delta, order.distance);
  }
  return {equal == 100 && within == 100,
          fmt("expansion equal %zu/100, width within k(n+1)^delta %zu/100, max width %zu, max distance %zu", equal,
              within, max_width, max_delta)};
}

Partition random_partition(Rng& rng, std::size_t n) {
  std::size_t colors = 2 + rng.below(n - 1);
  std::vector<std::vector<std::size_t>> c(colors);
  for (std::size_t i = 0; i < n; ++i) c[rng.below(colors)].push_back(i);
  std::erase_if(c, [](const auto& x) { return x.empty(); });
  return make_partition(c, iota_vec(n));
}

bool certified(const BaseSetDecomposition& d, std::size_t n) {
  std::set<std::size_t> covered;
  for (const auto& b : d.sets) {
    for (auto v : b.variables)
      if (!covered.insert(v).second) return false;
    std::vector<Partition> seq;
    for (auto i : b.order) seq.push_back(restrict_partition(d.partitions[i], b.variables));
    if (compute_distance(seq) != 1) return false;
  }
  return covered.size() == n;
}

// 5. Base-set decompositions: caps, certificates, tightness.
Outcome base_sets() {
  Rng rng(derive_seed(5, 0));
  std::size_t good = 0;
  double worst_ratio = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t c = 2 + t % 2, n = std::vector<std::size_t>{16, 36, 64}[(t / 2) % 3];
    std::vector<Partition> ps;
    for (std::size_t i = 0; i < c; ++i) ps.push_back(random_partition(rng, n));
    auto d = decompose_base_sets(ps);
    double cap = std::pow(2.0, c - 1) * std::pow(n, 1 - 1 / std::pow(2.0, c - 1));
    bool ok = static_cast<double>(d.sets.size()) < cap && certified(d, n);
    if (c == 2) ok &= d.sets.size() <= 2 * static_cast<std::size_t>(std::sqrt(n));
    if (ok) ++good;
    worst_ratio = std::max(worst_ratio, d.sets.size() / cap);
  }
  std::string tight;
  bool tight_ok = true;
  for (std::size_t r : {3, 4, 5}) {
    std::vector<std::vector<std::size_t>> rows(r), res(r);
    for (std::size_t i = 0; i < r * r; ++i) rows[i / r].push_back(i), res[i % r].push_back(i);
    auto d = decompose_base_sets({make_partition(rows, iota_vec(r * r)), make_partition(res, iota_vec(r * r))});
    tight_ok &= d.sets.size() >= r && d.sets.size() <= 2 * r && certified(d, r * r);
    tight += fmt(" n=%zu:m=%zu", r * r, d.sets.size());
  }
  return {good == 100 && tight_ok,
          fmt("under cap with certificates %zu/100 (worst m/cap %.3f); tightness", good, worst_ratio) + tight};
}

// 6. Whitebox sum-of-set-multilinear test against the expansion oracle.
Outcome sum_sml() {
  InstanceSpec spec;
  spec.cls = InstanceClass::SumSml;
  spec.params.n = 9;
  spec.params.k = 3;
  spec.params.c = 3;
  std::size_t match = 0, zeros = 0;
  for (int half = 0; half < 2; ++half) {
    spec.params.target = half ? Target::Nonzero : Target::Zero;
    for (const auto& c : draw<Depth3Circuit>(spec, 6 + half, 50)) {
      bool zero = oracle_is_zero(c);
      zeros += zero;
      auto res = sum_sml_whitebox_test(c);
      bool witness_ok = !res.witness || evaluate(c, *res.witness) != 0;
      if (res.nonzero == !zero && witness_ok && zero == (half == 0)) ++match;
    }
  }
  return {match == 100, fmt("verdict matches oracle %zu/100 (%zu zero, %zu nonzero)", match, zeros, 100 - zeros)};
}

std::vector<std::size_t> block_set(const ExponentVector& e, const std::vector<std::vector<std::size_t>>& blocks) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (auto v : blocks[i])
      if (e[v]) {
        out.push_back(i);
        break;
      }
  return out;
}

bool proper_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// 7. Block-support concentration and the rank facts behind it.
Outcome block_concentration() {
  InstanceSpec spec;
  spec.params.n = 6;
  spec.params.d = 4;
  spec.params.w = 2;
  spec.params.s = 3;
  spec.params.delta = 2;
  spec.params.boundary_blocks = true;
  spec.params.invertible_constant = true;
  spec.params.target = Target::Any;
  auto rs = draw<Roabp>(spec, 7, 50, [](const Roabp& r) { return r.width() == 2; });
  std::size_t inner_ok = 0, outer_ok = 0, lift_ok = 0, chain_ok = 0, lifts = 0, chains = 0;
  for (const auto& r : rs) {
    const Field& f = r.field();
    auto all_blocks = layer_blocks(r);
    std::vector<std::vector<std::size_t>> interior(all_blocks.begin() + 1, all_blocks.end() - 1);
    auto ex = expand(r);
    inner_ok += concentration_rank(ex.matrix_part, &interior, 4, Concentration::Block).concentrated();
    outer_ok += concentration_rank(ex.scalar_part, &all_blocks, 6, Concentration::Block).concentrated();

    std::vector<std::pair<ExponentVector, Matrix>> terms(ex.matrix_part.terms().begin(), ex.matrix_part.terms().end());
    std::vector<std::vector<std::size_t>> bs;
    for (const auto& [e, m] : terms) bs.push_back(block_set(e, interior));
    auto depends = [&](std::size_t i) {
      std::vector<std::vector<Scalar>> desc;
      for (std::size_t k = 0; k < terms.size(); ++k)
        if (proper_subset(bs[k], bs[i])) desc.push_back(terms[k].second.data);
      std::size_t base = rank_over_field(f, desc);
      desc.push_back(terms[i].second.data);
      return rank_over_field(f, desc) == base;
    };
    std::vector<int> dep(terms.size(), -1);
    auto dep_of = [&](std::size_t i) {
      if (dep[i] < 0) dep[i] = depends(i);
      return dep[i] == 1;
    };
    bool lift = true, chain = true;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (bs[i].size() == 4) {
        ++chains;
        chain &= dep_of(i);
      }
      if (bs[i].empty() || !dep_of(i)) continue;
      // parents of e: add one block beyond either end, agreeing with e elsewhere
      for (std::size_t k = 0; k < terms.size(); ++k) {
        if (bs[k].size() != bs[i].size() + 1 || !std::includes(bs[k].begin(), bs[k].end(), bs[i].begin(), bs[i].end()))
          continue;
        std::size_t j = 0;
        for (auto b : bs[k])
          if (!std::binary_search(bs[i].begin(), bs[i].end(), b)) j = b;
        if (j < bs[i].back() && j > bs[i].front()) continue;
        bool agrees = true;
        for (std::size_t v = 0; v < r.n(); ++v)
          if (std::find(interior[j].begin(), interior[j].end(), v) == interior[j].end())
            agrees &= terms[k].first[v] == terms[i].first[v];
        if (!agrees) continue;
        ++lifts;
        lift &= dep_of(k);
      }
    }
    lift_ok += lift;
    chain_ok += chain;
  }
  bool ok = inner_ok == 50 && outer_ok == 50 && lift_ok == 50 && chain_ok == 50;
  return {ok, fmt("w^2 block concentration %zu/50, (w^2+2) with boundaries %zu/50, child-to-parent %zu/50 (%zu pairs), "
                  "bs=w^2 dependence %zu/50 (%zu coefficients)",
                  inner_ok, outer_ok, lift_ok, lifts, chain_ok, chains)};
}

// 8. Invertible-factor ROABPs.
Outcome invertible() {
  InstanceSpec spec;
  spec.cls = InstanceClass::InvertibleRoabp;
  spec.params.n = 5;
  spec.params.d = 4;
  spec.params.w = 2;
  spec.params.s = 3;
  spec.params.delta = 2;
  auto rs = draw<Roabp>(spec, 8, 100);
  std::size_t shifted = 0, hit = 0, sized = 0;
  std::uint64_t max_size = 0;
  for (const auto& r : rs) {
    auto sh = find_concentrating_shift(r);
    bool conc = true;
    for (const auto& L : r.layers())
      conc &= concentration_rank(shift(L, sh.offsets), nullptr, sh.ell, Concentration::Support).concentrated();
    shifted += conc;
    PointSet ps = invertible_hitting_set(r, Mode::Whitebox);
    auto rep = verify_hitting_property(r, ps);
    hit += rep.pass && !rep.zero && rep.witness.has_value();
    std::uint64_t n = r.n(), delta = std::max<std::uint32_t>(r.degree_bound(), 1);
    std::uint64_t j = std::min<std::uint64_t>(sh.ell * (2 * 2 + 2) - 1, n);
    std::uint64_t grid = binomial(n, j);
    for (std::uint64_t i = 0; i < j; ++i) grid *= delta + 1;
    std::uint64_t sum = std::accumulate(sh.map.exponents.begin(), sh.map.exponents.end(), std::uint64_t{0});
    sized += ps.size() == grid * (1 + delta * sum) && rep.size_matches();
    max_size = std::max(max_size, ps.size());
  }
  return {shifted == 100 && hit == 100 && sized == 100,
          fmt("verified shift %zu/100, witness %zu/100, size formula %zu/100, max size %llu", shifted, hit, sized,
              static_cast<unsigned long long>(max_size))};
}

// 9. Width-2 ROABPs with singular layers.
Outcome width2() {
  InstanceSpec spec;
  spec.cls = InstanceClass::Width2Roabp;
  spec.params.n = 5;
  spec.params.d = 4;
  spec.params.s = 3;
  spec.params.delta = 2;
  spec.params.singular = 2;
  spec.modulus = kMersenne61;

  std::size_t identity = 0;
  Rng rng(derive_seed(9, 1));
  for (const auto& r : draw<Roabp>(spec, 9, 50)) {
    auto fac = factorize_width2(r);
    bool ok = !fac.zero && !fac.singular.empty();
    for (int t = 0; t < 100 && ok; ++t) {
      auto pt = oracle::random_point(rng, r.field(), r.n());
      Scalar prod = 1;
      for (const auto& c : fac.chain) prod = r.field().mul(prod, evaluate(c, pt));
      ok = r.field().mul(eval_poly(fac.alpha, pt), evaluate(r, pt)) == prod;
    }
    identity += ok;
  }

  bool lagrange = true;
  Field big(kMersenne61);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<Scalar>> anchors;
    std::vector<Scalar> nodes;
    std::set<Scalar> used;
    for (int i = 0; i < 6; ++i) {
      anchors.push_back(oracle::random_point(rng, big, 5));
      Scalar b;
      do b = rng.scalar(big);
      while (!used.insert(b).second);
      nodes.push_back(b);
    }
    LagrangeCurve curve(big, anchors, nodes);
    for (int i = 0; i < 6; ++i) lagrange &= curve(nodes[i]) == anchors[i];
  }

  std::size_t hit = 0, sized = 0, anchored = 0;
  std::uint64_t max_size = 0;
  for (const auto& r : draw<Roabp>(spec, 10, 100)) {
    PointSet ps = width2_hitting_set(r, Mode::Whitebox);
    auto rep = verify_hitting_property(r, ps);
    hit += rep.pass && !rep.zero && rep.witness.has_value();
    std::vector<std::vector<Scalar>> h;
    for (const auto& c : factorize_width2(r).chain) {
      PointSet part = invertible_hitting_set(c, Mode::Whitebox);
      for (std::uint64_t i = 0; i < part.size(); ++i) h.push_back(part.at(i));
    }
    std::uint64_t d = r.depth(), delta = std::max<std::uint32_t>(r.degree_bound(), 1);
    sized += ps.size() == 1 + (d + 2) * ((d + 2) * delta) * h.size() && rep.size_matches();
    bool same = true;
    for (std::uint64_t i = 0; i < h.size() && same; ++i) same = ps.at(i) == h[i];
    anchored += same;
    max_size = std::max(max_size, ps.size());
  }
  bool ok = identity == 50 && lagrange && anchored == 100 && hit == 100 && sized == 100;
  return {ok, fmt("factorization identity %zu/50, random Lagrange curves %s, curve through H %zu/100, witness %zu/100, "
                  "size formula %zu/100, max size %llu",
                  identity, lagrange ? "exact" : "WRONG", anchored, hit, sized,
                  static_cast<unsigned long long>(max_size))};
}

// 10. The support parameter.
Outcome ell() {
  std::size_t a = ell_parameter(2, 4, 1), b = ell_parameter(2, 4, kUnboundedSupport);
  return {a == 3 && b == 9, fmt("ell(2,4,1) = %zu, ell(2,4,inf) = %zu", a, b)};
}

// 11. Evaluation against expansion, and reproducible campaigns.
Outcome self_consistency() {
  std::size_t agree = 0, total = 0;
  Rng rng(derive_seed(11, 0));
  std::vector<InstanceClass> classes{InstanceClass::Roabp, InstanceClass::InvertibleRoabp, InstanceClass::Width2Roabp,
                                     InstanceClass::Depth3Distance, InstanceClass::SumSml};
  for (std::size_t k = 0; k < classes.size(); ++k) {
    InstanceSpec spec;
    spec.cls = classes[k];
    spec.params.target = Target::Any;
    if (classes[k] == InstanceClass::Width2Roabp) spec.modulus = kMersenne61;
    for (std::uint64_t i = 0; i < 40; ++i) {
      spec.seed = derive_seed(11 + k, i);
      auto inst = generate_instance(spec);
      ScalarPoly c = expand_instance(inst);
      bool ok = true;
      for (int t = 0; t < 5; ++t) {
        auto pt = oracle::random_point(rng, instance_field(inst), instance_n(inst));
        ok &= evaluate_instance(inst, pt) == oracle::eval_terms(instance_field(inst), c.terms(), pt);
      }
      agree += ok;
      ++total;
    }
  }
  std::size_t identical = 0;
  for (auto cls : classes) {
    CampaignOptions o;
    o.cls = cls;
    o.samples = 10;
    o.seed = 11;
    o.modulus = cls == InstanceClass::Width2Roabp ? kMersenne61 : 10007;
    o.jobs = 1;
    std::string a = run_campaign(o).text(), b = run_campaign(o).text();
    o.jobs = 3;
    std::string c = run_campaign(o).text();
    identical += a == b && a == c;
  }
  return {agree == total && total == 200 && identical == classes.size(),
          fmt("evaluate = expand %zu/%zu, byte-identical campaign reports %zu/%zu classes", agree, total, identical,
              classes.size())};
}

}  // namespace

int main() {
  std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"roabp hitting set", roabp_completeness}, {"basis isolation", basis_isolation},
      {"kronecker separation", kronecker},       {"distance reduction", distance_reduction},
      {"base-set decomposition", base_sets},     {"sum of set-multilinear", sum_sml},
      {"block concentration", block_concentration}, {"invertible-factor roabp", invertible},
      {"width-2 roabp", width2},                 {"support parameter", ell},
      {"oracle self-consistency", self_consistency}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %s: %s (%s; %.1fs)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
