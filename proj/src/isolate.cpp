#include "pit/isolate.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "pit/errors.hpp"
#include "pit/linalg.hpp"

namespace pit {

namespace {

constexpr std::uint64_t kWeightLimit = std::uint64_t{1} << 62;

std::uint64_t checked_mul_add(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  unsigned __int128 v = static_cast<unsigned __int128>(a) * b + c;
  if (v >= kWeightLimit) throw CapabilityError("combined weight overflows 62 bits");
  return static_cast<std::uint64_t>(v);
}

std::vector<bool> param_mask(std::size_t n, const std::vector<std::size_t>& params) {
  std::vector<bool> m(n, false);
  for (auto v : params) m.at(v) = true;
  return m;
}

// One coefficient of the isolation: a monomial over the isolated variables and
// its matrix coefficient, itself a polynomial in the parameters.
struct Item {
  ExponentVector mono;
  MatPoly coef;
};

std::vector<Item> split_factor(const MatPoly& f, const std::vector<bool>& is_param) {
  std::map<ExponentVector, MatPoly> acc;
  for (const auto& [e, m] : f.terms()) {
    ExponentVector iso = e, par(e.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (is_param[i]) {
        par[i] = e[i];
        iso[i] = 0;
      }
    auto it = acc.try_emplace(iso, f.field(), f.n(), f.width()).first;
    it->second.add_term(par, m);
  }
  std::vector<Item> out;
  for (auto& [e, c] : acc)
    if (!c.is_zero()) out.push_back({e, std::move(c)});
  return out;
}

// Flattens coefficients to dense vectors over the union of their nonzero positions.
std::vector<std::vector<Scalar>> flatten(const std::vector<const MatPoly*>& coefs) {
  std::map<std::pair<ExponentVector, std::size_t>, std::size_t> col;
  for (const auto* c : coefs)
    for (const auto& [e, m] : c->terms())
      for (std::size_t k = 0; k < m.data.size(); ++k)
        if (m.data[k]) col.try_emplace({e, k}, 0);
  std::size_t idx = 0;
  for (auto& [key, v] : col) v = idx++;
  std::vector<std::vector<Scalar>> out;
  for (const auto* c : coefs) {
    std::vector<Scalar> v(std::max<std::size_t>(idx, 1), 0);
    for (const auto& [e, m] : c->terms())
      for (std::size_t k = 0; k < m.data.size(); ++k)
        if (m.data[k]) v[col.at({e, k})] = m.data[k];
    out.push_back(std::move(v));
  }
  return out;
}

WeightFn combine(const WeightFn& prev, std::uint64_t radix, const WeightFn& next) {
  std::vector<std::uint64_t> w(prev.n());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = checked_mul_add(prev[i], radix, next[i]);
  return WeightFn(std::move(w));
}

// Smallest radix B - 1 such that W * B + next keeps every already distinct pair
// (within one list) in the same order: max over such pairs of |d next| / |d W|.
std::uint64_t max_ratio(const std::vector<std::vector<ExponentVector>>& lists, const WeightFn& W, const WeightFn& next) {
  std::uint64_t best = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ws;
  for (const auto& l : lists) {
    ws.clear();
    for (const auto& m : l) ws.emplace_back(W.weight(m), next.weight(m));
    for (std::size_t i = 0; i < ws.size(); ++i)
      for (std::size_t j = i + 1; j < ws.size(); ++j) {
        auto [a1, b1] = ws[i];
        auto [a2, b2] = ws[j];
        if (a1 == a2) continue;
        std::uint64_t dw = a1 > a2 ? a1 - a2 : a2 - a1;
        std::uint64_t dn = b1 > b2 ? b1 - b2 : b2 - b1;
        best = std::max(best, dn / dw);
      }
  }
  return best;
}

struct Block {
  std::vector<std::size_t> factors;
  std::vector<Item> items;
};

// Greedy basis of a block under weight w; returns survivor indices (ascending weight).
std::vector<std::size_t> block_basis(const Field& f, const Block& b, const WeightFn& w, std::size_t* rank) {
  std::vector<std::uint64_t> ws;
  std::vector<const MatPoly*> coefs;
  for (const auto& it : b.items) {
    ws.push_back(w.weight(it.mono));
    coefs.push_back(&it.coef);
  }
  auto sel = greedy_basis_vectors(f, ws, flatten(coefs));
  if (rank) *rank = sel.size();
  return sel;
}

}  // namespace

std::vector<std::size_t> greedy_basis_vectors(const Field& f, const std::vector<std::uint64_t>& weights,
                                              const std::vector<std::vector<Scalar>>& vectors) {
  if (weights.size() != vectors.size()) throw StructuralError("weights and vectors differ in count");
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (weights[order[i]] == weights[order[i - 1]])
      throw PreconditionError("duplicate weight " + std::to_string(weights[order[i]]) + " in greedy basis");
  std::vector<std::size_t> kept;
  if (vectors.empty()) return kept;
  Span span(f, vectors.front().size());
  for (auto i : order)
    if (span.insert(vectors[i])) kept.push_back(i);
  return kept;
}

std::vector<std::size_t> greedy_basis(const Field& f, const std::vector<GreedyItem>& items) {
  std::vector<std::uint64_t> ws;
  std::vector<std::vector<Scalar>> vs;
  for (const auto& it : items) {
    ws.push_back(it.weight);
    vs.push_back(it.coeff.data);
  }
  if (!vs.empty())
    for (const auto& v : vs)
      if (v.size() != vs.front().size()) throw StructuralError("greedy items of different widths");
  return greedy_basis_vectors(f, ws, vs);
}

IsolationResult construct_isolating_weights(const std::vector<MatPoly>& factors, const IsolationOptions& opts) {
  if (factors.empty()) throw PreconditionError("isolation needs at least one factor");
  const Field f = factors[0].field();
  const std::size_t n = factors[0].n(), w = factors[0].width();
  auto is_param = param_mask(n, opts.params);
  std::vector<bool> used(n, false);
  std::uint32_t delta = 1;
  std::vector<std::vector<Item>> factor_items;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& F = factors[i];
    if (!(F.field() == f) || F.n() != n || F.width() != w) throw StructuralError("factors disagree in field, n or width");
    for (auto v : F.variables()) {
      if (is_param[v]) continue;
      if (used[v]) throw PreconditionError("factors share variable x" + std::to_string(v + 1));
    }
    for (auto v : F.variables()) used[v] = true;
    factor_items.push_back(split_factor(F, is_param));
    for (const auto& it : factor_items.back())
      for (auto x : it.mono) delta = std::max(delta, x);
  }

  IsolationResult res;
  auto& trace = res.trace;
  auto& lw = res.weight;

  // Round 0: separate inside every factor.
  std::vector<Block> blocks;
  std::vector<std::vector<ExponentVector>> groups;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    blocks.push_back({{i}, factor_items[i]});
    groups.emplace_back();
    for (const auto& it : factor_items[i]) groups.back().push_back(it.mono);
  }
  Separator sep = first_separating_weight(n, delta, groups, opts.c0);
  WeightFn W = sep.weight;
  lw.rounds.push_back(sep.weight);
  lw.round_index.push_back(0);
  lw.radix.push_back(1);

  auto run_greedy = [&](IsolationRound& rec) {
    std::vector<Block> next;
    for (auto& b : blocks) {
      IsolationBlock ib;
      ib.factors = b.factors;
      for (const auto& it : b.items) ib.monomials.push_back(it.mono);
      ib.survivors = block_basis(f, b, W, &ib.rank);
      Block kept{b.factors, {}};
      for (auto k : ib.survivors) kept.items.push_back(b.items[k]);
      rec.blocks.push_back(std::move(ib));
      next.push_back(std::move(kept));
    }
    blocks = std::move(next);
  };

  // Monomial lists of every block formed so far; their relative order must survive later rounds.
  std::vector<std::vector<ExponentVector>> history = groups;
  {
    IsolationRound rec;
    rec.prime = sep.prime;
    rec.cutoff = sep.cutoff;
    rec.pairs = group_pair_count(groups);
    run_greedy(rec);
    trace.rounds.push_back(std::move(rec));
  }

  for (std::size_t round = 1; blocks.size() > 1; ++round) {
    std::vector<Block> paired;
    for (std::size_t i = 0; i < blocks.size(); i += 2) {
      if (i + 1 == blocks.size()) {
        // odd count: pair with the identity
        paired.push_back(std::move(blocks[i]));
        continue;
      }
      Block nb;
      nb.factors = blocks[i].factors;
      nb.factors.insert(nb.factors.end(), blocks[i + 1].factors.begin(), blocks[i + 1].factors.end());
      for (const auto& a : blocks[i].items)
        for (const auto& b : blocks[i + 1].items) nb.items.push_back({monomial_mul(a.mono, b.mono), poly_mul(a.coef, b.coef)});
      paired.push_back(std::move(nb));
    }
    blocks = std::move(paired);

    // Pairs still tied under the weight built so far.
    std::vector<std::vector<ExponentVector>> ties;
    for (const auto& b : blocks) {
      std::map<std::uint64_t, std::vector<ExponentVector>> by_weight;
      for (const auto& it : b.items) by_weight[W.weight(it.mono)].push_back(it.mono);
      for (auto& [x, g] : by_weight)
        if (g.size() > 1) ties.push_back(std::move(g));
    }
    IsolationRound rec;
    if (ties.empty()) {
      for (const auto& b : blocks) {
        history.emplace_back();
        for (const auto& it : b.items) history.back().push_back(it.mono);
      }
      rec.skipped = true;
    } else {
      Separator s = first_separating_weight(n, delta, ties, opts.c0);
      for (const auto& b : blocks) {
        history.emplace_back();
        for (const auto& it : b.items) history.back().push_back(it.mono);
      }
      std::uint64_t radix = 1 + max_ratio(history, W, s.weight);
      W = combine(W, radix, s.weight);
      lw.rounds.push_back(s.weight);
      lw.round_index.push_back(round);
      lw.radix.push_back(radix);
      rec.prime = s.prime;
      rec.cutoff = s.cutoff;
      rec.pairs = group_pair_count(ties);
    }
    run_greedy(rec);
    trace.rounds.push_back(std::move(rec));
  }

  lw.combined = W;
  lw.base = 0;
  if (lw.rounds.size() == 1) lw.base = 1;
  for (const auto& it : blocks.front().items) trace.isolated.push_back(it.mono);
  std::sort(trace.isolated.begin(), trace.isolated.end(),
            [&](const auto& a, const auto& b) { return W.weight(a) < W.weight(b); });

  for (const auto& items : factor_items) {
    if (items.empty()) continue;
    std::uint64_t lo = std::numeric_limits<std::uint64_t>::max(), hi = 0;
    for (const auto& it : items) {
      lo = std::min(lo, W.weight(it.mono));
      hi = std::max(hi, W.weight(it.mono));
    }
    res.weight_max += hi;
    res.weight_min += lo;
  }

  if (opts.self_check) {
    long double est = 1;
    for (const auto& F : factors) est *= std::max<std::size_t>(F.sparsity(), 1);
    if (est <= static_cast<long double>(opts.ceiling)) {
      MatPoly D = factors[0];
      for (std::size_t i = 1; i < factors.size(); ++i) D = poly_mul(D, factors[i]);
      if (!is_basis_isolating(W, D, opts.params))
        throw InternalError("constructed weight assignment is not basis isolating");
    }
  }
  return res;
}

// ---- blackbox family ----

CandidateWeights::CandidateWeights(std::size_t n, std::size_t d, std::size_t s, std::size_t w, std::uint32_t delta,
                                   std::uint64_t c0)
    : n_(n), delta_(delta) {
  if (n == 0 || d == 0 || s == 0 || w == 0) throw PreconditionError("candidate weights need positive parameters");
  std::size_t rounds = 1;
  while ((std::size_t{1} << (rounds - 1)) < d) ++rounds;
  std::uint64_t pairs0 = static_cast<std::uint64_t>(d) * s * s;
  std::uint64_t w8 = 1;
  for (int i = 0; i < 8; ++i) w8 *= w;
  std::uint64_t pairs_r = static_cast<std::uint64_t>(d) * w8;
  for (std::size_t r = 0; r < rounds; ++r) {
    primes_.push_back(primes_up_to(kron_cutoff(n, delta, r == 0 ? pairs0 : pairs_r, c0)));
    unsigned __int128 next = static_cast<unsigned __int128>(size_) * primes_.back().size();
    size_ = next > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                             : static_cast<std::uint64_t>(next);
  }
}

LayeredWeight CandidateWeights::member(const std::vector<std::size_t>& choice) const {
  if (choice.size() != primes_.size()) throw StructuralError("member choice has the wrong number of rounds");
  LayeredWeight lw;
  std::uint64_t maxw = 0;
  for (std::size_t r = 0; r < primes_.size(); ++r) {
    lw.rounds.push_back(prime_weight(n_, delta_, primes_[r].at(choice[r])));
    lw.round_index.push_back(r);
    maxw = std::max(maxw, lw.rounds.back().max_weight());
  }
  lw.base = checked_mul_add(static_cast<std::uint64_t>(n_) * std::max<std::uint32_t>(delta_, 1), maxw, 1);
  lw.radix.assign(primes_.size(), lw.base);
  lw.radix[0] = 1;
  WeightFn W = lw.rounds[0];
  for (std::size_t r = 1; r < lw.rounds.size(); ++r) W = combine(W, lw.base, lw.rounds[r]);
  lw.combined = W;
  return lw;
}

LayeredWeight CandidateWeights::at(std::uint64_t index) const {
  if (index >= size_) throw StructuralError("candidate index out of range");
  std::vector<std::size_t> choice(primes_.size());
  // last round varies fastest
  for (std::size_t r = primes_.size(); r-- > 0;) {
    choice[r] = static_cast<std::size_t>(index % primes_[r].size());
    index /= primes_[r].size();
  }
  return member(choice);
}

CandidateWeights enumerate_candidate_weights(std::size_t n, std::size_t d, std::size_t s, std::size_t w,
                                             std::uint32_t delta, std::uint64_t c0) {
  return CandidateWeights(n, d, s, w, delta, c0);
}

// ---- verifier ----

std::vector<ExponentVector> isolated_basis(const WeightFn& wfn, const MatPoly& D, const std::vector<std::size_t>& params) {
  auto items = split_factor(D, param_mask(D.n(), params));
  std::vector<const MatPoly*> coefs;
  for (const auto& it : items) coefs.push_back(&it.coef);
  auto vecs = flatten(coefs);
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint64_t> ws;
  for (const auto& it : items) ws.push_back(wfn.weight(it.mono));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ws[a] < ws[b]; });

  std::vector<ExponentVector> S;
  if (items.empty()) return S;
  Span lighter(D.field(), vecs.front().size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && ws[order[j]] == ws[order[i]]) ++j;
    // Coefficients at this weight that the strictly lighter span misses.
    std::vector<std::size_t> fresh;
    for (std::size_t k = i; k < j; ++k)
      if (!lighter.contains(vecs[order[k]])) fresh.push_back(order[k]);
    if (fresh.size() > 1) return {};
    if (fresh.size() == 1) {
      lighter.insert(vecs[fresh[0]]);
      S.push_back(items[fresh[0]].mono);
    }
    i = j;
  }
  return S;
}

bool is_basis_isolating(const WeightFn& wfn, const MatPoly& D, const std::vector<std::size_t>& params) {
  if (D.is_zero()) return true;
  return !isolated_basis(wfn, D, params).empty();
}

// ---- hitting sets ----

std::vector<MatPoly> isolation_factors(const Roabp& r) {
  std::vector<MatPoly> out;
  auto is_param = param_mask(r.n(), r.params());
  auto carries_variables = [&](const Boundary& b) {
    for (const auto& p : b.vec)
      for (auto v : p.variables())
        if (!is_param[v]) return true;
    return false;
  };
  if (carries_variables(r.left())) out.push_back(boundary_as_row(r));
  for (const auto& L : r.layers()) out.push_back(L);
  if (carries_variables(r.right())) out.push_back(boundary_as_column(r));
  return out;
}

namespace {

std::string str(std::uint64_t v) { return std::to_string(v); }

void power_point(const Field& f, const WeightFn& w, Scalar t0, const std::vector<bool>& is_param,
                 std::vector<Scalar>& out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = is_param[i] ? 0 : f.pow(t0, w[i]);
}

}  // namespace

PointSet roabp_hitting_set(const Roabp& r, Mode mode, const HittingOptions& opts) {
  const Field f = r.field();
  const std::size_t n = r.n();
  const std::uint64_t p = f.modulus();
  auto is_param = param_mask(n, r.params());
  auto factors = isolation_factors(r);

  if (mode == Mode::Whitebox) {
    Provenance prov{"roabp-whitebox", {}};
    if (r.width() == 0 || factors.empty()) {
      // Nothing to isolate: the polynomial does not depend on the isolated variables.
      PointSet ps(n, prov);
      std::vector<Scalar> pt(n);
      power_point(f, WeightFn(std::vector<std::uint64_t>(n, 1)), 1, is_param, pt);
      ps.push_back(pt);
      ps.provenance().params = {{"assignments", "1"}, {"t_count", "1"}, {"size", "1"}};
      return ps;
    }
    IsolationOptions iopts;
    iopts.params = r.params();
    iopts.c0 = opts.c0;
    auto iso = construct_isolating_weights(factors, iopts);
    std::uint64_t count = 1 + (iso.weight_max - iso.weight_min);
    if (count > p - 1)
      throw CapabilityError("modulus too small: need " + str(count) + " distinct nonzero t values, p=" + str(p));
    WeightFn W = iso.weight.combined;
    std::string ws;
    for (auto x : W.weights()) ws += (ws.empty() ? "" : " ") + str(x);
    prov.params = {{"assignments", "1"}, {"t_count", str(count)}, {"size", str(count)}, {"weights", ws}};
    return PointSet::lazy(
        n, count, [f, W, is_param](std::uint64_t i, std::vector<Scalar>& out) { power_point(f, W, i + 1, is_param, out); },
        std::move(prov));
  }

  std::size_t d = std::max<std::size_t>(factors.size(), 1);
  std::size_t s = std::max<std::size_t>(r.sparsity_bound(), 1);
  std::uint32_t delta = std::max<std::uint32_t>(r.degree_bound(), 1);
  CandidateWeights fam(n, d, s, std::max<std::size_t>(r.width(), 1), delta, opts.c0);
  if (fam.size() > opts.max_points)
    throw CapabilityError("blackbox family has " + str(fam.size()) + " assignments, above the point limit");
  std::vector<std::uint64_t> offsets{0};
  std::vector<LayeredWeight> members;
  for (std::uint64_t i = 0; i < fam.size(); ++i) {
    members.push_back(fam.at(i));
    std::uint64_t t = 1 + n * delta * members.back().combined.max_weight();
    if (t > p - 1) throw CapabilityError("modulus too small: need " + str(t) + " distinct nonzero t values, p=" + str(p));
    offsets.push_back(offsets.back() + t);
    if (offsets.back() > opts.max_points)
      throw CapabilityError("blackbox hitting set exceeds " + str(opts.max_points) + " points");
  }
  Provenance prov{"roabp-blackbox",
                  {{"assignments", str(fam.size())}, {"size", str(offsets.back())}, {"n", str(n)}, {"d", str(d)},
                   {"s", str(s)}, {"w", str(r.width())}, {"delta", str(delta)}}};
  return PointSet::lazy(
      n, offsets.back(),
      [f, members = std::move(members), offsets, is_param](std::uint64_t i, std::vector<Scalar>& out) {
        auto it = std::upper_bound(offsets.begin(), offsets.end(), i);
        std::size_t m = static_cast<std::size_t>(it - offsets.begin()) - 1;
        power_point(f, members[m].combined, i - offsets[m] + 1, is_param, out);
      },
      std::move(prov));
}

}  // namespace pit
