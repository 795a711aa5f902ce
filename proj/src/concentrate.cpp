#include "pit/concentrate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>

#include "pit/errors.hpp"
#include "pit/linalg.hpp"

namespace pit {

namespace {

std::string str(std::uint64_t v) { return std::to_string(v); }

std::size_t measure(const ExponentVector& e, const std::vector<std::vector<std::size_t>>* blocks, Concentration mode) {
  return mode == Concentration::Support ? support_size(e) : block_support(e, *blocks);
}

std::vector<std::size_t> all_variables(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::vector<std::vector<std::size_t>> layer_blocks(const Roabp& r) {
  std::vector<std::vector<std::size_t>> b{r.left().block};
  b.insert(b.end(), r.blocks().begin(), r.blocks().end());
  b.push_back(r.right().block);
  return b;
}

std::size_t block_support(const ExponentVector& e, const std::vector<std::vector<std::size_t>>& blocks) {
  std::size_t bs = 0;
  for (const auto& b : blocks)
    if (std::any_of(b.begin(), b.end(), [&](std::size_t v) { return e.at(v) != 0; })) ++bs;
  return bs;
}

RankPair concentration_rank(const MatPoly& D, const std::vector<std::vector<std::size_t>>* blocks, std::size_t bound,
                            Concentration mode) {
  if (mode == Concentration::Block && !blocks) throw PreconditionError("block concentration needs a block structure");
  std::size_t dim = D.width() * D.width();
  Span low(D.field(), std::max<std::size_t>(dim, 1)), full(D.field(), std::max<std::size_t>(dim, 1));
  for (const auto& [e, m] : D.terms()) {
    full.insert(m.data);
    if (measure(e, blocks, mode) < bound) low.insert(m.data);
  }
  return {low.rank(), full.rank()};
}

RankPair concentration_rank(const ScalarPoly& C, const std::vector<std::vector<std::size_t>>* blocks,
                            std::size_t bound, Concentration mode) {
  if (mode == Concentration::Block && !blocks) throw PreconditionError("block concentration needs a block structure");
  RankPair rp;
  for (const auto& [e, c] : C.terms()) {
    rp.full = 1;
    if (measure(e, blocks, mode) < bound) rp.low = 1;
  }
  return rp;
}

std::size_t ell_parameter(std::size_t w, std::size_t s, std::size_t mu) {
  if (w == 0 || s == 0) throw PreconditionError("ell needs positive width and sparsity");
  std::uint64_t x = static_cast<std::uint64_t>(w) * w * s, lg = 0;
  while ((std::uint64_t{1} << lg) < x) ++lg;
  return 1 + 2 * std::min<std::size_t>(lg, mu);
}

ShiftResult find_concentrating_shift(const Roabp& r, const ShiftOptions& opts) {
  const Field& f = r.field();
  const std::size_t n = r.n(), w = r.width();
  if (w == 0) throw PreconditionError("concentrating shift needs positive width");
  std::vector<ScalarPoly> dets;
  for (std::size_t i = 0; i < r.depth(); ++i) {
    dets.push_back(det_poly(r.layers()[i].grid()));
    if (dets.back().is_zero()) throw PreconditionError("layer " + str(i + 1) + " is singular (det = 0)");
  }
  ShiftResult res;
  std::size_t s = std::max<std::size_t>(r.sparsity_bound(), 1);
  res.ell = ell_parameter(w, s, r.support_bound());
  std::uint32_t delta = std::max<std::uint32_t>(r.degree_bound(), 1);

  std::vector<std::vector<ExponentVector>> groups;
  std::uint32_t kdelta = delta;
  for (const auto& d : dets) {
    groups.emplace_back();
    for (const auto& [e, c] : d.terms()) groups.back().push_back(e);
    kdelta = std::max(kdelta, d.max_individual_degree());
  }
  groups.push_back(enumerate_monomials(n, all_variables(n), delta, res.ell));
  res.pairs = group_pair_count(groups);

  const ScalarPoly C = expand(r, opts.ceiling).scalar_part;
  const std::size_t big_ell = res.ell * (w * w + 2);
  const std::uint64_t cutoff = kron_cutoff(n, kdelta, std::max<std::uint64_t>(res.pairs, 1), opts.c0);
  for (std::uint64_t p = 2; p <= cutoff; ++p) {
    if (!is_prime(p)) continue;
    WeightFn a = prime_weight(n, kdelta, p);
    if (!separates_groups(a, groups)) continue;
    std::uint64_t tries = std::min<std::uint64_t>(opts.t0_tries, f.modulus() - 1);
    for (Scalar t0 = 1; t0 <= tries; ++t0) {
      std::vector<Scalar> off(n);
      for (std::size_t i = 0; i < n; ++i) off[i] = f.pow(t0, a[i]);
      bool ok = true;
      for (const auto& L : r.layers()) {
        if (determinant(f, eval_poly(L, off)) == 0) {
          ok = false;
          break;
        }
      }
      for (std::size_t i = 0; ok && i < r.depth(); ++i)
        ok = concentration_rank(shift(r.layers()[i], off), nullptr, res.ell, Concentration::Support).concentrated();
      if (ok) ok = concentration_rank(shift(C, off), nullptr, big_ell, Concentration::Support).concentrated();
      if (!ok) continue;
      res.map.exponents = a.weights();
      res.map.prime = p;
      res.map.cutoff = cutoff;
      res.t0 = t0;
      res.offsets = std::move(off);
      return res;
    }
  }
  throw InternalError("no concentrating shift verified up to prime cutoff " + str(cutoff));
}

PointSet low_support_hitting_set(const Field& f, std::size_t n, std::uint32_t delta, std::size_t ell) {
  if (ell == 0) throw PreconditionError("ell must be at least 1");
  if (static_cast<std::uint64_t>(delta) + 1 >= f.modulus())
    throw CapabilityError("modulus too small for a grid of " + str(delta + 1) + " nonzero values");
  std::size_t j = std::min(ell - 1, n);
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == j) {
      subsets.push_back(cur);
      return;
    }
    for (std::size_t v = start; v + (j - cur.size()) <= n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  std::uint64_t per = 1;
  for (std::size_t i = 0; i < j; ++i) per *= delta + 1;
  std::uint64_t count = subsets.size() * per;
  Provenance prov{"low-support",
                  {{"n", str(n)}, {"delta", str(delta)}, {"ell", str(ell)}, {"subset_size", str(j)}, {"size", str(count)}}};
  return PointSet::lazy(
      n, count,
      [subsets = std::move(subsets), per, delta](std::uint64_t i, std::vector<Scalar>& out) {
        const auto& sub = subsets[i / per];
        std::uint64_t code = i % per;
        std::fill(out.begin(), out.end(), 0);
        for (std::size_t k = sub.size(); k-- > 0;) {
          out[sub[k]] = 1 + code % (delta + 1);
          code /= delta + 1;
        }
      },
      std::move(prov));
}

namespace {

// Points h + phi(t) for h in the grid and t = 1..T_m, maps concatenated.
struct ShiftedGrid {
  PointSet grid;
  std::vector<std::vector<std::uint64_t>> maps;
  std::vector<std::uint64_t> sweeps;
  std::vector<std::uint64_t> offsets{0};
};

PointSet compose(const Field& f, std::size_t n, std::shared_ptr<ShiftedGrid> sg, Provenance prov) {
  std::uint64_t total = sg->offsets.back();
  return PointSet::lazy(
      n, total,
      [f, sg](std::uint64_t i, std::vector<Scalar>& out) {
        auto it = std::upper_bound(sg->offsets.begin(), sg->offsets.end(), i);
        std::size_t m = static_cast<std::size_t>(it - sg->offsets.begin()) - 1;
        std::uint64_t local = i - sg->offsets[m];
        std::uint64_t T = sg->sweeps[m];
        sg->grid.at(local / T, out);
        Scalar t = 1 + local % T;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = f.add(out[k], f.pow(t, sg->maps[m][k]));
      },
      std::move(prov));
}

}  // namespace

PointSet invertible_hitting_set(const Roabp& r, Mode mode, const InvertibleOptions& opts) {
  const Field& f = r.field();
  const std::size_t n = r.n(), w = r.width();
  const std::uint64_t p = f.modulus();
  std::uint32_t delta = std::max<std::uint32_t>(r.degree_bound(), 1);
  std::size_t s = std::max<std::size_t>(r.sparsity_bound(), 1);
  auto sg = std::make_shared<ShiftedGrid>(ShiftedGrid{PointSet(n, {}), {}, {}, {0}});
  Provenance prov;
  std::size_t ell = 0;
  if (mode == Mode::Whitebox) {
    ShiftOptions so;
    so.c0 = opts.c0;
    auto sh = find_concentrating_shift(r, so);
    ell = sh.ell;
    sg->maps.push_back(sh.map.exponents);
    prov.generator = "invertible-whitebox";
    prov.params = {{"prime", str(sh.map.prime)}, {"t0", str(sh.t0)}};
  } else {
    ell = ell_parameter(std::max<std::size_t>(w, 1), s, r.support_bound());
    std::uint64_t sw = 1;
    for (std::size_t i = 0; i < 2 * w; ++i) sw *= s;
    std::uint64_t monos = enumerate_monomials(n, all_variables(n), delta, ell).size();
    std::uint64_t pairs = std::max<std::uint64_t>(r.depth(), 1) * sw + monos * monos;
    std::uint32_t kdelta = delta * static_cast<std::uint32_t>(std::max<std::size_t>(w, 1));
    for (auto q : primes_up_to(kron_cutoff(n, kdelta, pairs, opts.c0)))
      sg->maps.push_back(prime_weight(n, kdelta, q).weights());
    prov.generator = "invertible-blackbox";
    prov.params = {{"pairs", str(pairs)}};
  }
  std::size_t big_ell = ell * (w * w + 2);
  sg->grid = low_support_hitting_set(f, n, delta, big_ell);
  for (const auto& a : sg->maps) {
    std::uint64_t sum = 0;
    for (auto x : a) sum += x;
    std::uint64_t T = 1 + static_cast<std::uint64_t>(delta) * sum;
    if (T > p - 1) throw CapabilityError("modulus too small: t-sweep needs " + str(T) + " nonzero values, p=" + str(p));
    sg->sweeps.push_back(T);
    sg->offsets.push_back(sg->offsets.back() + sg->grid.size() * T);
    if (sg->offsets.back() > opts.max_points)
      throw CapabilityError("invertible hitting set exceeds " + str(opts.max_points) + " points");
  }
  std::uint64_t tsum = 0;
  for (auto T : sg->sweeps) tsum += T;
  prov.params.insert(prov.params.begin(), {{"ell", str(ell)},
                                           {"grid", str(sg->grid.size())},
                                           {"maps", str(sg->maps.size())},
                                           {"t_sweep", str(sg->maps.size() == 1 ? sg->sweeps[0] : tsum)},
                                           {"size", str(sg->offsets.back())}});
  return compose(f, n, sg, std::move(prov));
}

// ---- width 2 ----

Width2Factorization factorize_width2(const Roabp& r) {
  if (r.width() != 2) throw PreconditionError("factorize_width2 needs width 2");
  const Field& f = r.field();
  const std::size_t n = r.n();
  Width2Factorization out{ScalarPoly::constant(f, n, 1), {}, {}, false};

  struct Split {
    std::size_t layer;
    std::vector<ScalarPoly> column, row;
  };
  std::vector<Split> splits;
  for (std::size_t i = 0; i < r.depth(); ++i) {
    const auto& L = r.layers()[i];
    if (L.is_zero()) {
      out.zero = true;
      out.singular = {i};
      return out;
    }
    if (!det_poly(L.grid()).is_zero()) continue;
    auto g = L.grid();
    // first nonzero of a, b, c, d picks the row and column of the rank-1 split
    static constexpr std::size_t kRow[4] = {0, 0, 1, 1}, kCol[4] = {0, 1, 0, 1};
    std::size_t k = 0;
    while (g[kRow[k]][kCol[k]].is_zero()) ++k;
    out.alpha = poly_mul(out.alpha, g[kRow[k]][kCol[k]]);
    splits.push_back({i, {g[0][kCol[k]], g[1][kCol[k]]}, {g[kRow[k]][0], g[kRow[k]][1]}});
    out.singular.push_back(i);
  }

  Boundary left = r.left();
  std::size_t start = 0;
  auto piece = [&](std::size_t end, Boundary right) {
    std::vector<std::vector<std::size_t>> blocks(r.blocks().begin() + static_cast<std::ptrdiff_t>(start),
                                                 r.blocks().begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<MatPoly> layers(r.layers().begin() + static_cast<std::ptrdiff_t>(start),
                                r.layers().begin() + static_cast<std::ptrdiff_t>(end));
    out.chain.emplace_back(f, n, 2, std::move(blocks), std::move(layers), left, std::move(right), r.params());
  };
  for (const auto& sp : splits) {
    piece(sp.layer, Boundary{r.blocks()[sp.layer], sp.column});
    left = Boundary{r.blocks()[sp.layer], sp.row};
    start = sp.layer + 1;
  }
  piece(r.depth(), r.right());
  return out;
}

LagrangeCurve::LagrangeCurve(const Field& f, std::vector<std::vector<Scalar>> anchors, std::vector<Scalar> nodes)
    : f_(f), anchors_(std::move(anchors)), nodes_(std::move(nodes)) {
  std::size_t h = nodes_.size();
  if (h != anchors_.size()) throw StructuralError("node count differs from anchor count");
  if (h == 0) throw PreconditionError("Lagrange curve through no points");
  if (h >= f.modulus()) throw CapabilityError("modulus too small for " + str(h) + " interpolation nodes");
  for (auto& b : nodes_) b = f.reduce(b);
  bool consecutive = true;
  for (std::size_t i = 1; i < h; ++i) consecutive &= nodes_[i] == f.add(nodes_[0], static_cast<Scalar>(i));
  bary_.assign(h, 1);
  consecutive_ = consecutive;
  if (consecutive) {
    // w_i = (-1)^{h-1-i} / (i! (h-1-i)!)
    std::vector<Scalar> fact(h, 1);
    for (std::size_t i = 1; i < h; ++i) fact[i] = f.mul(fact[i - 1], static_cast<Scalar>(i));
    std::vector<Scalar> den(h);
    for (std::size_t i = 0; i < h; ++i) den[i] = f.mul(fact[i], fact[h - 1 - i]);
    auto inv = batch_inverse(f, den);
    for (std::size_t i = 0; i < h; ++i) bary_[i] = (h - 1 - i) % 2 ? f.neg(inv[i]) : inv[i];
    return;
  }
  std::set<Scalar> seen(nodes_.begin(), nodes_.end());
  if (seen.size() != h) throw PreconditionError("interpolation nodes repeat");
  if (h > 20000) throw CapabilityError("arbitrary nodes limited to 20000 points; use consecutive nodes");
  std::vector<Scalar> den(h, 1);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j)
      if (i != j) den[i] = f.mul(den[i], f.sub(nodes_[i], nodes_[j]));
  bary_ = batch_inverse(f, den);
}

void LagrangeCurve::eval(Scalar u, std::vector<Scalar>& out) const {
  u = f_.reduce(u);
  std::size_t h = nodes_.size();
  if (consecutive_ && f_.sub(u, nodes_[0]) < h) {
    out = anchors_[f_.sub(u, nodes_[0])];
    return;
  }
  std::size_t dim = anchors_[0].size();
  out.assign(dim, 0);
  std::vector<Scalar> diff(h);
  for (std::size_t i = 0; i < h; ++i) {
    diff[i] = f_.sub(u, nodes_[i]);
    if (diff[i] == 0) {
      out = anchors_[i];
      return;
    }
  }
  Scalar ell = 1;
  for (auto d : diff) ell = f_.mul(ell, d);
  auto inv = batch_inverse(f_, diff);
  for (std::size_t i = 0; i < h; ++i) {
    Scalar c = f_.mul(bary_[i], inv[i]);
    const auto& a = anchors_[i];
    for (std::size_t k = 0; k < dim; ++k) out[k] = f_.add(out[k], f_.mul(c, a[k]));
  }
  for (auto& x : out) x = f_.mul(x, ell);
}

std::vector<Scalar> LagrangeCurve::operator()(Scalar u) const {
  std::vector<Scalar> out;
  eval(u, out);
  return out;
}

LagrangeCurve lagrange_curve(const Field& f, const PointSet& h, const std::vector<Scalar>& nodes) {
  if (h.size() != nodes.size()) throw StructuralError("node count differs from point count");
  std::vector<std::vector<Scalar>> anchors;
  anchors.reserve(h.size());
  for (std::uint64_t i = 0; i < h.size(); ++i) anchors.push_back(h.at(i));
  return LagrangeCurve(f, std::move(anchors), nodes);
}

std::uint64_t total_degree_bound(const Roabp& r) {
  std::uint64_t sum = 0;
  for (const auto& L : r.layers()) {
    std::uint64_t m = 0;
    for (const auto& [e, c] : L.terms()) m = std::max(m, total_degree(e));
    sum += m;
  }
  for (const Boundary* b : {&r.left(), &r.right()}) {
    std::uint64_t m = 0;
    for (const auto& q : b->vec) m = std::max(m, q.max_total_degree());
    sum += m;
  }
  return sum;
}

PointSet width2_hitting_set(const Roabp& r, Mode mode, const InvertibleOptions& opts) {
  if (r.width() != 2) throw PreconditionError("width2_hitting_set needs width 2");
  const Field& f = r.field();
  const std::size_t n = r.n();
  const std::uint64_t d = r.depth();
  const std::uint64_t delta = std::max<std::uint32_t>(r.degree_bound(), 1);
  const std::uint64_t big_delta = (d + 2) * delta;

  std::vector<PointSet> parts;
  std::size_t chain_len = 1;
  if (mode == Mode::Whitebox) {
    auto fac = factorize_width2(r);
    if (fac.zero) {
      PointSet z(n, {"width2-whitebox", {{"zero", "1"}, {"size", "1"}}});
      z.push_back(std::vector<Scalar>(n, 0));
      return z;
    }
    chain_len = fac.chain.size();
    for (const auto& c : fac.chain) {
      std::uint64_t deg = total_degree_bound(c);
      if (deg > big_delta)
        throw PreconditionError("chain factor total degree " + str(deg) + " exceeds Delta = " + str(big_delta));
      parts.push_back(invertible_hitting_set(c, Mode::Whitebox, opts));
    }
  } else {
    if (total_degree_bound(r) > big_delta)
      throw PreconditionError("total degree " + str(total_degree_bound(r)) + " exceeds Delta = " + str(big_delta));
    parts.push_back(invertible_hitting_set(r, Mode::Blackbox, opts));
  }
  std::vector<std::vector<Scalar>> anchors;
  std::uint64_t h = 0;
  for (const auto& ps : parts) h += ps.size();
  if (h > opts.max_points) throw CapabilityError("anchor set exceeds " + str(opts.max_points) + " points");
  anchors.reserve(h);
  for (const auto& ps : parts)
    for (std::uint64_t i = 0; i < ps.size(); ++i) anchors.push_back(ps.at(i));
  std::vector<Scalar> nodes(h);
  std::iota(nodes.begin(), nodes.end(), Scalar{0});

  const std::uint64_t U = 1 + (d + 2) * big_delta * h;
  if (U > f.modulus()) throw CapabilityError("modulus too small: u-sweep needs " + str(U) + " values, p=" + str(f.modulus()));
  auto curve = std::make_shared<LagrangeCurve>(f, std::move(anchors), std::move(nodes));
  Provenance prov{mode == Mode::Whitebox ? "width2-whitebox" : "width2-blackbox",
                  {{"anchors", str(h)}, {"chain", str(chain_len)}, {"depth", str(d)}, {"Delta", str(big_delta)}, {"size", str(U)}}};
  return PointSet::lazy(
      n, U, [curve](std::uint64_t u, std::vector<Scalar>& out) { curve->eval(u, out); }, std::move(prov));
}

}  // namespace pit
