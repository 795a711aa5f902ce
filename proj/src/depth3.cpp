#include "pit/depth3.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "pit/errors.hpp"

namespace pit {

namespace {

std::string xname(std::size_t v) { return "x" + std::to_string(v + 1); }

ScalarPoly form_poly(const Field& f, std::size_t n, const LinearForm& l) {
  ScalarPoly p = ScalarPoly::constant(f, n, l.constant);
  for (const auto& [v, c] : l.coeffs) {
    ExponentVector e(n, 0);
    e[v] = 1;
    p.add_term(e, c);
  }
  return p;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<std::size_t> universe_of(const Partition& p) {
  std::vector<std::size_t> u;
  for (const auto& c : p.colors) u.insert(u.end(), c.begin(), c.end());
  std::sort(u.begin(), u.end());
  return u;
}

}  // namespace

std::vector<std::size_t> LinearForm::variables() const {
  std::vector<std::size_t> v;
  for (const auto& [i, c] : coeffs) v.push_back(i);
  return v;
}

Depth3Circuit::Depth3Circuit(Field f, std::size_t n, std::vector<Gate> gates) : field_(f), n_(n), gates_(std::move(gates)) {
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    auto& gate = gates_[g];
    gate.scale = f.reduce(gate.scale);
    std::vector<bool> seen(n_, false);
    for (auto& form : gate.forms) {
      form.constant = f.reduce(form.constant);
      std::erase_if(form.coeffs, [&](auto& kv) {
        kv.second = f.reduce(kv.second);
        return kv.second == 0;
      });
      for (const auto& [v, c] : form.coeffs) {
        if (v >= n_) throw StructuralError("gate " + std::to_string(g + 1) + " mentions variable index " +
                                           std::to_string(v) + " >= n");
        if (seen[v]) throw StructuralError("gate " + std::to_string(g + 1) + " is not multilinear: " + xname(v) +
                                           " occurs in two forms");
        seen[v] = true;
      }
    }
  }
}

ScalarPoly expand(const Depth3Circuit& c) {
  ScalarPoly out(c.field(), c.n());
  for (const auto& g : c.gates()) {
    ScalarPoly prod = ScalarPoly::constant(c.field(), c.n(), g.scale);
    for (const auto& l : g.forms) {
      if (prod.is_zero()) break;
      prod = poly_mul(prod, form_poly(c.field(), c.n(), l));
    }
    out = poly_add(out, prod);
  }
  return out;
}

Scalar evaluate(const Depth3Circuit& c, const std::vector<Scalar>& point) {
  if (point.size() != c.n()) throw StructuralError("point length " + std::to_string(point.size()) +
                                                   " does not match n=" + std::to_string(c.n()));
  const Field& f = c.field();
  Scalar sum = 0;
  for (const auto& g : c.gates()) {
    Scalar prod = g.scale;
    for (const auto& l : g.forms) {
      if (prod == 0) break;
      Scalar v = l.constant;
      for (const auto& [i, a] : l.coeffs) v = f.add(v, f.mul(a, point[i]));
      prod = f.mul(prod, v);
    }
    sum = f.add(sum, prod);
  }
  return sum;
}

// ---- partitions ----

Partition make_partition(std::vector<std::vector<std::size_t>> colors, const std::vector<std::size_t>& universe) {
  std::set<std::size_t> u(universe.begin(), universe.end()), seen;
  for (auto& c : colors) {
    if (c.empty()) throw StructuralError("partition has an empty color");
    std::sort(c.begin(), c.end());
    for (auto v : c) {
      if (!u.count(v)) throw StructuralError("partition color mentions " + xname(v) + " outside the universe");
      if (!seen.insert(v).second) throw StructuralError("partition colors overlap at " + xname(v));
    }
  }
  if (seen.size() != u.size()) throw StructuralError("partition does not cover every variable");
  std::sort(colors.begin(), colors.end());
  return Partition{std::move(colors)};
}

Partition gate_partition(const Gate& g, const std::vector<std::size_t>& universe) {
  std::set<std::size_t> u(universe.begin(), universe.end()), covered;
  std::vector<std::vector<std::size_t>> colors;
  for (const auto& l : g.forms) {
    std::vector<std::size_t> c;
    for (auto v : l.variables())
      if (u.count(v)) c.push_back(v);
    if (c.empty()) continue;
    covered.insert(c.begin(), c.end());
    colors.push_back(std::move(c));
  }
  for (auto v : universe)
    if (!covered.count(v)) colors.push_back({v});
  return make_partition(std::move(colors), universe);
}

Partition gate_partition(const Gate& g, std::size_t n) {
  std::vector<std::size_t> u(n);
  std::iota(u.begin(), u.end(), 0);
  return gate_partition(g, u);
}

Partition restrict_partition(const Partition& p, const std::vector<std::size_t>& subset) {
  std::set<std::size_t> s(subset.begin(), subset.end());
  std::vector<std::vector<std::size_t>> colors;
  for (const auto& c : p.colors) {
    std::vector<std::size_t> r;
    for (auto v : c)
      if (s.count(v)) r.push_back(v);
    if (!r.empty()) colors.push_back(std::move(r));
  }
  return make_partition(std::move(colors), subset);
}

std::vector<std::vector<std::size_t>> friendly_neighborhoods(const std::vector<Partition>& seq, std::size_t j) {
  if (j == 0 || j > seq.size()) throw StructuralError("neighborhood index out of range");
  const Partition& pj = seq[j - 1];
  auto uni = universe_of(pj);
  for (std::size_t i = 0; i + 1 < j; ++i)
    if (universe_of(seq[i]) != uni) throw StructuralError("partitions cover different variable sets");
  std::size_t maxv = uni.empty() ? 0 : uni.back() + 1;
  std::vector<std::size_t> color_of(maxv, 0);
  for (std::size_t c = 0; c < pj.colors.size(); ++c)
    for (auto v : pj.colors[c]) color_of[v] = c;
  UnionFind uf(pj.colors.size());
  for (std::size_t i = 0; i + 1 < j; ++i)
    for (const auto& u : seq[i].colors)
      for (std::size_t t = 1; t < u.size(); ++t) uf.unite(color_of[u[0]], color_of[u[t]]);
  std::map<std::size_t, std::vector<std::size_t>> classes;
  for (std::size_t c = 0; c < pj.colors.size(); ++c) classes[uf.find(c)].push_back(c);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, cls] : classes) out.push_back(std::move(cls));
  // Every class must be a union of whole colors of each upper partition.
  std::vector<std::size_t> class_of(maxv, 0);
  for (std::size_t k = 0; k < out.size(); ++k)
    for (auto c : out[k])
      for (auto v : pj.colors[c]) class_of[v] = k;
  for (std::size_t i = 0; i + 1 < j; ++i)
    for (const auto& u : seq[i].colors)
      for (auto v : u)
        if (class_of[v] != class_of[u[0]]) throw InternalError("friendly neighborhood splits an upper color");
  return out;
}

std::size_t compute_distance(const std::vector<Partition>& seq) {
  if (seq.empty()) throw PreconditionError("distance of an empty partition sequence");
  std::size_t d = 1;
  for (std::size_t j = 2; j <= seq.size(); ++j)
    for (const auto& cls : friendly_neighborhoods(seq, j)) d = std::max(d, cls.size());
  return d;
}

GateOrder best_gate_order(const Depth3Circuit& c, std::size_t max_k) {
  std::size_t k = c.k();
  if (k > max_k) throw PreconditionError("gate count " + std::to_string(k) + " above " + std::to_string(max_k) +
                                         "; supply a gate order");
  GateOrder best;
  best.order.resize(k);
  std::iota(best.order.begin(), best.order.end(), 0);
  if (k == 0) {
    best.distance = 1;
    return best;
  }
  std::vector<Partition> parts;
  for (const auto& g : c.gates()) parts.push_back(gate_partition(g, c.n()));
  std::vector<std::size_t> perm = best.order;
  best.distance = SIZE_MAX;
  do {
    std::vector<Partition> seq;
    for (auto i : perm) seq.push_back(parts[i]);
    std::size_t d = compute_distance(seq);
    if (d < best.distance) {
      best.distance = d;
      best.order = perm;
    }
  } while (best.distance > 1 && std::next_permutation(perm.begin(), perm.end()));
  return best;
}

RespectingOrder respecting_order(const std::vector<Partition>& seq) {
  RespectingOrder ro;
  for (std::size_t i = 1; i <= seq.size(); ++i) {
    std::vector<std::vector<std::size_t>> colors;
    for (const auto& cls : friendly_neighborhoods(seq, i)) {
      std::vector<std::size_t> u;
      for (auto c : cls) u.insert(u.end(), seq[i - 1].colors[c].begin(), seq[i - 1].colors[c].end());
      colors.push_back(std::move(u));
    }
    ro.refined.push_back(make_partition(std::move(colors), universe_of(seq[i - 1])));
  }
  // P'_i refines P'_{i+1}.
  for (std::size_t i = 0; i + 1 < ro.refined.size(); ++i) {
    std::map<std::size_t, std::size_t> owner;
    for (std::size_t c = 0; c < ro.refined[i + 1].colors.size(); ++c)
      for (auto v : ro.refined[i + 1].colors[c]) owner[v] = c;
    for (const auto& col : ro.refined[i].colors)
      for (auto v : col)
        if (owner[v] != owner[col[0]]) throw InternalError("refined partitions are not nested");
  }
  if (ro.refined.empty()) return ro;
  // Colors are sorted by smallest variable, so descending level by level keeps that tie-break.
  auto emit = [&](auto&& self, std::size_t level, const std::vector<std::size_t>& vars) -> void {
    if (level == 0) {
      ro.order.insert(ro.order.end(), vars.begin(), vars.end());
      return;
    }
    std::set<std::size_t> in(vars.begin(), vars.end());
    for (const auto& c : ro.refined[level - 1].colors)
      if (in.count(c[0])) self(self, level - 1, c);
  };
  for (const auto& c : ro.refined.back().colors) emit(emit, ro.refined.size() - 1, c);
  return ro;
}

// ---- reductions ----

Roabp sparse_to_roabp(const ScalarPoly& f, const std::vector<std::size_t>& order) {
  if (f.max_individual_degree() > 1) throw PreconditionError("sparse_to_roabp needs a multilinear polynomial");
  std::set<std::size_t> in(order.begin(), order.end());
  if (in.size() != order.size()) throw StructuralError("variable order repeats a variable");
  for (auto v : f.variables())
    if (!in.count(v)) throw StructuralError("variable order misses " + xname(v));
  const Field& F = f.field();
  std::size_t n = f.n(), w = f.sparsity();
  std::vector<ExponentVector> lanes;
  std::vector<Scalar> s, t(w, 1);
  for (const auto& [e, c] : f.terms()) {
    lanes.push_back(e);
    s.push_back(c);
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<MatPoly> layers;
  for (auto v : order) {
    blocks.push_back({v});
    MatPoly L(F, n, w);
    Matrix ones(w, w), xs(w, w);
    for (std::size_t b = 0; b < w; ++b) (lanes[b][v] ? xs : ones)(b, b) = 1;
    ExponentVector e(n, 0);
    L.add_term(e, ones);
    e[v] = 1;
    L.add_term(e, xs);
    layers.push_back(std::move(L));
  }
  return Roabp::with_constant_boundaries(F, n, std::move(blocks), std::move(layers), s, t);
}

namespace {

struct Lane {
  ExponentVector mono;  // over the isolated variables
  ScalarPoly coef;      // over the parameters
};

struct GatePlan {
  ScalarPoly scale;
  std::vector<std::vector<std::size_t>> segments;  // colors of P'_i in the global order
  std::vector<std::vector<Lane>> lanes;            // per segment
  std::size_t width = 0;
  std::size_t offset = 0;
};

}  // namespace

Reduction circuit_to_roabp(const Depth3Circuit& c, const std::vector<std::size_t>& gate_order,
                           const ReductionOptions& opts) {
  const Field& f = c.field();
  const std::size_t n = c.n();
  std::vector<bool> is_param(n, false);
  for (auto v : opts.params) is_param.at(v) = true;
  std::vector<std::size_t> iso;
  for (std::size_t v = 0; v < n; ++v)
    if (!is_param[v]) iso.push_back(v);
  if (iso.empty()) throw PreconditionError("reduction needs at least one non-parameter variable");
  {
    auto sorted = gate_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i || sorted.size() != c.k()) throw StructuralError("gate order is not a permutation of the gates");
  }

  std::vector<Partition> seq;
  for (auto g : gate_order) seq.push_back(gate_partition(c.gates()[g], iso));
  Reduction red{Roabp::with_constant_boundaries(f, n, {}, {}, {}, {}), 1, 0, {}};
  if (!seq.empty()) {
    red.distance = compute_distance(seq);
    red.order = respecting_order(seq);
  } else {
    red.order.refined.push_back(make_partition({iso}, iso));
    red.order.order = iso;
  }
  if (opts.require_distance && red.distance > *opts.require_distance)
    throw PreconditionError("gate order has distance " + std::to_string(red.distance) + ", expected " +
                            std::to_string(*opts.require_distance));
  const auto& order = red.order.order;
  std::vector<std::size_t> pos(n, 0);
  for (std::size_t q = 0; q < order.size(); ++q) pos[order[q]] = q;

  std::vector<GatePlan> plans;
  std::size_t total = 0;
  for (std::size_t i = 0; i < gate_order.size(); ++i) {
    const Gate& g = c.gates()[gate_order[i]];
    GatePlan plan{ScalarPoly::constant(f, n, g.scale), {}, {}, 0, 0};
    std::vector<const LinearForm*> inside;
    for (const auto& l : g.forms) {
      bool touches = false;
      for (auto v : l.variables()) touches |= !is_param[v];
      if (touches)
        inside.push_back(&l);
      else
        plan.scale = poly_mul(plan.scale, form_poly(f, n, l));
    }
    if (plan.scale.is_zero()) continue;
    plan.segments = red.order.refined[i].colors;
    std::sort(plan.segments.begin(), plan.segments.end(),
              [&](const auto& a, const auto& b) { return pos[a[0]] < pos[b[0]]; });
    for (auto& seg : plan.segments)
      std::sort(seg.begin(), seg.end(), [&](auto a, auto b) { return pos[a] < pos[b]; });
    bool zero = false;
    for (const auto& seg : plan.segments) {
      std::set<std::size_t> in(seg.begin(), seg.end());
      ScalarPoly q = ScalarPoly::constant(f, n, 1);
      for (const auto* l : inside) {
        auto vs = l->variables();
        std::size_t v0 = *std::find_if(vs.begin(), vs.end(), [&](auto v) { return !is_param[v]; });
        if (in.count(v0)) q = poly_mul(q, form_poly(f, n, *l));
      }
      std::map<ExponentVector, ScalarPoly> by_mono;
      for (const auto& [e, a] : q.terms()) {
        ExponentVector m = restrict_to(e, iso), rest = e;
        for (auto v : iso) rest[v] = 0;
        by_mono.try_emplace(m, f, n).first->second.add_term(rest, a);
      }
      std::vector<Lane> lanes;
      for (auto& [m, a] : by_mono)
        if (!a.is_zero()) lanes.push_back({m, std::move(a)});
      if (lanes.empty()) zero = true;
      plan.width = std::max(plan.width, lanes.size());
      plan.lanes.push_back(std::move(lanes));
    }
    if (zero) continue;
    plan.offset = total;
    total += plan.width;
    plans.push_back(std::move(plan));
  }
  red.width_bound = total;

  std::size_t W = total;
  ScalarPoly zero(f, n);
  ExponentVector e0(n, 0);
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<MatPoly> layers;
  std::vector<std::size_t> seg_of(n, 0);
  for (auto v : order) {
    std::vector<std::vector<ScalarPoly>> grid(W, std::vector<ScalarPoly>(W, zero));
    ScalarPoly xv = ScalarPoly::variable(f, n, v), one = ScalarPoly::constant(f, n, 1);
    for (const auto& plan : plans) {
      std::size_t s = 0;
      while (std::find(plan.segments[s].begin(), plan.segments[s].end(), v) == plan.segments[s].end()) ++s;
      const auto& lanes = plan.lanes[s];
      if (plan.segments[s].front() == v) {
        std::size_t prev = s == 0 ? 1 : plan.lanes[s - 1].size();
        for (std::size_t a = 0; a < prev; ++a)
          for (std::size_t b = 0; b < lanes.size(); ++b)
            grid[plan.offset + a][plan.offset + b] = lanes[b].mono[v] ? poly_mul(lanes[b].coef, xv) : lanes[b].coef;
      } else {
        for (std::size_t b = 0; b < lanes.size(); ++b) grid[plan.offset + b][plan.offset + b] = lanes[b].mono[v] ? xv : one;
      }
    }
    blocks.push_back({v});
    layers.push_back(W ? MatPoly::from_grid(grid) : MatPoly(f, n, 0));
  }
  Boundary left, right;
  left.vec.assign(W, zero);
  right.vec.assign(W, zero);
  for (const auto& plan : plans) {
    left.vec[plan.offset] = plan.scale;
    for (std::size_t b = 0; b < plan.lanes.back().size(); ++b) right.vec[plan.offset + b] = ScalarPoly::constant(f, n, 1);
  }

  if (opts.group_by_color) {
    std::vector<std::vector<std::size_t>> gblocks;
    std::vector<MatPoly> glayers;
    const auto& finest = red.order.refined.front();
    std::vector<std::size_t> color(n, 0);
    for (std::size_t k = 0; k < finest.colors.size(); ++k)
      for (auto v : finest.colors[k]) color[v] = k;
    for (std::size_t q = 0; q < order.size(); ++q) {
      if (q > 0 && color[order[q]] == color[order[q - 1]]) {
        gblocks.back().push_back(order[q]);
        glayers.back() = poly_mul(glayers.back(), layers[q]);
      } else {
        gblocks.push_back({order[q]});
        glayers.push_back(layers[q]);
      }
    }
    for (auto& b : gblocks) std::sort(b.begin(), b.end());
    blocks = std::move(gblocks);
    layers = std::move(glayers);
  }
  red.roabp = Roabp(f, n, W, std::move(blocks), std::move(layers), std::move(left), std::move(right), opts.params);
  return red;
}

// ---- base sets ----

namespace {

struct Cert {
  std::vector<std::size_t> vars;
  std::vector<std::size_t> order;
};

std::vector<Cert> decompose_rec(const std::vector<Partition>& parts, const std::vector<std::size_t>& idx,
                                const std::vector<std::size_t>& U) {
  if (idx.size() == 1) return {{U, idx}};
  Partition p1 = restrict_partition(parts[idx[0]], U);
  std::vector<std::size_t> rest(idx.begin() + 1, idx.end());
  std::vector<Cert> out;
  std::vector<const std::vector<std::size_t>*> small;
  std::size_t longest = 0;
  for (const auto& col : p1.colors) {
    if (col.size() * col.size() >= U.size()) {
      // big color: the other partitions decide, P1 is a single color on it
      for (auto& c : decompose_rec(parts, rest, col)) {
        c.order.push_back(idx[0]);
        out.push_back(std::move(c));
      }
    } else {
      small.push_back(&col);
      longest = std::max(longest, col.size());
    }
  }
  for (std::size_t a = 0; a < longest; ++a) {
    // a-th element of every small color: P1 is all singletons there
    std::vector<std::size_t> B;
    for (const auto* col : small)
      if (a < col->size()) B.push_back((*col)[a]);
    std::sort(B.begin(), B.end());
    for (auto& c : decompose_rec(parts, rest, B)) {
      c.order.insert(c.order.begin(), idx[0]);
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

BaseSetDecomposition decompose_base_sets(const std::vector<Partition>& partitions) {
  if (partitions.empty()) throw PreconditionError("decomposition needs at least one partition");
  BaseSetDecomposition dec;
  auto uni = universe_of(partitions[0]);
  for (const auto& p : partitions) {
    if (universe_of(p) != uni) throw StructuralError("partitions cover different variable sets");
    if (std::find(dec.partitions.begin(), dec.partitions.end(), p) == dec.partitions.end()) dec.partitions.push_back(p);
  }
  std::size_t c = dec.partitions.size();
  double two = std::pow(2.0, static_cast<double>(c - 1));
  dec.epsilon = 1.0 / two;
  dec.cap = two * std::pow(static_cast<double>(uni.size()), 1.0 - dec.epsilon);
  std::vector<std::size_t> idx(c);
  std::iota(idx.begin(), idx.end(), 0);
  for (auto& cert : decompose_rec(dec.partitions, idx, uni)) {
    std::vector<Partition> seq;
    for (auto i : cert.order) seq.push_back(restrict_partition(dec.partitions[i], cert.vars));
    BaseSet b{cert.vars, cert.order, compute_distance(seq)};
    if (b.distance != 1) throw InternalError("base set certificate has distance " + std::to_string(b.distance));
    dec.sets.push_back(std::move(b));
  }
  return dec;
}

// ---- whitebox test ----

SumSmlResult sum_sml_whitebox_test(const Depth3Circuit& c, const SumSmlOptions& opts) {
  SumSmlResult res;
  const std::size_t n = c.n();
  if (c.k() == 0 || n == 0) return res;
  std::vector<Partition> gparts;
  for (const auto& g : c.gates()) gparts.push_back(gate_partition(g, n));
  res.decomposition = decompose_base_sets(gparts);
  const auto& dec = res.decomposition;

  std::vector<PointSet> hs;
  long double total = 1;
  for (const auto& B : dec.sets) {
    std::vector<std::size_t> rank(dec.partitions.size());
    for (std::size_t r = 0; r < B.order.size(); ++r) rank[B.order[r]] = r;
    std::vector<std::size_t> gorder(c.k());
    std::iota(gorder.begin(), gorder.end(), 0);
    auto part_index = [&](std::size_t g) {
      return static_cast<std::size_t>(std::find(dec.partitions.begin(), dec.partitions.end(), gparts[g]) -
                                      dec.partitions.begin());
    };
    std::stable_sort(gorder.begin(), gorder.end(),
                     [&](auto a, auto b) { return rank[part_index(a)] < rank[part_index(b)]; });
    ReductionOptions ropts;
    std::set<std::size_t> in(B.variables.begin(), B.variables.end());
    for (std::size_t v = 0; v < n; ++v)
      if (!in.count(v)) ropts.params.push_back(v);
    ropts.require_distance = 1;
    auto red = circuit_to_roabp(c, gorder, ropts);
    HittingOptions hopts;
    hopts.c0 = opts.c0;
    hs.push_back(roabp_hitting_set(red.roabp, Mode::Whitebox, hopts));
    res.base_set_sizes.push_back(hs.back().size());
    total *= static_cast<long double>(hs.back().size());
  }
  if (total > static_cast<long double>(opts.ceiling))
    throw CapabilityError("hybrid sweep needs " + std::to_string(static_cast<double>(total)) +
                          " evaluations, above ceiling " + std::to_string(opts.ceiling));
  res.sweep_size = static_cast<std::uint64_t>(total);

  std::size_t m = hs.size();
  std::vector<std::vector<std::vector<Scalar>>> cache(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::uint64_t j = 0; j < hs[i].size(); ++j) cache[i].push_back(hs[i].at(j));
  std::vector<std::uint64_t> digit(m, 0);
  std::vector<Scalar> point(n, 0);
  for (std::uint64_t it = 0; it < res.sweep_size; ++it) {
    for (std::size_t i = 0; i < m; ++i)
      for (auto v : dec.sets[i].variables) point[v] = cache[i][digit[i]][v];
    ++res.evaluations;
    if (evaluate(c, point) != 0) {
      res.nonzero = true;
      res.witness = point;
      return res;
    }
    for (std::size_t i = m; i-- > 0;) {
      if (++digit[i] < cache[i].size()) break;
      digit[i] = 0;
    }
  }
  return res;
}

}  // namespace pit
