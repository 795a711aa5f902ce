#include "pit/roabp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "pit/errors.hpp"

namespace pit {

namespace {

void check_inside(const std::vector<std::size_t>& used, const std::vector<bool>& allowed, const std::string& what) {
  for (auto v : used)
    if (!allowed[v]) throw StructuralError(what + " uses x" + std::to_string(v + 1) + " outside its block");
}

}  // namespace

Roabp::Roabp(Field f, std::size_t n, std::size_t w, std::vector<std::vector<std::size_t>> blocks,
             std::vector<MatPoly> layers, Boundary left, Boundary right, std::vector<std::size_t> params)
    : field_(f),
      n_(n),
      w_(w),
      blocks_(std::move(blocks)),
      layers_(std::move(layers)),
      left_(std::move(left)),
      right_(std::move(right)),
      params_(std::move(params)) {
  if (blocks_.size() != layers_.size())
    throw StructuralError("block count " + std::to_string(blocks_.size()) + " does not match layer count " +
                          std::to_string(layers_.size()));
  // -1 free, 0 parameter, 1 left, 2 right, 3+i interior block i
  std::vector<long> owner(n_, -1);
  auto claim = [&](const std::vector<std::size_t>& vs, long id, const std::string& name) {
    for (auto v : vs) {
      if (v >= n_) throw StructuralError(name + " mentions variable index " + std::to_string(v) + " >= n");
      if (owner[v] != -1)
        throw StructuralError("blocks not disjoint: x" + std::to_string(v + 1) + " claimed twice (" + name + ")");
      owner[v] = id;
    }
  };
  claim(params_, 0, "parameters");
  claim(left_.block, 1, "left boundary block");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].empty()) throw StructuralError("block " + std::to_string(i + 1) + " is empty");
    claim(blocks_[i], static_cast<long>(i) + 3, "block " + std::to_string(i + 1));
  }
  claim(right_.block, 2, "right boundary block");

  auto allowed_for = [&](long id) {
    std::vector<bool> a(n_, false);
    for (std::size_t v = 0; v < n_; ++v) a[v] = owner[v] == id || owner[v] == 0;
    return a;
  };
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& L = layers_[i];
    if (!(L.field() == field_) || L.n() != n_) throw StructuralError("layer " + std::to_string(i + 1) + " has a different field or n");
    if (L.width() != w_) throw StructuralError("layer " + std::to_string(i + 1) + " has width " +
                                               std::to_string(L.width()) + ", expected " + std::to_string(w_));
    check_inside(L.variables(), allowed_for(static_cast<long>(i) + 3), "layer " + std::to_string(i + 1));
  }
  auto check_boundary = [&](const Boundary& b, long id, const std::string& name) {
    if (b.vec.size() != w_) throw StructuralError(name + " has length " + std::to_string(b.vec.size()) +
                                                  ", expected " + std::to_string(w_));
    auto allowed = allowed_for(id);
    for (const auto& p : b.vec) {
      if (!(p.field() == field_) || p.n() != n_) throw StructuralError(name + " has a different field or n");
      check_inside(p.variables(), allowed, name);
    }
  };
  check_boundary(left_, 1, "left boundary");
  check_boundary(right_, 2, "right boundary");
}

Roabp Roabp::with_constant_boundaries(Field f, std::size_t n, std::vector<std::vector<std::size_t>> blocks,
                                      std::vector<MatPoly> layers, const std::vector<Scalar>& s,
                                      const std::vector<Scalar>& t) {
  Boundary l, r;
  for (auto c : s) l.vec.push_back(ScalarPoly::constant(f, n, c));
  for (auto c : t) r.vec.push_back(ScalarPoly::constant(f, n, c));
  std::size_t w = s.size();
  return Roabp(f, n, w, std::move(blocks), std::move(layers), std::move(l), std::move(r));
}

std::uint32_t Roabp::degree_bound() const {
  std::uint32_t d = 0;
  for (const auto& L : layers_) d = std::max(d, L.max_individual_degree());
  for (const auto* b : {&left_, &right_})
    for (const auto& p : b->vec) d = std::max(d, p.max_individual_degree());
  return d;
}

namespace {

std::size_t boundary_sparsity(const Boundary& b) {
  std::set<ExponentVector> monos;
  for (const auto& p : b.vec)
    for (const auto& [e, c] : p.terms()) monos.insert(e);
  return monos.size();
}

}  // namespace

std::size_t Roabp::sparsity_bound() const {
  std::size_t s = std::max(boundary_sparsity(left_), boundary_sparsity(right_));
  for (const auto& L : layers_) s = std::max(s, L.sparsity());
  return s;
}

std::size_t Roabp::support_bound() const {
  std::size_t m = 0;
  for (const auto& L : layers_) m = std::max(m, L.max_support());
  for (const auto* b : {&left_, &right_})
    for (const auto& p : b->vec) m = std::max(m, p.max_support());
  return m;
}

bool Roabp::operator==(const Roabp& o) const {
  auto same_boundary = [](const Boundary& a, const Boundary& b) { return a.block == b.block && a.vec == b.vec; };
  return field_ == o.field_ && n_ == o.n_ && w_ == o.w_ && blocks_ == o.blocks_ && layers_ == o.layers_ &&
         same_boundary(left_, o.left_) && same_boundary(right_, o.right_) && params_ == o.params_;
}

MatPoly boundary_as_row(const Roabp& r) {
  std::size_t w = r.width();
  std::vector<std::vector<ScalarPoly>> g(w, std::vector<ScalarPoly>(w, ScalarPoly(r.field(), r.n())));
  for (std::size_t j = 0; j < w; ++j) g[0][j] = r.left().vec[j];
  return MatPoly::from_grid(g);
}

MatPoly boundary_as_column(const Roabp& r) {
  std::size_t w = r.width();
  std::vector<std::vector<ScalarPoly>> g(w, std::vector<ScalarPoly>(w, ScalarPoly(r.field(), r.n())));
  for (std::size_t i = 0; i < w; ++i) g[i][0] = r.right().vec[i];
  return MatPoly::from_grid(g);
}

// ---- PointSet ----

PointSet PointSet::lazy(std::size_t n, std::uint64_t count, Generator gen, Provenance prov) {
  PointSet ps(n, std::move(prov));
  ps.count_ = count;
  ps.gen_ = std::move(gen);
  return ps;
}

void PointSet::at(std::uint64_t i, std::vector<Scalar>& out) const {
  if (i >= size()) throw StructuralError("point index out of range");
  if (gen_) {
    out.assign(n_, 0);
    gen_(i, out);
  } else {
    out = points_[i];
  }
}

std::vector<Scalar> PointSet::at(std::uint64_t i) const {
  std::vector<Scalar> out;
  at(i, out);
  return out;
}

void PointSet::push_back(std::vector<Scalar> p) {
  if (gen_) throw StructuralError("cannot append to a lazily generated point set");
  if (p.size() != n_) throw StructuralError("point length " + std::to_string(p.size()) + " does not match n=" +
                                            std::to_string(n_));
  points_.push_back(std::move(p));
}

// ---- evaluation ----

Scalar evaluate(const Roabp& r, const std::vector<Scalar>& point) {
  if (point.size() != r.n())
    throw StructuralError("point length " + std::to_string(point.size()) + " does not match n=" +
                          std::to_string(r.n()));
  const Field& f = r.field();
  std::size_t w = r.width();
  std::vector<Scalar> v(w);
  for (std::size_t i = 0; i < w; ++i) v[i] = eval_poly(r.left().vec[i], point);
  for (const auto& L : r.layers()) {
    Matrix m = eval_poly(L, point);
    std::vector<Scalar> nv(w, 0);
    for (std::size_t i = 0; i < w; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < w; ++j) nv[j] = f.add(nv[j], f.mul(v[i], m(i, j)));
    }
    v = std::move(nv);
  }
  Scalar out = 0;
  for (std::size_t j = 0; j < w; ++j) out = f.add(out, f.mul(v[j], eval_poly(r.right().vec[j], point)));
  return out;
}

Expansion expand(const Roabp& r, std::uint64_t ceiling) {
  const Field& f = r.field();
  std::size_t n = r.n(), w = r.width();
  long double estimate = 1;
  for (const auto& L : r.layers()) estimate *= static_cast<long double>(std::max<std::size_t>(L.sparsity(), 1));
  if (estimate > static_cast<long double>(ceiling))
    throw CapabilityError("expansion estimate " + std::to_string(static_cast<double>(estimate)) +
                          " terms exceeds ceiling " + std::to_string(ceiling));
  MatPoly D = MatPoly::identity(f, n, w);
  for (const auto& L : r.layers()) D = poly_mul(D, L);

  std::vector<std::vector<ScalarPoly>> lr(w, std::vector<ScalarPoly>(w, ScalarPoly(f, n)));
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = 0; j < w; ++j) lr[i][j] = poly_mul(r.left().vec[i], r.right().vec[j]);
  ScalarPoly C(f, n);
  for (const auto& [e, m] : D.terms()) {
    for (std::size_t i = 0; i < w; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        Scalar c = m(i, j);
        if (c == 0) continue;
        for (const auto& [e2, c2] : lr[i][j].terms()) C.add_term(monomial_mul(e, e2), f.mul(c, c2));
      }
    }
  }
  return {std::move(D), std::move(C)};
}

namespace {

using Sparse1 = std::map<std::uint64_t, Scalar>;

Sparse1 substitute(const ScalarPoly& p, const WeightFn& wfn) {
  Sparse1 out;
  const Field& f = p.field();
  for (const auto& [e, c] : p.terms()) {
    auto& slot = out[wfn.weight(e)];
    slot = f.add(slot, c);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

void mul_add(const Field& f, Sparse1& acc, const Sparse1& a, const Sparse1& b) {
  for (const auto& [da, ca] : a)
    for (const auto& [db, cb] : b) {
      auto& slot = acc[da + db];
      slot = f.add(slot, f.mul(ca, cb));
    }
}

}  // namespace

UniPoly weighted_substitute(const Roabp& r, const WeightFn& wfn, std::uint64_t max_degree) {
  if (wfn.n() != r.n()) throw StructuralError("weight function does not cover all variables");
  const Field& f = r.field();
  std::size_t w = r.width();
  std::vector<Sparse1> v(w);
  for (std::size_t i = 0; i < w; ++i) v[i] = substitute(r.left().vec[i], wfn);
  for (const auto& L : r.layers()) {
    auto g = L.grid();
    std::vector<Sparse1> nv(w);
    for (std::size_t i = 0; i < w; ++i) {
      if (v[i].empty()) continue;
      for (std::size_t j = 0; j < w; ++j) mul_add(f, nv[j], v[i], substitute(g[i][j], wfn));
    }
    for (auto& x : nv) std::erase_if(x, [](const auto& kv) { return kv.second == 0; });
    v = std::move(nv);
  }
  Sparse1 out;
  for (std::size_t j = 0; j < w; ++j) mul_add(f, out, v[j], substitute(r.right().vec[j], wfn));
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  UniPoly u{f, {}};
  if (out.empty()) return u;
  std::uint64_t deg = out.rbegin()->first;
  if (deg > max_degree)
    throw CapabilityError("substituted degree " + std::to_string(deg) + " exceeds limit " +
                          std::to_string(max_degree));
  u.coeffs.assign(deg + 1, 0);
  for (const auto& [d, c] : out) u.coeffs[d] = c;
  u.trim();
  return u;
}

}  // namespace pit
