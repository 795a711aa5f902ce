#include "pit/poly.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "pit/errors.hpp"

namespace pit {

std::size_t support_size(const ExponentVector& e) {
  return static_cast<std::size_t>(std::count_if(e.begin(), e.end(), [](std::uint32_t x) { return x != 0; }));
}

std::uint64_t total_degree(const ExponentVector& e) {
  std::uint64_t s = 0;
  for (auto x : e) s += x;
  return s;
}

ExponentVector monomial_mul(const ExponentVector& a, const ExponentVector& b) {
  if (a.size() != b.size()) throw StructuralError("exponent vectors of different lengths");
  ExponentVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

ExponentVector restrict_to(const ExponentVector& e, const std::vector<std::size_t>& vars) {
  ExponentVector r(e.size(), 0);
  for (auto v : vars) r[v] = e[v];
  return r;
}

std::vector<ExponentVector> enumerate_monomials(std::size_t n, const std::vector<std::size_t>& vars,
                                                std::uint32_t delta, std::size_t max_support) {
  std::vector<ExponentVector> out;
  ExponentVector cur(n, 0);
  auto rec = [&](auto&& self, std::size_t idx, std::size_t used) -> void {
    if (idx == vars.size()) {
      out.push_back(cur);
      return;
    }
    self(self, idx + 1, used);
    if (used == max_support) return;
    for (std::uint32_t k = 1; k <= delta; ++k) {
      cur[vars[idx]] = k;
      self(self, idx + 1, used + 1);
    }
    cur[vars[idx]] = 0;
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <class Terms>
std::size_t terms_max_support(const Terms& t) {
  std::size_t m = 0;
  for (const auto& [e, c] : t) m = std::max(m, support_size(e));
  return m;
}

template <class Terms>
std::uint32_t terms_max_degree(const Terms& t) {
  std::uint32_t m = 0;
  for (const auto& [e, c] : t)
    for (auto x : e) m = std::max(m, x);
  return m;
}

template <class Terms>
std::vector<std::size_t> terms_variables(const Terms& t, std::size_t n) {
  std::vector<bool> seen(n, false);
  for (const auto& [e, c] : t)
    for (std::size_t i = 0; i < n; ++i)
      if (e[i]) seen[i] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

void check_compatible(const Field& fa, std::size_t na, const Field& fb, std::size_t nb) {
  if (!(fa == fb)) throw StructuralError("modulus mismatch");
  if (na != nb) throw StructuralError("ambient variable count mismatch");
}

// Coefficients of prod_i (x_i + o_i)^{e_i} as (exponent, scalar) pairs.
std::vector<std::pair<ExponentVector, Scalar>> shifted_monomial(const Field& f, const ExponentVector& e,
                                                                 const std::vector<Scalar>& offsets) {
  std::vector<std::pair<ExponentVector, Scalar>> acc{{ExponentVector(e.size(), 0), 1}};
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    std::uint32_t k = e[i];
    // binomial row k
    std::vector<Scalar> binom(k + 1, 0);
    binom[0] = 1;
    for (std::uint32_t r = 1; r <= k; ++r)
      for (std::uint32_t j = r; j > 0; --j) binom[j] = f.add(binom[j], binom[j - 1]);
    std::vector<std::pair<ExponentVector, Scalar>> next;
    for (const auto& [m, c] : acc) {
      for (std::uint32_t j = 0; j <= k; ++j) {
        Scalar coef = f.mul(binom[j], f.pow(offsets[i], k - j));
        if (coef == 0) continue;
        ExponentVector m2 = m;
        m2[i] = j;
        next.emplace_back(std::move(m2), f.mul(c, coef));
      }
    }
    acc = std::move(next);
  }
  return acc;
}

std::vector<std::vector<Scalar>> power_table(const Field& f, const std::vector<Scalar>& point,
                                             const std::vector<std::uint32_t>& max_exp) {
  std::vector<std::vector<Scalar>> pw(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    pw[i].resize(max_exp[i] + 1);
    pw[i][0] = 1;
    for (std::uint32_t k = 1; k <= max_exp[i]; ++k) pw[i][k] = f.mul(pw[i][k - 1], point[i]);
  }
  return pw;
}

template <class Terms>
std::vector<std::uint32_t> max_exponents(const Terms& t, std::size_t n) {
  std::vector<std::uint32_t> m(n, 0);
  for (const auto& [e, c] : t)
    for (std::size_t i = 0; i < n; ++i) m[i] = std::max(m[i], e[i]);
  return m;
}

}  // namespace

// ---- ScalarPoly ----

ScalarPoly ScalarPoly::constant(Field f, std::size_t n, Scalar c) {
  ScalarPoly p(f, n);
  p.add_term(ExponentVector(n, 0), c);
  return p;
}

ScalarPoly ScalarPoly::monomial(Field f, std::size_t n, const ExponentVector& e, Scalar c) {
  ScalarPoly p(f, n);
  p.add_term(e, c);
  return p;
}

ScalarPoly ScalarPoly::variable(Field f, std::size_t n, std::size_t i) {
  ExponentVector e(n, 0);
  e.at(i) = 1;
  return monomial(f, n, e);
}

void ScalarPoly::add_term(const ExponentVector& e, Scalar c) {
  if (e.size() != n_) throw StructuralError("exponent vector length " + std::to_string(e.size()) +
                                            " does not match ambient n=" + std::to_string(n_));
  c = field_.reduce(c);
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second = field_.add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

Scalar ScalarPoly::coeff(const ExponentVector& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

std::size_t ScalarPoly::max_support() const { return terms_max_support(terms_); }
std::uint32_t ScalarPoly::max_individual_degree() const { return terms_max_degree(terms_); }
std::vector<std::size_t> ScalarPoly::variables() const { return terms_variables(terms_, n_); }

std::uint64_t ScalarPoly::max_total_degree() const {
  std::uint64_t m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, total_degree(e));
  return m;
}

// ---- MatPoly ----

MatPoly MatPoly::constant(Field f, std::size_t n, const Matrix& m) {
  if (m.rows != m.cols) throw StructuralError("matrix coefficient must be square");
  MatPoly p(f, n, m.rows);
  p.add_term(ExponentVector(n, 0), m);
  return p;
}

MatPoly MatPoly::identity(Field f, std::size_t n, std::size_t w) { return constant(f, n, Matrix::identity(w)); }

MatPoly MatPoly::from_grid(const std::vector<std::vector<ScalarPoly>>& grid) {
  std::size_t w = grid.size();
  if (w == 0) throw StructuralError("empty grid");
  const Field f = grid[0][0].field();
  std::size_t n = grid[0][0].n();
  MatPoly out(f, n, w);
  std::map<ExponentVector, Matrix> acc;
  for (std::size_t i = 0; i < w; ++i) {
    if (grid[i].size() != w) throw StructuralError("grid is not square");
    for (std::size_t j = 0; j < w; ++j) {
      check_compatible(f, n, grid[i][j].field(), grid[i][j].n());
      for (const auto& [e, c] : grid[i][j].terms()) {
        auto it = acc.try_emplace(e, w, w).first;
        it->second(i, j) = c;
      }
    }
  }
  for (auto& [e, m] : acc) out.add_term(e, m);
  return out;
}

void MatPoly::add_term(const ExponentVector& e, const Matrix& m) {
  if (e.size() != n_) throw StructuralError("exponent vector length " + std::to_string(e.size()) +
                                            " does not match ambient n=" + std::to_string(n_));
  if (m.rows != w_ || m.cols != w_) throw StructuralError("coefficient is not " + std::to_string(w_) + "x" +
                                                          std::to_string(w_));
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (!m.is_zero()) terms_.emplace(e, m);
    return;
  }
  mat_add_into(field_, it->second, m);
  if (it->second.is_zero()) terms_.erase(it);
}

ScalarPoly MatPoly::entry(std::size_t i, std::size_t j) const {
  ScalarPoly p(field_, n_);
  for (const auto& [e, m] : terms_) p.add_term(e, m(i, j));
  return p;
}

std::vector<std::vector<ScalarPoly>> MatPoly::grid() const {
  std::vector<std::vector<ScalarPoly>> g;
  for (std::size_t i = 0; i < w_; ++i) {
    g.emplace_back();
    for (std::size_t j = 0; j < w_; ++j) g.back().push_back(entry(i, j));
  }
  return g;
}

std::size_t MatPoly::max_support() const { return terms_max_support(terms_); }
std::uint32_t MatPoly::max_individual_degree() const { return terms_max_degree(terms_); }
std::vector<std::size_t> MatPoly::variables() const { return terms_variables(terms_, n_); }

// ---- UniPoly ----

void UniPoly::trim() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

std::size_t UniPoly::lowest_degree() const {
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i]) return i;
  throw PreconditionError("lowest term of the zero polynomial");
}

Scalar UniPoly::eval(Scalar t) const {
  Scalar r = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) r = field.add(field.mul(r, t), coeffs[i]);
  return r;
}

// ---- arithmetic ----

ScalarPoly poly_add(const ScalarPoly& a, const ScalarPoly& b) {
  check_compatible(a.field(), a.n(), b.field(), b.n());
  ScalarPoly r = a;
  for (const auto& [e, c] : b.terms()) r.add_term(e, c);
  return r;
}

ScalarPoly poly_sub(const ScalarPoly& a, const ScalarPoly& b) {
  check_compatible(a.field(), a.n(), b.field(), b.n());
  ScalarPoly r = a;
  for (const auto& [e, c] : b.terms()) r.add_term(e, a.field().neg(c));
  return r;
}

ScalarPoly poly_mul(const ScalarPoly& a, const ScalarPoly& b) {
  check_compatible(a.field(), a.n(), b.field(), b.n());
  const Field& f = a.field();
  ScalarPoly r(f, a.n());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) r.add_term(monomial_mul(ea, eb), f.mul(ca, cb));
  return r;
}

ScalarPoly poly_scale(const ScalarPoly& a, Scalar c) {
  ScalarPoly r(a.field(), a.n());
  for (const auto& [e, x] : a.terms()) r.add_term(e, a.field().mul(x, c));
  return r;
}

MatPoly poly_add(const MatPoly& a, const MatPoly& b) {
  check_compatible(a.field(), a.n(), b.field(), b.n());
  if (a.width() != b.width()) throw StructuralError("width mismatch");
  MatPoly r = a;
  for (const auto& [e, m] : b.terms()) r.add_term(e, m);
  return r;
}

MatPoly poly_mul(const MatPoly& a, const MatPoly& b) {
  check_compatible(a.field(), a.n(), b.field(), b.n());
  if (a.width() != b.width()) throw StructuralError("width mismatch: " + std::to_string(a.width()) + " vs " +
                                                    std::to_string(b.width()));
  const Field& f = a.field();
  std::map<ExponentVector, Matrix> acc;
  for (const auto& [ea, ma] : a.terms()) {
    for (const auto& [eb, mb] : b.terms()) {
      Matrix prod = mat_mul(f, ma, mb);
      auto [it, fresh] = acc.try_emplace(monomial_mul(ea, eb), std::move(prod));
      if (!fresh) mat_add_into(f, it->second, mat_mul(f, ma, mb));
    }
  }
  MatPoly r(f, a.n(), a.width());
  for (auto& [e, m] : acc) r.add_term(e, m);
  return r;
}

MatPoly poly_scale(const MatPoly& a, Scalar c) {
  MatPoly r(a.field(), a.n(), a.width());
  for (const auto& [e, m] : a.terms()) r.add_term(e, mat_scale(a.field(), m, c));
  return r;
}

Scalar eval_poly(const ScalarPoly& f, const std::vector<Scalar>& point) {
  if (point.size() != f.n()) throw StructuralError("point length " + std::to_string(point.size()) +
                                                   " does not match n=" + std::to_string(f.n()));
  const Field& F = f.field();
  auto pw = power_table(F, point, max_exponents(f.terms(), f.n()));
  Scalar sum = 0;
  for (const auto& [e, c] : f.terms()) {
    Scalar term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term = F.mul(term, pw[i][e[i]]);
    sum = F.add(sum, term);
  }
  return sum;
}

Matrix eval_poly(const MatPoly& f, const std::vector<Scalar>& point) {
  if (point.size() != f.n()) throw StructuralError("point length " + std::to_string(point.size()) +
                                                   " does not match n=" + std::to_string(f.n()));
  const Field& F = f.field();
  auto pw = power_table(F, point, max_exponents(f.terms(), f.n()));
  Matrix sum(f.width(), f.width());
  for (const auto& [e, m] : f.terms()) {
    Scalar term = 1;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term = F.mul(term, pw[i][e[i]]);
    mat_axpy(F, sum, term, m);
  }
  return sum;
}

ScalarPoly shift(const ScalarPoly& f, const std::vector<Scalar>& offsets) {
  if (offsets.size() != f.n()) throw StructuralError("shift length does not match n");
  ScalarPoly r(f.field(), f.n());
  for (const auto& [e, c] : f.terms())
    for (const auto& [m, k] : shifted_monomial(f.field(), e, offsets)) r.add_term(m, f.field().mul(c, k));
  return r;
}

MatPoly shift(const MatPoly& f, const std::vector<Scalar>& offsets) {
  if (offsets.size() != f.n()) throw StructuralError("shift length does not match n");
  std::map<ExponentVector, Matrix> acc;
  for (const auto& [e, c] : f.terms()) {
    for (const auto& [m, k] : shifted_monomial(f.field(), e, offsets)) {
      auto it = acc.try_emplace(m, f.width(), f.width()).first;
      mat_axpy(f.field(), it->second, k, c);
    }
  }
  MatPoly r(f.field(), f.n(), f.width());
  for (auto& [e, m] : acc) r.add_term(e, m);
  return r;
}

namespace {

ScalarPoly det_rec(const std::vector<std::vector<ScalarPoly>>& g, std::vector<std::size_t>& rows_left,
                   std::size_t col, const DetOptions& opts) {
  const ScalarPoly& proto = g[0][0];
  if (col == g.size()) return ScalarPoly::constant(proto.field(), proto.n(), 1);
  ScalarPoly acc(proto.field(), proto.n());
  std::size_t sign_pos = 0;
  for (std::size_t idx = 0; idx < rows_left.size(); ++idx) {
    std::size_t r = rows_left[idx];
    const ScalarPoly& entry = g[r][col];
    if (!entry.is_zero()) {
      rows_left.erase(rows_left.begin() + static_cast<std::ptrdiff_t>(idx));
      ScalarPoly minor = det_rec(g, rows_left, col + 1, opts);
      rows_left.insert(rows_left.begin() + static_cast<std::ptrdiff_t>(idx), r);
      ScalarPoly term = poly_mul(entry, minor);
      if (sign_pos % 2) term = poly_scale(term, proto.field().neg(1));
      acc = poly_add(acc, term);
      if (acc.sparsity() > opts.term_ceiling)
        throw CapabilityError("determinant exceeds term ceiling " + std::to_string(opts.term_ceiling));
    }
    ++sign_pos;
  }
  return acc;
}

}  // namespace

ScalarPoly det_poly(const std::vector<std::vector<ScalarPoly>>& grid, const DetOptions& opts) {
  std::size_t w = grid.size();
  if (w == 0) throw StructuralError("determinant of an empty grid");
  if (w > opts.max_width)
    throw CapabilityError("determinant width " + std::to_string(w) + " exceeds limit " +
                          std::to_string(opts.max_width));
  const ScalarPoly& proto = grid[0][0];
  for (const auto& row : grid) {
    if (row.size() != w) throw StructuralError("determinant grid is not square");
    for (const auto& e : row) check_compatible(proto.field(), proto.n(), e.field(), e.n());
  }
  std::vector<std::size_t> rows(w);
  for (std::size_t i = 0; i < w; ++i) rows[i] = i;
  return det_rec(grid, rows, 0, opts);
}

}  // namespace pit
