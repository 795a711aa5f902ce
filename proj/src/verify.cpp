#include "pit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <map>
#include <numeric>
#include <thread>

#include "pit/errors.hpp"
#include "pit/rng.hpp"

namespace pit {

namespace {

constexpr std::size_t kBudget = 2000;

std::string str(std::uint64_t v) { return std::to_string(v); }

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("bad value for " + what + ": '" + s + "'");
  return v;
}

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Matrix random_matrix(Rng& rng, const Field& f, std::size_t w) {
  Matrix m(w, w);
  for (auto& x : m.data) x = rng.scalar(f);
  return m;
}

Matrix random_invertible(Rng& rng, const Field& f, std::size_t w) {
  for (std::size_t t = 0; t < kBudget; ++t) {
    Matrix m = random_matrix(rng, f, w);
    if (determinant(f, m) != 0) return m;
  }
  throw CapabilityError("no invertible matrix drawn within budget");
}

// Up to s distinct monomials over the block, optionally excluding the constant one.
std::vector<ExponentVector> pick_monomials(Rng& rng, std::size_t n, const std::vector<std::size_t>& block,
                                           std::uint32_t delta, std::size_t mu, std::size_t s, bool total_cap,
                                           bool nonconstant) {
  auto monos = enumerate_monomials(n, block, delta, mu);
  std::erase_if(monos, [&](const ExponentVector& e) {
    return (total_cap && total_degree(e) > delta) || (nonconstant && support_size(e) == 0);
  });
  rng.shuffle(monos);
  if (monos.size() > s) monos.resize(s);
  return monos;
}

ScalarPoly random_poly(Rng& rng, const Field& f, std::size_t n, const std::vector<std::size_t>& block,
                       std::uint32_t delta, std::size_t mu, std::size_t s, bool total_cap) {
  ScalarPoly p(f, n);
  for (const auto& e : pick_monomials(rng, n, block, delta, mu, s, total_cap, false)) p.add_term(e, rng.nonzero(f));
  return p;
}

struct Shape {
  std::size_t n, d, w, s;
  std::uint32_t delta;
};

Shape draw_shape(Rng& rng, const InstanceClass cls, const InstanceParams& p) {
  std::size_t extra = p.boundary_blocks ? 2 : 0;
  if (p.n < 1 + extra || p.d < 1 || p.s < 1 || p.delta < 1)
    throw PreconditionError("parameters too small for a " + to_string(cls) + " instance");
  Shape sh{};
  sh.d = rng.between(1, std::min(p.d, p.n - extra));
  sh.n = rng.between(sh.d + extra, p.n);
  if (cls == InstanceClass::Width2Roabp)
    sh.w = 2;
  else if (cls == InstanceClass::InvertibleRoabp)
    sh.w = p.w;
  else
    sh.w = rng.between(1, std::max<std::size_t>(p.w, 1));
  sh.delta = static_cast<std::uint32_t>(rng.between(1, p.delta));
  sh.s = rng.between(1, p.s);
  return sh;
}

// Rank-1 2x2 layer col * row, first nonzero entry cycling through a, b, c, d.
MatPoly singular_layer(Rng& rng, const Field& f, std::size_t n, const std::vector<std::size_t>& block,
                       std::uint32_t delta, std::size_t mu, std::size_t s) {
  std::uint32_t dc = static_cast<std::uint32_t>(rng.below(delta + 1));
  auto part = [&](std::uint32_t deg, std::size_t sp) {
    for (std::size_t t = 0; t < kBudget; ++t) {
      ScalarPoly q = deg == 0 ? ScalarPoly::constant(f, n, rng.nonzero(f))
                              : random_poly(rng, f, n, block, deg, mu, sp, true);
      if (!q.is_zero()) return q;
    }
    throw CapabilityError("no nonzero factor drawn");
  };
  std::size_t sc = 1, sr = std::max<std::size_t>(s, 1);
  if (rng.coin()) std::swap(sc, sr);
  ScalarPoly zero(f, n);
  ScalarPoly c0 = part(dc, sc), c1 = part(dc, sc), r0 = part(delta - dc, sr), r1 = part(delta - dc, sr);
  switch (rng.below(4)) {
    case 0: break;                    // a != 0
    case 1: r0 = zero; break;         // a = 0, b != 0
    case 2: c0 = zero; break;         // a = b = 0, c != 0
    default: c0 = zero; r0 = zero;    // only d != 0
  }
  return MatPoly::from_grid({{poly_mul(c0, r0), poly_mul(c0, r1)}, {poly_mul(c1, r0), poly_mul(c1, r1)}});
}

Roabp draw_roabp(Rng& rng, const Field& f, InstanceClass cls, const InstanceParams& p) {
  Shape sh = draw_shape(rng, cls, p);
  const bool cap = cls == InstanceClass::Width2Roabp;
  auto vars = iota_vec(sh.n);
  rng.shuffle(vars);
  std::size_t nb = sh.d + (p.boundary_blocks ? 2 : 0);
  std::vector<std::vector<std::size_t>> all(nb);
  for (std::size_t i = 0; i < sh.n; ++i) all[i < nb ? i : rng.below(nb)].push_back(vars[i]);
  for (auto& b : all) std::sort(b.begin(), b.end());
  std::vector<std::size_t> lb, rb;
  if (p.boundary_blocks) {
    lb = all.front();
    rb = all.back();
    all = {all.begin() + 1, all.end() - 1};
  }

  std::vector<std::size_t> sing;
  if (cls == InstanceClass::Width2Roabp && p.singular > 0) {
    auto idx = iota_vec(sh.d);
    rng.shuffle(idx);
    idx.resize(std::min(p.singular, sh.d));
    sing = idx;
  }
  std::vector<MatPoly> layers;
  for (std::size_t i = 0; i < sh.d; ++i) {
    const auto& b = all[i];
    if (std::find(sing.begin(), sing.end(), i) != sing.end()) {
      layers.push_back(singular_layer(rng, f, sh.n, b, sh.delta, p.mu, sh.s));
      continue;
    }
    for (std::size_t t = 0;; ++t) {
      if (t == kBudget) throw CapabilityError("no invertible layer drawn within budget");
      MatPoly L(f, sh.n, sh.w);
      std::size_t s = sh.s;
      if (p.invertible_constant) {
        L.add_term(ExponentVector(sh.n, 0), random_invertible(rng, f, sh.w));
        --s;
      }
      for (const auto& e : pick_monomials(rng, sh.n, b, sh.delta, p.mu, s, cap, p.invertible_constant))
        L.add_term(e, random_matrix(rng, f, sh.w));
      if (cls != InstanceClass::InvertibleRoabp || !det_poly(L.grid()).is_zero()) {
        layers.push_back(std::move(L));
        break;
      }
    }
  }
  auto boundary = [&](const std::vector<std::size_t>& block) {
    Boundary bd{block, {}};
    for (std::size_t j = 0; j < sh.w; ++j)
      bd.vec.push_back(block.empty() ? ScalarPoly::constant(f, sh.n, rng.nonzero(f))
                                     : random_poly(rng, f, sh.n, block, sh.delta, p.mu, sh.s, cap));
    return bd;
  };
  Boundary left = boundary(lb), right = boundary(rb);
  if (p.target == Target::Zero)
    for (auto& q : left.vec) q = ScalarPoly(f, sh.n);
  return Roabp(f, sh.n, sh.w, std::move(all), std::move(layers), std::move(left), std::move(right));
}

std::vector<std::vector<std::size_t>> random_colors(Rng& rng, std::size_t n) {
  auto vars = iota_vec(n);
  rng.shuffle(vars);
  std::vector<std::vector<std::size_t>> colors;
  for (std::size_t i = 0; i < n;) {
    std::size_t sz = rng.between(1, 3);
    colors.emplace_back();
    for (std::size_t t = 0; t < sz && i < n; ++t) colors.back().push_back(vars[i++]);
  }
  return colors;
}

// Split one color or merge two.
std::vector<std::vector<std::size_t>> perturb(Rng& rng, std::vector<std::vector<std::size_t>> colors) {
  std::size_t moves = rng.between(1, 2);
  for (std::size_t m = 0; m < moves; ++m) {
    if (colors.size() > 1 && rng.coin()) {
      std::size_t a = rng.below(colors.size()), b = rng.below(colors.size() - 1);
      if (b >= a) ++b;
      colors[a].insert(colors[a].end(), colors[b].begin(), colors[b].end());
      colors.erase(colors.begin() + static_cast<std::ptrdiff_t>(b));
    } else {
      std::size_t a = rng.below(colors.size());
      if (colors[a].size() < 2) continue;
      rng.shuffle(colors[a]);
      std::size_t cut = rng.between(1, colors[a].size() - 1);
      std::vector<std::size_t> tail(colors[a].begin() + static_cast<std::ptrdiff_t>(cut), colors[a].end());
      colors[a].resize(cut);
      colors.push_back(std::move(tail));
    }
  }
  return colors;
}

Gate random_gate(Rng& rng, const Field& f, const std::vector<std::vector<std::size_t>>& colors) {
  Gate g;
  g.scale = rng.nonzero(f);
  for (const auto& col : colors) {
    LinearForm l;
    l.constant = rng.scalar(f);
    for (auto v : col) l.coeffs[v] = rng.nonzero(f);
    g.forms.push_back(std::move(l));
  }
  return g;
}

// -g with its first two forms rescaled by lambda and 1/lambda.
Gate cancelling_partner(Rng& rng, const Field& f, const Gate& g) {
  Gate h = g;
  h.scale = f.neg(g.scale);
  if (h.forms.size() >= 2) {
    Scalar lam = rng.nonzero(f), inv = f.inv(lam);
    auto scale = [&](LinearForm& l, Scalar c) {
      l.constant = f.mul(l.constant, c);
      for (auto& [v, a] : l.coeffs) a = f.mul(a, c);
    };
    scale(h.forms[0], lam);
    scale(h.forms[1], inv);
  }
  return h;
}

Depth3Circuit draw_depth3(Rng& rng, const Field& f, const InstanceParams& p) {
  if (p.n < 1 || p.k < 1) throw PreconditionError("parameters too small for a depth3 instance");
  std::size_t n = rng.between(std::min<std::size_t>(2, p.n), p.n);
  std::size_t k = rng.between(1, p.k);
  for (std::size_t t = 0; t < kBudget; ++t) {
    std::vector<Gate> gates;
    auto colors = random_colors(rng, n);
    for (std::size_t j = 0; j < k; ++j) {
      if (j > 0) colors = perturb(rng, colors);
      gates.push_back(random_gate(rng, f, colors));
    }
    Depth3Circuit c(f, n, std::move(gates));
    if (best_gate_order(c).distance <= p.delta) return c;
  }
  throw CapabilityError("no circuit of distance <= " + str(p.delta) + " drawn within budget");
}

Depth3Circuit draw_sum_sml(Rng& rng, const Field& f, const InstanceParams& p) {
  if (p.n < 1 || p.k < 1 || p.c < 1) throw PreconditionError("parameters too small for a sum-sml instance");
  std::size_t n = rng.between(std::min<std::size_t>(2, p.n), p.n);
  std::size_t c = rng.between(1, p.c);
  std::vector<Gate> gates;
  for (std::size_t j = 0; j < c; ++j) {
    auto colors = random_colors(rng, n);
    std::size_t k = rng.between(1, p.k);
    if (p.target == Target::Zero) {
      // pairs of cancelling gates; k is rounded up to even
      for (std::size_t g = 0; g < (k + 1) / 2; ++g) {
        Gate a = random_gate(rng, f, colors);
        gates.push_back(cancelling_partner(rng, f, a));
        gates.push_back(std::move(a));
      }
    } else {
      for (std::size_t g = 0; g < k; ++g) gates.push_back(random_gate(rng, f, colors));
    }
  }
  rng.shuffle(gates);
  return Depth3Circuit(f, n, std::move(gates));
}

std::string shape_of(const Instance& inst) {
  if (const auto* r = std::get_if<Roabp>(&inst))
    return "n=" + str(r->n()) + " d=" + str(r->depth()) + " w=" + str(r->width()) +
           " delta=" + str(r->degree_bound()) + " s=" + str(r->sparsity_bound());
  const auto& c = std::get<Depth3Circuit>(inst);
  return "n=" + str(c.n()) + " k=" + str(c.k());
}

std::uint64_t param(const Provenance& p, const std::string& key) {
  for (const auto& [k, v] : p.params)
    if (k == key) return to_u64(v, key);
  throw InternalError("provenance lacks " + key);
}

}  // namespace

std::string to_string(InstanceClass c) {
  switch (c) {
    case InstanceClass::Roabp: return "roabp";
    case InstanceClass::InvertibleRoabp: return "invertible-roabp";
    case InstanceClass::Width2Roabp: return "width2-roabp";
    case InstanceClass::Depth3Distance: return "depth3-distance";
    case InstanceClass::SumSml: return "sum-sml";
  }
  return "?";
}

InstanceClass parse_instance_class(const std::string& s) {
  for (auto c : {InstanceClass::Roabp, InstanceClass::InvertibleRoabp, InstanceClass::Width2Roabp,
                 InstanceClass::Depth3Distance, InstanceClass::SumSml})
    if (to_string(c) == s) return c;
  throw ParseError("unknown instance class '" + s + "'");
}

void set_param(InstanceParams& p, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError("expected name=value, got '" + assignment + "'");
  std::string key = assignment.substr(0, eq), val = assignment.substr(eq + 1);
  if (key == "target") {
    if (val == "nonzero") p.target = Target::Nonzero;
    else if (val == "zero") p.target = Target::Zero;
    else if (val == "any") p.target = Target::Any;
    else throw ParseError("bad value for target: '" + val + "'");
    return;
  }
  if (key == "mu" && val == "inf") {
    p.mu = kUnboundedSupport;
    return;
  }
  std::uint64_t v = to_u64(val, key);
  if (key == "n") p.n = v;
  else if (key == "d") p.d = v;
  else if (key == "w") p.w = v;
  else if (key == "delta") p.delta = static_cast<std::uint32_t>(v);
  else if (key == "s") p.s = v;
  else if (key == "mu") p.mu = v;
  else if (key == "k") p.k = v;
  else if (key == "c") p.c = v;
  else if (key == "singular") p.singular = v;
  else if (key == "boundary") p.boundary_blocks = v != 0;
  else if (key == "invertible_constant") p.invertible_constant = v != 0;
  else throw ParseError("unknown parameter '" + key + "'");
}

std::string describe(const InstanceParams& p) {
  std::string mu = p.mu == kUnboundedSupport ? "inf" : str(p.mu);
  const char* t = p.target == Target::Nonzero ? "nonzero" : p.target == Target::Zero ? "zero" : "any";
  return "n=" + str(p.n) + " d=" + str(p.d) + " w=" + str(p.w) + " delta=" + str(p.delta) + " s=" + str(p.s) +
         " mu=" + mu + " k=" + str(p.k) + " c=" + str(p.c) + " singular=" + str(p.singular) +
         " boundary=" + str(p.boundary_blocks) + " invertible_constant=" + str(p.invertible_constant) +
         " target=" + t;
}

Instance generate_instance(const InstanceSpec& spec) {
  Field f(spec.modulus);
  Rng rng(spec.seed);
  for (std::size_t t = 0; t < kBudget; ++t) {
    Instance inst = [&]() -> Instance {
      switch (spec.cls) {
        case InstanceClass::Depth3Distance: return draw_depth3(rng, f, spec.params);
        case InstanceClass::SumSml: return draw_sum_sml(rng, f, spec.params);
        default: return draw_roabp(rng, f, spec.cls, spec.params);
      }
    }();
    if (spec.params.target != Target::Nonzero || !oracle_is_zero(inst)) return inst;
  }
  throw CapabilityError("no nonzero " + to_string(spec.cls) + " instance drawn within budget");
}

std::size_t instance_n(const Instance& inst) {
  return std::visit([](const auto& x) { return x.n(); }, inst);
}

const Field& instance_field(const Instance& inst) {
  return std::visit([](const auto& x) -> const Field& { return x.field(); }, inst);
}

Scalar evaluate_instance(const Instance& inst, const std::vector<Scalar>& point) {
  return std::visit([&](const auto& x) { return evaluate(x, point); }, inst);
}

ScalarPoly expand_instance(const Instance& inst, std::uint64_t ceiling) {
  if (const auto* r = std::get_if<Roabp>(&inst)) return expand(*r, ceiling).scalar_part;
  ScalarPoly e = expand(std::get<Depth3Circuit>(inst));
  if (e.sparsity() > ceiling) throw CapabilityError("expansion exceeds ceiling " + str(ceiling));
  return e;
}

bool oracle_is_zero(const Instance& inst, std::uint64_t ceiling) { return expand_instance(inst, ceiling).is_zero(); }

std::optional<std::uint64_t> formula_size(const PointSet& points) {
  const Provenance& p = points.provenance();
  const std::string& g = p.generator;
  if (g == "roabp-whitebox") return param(p, "assignments") * param(p, "t_count");
  if (g == "invertible-whitebox" || g == "invertible-blackbox") return param(p, "grid") * param(p, "t_sweep");
  if (g == "width2-whitebox" || g == "width2-blackbox") {
    bool zero = std::any_of(p.params.begin(), p.params.end(), [](const auto& kv) { return kv.first == "zero"; });
    if (zero) return 1;
    return 1 + (param(p, "depth") + 2) * param(p, "Delta") * param(p, "anchors");
  }
  if (g == "low-support") {
    std::uint64_t n = param(p, "n"), j = param(p, "subset_size"), q = param(p, "delta") + 1;
    std::uint64_t c = 1;
    for (std::uint64_t i = 0; i < j; ++i) c = c * (n - i) / (i + 1);
    for (std::uint64_t i = 0; i < j; ++i) c *= q;
    return c;
  }
  return std::nullopt;
}

HittingReport verify_hitting_property(const Instance& inst, const PointSet& points, std::uint64_t ceiling) {
  HittingReport rep;
  rep.size = points.size();
  rep.formula = formula_size(points);
  if (points.n() != instance_n(inst))
    throw StructuralError("points have " + str(points.n()) + " coordinates, instance has " + str(instance_n(inst)));
  if (oracle_is_zero(inst, ceiling)) {
    rep.zero = rep.pass = true;
    return rep;
  }
  std::vector<Scalar> pt(points.n());
  for (std::uint64_t i = 0; i < points.size(); ++i) {
    points.at(i, pt);
    if (evaluate_instance(inst, pt) != 0) {
      rep.witness = i;
      rep.pass = true;
      break;
    }
  }
  return rep;
}

namespace {

SampleResult run_sample(const CampaignOptions& o, std::size_t index) {
  SampleResult res;
  res.index = index;
  res.seed = derive_seed(o.seed, index);
  char head[64];
  std::snprintf(head, sizeof head, "sample %zu seed %016llx", index, static_cast<unsigned long long>(res.seed));
  std::string line = head;
  try {
    Instance inst = generate_instance({o.cls, o.params, res.seed, o.modulus});
    line += " " + shape_of(inst);
    if (o.cls == InstanceClass::SumSml) {
      const auto& c = std::get<Depth3Circuit>(inst);
      SumSmlOptions so;
      so.ceiling = o.ceiling;
      auto r = sum_sml_whitebox_test(c, so);
      bool zero = oracle_is_zero(inst, o.ceiling);
      res.vacuous = false;
      res.pass = r.nonzero == !zero;
      res.size = r.sweep_size;
      line += " m=" + str(r.decomposition.sets.size()) + " sweep=" + str(r.sweep_size) +
              " evaluations=" + str(r.evaluations) + " oracle=" + (zero ? "zero" : "nonzero") +
              " verdict=" + (r.nonzero ? "nonzero" : "zero");
    } else {
      PointSet ps = [&]() {
        if (const auto* r = std::get_if<Roabp>(&inst)) {
          switch (o.cls) {
            case InstanceClass::InvertibleRoabp: return invertible_hitting_set(*r, o.mode);
            case InstanceClass::Width2Roabp: return width2_hitting_set(*r, o.mode);
            default: return roabp_hitting_set(*r, o.mode);
          }
        }
        const auto& c = std::get<Depth3Circuit>(inst);
        auto red = circuit_to_roabp(c, best_gate_order(c).order);
        return roabp_hitting_set(red.roabp, o.mode);
      }();
      auto rep = verify_hitting_property(inst, ps, o.ceiling);
      res.pass = rep.pass;
      res.vacuous = rep.zero;
      res.size = rep.size;
      res.size_matches = rep.size_matches();
      line += " size=" + str(rep.size);
      if (rep.formula) line += " formula=" + str(*rep.formula);
      line += rep.witness ? " witness=" + str(*rep.witness) : std::string(" witness=none");
    }
    line += res.vacuous ? " VACUOUS" : res.pass ? " PASS" : " FAIL";
    if (!res.size_matches) line += " SIZE-MISMATCH";
  } catch (const Error& e) {
    res.error = true;
    line += std::string(" ERROR ") + kind_name(e.kind()) + ": " + e.what();
  }
  res.line = std::move(line);
  return res;
}

}  // namespace

std::string CampaignReport::text() const {
  std::string out;
  for (const auto& s : samples) out += s.line + "\n";
  out += "summary samples=" + str(samples.size()) + " pass=" + str(passed) + " fail=" + str(failed) +
         " vacuous=" + str(vacuous) + " errors=" + str(errors) + " size_mismatches=" + str(size_mismatches) +
         " max_size=" + str(max_size) + "\n";
  return out;
}

CampaignReport run_campaign(const CampaignOptions& opts) {
  CampaignReport rep;
  rep.samples.resize(opts.samples);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < opts.samples;) rep.samples[i] = run_sample(opts, i);
  };
  std::size_t jobs = std::clamp<std::size_t>(opts.jobs, 1, std::max<std::size_t>(opts.samples, 1));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& s : rep.samples) {
    if (s.error) ++rep.errors;
    else if (s.vacuous) ++rep.vacuous;
    else if (s.pass) ++rep.passed;
    else ++rep.failed;
    if (!s.size_matches) ++rep.size_mismatches;
    rep.max_size = std::max(rep.max_size, s.size);
  }
  return rep;
}

}  // namespace pit
