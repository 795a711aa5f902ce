#include "pit/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "pit/errors.hpp"

namespace pit {

using nlohmann::json;

namespace {

std::string str(std::uint64_t v) { return std::to_string(v); }

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("x" + str(i + 1));
  return v;
}

// Field access with the JSON path in every error.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& get() const { return j_; }
  const std::string& path() const { return path_; }

  Reader at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) throw ParseError(path_ + ": missing field '" + key + "'");
    return Reader(*it, path_ + "." + key);
  }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "[" + str(i) + "]"); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::uint64_t unsigned_int() const {
    if (!j_.is_number_unsigned()) fail("expected a non-negative integer");
    return j_.get<std::uint64_t>();
  }
  Scalar residue(const Field& f) const {
    if (j_.is_number_unsigned()) return f.reduce(j_.get<std::uint64_t>());
    if (j_.is_number_integer()) return f.from_signed(j_.get<std::int64_t>());
    fail("expected an integer residue");
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(path_ + ": " + msg); }

 private:
  const json& j_;
  std::string path_;
};

struct Names {
  std::vector<std::string> list;
  std::map<std::string, std::size_t> index;

  std::size_t lookup(const Reader& r) const {
    std::string s = r.string();
    auto it = index.find(s);
    if (it == index.end()) r.fail("undeclared variable '" + s + "'");
    return it->second;
  }
};

Names read_names(const Reader& root) {
  Names nm;
  Reader vars = root.at("variables");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::string s = vars.at(i).string();
    if (s.empty()) vars.at(i).fail("empty variable name");
    if (!nm.index.emplace(s, i).second) vars.at(i).fail("variable '" + s + "' declared twice");
    nm.list.push_back(s);
  }
  return nm;
}

std::vector<std::size_t> read_var_list(const Reader& r, const Names& nm) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < r.size(); ++i) out.push_back(nm.lookup(r.at(i)));
  return out;
}

ExponentVector read_exponents(const Reader& r, const Names& nm) {
  ExponentVector e(nm.list.size(), 0);
  if (!r.get().is_object()) r.fail("expected an object of exponents");
  for (const auto& [name, val] : r.get().items()) {
    Reader v(val, r.path() + "." + name);
    std::size_t idx = nm.lookup(Reader(json(name), r.path()));
    std::uint64_t x = v.unsigned_int();
    if (x > 0xffffffffULL) v.fail("exponent too large");
    e[idx] = static_cast<std::uint32_t>(x);
  }
  return e;
}

json write_exponents(const ExponentVector& e, const std::vector<std::string>& names) {
  json o = json::object();
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i]) o[names[i]] = e[i];
  return o;
}

ScalarPoly read_scalar_poly(const Reader& r, const Field& f, const Names& nm) {
  ScalarPoly p(f, nm.list.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    Reader t = r.at(i);
    p.add_term(read_exponents(t.at("exponents"), nm), t.at("coeff").residue(f));
  }
  return p;
}

json write_scalar_poly(const ScalarPoly& p, const std::vector<std::string>& names) {
  json a = json::array();
  for (const auto& [e, c] : p.terms()) a.push_back({{"exponents", write_exponents(e, names)}, {"coeff", c}});
  return a;
}

void check_within(const ExponentVector& e, const std::vector<std::size_t>& block, const std::vector<std::size_t>& params,
                  const Reader& where, const Names& nm) {
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (!e[v]) continue;
    if (std::find(block.begin(), block.end(), v) == block.end() &&
        std::find(params.begin(), params.end(), v) == params.end())
      where.fail("variable '" + nm.list[v] + "' is outside the block");
  }
}

Boundary read_boundary(const Reader& r, const Field& f, const Names& nm, std::size_t w,
                       const std::vector<std::size_t>& params) {
  Boundary b;
  if (r.has("block")) b.block = read_var_list(r.at("block"), nm);
  Reader vec = r.at("vector");
  if (vec.size() != w) vec.fail("length " + str(vec.size()) + " differs from width " + str(w));
  for (std::size_t i = 0; i < w; ++i) {
    b.vec.push_back(read_scalar_poly(vec.at(i), f, nm));
    for (const auto& [e, c] : b.vec.back().terms()) check_within(e, b.block, params, vec.at(i), nm);
  }
  return b;
}

Roabp read_roabp(const Reader& root, const Field& f, const Names& nm) {
  const std::size_t n = nm.list.size();
  std::size_t w = root.at("width").unsigned_int();
  std::vector<std::size_t> params;
  if (root.has("parameters")) params = read_var_list(root.at("parameters"), nm);

  Reader rb = root.at("blocks");
  std::vector<std::vector<std::size_t>> blocks;
  std::map<std::size_t, std::string> owner;
  auto claim = [&](const std::vector<std::size_t>& vars, const std::string& who, const Reader& where) {
    for (auto v : vars) {
      auto [it, fresh] = owner.emplace(v, who);
      if (fresh) continue;
      bool both = it->second.rfind("block ", 0) == 0 && who.rfind("block ", 0) == 0;
      where.fail("blocks not disjoint: " + nm.list[v] + " in " +
                 (both ? "blocks " + it->second.substr(6) + " and " + who.substr(6) : it->second + " and " + who));
    }
  };
  if (root.has("parameters")) claim(params, "parameters", root.at("parameters"));
  Boundary left{}, right{};
  for (std::size_t i = 0; i < rb.size(); ++i) {
    blocks.push_back(read_var_list(rb.at(i), nm));
    claim(blocks.back(), "block " + str(i + 1), rb.at(i));
  }

  Reader rl = root.at("layers");
  if (rl.size() != blocks.size()) rl.fail(str(rl.size()) + " layers for " + str(blocks.size()) + " blocks");
  std::vector<MatPoly> layers;
  for (std::size_t i = 0; i < rl.size(); ++i) {
    MatPoly L(f, n, w);
    Reader terms = rl.at(i);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      Reader term = terms.at(t);
      ExponentVector e = read_exponents(term.at("exponents"), nm);
      check_within(e, blocks[i], params, term.at("exponents"), nm);
      Reader m = term.at("matrix");
      if (m.size() != w) m.fail("expected " + str(w) + " rows");
      Matrix mat(w, w);
      for (std::size_t a = 0; a < w; ++a) {
        Reader row = m.at(a);
        if (row.size() != w) row.fail("expected " + str(w) + " entries");
        for (std::size_t b = 0; b < w; ++b) mat(a, b) = row.at(b).residue(f);
      }
      L.add_term(e, mat);
    }
    layers.push_back(std::move(L));
  }
  left = read_boundary(root.at("left"), f, nm, w, params);
  right = read_boundary(root.at("right"), f, nm, w, params);
  claim(left.block, "left boundary", root.at("left"));
  claim(right.block, "right boundary", root.at("right"));
  return Roabp(f, n, w, std::move(blocks), std::move(layers), std::move(left), std::move(right), std::move(params));
}

Depth3Circuit read_depth3(const Reader& root, const Field& f, const Names& nm) {
  std::vector<Gate> gates;
  Reader rg = root.at("gates");
  for (std::size_t i = 0; i < rg.size(); ++i) {
    Reader g = rg.at(i);
    Gate gate;
    gate.scale = g.at("scale").residue(f);
    Reader forms = g.at("forms");
    for (std::size_t j = 0; j < forms.size(); ++j) {
      Reader fm = forms.at(j);
      LinearForm l;
      l.constant = fm.has("const") ? fm.at("const").residue(f) : 0;
      if (fm.has("coeffs")) {
        Reader co = fm.at("coeffs");
        if (!co.get().is_object()) co.fail("expected an object of coefficients");
        for (const auto& [name, val] : co.get().items()) {
          std::size_t v = nm.lookup(Reader(json(name), co.path()));
          Scalar a = Reader(val, co.path() + "." + name).residue(f);
          if (a) l.coeffs[v] = a;
        }
      }
      gate.forms.push_back(std::move(l));
    }
    gates.push_back(std::move(gate));
  }
  return Depth3Circuit(f, nm.list.size(), std::move(gates));
}

}  // namespace

CircuitFile parse_circuit(const std::string& text, std::optional<std::uint64_t> modulus) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1 + static_cast<std::size_t>(
                               std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(
                                                                           std::min(e.byte, text.size())),
                                          '\n'));
    throw ParseError("line " + str(line) + ": " + e.what());
  }
  Reader root(j, "$");
  std::string fmt = root.at("format").string();
  if (fmt != kCircuitFormat) root.at("format").fail("unsupported format '" + fmt + "'");
  std::uint64_t p = modulus ? *modulus : root.at("modulus").unsigned_int();
  Field f(p);
  Names nm = read_names(root);
  std::string kind = root.at("kind").string();
  if (kind == "roabp") return {read_roabp(root, f, nm), nm.list};
  if (kind == "depth3") return {read_depth3(root, f, nm), nm.list};
  root.at("kind").fail("unknown kind '" + kind + "'");
}

CircuitFile load_circuit(const std::string& path, std::optional<std::uint64_t> modulus) {
  try {
    return parse_circuit(read_file(path), modulus);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string dump_circuit(const Instance& inst, const std::vector<std::string>& given) {
  std::size_t n = instance_n(inst);
  std::vector<std::string> names = given.empty() ? default_names(n) : given;
  if (names.size() != n) throw StructuralError("name list has " + str(names.size()) + " entries for n = " + str(n));
  auto var_list = [&](const std::vector<std::size_t>& vs) {
    json a = json::array();
    for (auto v : vs) a.push_back(names[v]);
    return a;
  };
  json j;
  j["format"] = kCircuitFormat;
  j["modulus"] = instance_field(inst).modulus();
  j["variables"] = names;
  if (const auto* r = std::get_if<Roabp>(&inst)) {
    j["kind"] = "roabp";
    j["width"] = r->width();
    if (!r->params().empty()) j["parameters"] = var_list(r->params());
    json blocks = json::array(), layers = json::array();
    for (std::size_t i = 0; i < r->depth(); ++i) {
      blocks.push_back(var_list(r->blocks()[i]));
      json terms = json::array();
      for (const auto& [e, m] : r->layers()[i].terms()) {
        json rows = json::array();
        for (std::size_t a = 0; a < m.rows; ++a) {
          json row = json::array();
          for (std::size_t b = 0; b < m.cols; ++b) row.push_back(m(a, b));
          rows.push_back(row);
        }
        terms.push_back({{"exponents", write_exponents(e, names)}, {"matrix", rows}});
      }
      layers.push_back(terms);
    }
    j["blocks"] = blocks;
    j["layers"] = layers;
    auto boundary = [&](const Boundary& b) {
      json vec = json::array();
      for (const auto& q : b.vec) vec.push_back(write_scalar_poly(q, names));
      return json{{"block", var_list(b.block)}, {"vector", vec}};
    };
    j["left"] = boundary(r->left());
    j["right"] = boundary(r->right());
  } else {
    const auto& c = std::get<Depth3Circuit>(inst);
    j["kind"] = "depth3";
    json gates = json::array();
    for (const auto& g : c.gates()) {
      json forms = json::array();
      for (const auto& l : g.forms) {
        json co = json::object();
        for (const auto& [v, a] : l.coeffs) co[names[v]] = a;
        forms.push_back({{"const", l.constant}, {"coeffs", co}});
      }
      gates.push_back({{"scale", g.scale}, {"forms", forms}});
    }
    j["gates"] = gates;
  }
  return j.dump(1) + "\n";
}

void save_circuit(const Instance& inst, const std::string& path, const std::vector<std::string>& names) {
  write_file(path, dump_circuit(inst, names));
}

void write_points(const PointSet& points, std::ostream& out) {
  const auto& prov = points.provenance();
  out << "# generator: " << (prov.generator.empty() ? "explicit" : prov.generator) << "\n";
  out << "# n: " << points.n() << "\n";
  out << "# size: " << points.size() << "\n";
  for (const auto& [k, v] : prov.params)
    if (k != "n" && k != "size" && k != "generator") out << "# " << k << ": " << v << "\n";
  std::vector<Scalar> pt(points.n());
  std::string line;
  for (std::uint64_t i = 0; i < points.size(); ++i) {
    points.at(i, pt);
    line.clear();
    for (std::size_t k = 0; k < pt.size(); ++k) {
      if (k) line += ',';
      line += str(pt[k]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw CapabilityError("write failed");
}

void save_points(const PointSet& points, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CapabilityError("cannot open " + path + " for writing");
  write_points(points, out);
}

PointSet read_points(std::istream& in) {
  Provenance prov;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> size;
  std::vector<std::vector<Scalar>> pts;
  std::string line;
  std::size_t lineno = 0;
  auto number = [&](const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw ParseError("line " + str(lineno) + ": bad number '" + s + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw ParseError("line " + str(lineno) + ": header without ':'");
      std::string key = line.substr(1, colon - 1), val = line.substr(colon + 1);
      auto trim = [](std::string& s) {
        s.erase(0, s.find_first_not_of(' '));
        s.erase(s.find_last_not_of(' ') + 1);
      };
      trim(key);
      trim(val);
      if (key == "generator") prov.generator = val;
      else if (key == "n") n = number(val);
      else if (key == "size") size = number(val);
      else prov.params.emplace_back(key, val);
      continue;
    }
    std::vector<Scalar> pt;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) pt.push_back(number(cell));
    if (n && pt.size() != *n)
      throw ParseError("line " + str(lineno) + ": " + str(pt.size()) + " coordinates, header says " + str(*n));
    if (!n) n = pt.size();
    pts.push_back(std::move(pt));
  }
  if (!n) throw ParseError("point file has neither an n header nor any points");
  if (size && *size != pts.size())
    throw ParseError("header size " + str(*size) + " but " + str(pts.size()) + " points");
  prov.params.insert(prov.params.begin(), {"size", str(pts.size())});
  PointSet ps(*n, std::move(prov));
  for (auto& p : pts) ps.push_back(std::move(p));
  return ps;
}

PointSet load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return read_points(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CapabilityError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw CapabilityError("write to " + path + " failed");
}

}  // namespace pit
