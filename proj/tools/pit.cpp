// Command-line front end. Exit codes: 0 success, 1 verdict failure or internal
// error, 2 usage/parse/structural/precondition, 3 capability (ceiling, modulus).
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pit/concentrate.hpp"
#include "pit/depth3.hpp"
#include "pit/errors.hpp"
#include "pit/io.hpp"
#include "pit/isolate.hpp"
#include "pit/verify.hpp"

namespace {

using namespace pit;

struct Globals {
  std::optional<std::uint64_t> modulus;
  std::uint64_t ceiling = kDefaultCeiling;
  std::size_t jobs = 1;
};

Mode parse_mode(const std::string& m) {
  if (m == "whitebox") return Mode::Whitebox;
  if (m == "blackbox") return Mode::Blackbox;
  throw ParseError("unknown mode '" + m + "'");
}

const Roabp& need_roabp(const CircuitFile& cf) {
  if (const auto* r = std::get_if<Roabp>(&cf.instance)) return *r;
  throw StructuralError("this command needs a roabp circuit file");
}

const Depth3Circuit& need_depth3(const CircuitFile& cf) {
  if (const auto* c = std::get_if<Depth3Circuit>(&cf.instance)) return *c;
  throw StructuralError("this command needs a depth3 circuit file");
}

std::string point_text(const std::vector<Scalar>& pt, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < pt.size(); ++i) s += (i ? " " : "") + names[i] + "=" + std::to_string(pt[i]);
  return s;
}

std::string term_text(const ExponentVector& e, Scalar c, const std::vector<std::string>& names) {
  std::string s = std::to_string(c);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    s += " " + names[i];
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

std::vector<Partition> gate_partitions(const Depth3Circuit& c) {
  std::vector<Partition> ps;
  for (const auto& g : c.gates()) ps.push_back(gate_partition(g, c.n()));
  return ps;
}

int run(int argc, char** argv) {
  CLI::App app{"Deterministic identity tests and hitting sets over prime fields"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--modulus", g.modulus, "Override the circuit file's prime modulus");
    sub->add_option("--ceiling", g.ceiling, "Term ceiling for expansion oracles");
    sub->add_option("--jobs", g.jobs, "Worker threads for campaigns")->check(CLI::PositiveNumber);
  };

  std::string input, output, points_path, mode_name = "whitebox";

  auto* hs = app.add_subcommand("hs", "Emit a hitting set for the circuit in --input");
  std::string hs_kind;
  hs->add_option("kind", hs_kind, "roabp | invertible | width2")->required()->check(
      CLI::IsMember({"roabp", "invertible", "width2"}));
  hs->add_option("--input", input)->required();
  hs->add_option("--mode", mode_name)->check(CLI::IsMember({"whitebox", "blackbox"}));
  hs->add_option("--out", output, "Point file (default: stdout)");
  add_globals(hs);

  auto* test = app.add_subcommand("test", "Evaluate the circuit on a point file and report a witness");
  test->add_option("--input", input)->required();
  test->add_option("--points", points_path)->required();
  add_globals(test);

  auto* wb = app.add_subcommand("whitebox", "Whitebox identity tests");
  std::string wb_kind;
  wb->add_option("kind", wb_kind, "sum-sml")->required()->check(CLI::IsMember({"sum-sml"}));
  wb->add_option("--input", input)->required();
  add_globals(wb);

  auto* dist = app.add_subcommand("distance", "Best gate order and distance of a depth3 circuit");
  dist->add_option("--input", input)->required();
  add_globals(dist);

  auto* dec = app.add_subcommand("decompose", "Base-set decomposition of the gate partitions");
  dec->add_option("--input", input)->required();
  dec->add_option("--out", output, "JSON output (default: stdout)");
  add_globals(dec);

  auto* exp = app.add_subcommand("expand", "Print the expanded polynomial, one term per line");
  exp->add_option("--input", input)->required();
  add_globals(exp);

  auto* ver = app.add_subcommand("verify", "Seeded hitting-property campaign");
  std::string cls_name;
  std::size_t samples = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> params;
  std::string summary_path;
  ver->add_option("--class", cls_name, "roabp | invertible-roabp | width2-roabp | depth3-distance | sum-sml")
      ->required();
  ver->add_option("--samples", samples);
  ver->add_option("--seed", seed);
  ver->add_option("--params", params, "name=value bounds, e.g. n=5,d=4,w=2")->delimiter(',');
  ver->add_option("--mode", mode_name)->check(CLI::IsMember({"whitebox", "blackbox"}));
  ver->add_option("--summary", summary_path, "Write a JSON summary here");
  add_globals(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*hs) {
    auto cf = load_circuit(input, g.modulus);
    const Roabp& r = need_roabp(cf);
    Mode mode = parse_mode(mode_name);
    PointSet ps = hs_kind == "roabp" ? roabp_hitting_set(r, mode)
                  : hs_kind == "invertible" ? invertible_hitting_set(r, mode)
                                            : width2_hitting_set(r, mode);
    if (output.empty()) {
      write_points(ps, std::cout);
    } else {
      save_points(ps, output);
      std::printf("%s: %llu points\n", output.c_str(), static_cast<unsigned long long>(ps.size()));
    }
    return 0;
  }
  if (*test) {
    auto cf = load_circuit(input, g.modulus);
    PointSet ps = load_points(points_path);
    auto rep = verify_hitting_property(cf.instance, ps, g.ceiling);
    if (rep.zero) {
      std::printf("zero polynomial: vacuous pass over %llu points\n", static_cast<unsigned long long>(rep.size));
      return 0;
    }
    if (rep.witness) {
      std::printf("witness %llu of %llu: %s\n", static_cast<unsigned long long>(*rep.witness),
                  static_cast<unsigned long long>(rep.size), point_text(ps.at(*rep.witness), cf.names).c_str());
      return 0;
    }
    std::printf("no witness among %llu points\n", static_cast<unsigned long long>(rep.size));
    return 1;
  }
  if (*wb) {
    auto cf = load_circuit(input, g.modulus);
    SumSmlOptions so;
    so.ceiling = g.ceiling;
    auto res = sum_sml_whitebox_test(need_depth3(cf), so);
    std::printf("verdict: %s\n", res.nonzero ? "nonzero" : "zero");
    std::printf("base sets: %zu\n", res.decomposition.sets.size());
    std::printf("sweep: %llu evaluations of %llu\n", static_cast<unsigned long long>(res.evaluations),
                static_cast<unsigned long long>(res.sweep_size));
    if (res.witness) std::printf("witness: %s\n", point_text(*res.witness, cf.names).c_str());
    return 0;
  }
  if (*dist) {
    auto cf = load_circuit(input, g.modulus);
    auto order = best_gate_order(need_depth3(cf));
    std::string o;
    for (auto i : order.order) o += (o.empty() ? "" : " ") + std::to_string(i + 1);
    std::printf("distance: %zu\norder: %s\n", order.distance, o.c_str());
    return 0;
  }
  if (*dec) {
    auto cf = load_circuit(input, g.modulus);
    auto d = decompose_base_sets(gate_partitions(need_depth3(cf)));
    nlohmann::json j;
    j["epsilon"] = d.epsilon;
    j["cap"] = d.cap;
    j["partitions"] = nlohmann::json::array();
    for (const auto& p : d.partitions) {
      nlohmann::json cols = nlohmann::json::array();
      for (const auto& c : p.colors) {
        nlohmann::json names = nlohmann::json::array();
        for (auto v : c) names.push_back(cf.names[v]);
        cols.push_back(names);
      }
      j["partitions"].push_back(cols);
    }
    j["base_sets"] = nlohmann::json::array();
    for (const auto& b : d.sets) {
      nlohmann::json vars = nlohmann::json::array();
      for (auto v : b.variables) vars.push_back(cf.names[v]);
      j["base_sets"].push_back({{"variables", vars}, {"order", b.order}, {"distance", b.distance}});
    }
    std::string text = j.dump(1) + "\n";
    if (output.empty()) std::cout << text;
    else write_file(output, text);
    return 0;
  }
  if (*exp) {
    auto cf = load_circuit(input, g.modulus);
    ScalarPoly p = expand_instance(cf.instance, g.ceiling);
    std::printf("terms: %zu\n", p.sparsity());
    for (const auto& [e, c] : p.terms()) std::printf("%s\n", term_text(e, c, cf.names).c_str());
    return 0;
  }
  if (*ver) {
    CampaignOptions o;
    o.cls = parse_instance_class(cls_name);
    for (const auto& a : params) set_param(o.params, a);
    o.samples = samples;
    o.seed = seed;
    o.modulus = g.modulus ? *g.modulus : (o.cls == InstanceClass::Width2Roabp ? 2305843009213693951ULL : 10007);
    o.mode = parse_mode(mode_name);
    o.ceiling = g.ceiling;
    o.jobs = g.jobs;
    auto rep = run_campaign(o);
    std::cout << "campaign class=" << to_string(o.cls) << " modulus=" << o.modulus << " seed=" << seed
              << " mode=" << mode_name << " " << describe(o.params) << "\n"
              << rep.text();
    if (!summary_path.empty()) {
      nlohmann::json j{{"class", to_string(o.cls)}, {"modulus", o.modulus},    {"seed", seed},
                       {"samples", samples},        {"passed", rep.passed},    {"failed", rep.failed},
                       {"vacuous", rep.vacuous},    {"errors", rep.errors},    {"size_mismatches", rep.size_mismatches},
                       {"max_size", rep.max_size},  {"params", describe(o.params)}, {"ok", rep.ok()}};
      write_file(summary_path, j.dump(1) + "\n");
    }
    return rep.ok() ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pit::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", pit::kind_name(e.kind()), e.what());
    switch (e.kind()) {
      case pit::ErrorKind::Capability: return 3;
      case pit::ErrorKind::Internal: return 1;
      default: return 2;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
