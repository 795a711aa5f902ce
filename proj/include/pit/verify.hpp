#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pit/concentrate.hpp"
#include "pit/depth3.hpp"
#include "pit/isolate.hpp"
#include "pit/roabp.hpp"

namespace pit {

enum class InstanceClass { Roabp, InvertibleRoabp, Width2Roabp, Depth3Distance, SumSml };

std::string to_string(InstanceClass c);
InstanceClass parse_instance_class(const std::string& s);

enum class Target { Nonzero, Zero, Any };

// Upper bounds on the drawn shape. Width is exact for the invertible class and
// 2 for the width-2 class; everything else is drawn below its bound.
struct InstanceParams {
  std::size_t n = 4;
  std::size_t d = 2;
  std::size_t w = 2;
  std::uint32_t delta = 2;
  std::size_t s = 2;
  std::size_t mu = kUnboundedSupport;
  std::size_t k = 2;  // gates (depth3) or gates per partition (sum-sml)
  std::size_t c = 2;  // distinct partitions (sum-sml)
  std::size_t singular = 0;       // forced-singular layers (width-2)
  bool boundary_blocks = false;   // boundary vectors get their own variable blocks
  bool invertible_constant = false;  // every layer has an invertible constant term
  Target target = Target::Nonzero;
};

// Sets a field from "name=value"; throws ParseError on unknown names or bad values.
void set_param(InstanceParams& p, const std::string& assignment);
std::string describe(const InstanceParams& p);

struct InstanceSpec {
  InstanceClass cls = InstanceClass::Roabp;
  InstanceParams params;
  std::uint64_t seed = 0;
  std::uint64_t modulus = 10007;
};

using Instance = std::variant<Roabp, Depth3Circuit>;

Instance generate_instance(const InstanceSpec& spec);

std::size_t instance_n(const Instance& inst);
const Field& instance_field(const Instance& inst);
Scalar evaluate_instance(const Instance& inst, const std::vector<Scalar>& point);
ScalarPoly expand_instance(const Instance& inst, std::uint64_t ceiling = kDefaultCeiling);
bool oracle_is_zero(const Instance& inst, std::uint64_t ceiling = kDefaultCeiling);

struct HittingReport {
  bool zero = false;  // vacuous pass
  bool pass = false;
  std::optional<std::uint64_t> witness;
  std::uint64_t size = 0;
  std::optional<std::uint64_t> formula;  // size predicted by the generator's count formula

  bool size_matches() const { return !formula || *formula == size; }
};

HittingReport verify_hitting_property(const Instance& inst, const PointSet& points,
                                      std::uint64_t ceiling = kDefaultCeiling);

// Count formula recomputed from the recorded provenance, if the generator is known.
std::optional<std::uint64_t> formula_size(const PointSet& points);

struct CampaignOptions {
  InstanceClass cls = InstanceClass::Roabp;
  InstanceParams params;
  std::size_t samples = 10;
  std::uint64_t seed = 0;
  std::uint64_t modulus = 10007;
  Mode mode = Mode::Whitebox;
  std::uint64_t ceiling = kDefaultCeiling;
  std::size_t jobs = 1;
};

struct SampleResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool pass = false;
  bool vacuous = false;
  bool error = false;
  std::uint64_t size = 0;
  bool size_matches = true;
  std::string line;
};

struct CampaignReport {
  std::vector<SampleResult> samples;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t vacuous = 0;
  std::size_t errors = 0;
  std::size_t size_mismatches = 0;
  std::uint64_t max_size = 0;

  bool ok() const { return failed == 0 && errors == 0 && size_mismatches == 0; }
  std::string text() const;  // one line per sample, then a summary line
};

// Sample i uses derive_seed(seed, i). Lines come out in sample order for any job count.
CampaignReport run_campaign(const CampaignOptions& opts);

}  // namespace pit
