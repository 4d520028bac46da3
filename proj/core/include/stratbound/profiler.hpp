#pragma once

// Step-count profiles of strategies over model families, growth-class
// fitting, and bounded checks of uniform and adaptive ability.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratbound/ltl.hpp"
#include "stratbound/machine.hpp"
#include "stratbound/outcome.hpp"
#include "stratbound/templates.hpp"

namespace stratbound {

// ---- history samplers

enum class SamplerKind : std::uint8_t {
  closed_loop,  // coalition actions from the strategies, every adversary choice
  all_paths,    // every joint action of every agent
  random_paths  // seeded random walks over all joint actions
};
const char* to_string(SamplerKind k);
std::optional<SamplerKind> parse_sampler_kind(std::string_view s);

struct SamplerConfig {
  SamplerKind kind = SamplerKind::closed_loop;
  /// Histories per instance (distinct state prefixes, depth-first order).
  std::size_t cap = 10'000;
  /// States per path; 0 means default_depth(m). Absorbing states end a path.
  std::size_t depth = 0;
  std::uint64_t seed = 1;
  /// Number of walks for random_paths.
  std::size_t walks = 64;
};

/// Nonempty state histories from the initial state, in depth-first order
/// (lexicographic in the joint action order) without duplicates. For the
/// closed loop, branches where a strategy fails are cut at the failing node.
std::vector<std::vector<StateId>> sample_histories(const Model& m, const std::vector<ComputationalStrategy>& strategies,
                                                   const SamplerConfig& cfg, std::uint64_t budget);

// ---- profiles

struct ProfileRow {
  std::uint32_t param = 0;
  std::size_t enc_size = 0;
  std::size_t abstract_size = 0;
  std::uint64_t max_steps = 0;
  std::size_t histories = 0;
  std::size_t budget_hits = 0;
  std::size_t errors = 0;
};

struct ComplexityProfile {
  std::string template_name;
  SamplerConfig sampler;
  std::vector<ProfileRow> rows;
  /// First few run errors over all rows.
  std::vector<std::string> errors;
};

ComplexityProfile profile_strategy(const Template& tpl, const GeneralStrategy& gs, std::span<const std::uint32_t> params,
                                   const SamplerConfig& sampler, std::uint64_t budget);

// ---- growth classes

enum class GrowthClass : std::uint8_t { constant, logarithmic, polynomial, exponential, inconclusive };

struct GrowthBound {
  GrowthClass cls = GrowthClass::polynomial;
  /// Degree for polynomial.
  unsigned degree = 1;

  std::string to_string() const;
  /// True when every function of class `v` is eventually below some function
  /// of this class.
  bool contains(const GrowthBound& v) const;
};

/// "constant", "log", "logarithmic", "linear", "poly", "polynomial(d)",
/// "poly(d)", "exp", "exponential".
std::optional<GrowthBound> parse_growth_bound(std::string_view s);

struct GrowthVerdict {
  GrowthBound bound{GrowthClass::inconclusive, 0};
  /// Coefficient of determination of the winning fit (best fit when inconclusive);
  /// for constant, 1 - relative spread.
  double r2 = 0;
  /// Fitted slope / intercept of the winning model in its transformed space.
  double slope = 0;
  double intercept = 0;
  std::size_t points = 0;
};

inline constexpr double kFitThreshold = 0.98;
inline constexpr double kConstantSpread = 0.10;
inline constexpr std::size_t kMinGrowthPoints = 6;

/// Tries constant, logarithmic, polynomial and exponential in that order;
/// the first reaching R^2 >= kFitThreshold wins. x must be positive.
/// Throws InputError with fewer than kMinGrowthPoints points.
GrowthVerdict classify_growth(std::span<const double> x, std::span<const double> y);

enum class ProfileAxis : std::uint8_t { param, enc_size, abstract_size };
const char* to_string(ProfileAxis a);
GrowthVerdict classify_growth(const ComplexityProfile& p, ProfileAxis axis = ProfileAxis::param);

// ---- ability

struct Instance {
  std::uint32_t param = 0;
  std::string label;
  Model model;
};

std::vector<Instance> instances_of(const Template& tpl, std::span<const std::uint32_t> params);

/// Optional explicit bound f(x) = coefficient * g(x) + offset, checked pointwise.
struct PointwiseBound {
  double coefficient = 1;
  double offset = 0;

  double at(const GrowthBound& g, double x) const;
};

struct AbilityOptions {
  /// 0 means default_depth of each instance.
  std::size_t depth = 0;
  std::uint64_t budget = kDefaultBudget;
  SamplerConfig sampler;
  std::optional<PointwiseBound> pointwise;
};

enum class AbilityMode : std::uint8_t { uniform, adaptive };
enum class AbilityVerdict : std::uint8_t { supported, refuted, inconclusive };
const char* to_string(AbilityMode m);
const char* to_string(AbilityVerdict v);

struct InstanceResult {
  std::uint32_t param = 0;
  std::string label;
  /// Which size the complexity is measured against: |enc(M)| or |M|.
  std::size_t size = 0;
  std::optional<EnforcementReport> enforcement;
  std::uint64_t max_steps = 0;
  std::size_t histories = 0;
  std::size_t budget_hits = 0;
  /// steps <= f(size), when a pointwise bound is given.
  std::optional<bool> within_bound;
  /// Strategy provider or machine failure on this instance.
  std::string error;
};

inline constexpr const char* kBoundedEvidence =
    "bounded evidence: enforcement checked to a finite depth and complexity fitted on sampled histories; "
    "not a proof of ability";

struct AbilityReport {
  AbilityMode mode = AbilityMode::uniform;
  std::string formula;
  GrowthBound bound;
  std::vector<InstanceResult> instances;
  std::optional<GrowthVerdict> growth;
  AbilityVerdict verdict = AbilityVerdict::inconclusive;
  /// Why the verdict was reached; for refuted, names the witness instance.
  std::string reason;
  /// Index into instances of the refuting witness.
  std::optional<std::size_t> witness;
  std::string caveat = kBoundedEvidence;
};

/// One general strategy for every instance; complexity against |enc(M)|.
AbilityReport check_uniform_ability(std::span<const Instance> instances, const GeneralStrategy& gs, const Formula& f,
                                    const GrowthBound& bound, const AbilityOptions& opt);

/// Per-instance strategy; throws from the provider are recorded on the instance.
using StrategyProvider = std::function<GeneralStrategy(const Instance&)>;

/// Complexity against the abstract size |M|.
AbilityReport check_adaptive_ability(std::span<const Instance> instances, const StrategyProvider& provider,
                                     const Formula& f, const GrowthBound& bound, const AbilityOptions& opt);

/// Provider returning gs everywhere.
StrategyProvider constant_provider(GeneralStrategy gs);
/// Provider running knowledge-game synthesis of f for agent `a` and compiling the result.
StrategyProvider synthesis_provider(AgentId a, Formula f);

}  // namespace stratbound
