#include "stratbound/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "stratbound/errors.hpp"
#include "stratbound/knowledge.hpp"

namespace stratbound {

const char* to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::closed_loop: return "closed_loop";
    case SamplerKind::all_paths: return "all_paths";
    case SamplerKind::random_paths: return "random_paths";
  }
  return "?";
}

std::optional<SamplerKind> parse_sampler_kind(std::string_view s) {
  if (s == "closed_loop" || s == "closed-loop") return SamplerKind::closed_loop;
  if (s == "all_paths" || s == "all-paths") return SamplerKind::all_paths;
  if (s == "random_paths" || s == "random-paths" || s == "random") return SamplerKind::random_paths;
  return std::nullopt;
}

namespace {

// Successor states of the last state of `path`, first-seen order. Empty when
// a strategy fails.
std::vector<StateId> next_states(const Model& m, const std::vector<ComputationalStrategy>* strategies,
                                 const std::vector<std::vector<StateId>>& canonical, const std::vector<StateId>& path,
                                 std::uint64_t budget) {
  const StateId q = path.back();
  std::vector<std::pair<AgentId, ActionId>> fixed;
  if (strategies) {
    for (const auto& s : *strategies) {
      try {
        const auto obs = observe(m, canonical, s.agent(), path);
        fixed.emplace_back(s.agent(), s.decide(obs, budget).action);
      } catch (const std::exception&) {
        return {};
      }
    }
  }
  std::vector<StateId> out;
  for (const auto& t : m.transitions[q]) {
    bool ok = true;
    for (auto [a, act] : fixed) ok = ok && t.joint[a] == act;
    if (ok && std::find(out.begin(), out.end(), t.target) == out.end()) out.push_back(t.target);
  }
  return out;
}

}  // namespace

std::vector<std::vector<StateId>> sample_histories(const Model& m, const std::vector<ComputationalStrategy>& strategies,
                                                   const SamplerConfig& cfg, std::uint64_t budget) {
  require_valid(m);
  const std::size_t depth = cfg.depth ? cfg.depth : default_depth(m);
  std::vector<std::vector<StateId>> out;
  if (cfg.cap == 0) return out;

  if (cfg.kind == SamplerKind::random_paths) {
    std::mt19937_64 rng(cfg.seed);
    std::set<std::vector<StateId>> seen;
    for (std::size_t w = 0; w < cfg.walks && out.size() < cfg.cap; ++w) {
      std::vector<StateId> path{m.initial};
      while (out.size() < cfg.cap) {
        if (seen.insert(path).second) out.push_back(path);
        if (path.size() >= depth || is_absorbing(m, path.back())) break;
        const auto& ts = m.transitions[path.back()];
        std::uniform_int_distribution<std::size_t> pick(0, ts.size() - 1);
        path.push_back(ts[pick(rng)].target);
      }
    }
    return out;
  }

  const auto canonical = canonical_table(m);
  const auto* fixed = cfg.kind == SamplerKind::closed_loop ? &strategies : nullptr;
  // explicit DFS: stack of (path, pending successors)
  struct Frame {
    std::vector<StateId> next;
    std::size_t i = 0;
  };
  std::vector<StateId> path{m.initial};
  std::vector<Frame> stack;
  out.push_back(path);
  auto expand = [&] {
    Frame f;
    if (path.size() < depth && !is_absorbing(m, path.back())) f.next = next_states(m, fixed, canonical, path, budget);
    stack.push_back(std::move(f));
  };
  expand();
  while (!stack.empty() && out.size() < cfg.cap) {
    auto& f = stack.back();
    if (f.i == f.next.size()) {
      stack.pop_back();
      path.pop_back();
      continue;
    }
    path.push_back(f.next[f.i++]);
    out.push_back(path);
    expand();
  }
  return out;
}

ComplexityProfile profile_strategy(const Template& tpl, const GeneralStrategy& gs, std::span<const std::uint32_t> params,
                                   const SamplerConfig& sampler, std::uint64_t budget) {
  ComplexityProfile p;
  p.template_name = tpl.name;
  p.sampler = sampler;
  for (std::uint32_t n : params) {
    const Model m = tpl.instance(n);
    const auto strategies = instantiate(gs, m);
    const auto histories = sample_histories(m, strategies, sampler, budget);
    const auto meas = measure_steps(gs, m, histories, budget);
    ProfileRow row;
    row.param = n;
    row.enc_size = strategies.empty() ? encode_model(m).size() : strategies.front().model_word().size();
    row.abstract_size = abstract_size(m);
    row.max_steps = meas.max_steps;
    row.histories = histories.size();
    row.budget_hits = meas.budget_hits;
    row.errors = meas.errors.size();
    for (const auto& e : meas.errors) {
      if (p.errors.size() < 8) p.errors.push_back("param " + std::to_string(n) + ": " + e);
    }
    p.rows.push_back(row);
  }
  return p;
}

// ---- growth

std::string GrowthBound::to_string() const {
  switch (cls) {
    case GrowthClass::constant: return "constant";
    case GrowthClass::logarithmic: return "logarithmic";
    case GrowthClass::polynomial: return "polynomial(" + std::to_string(degree) + ")";
    case GrowthClass::exponential: return "exponential";
    case GrowthClass::inconclusive: return "inconclusive";
  }
  return "?";
}

bool GrowthBound::contains(const GrowthBound& v) const {
  if (cls == GrowthClass::inconclusive || v.cls == GrowthClass::inconclusive) return false;
  if (cls == GrowthClass::polynomial && v.cls == GrowthClass::polynomial) return v.degree <= degree;
  return static_cast<int>(v.cls) <= static_cast<int>(cls);
}

std::optional<GrowthBound> parse_growth_bound(std::string_view s) {
  if (s == "constant" || s == "const") return GrowthBound{GrowthClass::constant, 0};
  if (s == "log" || s == "logarithmic") return GrowthBound{GrowthClass::logarithmic, 0};
  if (s == "linear" || s == "poly" || s == "polynomial") return GrowthBound{GrowthClass::polynomial, 1};
  if (s == "exp" || s == "exponential") return GrowthBound{GrowthClass::exponential, 0};
  for (std::string_view prefix : {"polynomial(", "poly("}) {
    if (s.substr(0, prefix.size()) == prefix && s.size() > prefix.size() + 1 && s.back() == ')') {
      const auto digits = s.substr(prefix.size(), s.size() - prefix.size() - 1);
      if (digits.size() > 3 || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        return std::nullopt;
      }
      const auto d = static_cast<unsigned>(std::stoul(std::string(digits)));
      if (d == 0) return GrowthBound{GrowthClass::constant, 0};
      return GrowthBound{GrowthClass::polynomial, d};
    }
  }
  return std::nullopt;
}

namespace {

struct Fit {
  double slope = 0, intercept = 0, r2 = 0;
  bool ok = false;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Fit f;
  if (sxx <= 0) return f;
  f.ok = true;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    sse += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : (sse == 0 ? 1.0 : 0.0);
  return f;
}

}  // namespace

GrowthVerdict classify_growth(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("growth fit needs as many x as y values");
  if (x.size() < kMinGrowthPoints) {
    throw InputError("growth fit needs at least " + std::to_string(kMinGrowthPoints) + " points, got " +
                     std::to_string(x.size()));
  }
  for (double v : x) {
    if (!(v > 0)) throw InputError("growth fit needs positive x values");
  }
  GrowthVerdict v;
  v.points = x.size();
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double spread = *hi > 0 ? (*hi - *lo) / *hi : 0.0;
  if (spread <= kConstantSpread) {
    v.bound = {GrowthClass::constant, 0};
    v.r2 = 1.0 - spread;
    double mean = 0;
    for (double t : y) mean += t;
    v.intercept = mean / static_cast<double>(y.size());
    return v;
  }
  std::vector<double> lx, ly, xs(x.begin(), x.end()), ys(y.begin(), y.end());
  for (double t : x) lx.push_back(std::log(t));
  for (double t : y) ly.push_back(std::log(std::max(t, 1.0)));

  struct Candidate {
    GrowthClass cls;
    Fit fit;
  };
  const Candidate candidates[] = {
      {GrowthClass::logarithmic, least_squares(lx, ys)},
      {GrowthClass::polynomial, least_squares(lx, ly)},
      {GrowthClass::exponential, least_squares(xs, ly)},
  };
  double best = 0;
  for (const auto& c : candidates) {
    if (!c.fit.ok || c.fit.slope <= 0) continue;
    best = std::max(best, c.fit.r2);
    if (c.fit.r2 >= kFitThreshold) {
      v.bound.cls = c.cls;
      v.bound.degree =
          c.cls == GrowthClass::polynomial ? static_cast<unsigned>(std::max(1L, std::lround(c.fit.slope))) : 0;
      v.r2 = c.fit.r2;
      v.slope = c.fit.slope;
      v.intercept = c.fit.intercept;
      return v;
    }
  }
  v.r2 = best;
  return v;
}

const char* to_string(ProfileAxis a) {
  switch (a) {
    case ProfileAxis::param: return "param";
    case ProfileAxis::enc_size: return "enc_size";
    case ProfileAxis::abstract_size: return "abstract_size";
  }
  return "?";
}

GrowthVerdict classify_growth(const ComplexityProfile& p, ProfileAxis axis) {
  std::vector<double> x, y;
  for (const auto& r : p.rows) {
    switch (axis) {
      case ProfileAxis::param: x.push_back(r.param); break;
      case ProfileAxis::enc_size: x.push_back(static_cast<double>(r.enc_size)); break;
      case ProfileAxis::abstract_size: x.push_back(static_cast<double>(r.abstract_size)); break;
    }
    y.push_back(static_cast<double>(r.max_steps));
  }
  return classify_growth(x, y);
}

// ---- ability

std::vector<Instance> instances_of(const Template& tpl, std::span<const std::uint32_t> params) {
  std::vector<Instance> out;
  for (auto n : params) out.push_back({n, tpl.name + "(" + std::to_string(n) + ")", tpl.instance(n)});
  return out;
}

double PointwiseBound::at(const GrowthBound& g, double x) const {
  double base = 1;
  switch (g.cls) {
    case GrowthClass::constant: base = 1; break;
    case GrowthClass::logarithmic: base = std::log2(x + 1); break;
    case GrowthClass::polynomial: base = std::pow(x, g.degree); break;
    case GrowthClass::exponential: base = std::exp2(std::min(x, 1000.0)); break;
    case GrowthClass::inconclusive: base = 0; break;
  }
  return coefficient * base + offset;
}

const char* to_string(AbilityMode m) { return m == AbilityMode::uniform ? "uniform" : "adaptive"; }

const char* to_string(AbilityVerdict v) {
  switch (v) {
    case AbilityVerdict::supported: return "supported";
    case AbilityVerdict::refuted: return "refuted";
    case AbilityVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

InstanceResult check_instance(const Instance& inst, const GeneralStrategy& gs, const Formula& f, AbilityMode mode,
                              const AbilityOptions& opt) {
  InstanceResult r;
  r.param = inst.param;
  r.label = inst.label;
  const Model& m = inst.model;
  const auto strategies = instantiate(gs, m);
  r.size = mode == AbilityMode::uniform
               ? (strategies.empty() ? encode_model(m).size() : strategies.front().model_word().size())
               : abstract_size(m);
  const std::size_t depth = opt.depth ? opt.depth : default_depth(m);
  r.enforcement = enforce_bounded(m, gs.coalition(), strategies, f, depth, opt.budget);
  const auto histories = sample_histories(m, strategies, opt.sampler, opt.budget);
  const auto meas = measure_steps(gs, m, histories, opt.budget);
  r.max_steps = meas.max_steps;
  r.histories = histories.size();
  r.budget_hits = meas.budget_hits;
  if (!meas.errors.empty()) r.error = meas.errors.front();
  return r;
}

void conclude(AbilityReport& rep, const AbilityOptions& opt) {
  // refutations first: they are exact
  for (std::size_t i = 0; i < rep.instances.size(); ++i) {
    const auto& in = rep.instances[i];
    if (in.enforcement && in.enforcement->verdict == Enforcement::violated) {
      rep.verdict = AbilityVerdict::refuted;
      rep.witness = i;
      rep.reason = "objective violated on " + in.label;
      return;
    }
  }
  if (opt.pointwise) {
    for (std::size_t i = 0; i < rep.instances.size(); ++i) {
      auto& in = rep.instances[i];
      if (!in.error.empty() && !in.enforcement) continue;
      in.within_bound = static_cast<double>(in.max_steps) <= opt.pointwise->at(rep.bound, static_cast<double>(in.size));
      if (!*in.within_bound) {
        rep.verdict = AbilityVerdict::refuted;
        rep.witness = i;
        rep.reason = "step bound exceeded on " + in.label + ": " + std::to_string(in.max_steps) + " steps at size " +
                     std::to_string(in.size);
        return;
      }
    }
  }
  rep.verdict = AbilityVerdict::inconclusive;
  for (const auto& in : rep.instances) {
    if (!in.error.empty()) {
      rep.reason = "failure on " + in.label + ": " + in.error;
      return;
    }
    if (!in.enforcement || in.enforcement->verdict != Enforcement::enforced) {
      rep.reason = "enforcement inconclusive on " + in.label;
      return;
    }
    if (in.budget_hits) {
      rep.reason = "step budget exhausted on " + in.label;
      return;
    }
  }
  if (rep.instances.size() < kMinGrowthPoints) {
    rep.reason = "enforced everywhere, but a growth verdict needs at least " + std::to_string(kMinGrowthPoints) +
                 " instances";
    return;
  }
  std::vector<double> x, y;
  for (const auto& in : rep.instances) {
    x.push_back(static_cast<double>(in.size));
    y.push_back(static_cast<double>(in.max_steps));
  }
  rep.growth = classify_growth(x, y);
  if (!rep.bound.contains(rep.growth->bound)) {
    rep.reason = "enforced everywhere; step growth " + rep.growth->bound.to_string() + " is not within " +
                 rep.bound.to_string();
    return;
  }
  rep.verdict = AbilityVerdict::supported;
  rep.reason = "enforced on every instance; step growth " + rep.growth->bound.to_string() + " within " +
               rep.bound.to_string();
}

}  // namespace

AbilityReport check_uniform_ability(std::span<const Instance> instances, const GeneralStrategy& gs, const Formula& f,
                                    const GrowthBound& bound, const AbilityOptions& opt) {
  AbilityReport rep;
  rep.mode = AbilityMode::uniform;
  rep.formula = f.to_string();
  rep.bound = bound;
  for (const auto& inst : instances) {
    try {
      rep.instances.push_back(check_instance(inst, gs, f, AbilityMode::uniform, opt));
    } catch (const std::exception& e) {
      InstanceResult r;
      r.param = inst.param;
      r.label = inst.label;
      r.error = e.what();
      rep.instances.push_back(std::move(r));
    }
  }
  conclude(rep, opt);
  return rep;
}

AbilityReport check_adaptive_ability(std::span<const Instance> instances, const StrategyProvider& provider,
                                     const Formula& f, const GrowthBound& bound, const AbilityOptions& opt) {
  AbilityReport rep;
  rep.mode = AbilityMode::adaptive;
  rep.formula = f.to_string();
  rep.bound = bound;
  for (const auto& inst : instances) {
    try {
      const GeneralStrategy gs = provider(inst);
      rep.instances.push_back(check_instance(inst, gs, f, AbilityMode::adaptive, opt));
    } catch (const std::exception& e) {
      InstanceResult r;
      r.param = inst.param;
      r.label = inst.label;
      r.size = abstract_size(inst.model);
      r.error = e.what();
      rep.instances.push_back(std::move(r));
    }
  }
  conclude(rep, opt);
  return rep;
}

StrategyProvider constant_provider(GeneralStrategy gs) {
  return [gs = std::move(gs)](const Instance&) { return gs; };
}

StrategyProvider synthesis_provider(AgentId a, Formula f) {
  return [a, f = std::move(f)](const Instance& inst) {
    const auto s = synthesize(inst.model, a, f);
    if (!s.result.winning) throw InputError("no winning strategy for " + inst.label);
    auto prog = compile_knowledge_strategy(inst.model, s.game, s.result);
    GeneralStrategy gs;
    gs.members.emplace_back(a, std::make_shared<const Machine>(std::move(prog)));
    return gs;
  };
}

}  // namespace stratbound
