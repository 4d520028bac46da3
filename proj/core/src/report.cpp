#include "stratbound/report.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#ifndef STRATBOUND_VERSION
#define STRATBOUND_VERSION "unknown"
#endif

namespace stratbound {

using nlohmann::ordered_json;

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "text") return ReportFormat::text;
  return std::nullopt;
}

std::string spec_hash(std::string_view spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : spec) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

const char* tool_version() { return STRATBOUND_VERSION; }

std::string format_path(const Model& m, std::span<const StateId> path) {
  std::string out;
  for (StateId q : path) {
    if (!out.empty()) out += ' ';
    out += q < m.states.size() ? m.states[q] : "#" + std::to_string(q);
  }
  return out;
}

std::string format_lasso(const Model& m, const LassoPath& l) {
  std::string out = format_path(m, l.stem);
  if (!out.empty()) out += ' ';
  return out + "(" + format_path(m, l.loop) + ")^w";
}

namespace {

ordered_json header(const ReportMeta& meta) {
  ordered_json j;
  j["tool"] = "stratbound";
  j["version"] = tool_version();
  j["command"] = meta.command;
  j["seed"] = meta.seed;
  j["spec_hash"] = spec_hash(meta.spec);
  if (meta.timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    j["timestamp"] = os.str();
  }
  return j;
}

ordered_json names(const Model& m, std::span<const StateId> path) {
  ordered_json a = ordered_json::array();
  for (StateId q : path) a.push_back(m.states.at(q));
  return a;
}

ordered_json enforcement_json(const Model* m, const EnforcementReport& r) {
  ordered_json j;
  j["verdict"] = to_string(r.verdict);
  j["certificate"] = r.certificate;
  j["depth"] = r.depth;
  j["paths"] = r.paths;
  j["open_paths"] = r.open_paths;
  if (r.lasso) {
    if (m) {
      j["counterexample"] = {{"stem", names(*m, r.lasso->stem)}, {"loop", names(*m, r.lasso->loop)}};
    } else {
      j["counterexample"] = {{"stem", r.lasso->stem}, {"loop", r.lasso->loop}};
    }
  } else if (!r.prefix.empty()) {
    if (m) {
      j["counterexample"] = {{"prefix", names(*m, r.prefix)}};
    } else {
      j["counterexample"] = {{"prefix", r.prefix}};
    }
  }
  j["errors"] = r.errors;
  return j;
}

std::string counterexample_text(const Model* m, const EnforcementReport& r) {
  if (!m) return {};
  if (r.lasso) return format_lasso(*m, *r.lasso);
  if (!r.prefix.empty()) return format_path(*m, r.prefix) + " ...";
  return {};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json growth_json(const GrowthVerdict& g, std::string_view axis) {
  ordered_json j;
  j["class"] = g.bound.to_string();
  j["r2"] = g.r2;
  j["slope"] = g.slope;
  j["intercept"] = g.intercept;
  j["points"] = g.points;
  if (!axis.empty()) j["axis"] = axis;
  return j;
}

}  // namespace

std::string render_enforcement(const Model& m, const EnforcementReport& r, const ReportMeta& meta, ReportFormat f) {
  switch (f) {
    case ReportFormat::json: {
      auto j = header(meta);
      j["result"] = enforcement_json(&m, r);
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "verdict,depth,paths,open_paths,counterexample\n";
      out += std::string(to_string(r.verdict)) + "," + std::to_string(r.depth) + "," + std::to_string(r.paths) + "," +
             std::to_string(r.open_paths) + "," + csv_escape(counterexample_text(&m, r)) + "\n";
      return out;
    }
    case ReportFormat::text: {
      std::ostringstream os;
      os << "verdict: " << to_string(r.verdict) << "\n";
      os << "evidence: " << r.certificate << "\n";
      os << "depth " << r.depth << ", " << r.paths << " paths, " << r.open_paths << " open\n";
      if (auto c = counterexample_text(&m, r); !c.empty()) os << "counterexample: " << c << "\n";
      for (const auto& e : r.errors) os << "error: " << e << "\n";
      return os.str();
    }
  }
  return {};
}

std::string render_outcomes(const Model& m, const OutcomeTree& t, const ReportMeta& meta, ReportFormat f) {
  const auto leaves = t.leaves();
  switch (f) {
    case ReportFormat::json: {
      auto j = header(meta);
      j["depth"] = t.max_depth;
      j["nodes"] = t.nodes.size();
      ordered_json paths = ordered_json::array();
      for (auto leaf : leaves) {
        const auto& n = t.nodes[leaf];
        ordered_json p;
        p["states"] = names(m, t.path_to(leaf));
        p["end"] = to_string(n.leaf);
        if (!n.error.empty()) p["error"] = n.error;
        paths.push_back(std::move(p));
      }
      j["paths"] = std::move(paths);
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "path,end,states\n";
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        const auto& n = t.nodes[leaves[i]];
        out += std::to_string(i) + "," + to_string(n.leaf) + "," + csv_escape(format_path(m, t.path_to(leaves[i]))) + "\n";
      }
      return out;
    }
    case ReportFormat::text: {
      std::ostringstream os;
      os << leaves.size() << " paths to depth " << t.max_depth << "\n";
      for (auto leaf : leaves) {
        const auto& n = t.nodes[leaf];
        auto path = t.path_to(leaf);
        if (n.leaf == LeafKind::absorbing) {
          const StateId last = path.back();
          path.pop_back();
          os << "  " << format_lasso(m, LassoPath{path, {last}}) << "\n";
        } else {
          os << "  " << format_path(m, path) << " ... [" << to_string(n.leaf) << "]";
          if (!n.error.empty()) os << " " << n.error;
          os << "\n";
        }
      }
      return os.str();
    }
  }
  return {};
}

std::string render_profile(const ComplexityProfile& p, const std::optional<GrowthVerdict>& growth, ProfileAxis axis,
                           const ReportMeta& meta, ReportFormat f) {
  switch (f) {
    case ReportFormat::json: {
      auto j = header(meta);
      j["template"] = p.template_name;
      j["sampler"] = {{"kind", to_string(p.sampler.kind)},
                      {"cap", p.sampler.cap},
                      {"depth", p.sampler.depth},
                      {"seed", p.sampler.seed},
                      {"walks", p.sampler.walks}};
      ordered_json rows = ordered_json::array();
      for (const auto& r : p.rows) {
        rows.push_back({{"param", r.param},
                        {"enc_size", r.enc_size},
                        {"abstract_size", r.abstract_size},
                        {"max_steps", r.max_steps},
                        {"histories", r.histories},
                        {"budget_hits", r.budget_hits},
                        {"errors", r.errors}});
      }
      j["rows"] = std::move(rows);
      if (growth) j["growth"] = growth_json(*growth, to_string(axis));
      j["caveat"] = kBoundedEvidence;
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "param,enc_size,abstract_size,max_steps,histories,budget_hits\n";
      for (const auto& r : p.rows) {
        out += std::to_string(r.param) + "," + std::to_string(r.enc_size) + "," + std::to_string(r.abstract_size) +
               "," + std::to_string(r.max_steps) + "," + std::to_string(r.histories) + "," +
               std::to_string(r.budget_hits) + "\n";
      }
      return out;
    }
    case ReportFormat::text: {
      std::ostringstream os;
      os << "template " << p.template_name << ", sampler " << to_string(p.sampler.kind) << " (cap " << p.sampler.cap
         << ")\n";
      os << std::setw(8) << "param" << std::setw(12) << "enc_size" << std::setw(10) << "|M|" << std::setw(14)
         << "max_steps" << std::setw(11) << "histories" << std::setw(8) << "budget" << "\n";
      for (const auto& r : p.rows) {
        os << std::setw(8) << r.param << std::setw(12) << r.enc_size << std::setw(10) << r.abstract_size
           << std::setw(14) << r.max_steps << std::setw(11) << r.histories << std::setw(8) << r.budget_hits << "\n";
      }
      if (growth) {
        os << "growth vs " << to_string(axis) << ": " << growth->bound.to_string() << " (R^2 = " << std::fixed
           << std::setprecision(4) << growth->r2 << ", " << growth->points << " points)\n";
      }
      for (const auto& e : p.errors) os << "error: " << e << "\n";
      os << kBoundedEvidence << "\n";
      return os.str();
    }
  }
  return {};
}

std::string render_ability(std::span<const Instance> instances, const AbilityReport& r, const ReportMeta& meta,
                           ReportFormat f) {
  auto model_of = [&](std::size_t i) -> const Model* { return i < instances.size() ? &instances[i].model : nullptr; };
  switch (f) {
    case ReportFormat::json: {
      auto j = header(meta);
      j["mode"] = to_string(r.mode);
      j["formula"] = r.formula;
      j["bound"] = r.bound.to_string();
      j["verdict"] = to_string(r.verdict);
      j["reason"] = r.reason;
      if (r.witness) j["witness"] = r.instances[*r.witness].label;
      ordered_json rows = ordered_json::array();
      for (std::size_t i = 0; i < r.instances.size(); ++i) {
        const auto& in = r.instances[i];
        ordered_json row;
        row["param"] = in.param;
        row["label"] = in.label;
        row[r.mode == AbilityMode::uniform ? "enc_size" : "abstract_size"] = in.size;
        row["max_steps"] = in.max_steps;
        row["histories"] = in.histories;
        row["budget_hits"] = in.budget_hits;
        if (in.enforcement) row["enforcement"] = enforcement_json(model_of(i), *in.enforcement);
        if (in.within_bound) row["within_bound"] = *in.within_bound;
        if (!in.error.empty()) row["error"] = in.error;
        rows.push_back(std::move(row));
      }
      j["instances"] = std::move(rows);
      if (r.growth) j["growth"] = growth_json(*r.growth, "");
      j["caveat"] = r.caveat;
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "param,label,size,enforcement,max_steps,histories,budget_hits,error\n";
      for (const auto& in : r.instances) {
        out += std::to_string(in.param) + "," + csv_escape(in.label) + "," + std::to_string(in.size) + "," +
               (in.enforcement ? to_string(in.enforcement->verdict) : "none") + "," + std::to_string(in.max_steps) +
               "," + std::to_string(in.histories) + "," + std::to_string(in.budget_hits) + "," + csv_escape(in.error) +
               "\n";
      }
      return out;
    }
    case ReportFormat::text: {
      std::ostringstream os;
      os << to_string(r.mode) << " ability of " << r.formula << " within " << r.bound.to_string() << ": "
         << to_string(r.verdict) << "\n";
      os << "reason: " << r.reason << "\n";
      for (std::size_t i = 0; i < r.instances.size(); ++i) {
        const auto& in = r.instances[i];
        os << "  " << in.label << ": " << (in.enforcement ? to_string(in.enforcement->verdict) : "not checked")
           << ", " << in.max_steps << " steps max, size " << in.size;
        if (!in.error.empty()) os << ", error: " << in.error;
        os << "\n";
      }
      if (r.witness) {
        const auto& in = r.instances[*r.witness];
        if (in.enforcement) {
          if (auto c = counterexample_text(model_of(*r.witness), *in.enforcement); !c.empty()) {
            os << "counterexample on " << in.label << ": " << c << "\n";
          }
        }
      }
      if (r.growth) {
        os << "growth: " << r.growth->bound.to_string() << " (R^2 = " << std::fixed << std::setprecision(4)
           << r.growth->r2 << ")\n";
      }
      os << r.caveat << "\n";
      return os.str();
    }
  }
  return {};
}

std::string render_synthesis(const Model& m, const Synthesis& s, const ReportMeta& meta, ReportFormat f) {
  const auto& g = s.game;
  auto node_name = [&](std::size_t i) {
    std::string out = "{";
    for (std::size_t k = 0; k < g.nodes[i].size(); ++k) out += (k ? "," : "") + m.states[g.nodes[i][k]];
    return out + "}";
  };
  switch (f) {
    case ReportFormat::json: {
      auto j = header(meta);
      j["agent"] = m.agents.at(g.agent);
      j["objective"] = s.shape == ObjectiveShape::reach ? "reach" : "safe";
      j["winning"] = s.result.winning;
      j["nodes"] = g.size();
      ordered_json strategy = ordered_json::array();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!s.result.region[i] || !s.result.strategy[i]) continue;
        strategy.push_back({{"knowledge", names(m, g.nodes[i])}, {"action", m.actions.at(*s.result.strategy[i])}});
      }
      j["strategy"] = std::move(strategy);
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "knowledge,winning,action\n";
      for (std::size_t i = 0; i < g.size(); ++i) {
        out += csv_escape(node_name(i)) + "," + (s.result.region[i] ? "1" : "0") + "," +
               (s.result.strategy[i] ? m.actions.at(*s.result.strategy[i]) : "") + "\n";
      }
      return out;
    }
    case ReportFormat::text: {
      std::ostringstream os;
      os << (s.result.winning ? "winning" : "not winning") << " for " << m.agents.at(g.agent) << " ("
         << (s.shape == ObjectiveShape::reach ? "reachability" : "safety") << ", " << g.size()
         << " knowledge sets)\n";
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (s.result.region[i] && s.result.strategy[i]) {
          os << "  " << node_name(i) << " -> " << m.actions.at(*s.result.strategy[i]) << "\n";
        }
      }
      return os.str();
    }
  }
  return {};
}

std::string render_energy(const EnergyVerdict& v, std::uint32_t n0, std::uint32_t k, const ReportMeta& meta,
                          ReportFormat f) {
  switch (f) {
    case ReportFormat::json: {
      auto j = header(meta);
      j["winning"] = v.winning;
      j["n0"] = n0;
      j["k"] = k;
      j["cap"] = v.cap;
      j["configurations"] = v.configurations;
      j["knowledge_nodes"] = v.knowledge_nodes;
      return dump(j);
    }
    case ReportFormat::csv:
      return "winning,n0,k,cap,configurations,knowledge_nodes\n" + std::string(v.winning ? "1" : "0") + "," +
             std::to_string(n0) + "," + std::to_string(k) + "," + std::to_string(v.cap) + "," +
             std::to_string(v.configurations) + "," + std::to_string(v.knowledge_nodes) + "\n";
    case ReportFormat::text: {
      std::ostringstream os;
      os << (v.winning ? "winning" : "not winning") << " with counters capped at " << v.cap << " (N0 = " << n0
         << ", k = " << k << "), " << v.configurations << " configurations, " << v.knowledge_nodes
         << " knowledge sets\n";
      return os.str();
    }
  }
  return {};
}

}  // namespace stratbound
