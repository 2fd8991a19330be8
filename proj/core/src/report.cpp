#include "numloop/report.hpp"

#include <sstream>

#include "json.hpp"

namespace numloop {

std::vector<ReportGroup> grouped_outcomes(const TerminationReport& r) {
  const AdornmentStatus order[] = {
      AdornmentStatus::ProvenAcceptable, AdornmentStatus::ProvenNonrecursive,
      AdornmentStatus::Pending, AdornmentStatus::Unknown};
  std::vector<ReportGroup> out;
  for (AdornmentStatus s : order) {
    Cond merged = Cond::bottom();
    bool any = false;
    for (const auto& o : r.outcomes) {
      if (o.status != s) continue;
      merged = disj_cond(merged, o.adornment);
      any = true;
    }
    if (any) out.push_back({status_text(s), simplify(merged)});
  }
  return out;
}

std::string report_text(const TerminationReport& r, const RenderOpts& opts) {
  std::ostringstream os;
  os << r.query.key() << " terminates if: " << render_cond(r.condition, opts)
     << "\n";
  os << "\nadornments:\n";
  for (const ReportGroup& g : grouped_outcomes(r))
    os << "  " << g.status << ": " << render_cond(g.condition, opts) << "\n";
  os << "rounds: " << r.rounds << "\n";
  if (r.limit_hit) os << "iteration limit hit; result may be refinable\n";
  return os.str();
}

std::string report_json(const TerminationReport& r, const RenderOpts& opts) {
  nlohmann::json j;
  j["query"] = r.query.key();
  j["condition"] = render_cond(r.condition, opts);
  j["adornments"] = nlohmann::json::array();
  for (const ReportGroup& g : grouped_outcomes(r))
    j["adornments"].push_back(
        {{"condition", render_cond(g.condition, opts)}, {"status", g.status}});
  j["rounds"] = r.rounds;
  j["limit_hit"] = r.limit_hit;
  j["trace"] = nlohmann::json::array();
  for (const RoundTrace& t : r.trace) {
    nlohmann::json jt;
    jt["round"] = t.round;
    jt["adornment_sets"] = nlohmann::json::object();
    for (const auto& [pred, conds] : t.adornment_sets) {
      auto arr = nlohmann::json::array();
      for (const Cond& c : conds) arr.push_back(render_cond(c, opts));
      jt["adornment_sets"][pred] = std::move(arr);
    }
    jt["adorned_clauses"] = t.adorned_clauses;
    jt["bridges"] = t.bridges;
    jt["obligations"] = t.obligations;
    jt["events"] = t.events;
    if (!t.system_dump.empty()) jt["system"] = t.system_dump;
    j["trace"].push_back(std::move(jt));
  }
  return j.dump(2);
}

}  // namespace numloop
