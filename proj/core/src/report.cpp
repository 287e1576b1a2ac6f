#include "crcurv/report.hpp"

#include "json.hpp"

namespace crcurv {

std::string criterion_conclusion(const CriterionReport& c) {
  if (!c.exists) return "criterion inconclusive";
  return "exists; morse <= " + std::to_string(c.first_k) +
         "; count >= " + std::to_string(c.count_bound);
}

namespace {

using ojson = nlohmann::ordered_json;

ojson point_json(const SpherePoint& p) {
  const auto x = p.ambient();
  return ojson::array({x[0], x[1], x[2], x[3]});
}

ojson calibration_json(const Calibration& c) {
  ojson j;
  j["volume_factor"] = c.convention.volume_factor;
  j["vectorfield_sign"] = c.convention.vectorfield_sign;
  j["c1"] = c.c1;
  j["c1_residual"] = c.c1_residual;
  j["dirac_mass"] = c.dirac_mass;
  j["mass_gap"] = c.mass_gap;
  j["kappa"] = c.kappa;
  j["c_G"] = c.c_G;
  j["quarter_R"] = c.quarter_R;
  j["S"] = c.S;
  j["S_gap"] = c.S_gap;
  j["c2"] = c.c2;
  j["c2_gap"] = c.c2_gap;
  j["chart_ratio"] = c.chart_ratio;
  ojson prov;
  for (const auto& [name, how] : c.provenance) prov[name] = how;
  j["provenance"] = std::move(prov);
  return j;
}

ojson record_json(const CriticalPointRecord& r) {
  ojson j;
  j["label"] = r.label;
  j["location"] = point_json(r.location);
  j["K"] = r.k_value;
  j["grad_norm"] = r.grad_norm;
  j["hessian_eigs"] = ojson::array({r.hessian_eigs[0], r.hessian_eigs[1], r.hessian_eigs[2]});
  j["morse"] = r.morse_index;
  j["degenerate"] = r.degenerate;
  j["lap_K"] = r.sublap_K;
  j["A"] = r.a_value;
  j["kplus_margin"] = r.kplus_margin;
  j["kplus_member"] = r.kplus_member;
  return j;
}

ojson tuple_points_json(const std::vector<int>& points,
                        const std::optional<AbstractCriticalData>& abstract) {
  ojson arr = ojson::array();
  for (int i : points) {
    if (abstract && i >= 0 && i < static_cast<int>(abstract->points.size()))
      arr.push_back(abstract->points[static_cast<std::size_t>(i)].label);
    else
      arr.push_back(i);
  }
  return arr;
}

ojson criterion_json(const CriterionReport& c,
                     const std::optional<AbstractCriticalData>& abstract) {
  ojson j;
  j["k_plus"] = tuple_points_json(c.k_plus, abstract);
  ojson tuples = ojson::array();
  for (const TupleVerdict& t : c.tuples) {
    ojson tj;
    tj["points"] = tuple_points_json(t.points, abstract);
    tj["rho"] = t.rho;
    tj["in_F1"] = t.in_f1;
    tj["iota"] = t.iota;
    if (t.pruned) tj["pruned"] = true;
    tuples.push_back(std::move(tj));
  }
  j["tuples"] = std::move(tuples);
  j["l_sharp"] = c.l_sharp;
  ojson scan = ojson::array();
  for (const KVerdict& v : c.scan) {
    ojson vj;
    vj["k"] = v.k;
    vj["S_k"] = v.s_k;
    vj["sum_ok"] = v.sum_ok;
    vj["level_free"] = v.level_free;
    vj["admissible"] = v.admissible;
    if (v.admissible) vj["count_bound"] = v.count_bound;
    scan.push_back(std::move(vj));
  }
  j["scan"] = std::move(scan);
  j["exists"] = c.exists;
  j["first_k"] = c.first_k;
  j["count_bound"] = c.count_bound;
  j["used_mu"] = c.used_mu;
  j["conclusion"] = criterion_conclusion(c);
  return j;
}

ojson expansion_json(const ExpansionReport& e) {
  ojson j;
  j["measured_J"] = e.measured_J;
  j["predicted"] = e.predicted;
  j["gamma1"] = e.gamma1;
  j["beta1"] = e.beta1;
  ojson pairs = ojson::array();
  for (const PairInteraction& p : e.pairs) {
    ojson pj;
    pj["i"] = p.i;
    pj["j"] = p.j;
    pj["eps"] = p.eps;
    pj["inner"] = p.inner;
    pj["c_ij"] = p.c_ij;
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  j["relative_gap"] = e.relative_gap;
  j["level"] = e.level;
  return j;
}

ojson trajectory_json(const TrajectoryRecord& t,
                      const std::optional<AbstractCriticalData>& abstract) {
  ojson j;
  j["points"] = tuple_points_json(t.points, abstract);
  j["rho"] = t.rho;
  j["outcome"] = flow_outcome_name(t.outcome);
  j["s_end"] = t.s_end;
  j["terminal_norm"] = t.terminal_norm;
  j["samples"] = static_cast<int>(t.samples.size());
  return j;
}

}  // namespace

std::string render_report_json(const RunReport& rep) {
  ojson j;
  j["schema_version"] = 1;
  j["mode"] = rep.mode;
  if (!rep.k_description.empty()) j["K"] = rep.k_description;
  j["seed"] = rep.seed;
  j["refine"] = rep.refine;
  if (rep.calibration) j["calibration"] = calibration_json(*rep.calibration);
  if (!rep.critical_points.empty()) {
    ojson arr = ojson::array();
    for (const CriticalPointRecord& r : rep.critical_points) arr.push_back(record_json(r));
    j["critical_points"] = std::move(arr);
  }
  if (rep.c0) {
    ojson cj;
    cj["pass"] = rep.c0->pass;
    cj["violations"] = rep.c0->violations;
    j["c0"] = std::move(cj);
  }
  if (rep.criterion) j["criterion"] = criterion_json(*rep.criterion, rep.abstract);
  if (rep.expansion) j["expansion"] = expansion_json(*rep.expansion);
  if (!rep.green_gaps.empty()) j["green_identity_gaps"] = rep.green_gaps;
  if (!rep.trajectories.empty()) {
    ojson arr = ojson::array();
    for (const TrajectoryRecord& t : rep.trajectories)
      arr.push_back(trajectory_json(t, rep.abstract));
    j["trajectories"] = std::move(arr);
  }
  if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
  return j.dump(2) + "\n";
}

}  // namespace crcurv
