#include "satdomain/assignment.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

namespace satdomain {

bool DomainAssignment::complete() const {
  return std::none_of(controller_of.begin(), controller_of.end(), [](NodeId k) { return k == kUnassigned; });
}

std::vector<NodeId> DomainAssignment::active_controllers() const {
  std::vector<NodeId> ks;
  for (NodeId k : controller_of) {
    if (k != kUnassigned) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

std::vector<std::vector<NodeId>> DomainAssignment::domains() const {
  const auto ks = active_controllers();
  std::vector<std::vector<NodeId>> out(ks.size());
  for (NodeId i = 0; i < controller_of.size(); ++i) {
    if (controller_of[i] == kUnassigned) continue;
    const auto d = std::lower_bound(ks.begin(), ks.end(), controller_of[i]) - ks.begin();
    out[static_cast<std::size_t>(d)].push_back(i);
  }
  return out;
}

std::vector<NodeId> DomainAssignment::members_of(NodeId controller) const {
  std::vector<NodeId> m;
  for (NodeId i = 0; i < controller_of.size(); ++i) {
    if (controller_of[i] == controller) m.push_back(i);
  }
  return m;
}

bool DomainAssignment::y(std::size_t d, NodeId k) const {
  const auto ks = active_controllers();
  return d < ks.size() && ks[d] == k;
}

std::size_t DomainAssignment::migrations_from(const DomainAssignment& prev) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < controller_of.size() && i < prev.controller_of.size(); ++i) {
    if (prev.controller_of[i] != kUnassigned && controller_of[i] != prev.controller_of[i]) ++n;
  }
  return n;
}

std::string_view constraint_name(Constraint c) {
  switch (c) {
    case Constraint::OneControllerPerDomain: return "one-controller-per-domain";
    case Constraint::UniqueMembership: return "unique-membership";
    case Constraint::Connectivity: return "connectivity";
    case Constraint::FovContainment: return "fov-containment";
    case Constraint::BinaryConsistency: return "binary-consistency";
  }
  return "?";
}

std::size_t ConstraintReport::count(Constraint c) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [c](const Violation& v) { return v.family == c; }));
}

std::string ConstraintReport::summary() const {
  if (ok()) return "all constraints hold";
  std::ostringstream os;
  os << violations.size() << " violation(s)";
  for (const auto& v : violations) os << "; " << constraint_name(v.family) << ": " << v.detail;
  return os.str();
}

ConstraintReport validate_assignment(const DomainAssignment& a, const NetworkSnapshot& snap, const Coverage& cov,
                                     const ValidationOptions& opt) {
  ConstraintReport rep;
  auto add = [&](Constraint c, std::string s) { rep.violations.push_back({c, std::move(s)}); };
  const std::size_t n = snap.num_leos();

  if (a.num_leos() != n) {
    add(Constraint::UniqueMembership, "assignment covers " + std::to_string(a.num_leos()) + " LEOs, expected " +
                                          std::to_string(n));
    return rep;
  }

  // Unique membership: exactly one known controller per LEO.
  std::vector<char> is_controller(snap.num_nodes(), 0);
  for (NodeId k : snap.controller_ids) is_controller[k] = 1;
  for (NodeId i = 0; i < n; ++i) {
    const NodeId k = a.controller_of[i];
    if (k == kUnassigned) {
      add(Constraint::UniqueMembership, "LEO " + std::to_string(i) + " has no domain");
    } else if (k >= snap.num_nodes() || !is_controller[k]) {
      add(Constraint::UniqueMembership, "LEO " + std::to_string(i) + " mapped to non-controller " + std::to_string(k));
    }
  }
  if (!rep.ok()) return rep;

  // One controller per domain and binary consistency over the x / y views.
  const auto ks = a.active_controllers();
  const auto doms = a.domains();
  for (std::size_t d = 0; d < doms.size(); ++d) {
    std::size_t managers = 0;
    for (NodeId k : snap.controller_ids) managers += a.y(d, k) ? 1 : 0;
    if (managers != 1) {
      add(Constraint::OneControllerPerDomain, "domain " + std::to_string(d) + " has " + std::to_string(managers) +
                                                  " controllers");
    }
  }
  std::map<NodeId, std::size_t> index_of;
  for (std::size_t d = 0; d < ks.size(); ++d) index_of[ks[d]] = d;
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t di = index_of.at(a.controller_of[i]);
    for (NodeId j : snap.isl->adjacency[i]) {
      const bool same = index_of.at(a.controller_of[j]) == di;
      if (a.x(i, j) != same || a.x(i, j) != a.x(j, i)) {
        add(Constraint::BinaryConsistency, "x(" + std::to_string(i) + "," + std::to_string(j) + ") inconsistent");
      }
    }
  }

  // FOV containment.
  if (!opt.waive_fov) {
    for (NodeId i = 0; i < n; ++i) {
      if (!cov.covers(a.controller_of[i], i)) {
        add(Constraint::FovContainment,
            "LEO " + std::to_string(i) + " outside FOV of controller " + std::to_string(a.controller_of[i]));
      }
    }
  }

  // Connectivity: BFS from the controller over direct links, then intra-domain ISLs.
  for (std::size_t d = 0; d < doms.size(); ++d) {
    const NodeId k = ks[d];
    std::vector<char> seen(n, 0);
    std::queue<NodeId> q;
    for (NodeId i : doms[d]) {
      bool attached = cov.covers(k, i);
      if (!attached && opt.waive_fov) {
        for (NodeId g : cov.coverers[i]) attached = attached || snap.role(g) == Role::Gs;
      }
      if (attached) {
        seen[i] = 1;
        q.push(i);
      }
    }
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      for (NodeId v : snap.isl->adjacency[u]) {
        if (!seen[v] && a.controller_of[v] == k) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    for (NodeId i : doms[d]) {
      if (!seen[i]) {
        add(Constraint::Connectivity,
            "LEO " + std::to_string(i) + " not connected to controller " + std::to_string(k));
      }
    }
  }
  return rep;
}

void write_assignment_csv(std::ostream& os, const DomainAssignment& a, bool header) {
  if (header) os << "slot,leo_id,controller_id\n";
  for (NodeId i = 0; i < a.controller_of.size(); ++i) {
    os << a.slot_index << ',' << i << ',' << a.controller_of[i] << '\n';
  }
}

}  // namespace satdomain
