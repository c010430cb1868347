#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "satdomain/visibility.hpp"

namespace satdomain {

inline constexpr NodeId kUnassigned = std::numeric_limits<NodeId>::max();

/// LEO -> controller map for one slot. A domain is the set of LEOs sharing a controller.
struct DomainAssignment {
  int slot_index = 0;
  std::vector<NodeId> controller_of;  // indexed by LEO id

  DomainAssignment() = default;
  explicit DomainAssignment(std::size_t num_leos, int slot = 0) : slot_index(slot), controller_of(num_leos, kUnassigned) {}

  std::size_t num_leos() const { return controller_of.size(); }
  bool complete() const;
  /// Controllers with a nonempty domain, ascending.
  std::vector<NodeId> active_controllers() const;
  /// Members per active controller, aligned with active_controllers().
  std::vector<std::vector<NodeId>> domains() const;
  std::vector<NodeId> members_of(NodeId controller) const;

  /// Same-domain indicator.
  bool x(NodeId i, NodeId j) const { return controller_of[i] == controller_of[j]; }
  /// Domain d (index into active_controllers()) is managed by controller k.
  bool y(std::size_t d, NodeId k) const;

  std::size_t migrations_from(const DomainAssignment& prev) const;
  bool operator==(const DomainAssignment&) const = default;
};

enum class Constraint { OneControllerPerDomain, UniqueMembership, Connectivity, FovContainment, BinaryConsistency };

std::string_view constraint_name(Constraint c);

struct Violation {
  Constraint family;
  std::string detail;
};

struct ConstraintReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::size_t count(Constraint c) const;
  std::string summary() const;
};

struct ValidationOptions {
  bool waive_fov = false;  // centralized control reaches LEOs through ground relays
};

/// Checks the five constraint families. Connectivity is judged over intra-domain ISLs
/// plus direct (in-FOV) controller links; with the FOV waiver any ground-visible LEO
/// counts as a relay attachment.
ConstraintReport validate_assignment(const DomainAssignment& a, const NetworkSnapshot& snap, const Coverage& cov,
                                     const ValidationOptions& opt = {});

void write_assignment_csv(std::ostream& os, const DomainAssignment& a, bool header = true);

}  // namespace satdomain
