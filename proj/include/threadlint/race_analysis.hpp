#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "threadlint/access_paths.hpp"
#include "threadlint/alert.hpp"
#include "threadlint/class_model.hpp"
#include "threadlint/monitors.hpp"

namespace threadlint {

/// A pair of exposed accesses to the same field, the first one modifying.
struct ConflictPair {
  const FieldAccess* a = nullptr;
  const FieldAccess* b = nullptr;
};

std::vector<ConflictPair> conflicting_pairs(const ClassModel& cm);

/// monitors() for every exposed access, keyed by FieldAccess::index.
struct MonitorInfo {
  std::map<std::size_t, std::set<Monitor>> by_access;
};

MonitorInfo compute_monitor_info(const ClassModel& cm, const AccessPaths& paths, FlowCache& flows);

/// One P3 alert per conflicting pair whose monitor sets do not intersect.
std::vector<Alert> check_correct_synchronization(const ClassModel& cm, const AccessPaths& paths,
                                                 const MonitorInfo& info);

struct ClassResult {
  std::vector<Alert> alerts;
  std::vector<std::string> notes;
};

/// P1, P2 and P3 for one annotated class; alerts sorted with alert_less.
/// Unannotated classes yield nothing.
ClassResult analyze_class(const ClassModel& cm, const RuleSet& rules = {});

}  // namespace threadlint
