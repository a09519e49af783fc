#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace threadlint {

/// Types whose instances are considered internally synchronized. Accesses to
/// fields of such types are not reported.
struct ThreadSafeTypeAllowlist {
  std::vector<std::string> qualified_prefixes{"java.util.concurrent."};
  std::vector<std::string> exact_types;

  /// `qualified` is the best-effort resolved name, `simple` the last segment.
  bool contains(std::string_view qualified, std::string_view simple) const;
};

/// Knobs shared by the analysis modules. Defaults mirror the standard
/// java.util.concurrent APIs.
struct AnalysisOptions {
  std::vector<std::string> annotation_names{"ThreadSafe"};
  ThreadSafeTypeAllowlist allowlist;
  std::vector<std::string> lock_types{"Lock", "ReentrantLock"};
  std::vector<std::string> lock_methods{"lock", "lockInterruptibly", "tryLock"};
  std::vector<std::string> unlock_methods{"unlock"};
  std::vector<std::string> mutator_methods{"add", "put", "remove", "set", "clear", "offer", "poll"};
};

/// Strips type arguments and array brackets: "Map<K, V>[]" -> "Map".
std::string erase_type_arguments(std::string_view type);
std::string simple_type_name(std::string_view type);
bool is_array_type(std::string_view type);

bool contains_name(const std::vector<std::string>& names, std::string_view name);

}  // namespace threadlint
