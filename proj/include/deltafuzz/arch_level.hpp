#pragma once

#include <optional>
#include <string>

namespace deltafuzz {

// The five-level decomposition used to tag injected faults and coverage
// elements: user-facing API, graph execution, operation kernels, shared
// utilities, and environment-dependent processing.
enum class ArchLevel {
    UserLevelAPI,
    GraphLevelImpl,
    OperationImpl,
    GeneralUtility,
    EnvDependentProcessing,
};

inline constexpr ArchLevel kAllArchLevels[] = {
    ArchLevel::UserLevelAPI,    ArchLevel::GraphLevelImpl, ArchLevel::OperationImpl,
    ArchLevel::GeneralUtility,  ArchLevel::EnvDependentProcessing,
};

const char* arch_level_name(ArchLevel l);
std::optional<ArchLevel> arch_level_from_name(const std::string& s);

}  // namespace deltafuzz
