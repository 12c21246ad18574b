#include "deltafuzz/arch_level.hpp"

namespace deltafuzz {

const char* arch_level_name(ArchLevel l) {
    switch (l) {
        case ArchLevel::UserLevelAPI: return "UserLevelAPI";
        case ArchLevel::GraphLevelImpl: return "GraphLevelImpl";
        case ArchLevel::OperationImpl: return "OperationImpl";
        case ArchLevel::GeneralUtility: return "GeneralUtility";
        case ArchLevel::EnvDependentProcessing: return "EnvDependentProcessing";
    }
    return "?";
}

std::optional<ArchLevel> arch_level_from_name(const std::string& s) {
    for (ArchLevel l : kAllArchLevels) {
        if (s == arch_level_name(l)) return l;
    }
    return std::nullopt;
}

}  // namespace deltafuzz
