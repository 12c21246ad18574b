#pragma once

#include <set>
#include <string>
#include <vector>

#include "deltafuzz/arch_level.hpp"

namespace deltafuzz {

enum class ElementKind { LineAnalog, Branch, Function };

const char* element_kind_name(ElementKind k);

// A declared instrumentation point. The engine is not source-instrumented
// by an external tool; every kernel declares its elements up front, which
// keeps collection portable and deterministic.
struct CoverageElement {
    std::string id;
    ElementKind kind;
    ArchLevel component;
};

// All elements declared by the engine build, in declaration order.
const std::vector<CoverageElement>& coverage_universe();
bool is_declared_element(const std::string& id);

// Accumulates element hits during evaluation. Order-insensitive set union,
// so concurrent accumulation into per-thread sinks can be merged freely.
class CoverageSink {
  public:
    void touch(const char* id) { hits_.insert(id); }
    void merge(const CoverageSink& o) { hits_.insert(o.hits_.begin(), o.hits_.end()); }
    const std::set<std::string>& hits() const { return hits_; }

  private:
    std::set<std::string> hits_;
};

inline void cov(CoverageSink* sink, const char* id) {
    if (sink) sink->touch(id);
}

struct CoverageSet {
    std::string label;
    std::set<std::string> covered;
};

struct CoverageRow {
    std::string component;  // arch level name, or "Overall" for the union row
    int64_t covered = 0;
    int64_t total = 0;
    double percent = 0.0;
};

// Per-component rows in ArchLevel order followed by an Overall row.
// Throws EngineError if the set contains ids outside the universe.
std::vector<CoverageRow> coverage_table(const CoverageSet& set);

struct OverlapRegion {
    std::vector<std::string> labels;  // the sets this region belongs to
    int64_t count = 0;
};

// Region counts for every nonempty intersection pattern of 2 or 3 sets
// (2^n - 1 regions). Counts sum to the size of the union. Throws
// TooManySets for more than 3 inputs.
std::vector<OverlapRegion> overlap(const std::vector<CoverageSet>& sets);

}  // namespace deltafuzz
