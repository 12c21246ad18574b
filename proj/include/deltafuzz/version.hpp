#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "deltafuzz/arch_level.hpp"
#include "deltafuzz/ops.hpp"

namespace deltafuzz {

// Comparison against one named numeric op parameter.
struct ParamCondition {
    enum class Rel { Lt, Le, Eq, Ge, Gt, Ne, IsNan };
    std::string name;
    Rel rel = Rel::Eq;
    double value = 0.0;
};

// All set fields must hold for the fault to fire. input_dtype/input_rank
// match if any input has that dtype/rank. The predicate is pure.
struct FaultTrigger {
    std::optional<OpKind> op;
    std::optional<DType> input_dtype;
    std::optional<int> input_rank;
    std::optional<ParamCondition> param;

    bool matches(OpKind k, const std::vector<TensorValue>& inputs, const ParamList& params) const;
};

// Multiply/offset every output payload entry, then re-round to the dtype.
struct ValuePerturb {
    double scale = 1.0;
    double offset = 0.0;
};

// In-band crash with a fixed message; campaigns survive it.
struct CrashTrap {
    std::string message;
};

// Modeled as consuming the entire step budget of the run, not wall clock.
struct HangLoop {};

// Grow/shrink one output extent; the payload is truncated or zero padded.
struct ShapeSkew {
    int64_t dim = 0;
    int64_t delta = 0;
};

using FaultEffect = std::variant<ValuePerturb, CrashTrap, HangLoop, ShapeSkew>;

const char* fault_effect_name(const FaultEffect& e);

struct Fault {
    std::string id;
    FaultTrigger trigger;
    FaultEffect effect;
    ArchLevel component = ArchLevel::OperationImpl;
};

// A labeled engine variant. A version with no faults behaves exactly like
// the base engine.
struct EngineVersion {
    std::string id;
    std::vector<Fault> faults;
};

class VersionRegistry {
  public:
    void register_version(EngineVersion v);  // throws DuplicateVersion
    const std::vector<EngineVersion>& versions() const { return versions_; }
    bool has(const std::string& id) const;
    const EngineVersion& find(const std::string& id) const;  // throws UnknownVersion

  private:
    std::vector<EngineVersion> versions_;  // insertion order
};

struct OpCrash {
    std::string message;
};
struct OpHang {};

struct VersionedResult {
    std::variant<TensorValue, OpCrash, OpHang> result;
    std::vector<std::string> fired_fault_ids;  // at most one fault fires per op
};

// Evaluate one op under a version's fault set. At most the first matching
// fault (in list order) fires; with no match this is exactly the base
// engine. Base-engine traps (TrapError etc.) propagate to the caller.
VersionedResult eval_versioned(const VersionRegistry& registry, const std::string& version_id,
                               OpKind k, const std::vector<TensorValue>& inputs,
                               const ParamList& params, CoverageSink* sink = nullptr);

// Fault manifest: section-based text, one [version] or [fault] record per
// section, `key = value` lines, `#` comments. See data/faults_demo.txt for
// the documented demo registry.
VersionRegistry parse_fault_manifest(const std::string& text, const std::string& source_name);
VersionRegistry load_fault_manifest(const std::string& path);

}  // namespace deltafuzz
