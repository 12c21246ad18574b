#include "deltafuzz/coverage.hpp"

#include <cmath>
#include <map>
#include <unordered_set>

#include "deltafuzz/errors.hpp"
#include "deltafuzz/ops.hpp"

namespace deltafuzz {

const char* element_kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::LineAnalog: return "line";
        case ElementKind::Branch: return "branch";
        case ElementKind::Function: return "function";
    }
    return "?";
}

namespace {

std::vector<CoverageElement> build_universe() {
    using K = ElementKind;
    using L = ArchLevel;
    std::vector<CoverageElement> u;

    // User-level surface: the public entry points a test driver touches.
    u.push_back({"fn:api.parse", K::Function, L::UserLevelAPI});
    u.push_back({"fn:api.validate", K::Function, L::UserLevelAPI});
    u.push_back({"br:api.validate.ok", K::Branch, L::UserLevelAPI});
    u.push_back({"br:api.validate.fail", K::Branch, L::UserLevelAPI});
    u.push_back({"fn:api.run_program", K::Function, L::UserLevelAPI});
    u.push_back({"seg:api.observe", K::LineAnalog, L::UserLevelAPI});

    // Graph-level executor: statement dispatch and outcome assembly.
    u.push_back({"fn:graph.execute", K::Function, L::GraphLevelImpl});
    u.push_back({"seg:graph.let", K::LineAnalog, L::GraphLevelImpl});
    u.push_back({"seg:graph.apply", K::LineAnalog, L::GraphLevelImpl});
    u.push_back({"seg:graph.observe", K::LineAnalog, L::GraphLevelImpl});
    u.push_back({"br:graph.trap.caught", K::Branch, L::GraphLevelImpl});
    u.push_back({"br:graph.finished", K::Branch, L::GraphLevelImpl});

    // Operation kernels.
    for (OpKind k : kAllOpKinds) {
        if (k == OpKind::Cast) continue;  // cast lives in the utility layer
        u.push_back({"fn:op." + std::string(op_name(k)), K::Function, L::OperationImpl});
    }
    u.push_back({"br:op.div.float", K::Branch, L::OperationImpl});
    u.push_back({"br:op.div.int_zero", K::Branch, L::OperationImpl});
    u.push_back({"br:op.relu.pos", K::Branch, L::OperationImpl});
    u.push_back({"br:op.relu.nonpos", K::Branch, L::OperationImpl});
    u.push_back({"seg:op.matmul.accum", K::LineAnalog, L::OperationImpl});
    u.push_back({"seg:op.softmax.row", K::LineAnalog, L::OperationImpl});
    u.push_back({"seg:op.adadelta_update.step", K::LineAnalog, L::OperationImpl});

    // General utilities: promotion, casting, rounding, structure conversion.
    u.push_back({"fn:op.cast", K::Function, L::GeneralUtility});
    u.push_back({"fn:util.promote", K::Function, L::GeneralUtility});
    u.push_back({"br:util.cast.to_float", K::Branch, L::GeneralUtility});
    u.push_back({"br:util.cast.to_int", K::Branch, L::GeneralUtility});
    u.push_back({"br:util.cast.to_bool", K::Branch, L::GeneralUtility});
    u.push_back({"fn:util.round.f16", K::Function, L::GeneralUtility});
    u.push_back({"fn:util.round.f32", K::Function, L::GeneralUtility});
    u.push_back({"fn:util.densify", K::Function, L::GeneralUtility});
    u.push_back({"fn:util.sparsify", K::Function, L::GeneralUtility});
    u.push_back({"fn:util.raggedify", K::Function, L::GeneralUtility});

    // Environment-dependent processing: storage layout on input, budget
    // accounting, fault dispatch.
    u.push_back({"seg:env.input.dense", K::LineAnalog, L::EnvDependentProcessing});
    u.push_back({"seg:env.input.sparse", K::LineAnalog, L::EnvDependentProcessing});
    u.push_back({"seg:env.input.ragged", K::LineAnalog, L::EnvDependentProcessing});
    u.push_back({"fn:env.step_budget", K::Function, L::EnvDependentProcessing});
    u.push_back({"br:env.budget.exhausted", K::Branch, L::EnvDependentProcessing});
    u.push_back({"fn:env.fault_scan", K::Function, L::EnvDependentProcessing});
    u.push_back({"seg:env.fault.perturb", K::LineAnalog, L::EnvDependentProcessing});
    u.push_back({"seg:env.fault.crash", K::LineAnalog, L::EnvDependentProcessing});
    u.push_back({"seg:env.fault.hang", K::LineAnalog, L::EnvDependentProcessing});
    u.push_back({"seg:env.fault.shape_skew", K::LineAnalog, L::EnvDependentProcessing});

    return u;
}

const std::unordered_set<std::string>& universe_ids() {
    static const std::unordered_set<std::string> ids = [] {
        std::unordered_set<std::string> s;
        for (const auto& e : coverage_universe()) s.insert(e.id);
        return s;
    }();
    return ids;
}

}  // namespace

const std::vector<CoverageElement>& coverage_universe() {
    static const std::vector<CoverageElement> u = build_universe();
    return u;
}

bool is_declared_element(const std::string& id) { return universe_ids().count(id) > 0; }

std::vector<CoverageRow> coverage_table(const CoverageSet& set) {
    for (const auto& id : set.covered) {
        if (!is_declared_element(id)) {
            throw EngineError("coverage set contains undeclared element: " + id);
        }
    }
    std::vector<CoverageRow> rows;
    for (ArchLevel level : kAllArchLevels) {
        CoverageRow row;
        row.component = arch_level_name(level);
        for (const auto& e : coverage_universe()) {
            if (e.component != level) continue;
            row.total++;
            if (set.covered.count(e.id)) row.covered++;
        }
        row.percent = row.total == 0 ? 0.0 : 100.0 * double(row.covered) / double(row.total);
        rows.push_back(std::move(row));
    }
    CoverageRow overall;
    overall.component = "Overall";
    overall.total = int64_t(coverage_universe().size());
    overall.covered = int64_t(set.covered.size());
    overall.percent =
        overall.total == 0 ? 0.0 : 100.0 * double(overall.covered) / double(overall.total);
    rows.push_back(std::move(overall));
    return rows;
}

std::vector<OverlapRegion> overlap(const std::vector<CoverageSet>& sets) {
    if (sets.size() < 2 || sets.size() > 3) {
        throw TooManySets("overlap takes 2 or 3 sets, got " + std::to_string(sets.size()));
    }
    std::set<std::string> all;
    for (const auto& s : sets) all.insert(s.covered.begin(), s.covered.end());

    const size_t n = sets.size();
    std::map<unsigned, int64_t> counts;  // membership bitmask -> count
    for (const auto& id : all) {
        unsigned mask = 0;
        for (size_t i = 0; i < n; ++i) {
            if (sets[i].covered.count(id)) mask |= (1u << i);
        }
        counts[mask]++;
    }
    std::vector<OverlapRegion> regions;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        OverlapRegion r;
        for (size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) r.labels.push_back(sets[i].label);
        }
        auto it = counts.find(mask);
        r.count = it == counts.end() ? 0 : it->second;
        regions.push_back(std::move(r));
    }
    return regions;
}

}  // namespace deltafuzz
