#ifndef EPMC_PIPELINE_HPP
#define EPMC_PIPELINE_HPP

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epmc/engine.hpp"
#include "epmc/model.hpp"
#include "epmc/patterns.hpp"
#include "epmc/properties.hpp"

namespace epmc::pipeline {

class UnresolvedAnnotation : public PipelineError {
public:
    UnresolvedAnnotation(const std::string& id, const std::string& pattern)
        : PipelineError("annotation '" + id + "' references unknown pattern '" + pattern + "'") {}
};

class MissingPatternProperty : public PipelineError {
public:
    explicit MissingPatternProperty(const std::string& param)
        : PipelineError("model parameter '" + param +
                        "' looks pattern-derived but no repository property covers it"),
          parameter(param) {}
    std::string parameter;
};

struct PropertyFormula {
    std::string text; // original query text
    std::string name; // sanitized script name (P1, P2, ...)
    RationalFunction value;
    bool prob_less_than_one = false; // reward convention diagnostic
};

/// Combined two-stage result: stage-1 pattern-property assignments followed
/// by stage-2 per-query formulae. Every free variable of a stage-2 formula is
/// a model parameter or a stage-1 name; stage-1 expressions reference base
/// parameters only.
struct FormulaSet {
    std::vector<std::pair<std::string, RationalFunction>> stage1;
    std::vector<PropertyFormula> stage2;
    std::string model_path;
    std::string repo_provenance;
    std::string created_at; // informational; never serialized into scripts
};

struct CheckOptions {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::size_t term_limit = ComputeBudget::kDefaultTermLimit;
    std::string model_path;
};

/// Two-stage check of a pattern-annotated model: instantiate the repository
/// expressions for every annotation-derived parameter that occurs in the
/// model (stage 1), then analyse the model with those parameters treated as
/// plain unknowns (stage 2).
FormulaSet epmc_check(const ModelSource& src, const patterns::PatternRepository& repo,
                      const std::vector<Query>& queries, const CheckOptions& opts = {});

/// Single-stage analysis of the full model; annotations are ignored.
FormulaSet mono_check(const ModelSource& src, const std::vector<Query>& queries,
                      const CheckOptions& opts = {});

/// Evaluate stage 1 under `base`, extend the valuation, evaluate stage 2.
/// Returns query text -> value.
std::map<std::string, double> eval_formula_set(const FormulaSet& fs, const Valuation& base);

/// Total op_count over all stage-1 and stage-2 expressions (duplicates count
/// independently; no sharing analysis).
long formula_set_size(const FormulaSet& fs);

/// Plain-text assignment script: '%' comments, one `name = expr;` line per
/// stage-1 entry and per stage-2 property (named P1, P2, ... with the query
/// text in a preceding comment). Byte-deterministic for equal inputs.
std::string emit_script(const FormulaSet& fs);
void emit_script_file(const FormulaSet& fs, const std::string& path);

/// Parsed back form of an emitted script (also accepts hand-written
/// assignment scripts).
struct Script {
    struct Assignment {
        std::string name;
        RationalFunction value;
        std::string property_text; // nonempty for stage-2 lines
    };
    std::vector<Assignment> assignments;

    /// Evaluate all assignments in order under `base`; returns every value
    /// by name.
    std::map<std::string, double> evaluate(const Valuation& base) const;
};

Script parse_script(std::string_view text);

} // namespace epmc::pipeline

#endif
