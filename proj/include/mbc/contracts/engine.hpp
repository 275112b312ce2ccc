// Runtime checking of model-based contracts around feature calls.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include "mbc/contracts/spec.hpp"

namespace mbc::contracts {

enum class ViolationKind { precondition, postcondition, class_invariant, abstract_purity };

std::string_view to_string(ViolationKind k);

/// Versioned JSON record; see docs/schemas/violation.json.
inline constexpr std::string_view violation_schema = "mbc.violation/1";

struct ContractViolation {
    std::string type;     ///< specification the call was checked against
    std::string feature;
    std::string clause;   ///< stable clause id, e.g. "merge_right/sequence"
    ViolationKind kind = ViolationKind::postcondition;
    std::string old_state;
    std::string new_state;
    std::vector<std::string> args;
    std::uint64_t seed = 0;
    /// Clauses evaluated for this call, in order, up to and including the failing one.
    std::vector<std::string> evaluated;
    std::string detail;

    nlohmann::ordered_json to_json() const;
    static ContractViolation from_json(const nlohmann::ordered_json& j);

    /// Same feature, clause and kind.
    bool same_fault(const ContractViolation& other) const;
};

enum class CallStatus { passed, rejected, violated };

struct CallOutcome {
    CallStatus status = CallStatus::passed;
    Result result;
    std::optional<ContractViolation> violation;
};

bool precondition_holds(const Feature& f, const PreContext& ctx);

/// Runs a command on `target`: precondition filter, old snapshot, body,
/// effective postcondition (explicit then frame clauses), class invariant.
/// Object arguments are invariant-checked too.
CallOutcome checked_command(const Registry& registry, const ClassSpec& spec, const Feature& f, const ObjectPtr& target,
                            std::span<const Argument> args, const RunContext& run);

/// As checked_command, plus the abstract-purity check: the target and every
/// object argument keep their abstract state.
CallOutcome checked_query(const Registry& registry, const ClassSpec& spec, const Feature& f, const ObjectPtr& target,
                          std::span<const Argument> args, const RunContext& run);

/// Creation procedure; on success the result holds the new object.
CallOutcome checked_construct(const Registry& registry, const ClassSpec& spec, const Feature& f,
                              std::span<const Argument> args, const RunContext& run);

/// Dispatches on the feature kind. `target` is ignored for constructors.
CallOutcome checked_call(const Registry& registry, const ClassSpec& spec, const Feature& f,
                         const ObjectPtr& target, std::span<const Argument> args, const RunContext& run);

/// Evaluates clauses in order, skipping those `filter` excludes. Returns the
/// id of the first false clause (an exception counts as false); every
/// evaluated id is appended to `evaluated` when given.
std::optional<std::string> first_failing(std::span<const Clause> clauses, const CallContext& ctx, ClauseFilter filter,
                                         std::vector<std::string>* evaluated = nullptr);

/// Specification an object argument is checked against.
const ClassSpec& argument_spec(const Registry& registry, const Feature& f, std::size_t i);

/// Text of an argument for reports: values canonically, objects as
/// `Type(state)` so that output never depends on identities.
std::string describe(const Registry& registry, const Feature& f, std::span<const Argument> args, std::size_t i);

/// Evaluates the class invariant; returns the id of the first failing clause.
std::optional<std::string> failing_invariant(const ClassSpec& spec, const Object& o, const AbstractState& s,
                                             ClauseFilter filter);

/// True iff a clause of this style takes part under `filter`.
bool selected(ClauseStyle style, ClauseFilter filter);

/// Object equality, chosen to coincide with abstract equality.
bool object_equal(const ClassSpec& spec, const Object& x, const Object& y);

/// Evaluates a linking invariant: `link` relates the heir's abstract state to
/// the value of the ancestor's model query.
bool check_linking_invariant(const ModelSignature& heir, std::string_view parent_query,
                             const std::function<bool(const AbstractState&, const Value&)>& link,
                             const AbstractState& state, const Value& parent_value);

}  // namespace mbc::contracts
