// Brute-force checks over small enumerated state spaces: soundness and
// completeness of contracts, and adequacy of a model against observations.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mbc/contracts/engine.hpp"

namespace mbc::checkers {

using contracts::AbstractState;
using contracts::Argument;
using contracts::ClassSpec;
using contracts::Feature;
using contracts::ObjectPtr;
using contracts::Registry;
using contracts::RunContext;
using model::Value;

struct EnumerationConfig {
    std::size_t universe = 2;   ///< distinct element tokens
    std::size_t max_size = 3;   ///< largest container measure
    std::int64_t max_int = 3;   ///< integer arguments range over -max_int..max_int
    std::size_t depth = 3;      ///< call-sequence bound for adequacy
    /// Refuse state spaces, and per-feature checks (prestate, arguments,
    /// candidate) estimated above this.
    double limit = 1e7;

    /// Integer results are swept over -M..M with M = max(max_int, max_size + 1),
    /// so counts of full containers stay in range.
    std::int64_t result_bound() const;
    nlohmann::ordered_json to_json() const;
};

/// The enumeration would exceed the configured limit.
class EnumerationRefused : public std::runtime_error {
public:
    EnumerationRefused(std::string subject, double estimate, double limit, std::string_view unit = "objects");
    double estimate() const { return estimate_; }

private:
    double estimate_;
};

/// One call used to build an enumerated object: a constructor first, then
/// commands whose arguments are plain values.
struct Step {
    std::string feature;
    std::vector<Value> args;
};
using BuildTrace = std::vector<Step>;

std::string to_string(const BuildTrace& t);
nlohmann::ordered_json to_json(const BuildTrace& t);
BuildTrace trace_from_json(const nlohmann::ordered_json& j);

struct EnumeratedObject {
    ObjectPtr object;
    AbstractState state;
    BuildTrace trace;
    std::string text;     ///< canonical text of `state`
    std::size_t cls = 0;  ///< abstract class; class ids follow the canonical state order
};

/// Concrete objects standing for `spec` (instances of `source`), within bounds.
struct StateSpace {
    const ClassSpec* spec = nullptr;
    const ClassSpec* source = nullptr;
    std::vector<EnumeratedObject> objects;
    std::size_t classes = 0;  ///< distinct abstract states
    double estimate = 0;
};

/// Breadth-first from every constructor of the instance source, applying the
/// commands of `type` (except `hidden` ones) with every argument tuple.
StateSpace enumerate_states(const Registry& registry, std::string_view type, const EnumerationConfig& cfg,
                            const RunContext& run, const std::set<std::string>& hidden = {});

/// Rebuilds an object from its trace (raw calls, no checking).
ObjectPtr rebuild(const Registry& registry, std::string_view type, const BuildTrace& trace, const RunContext& run);

/// Every value an argument of this kind ranges over.
std::vector<Value> argument_domain(contracts::ArgKind kind, const EnumerationConfig& cfg);

// ---------------------------------------------------------------------------
// Verdicts

enum class WitnessKind { precondition_unsound, postcondition_unsound, postcondition_incomplete };

std::string_view to_string(WitnessKind k);

/// Something a witness refers to: a value or an object given by its trace.
/// With neither, an object argument aliased to the target.
struct Item {
    std::optional<Value> value;
    std::optional<BuildTrace> trace;
    std::string text;

    nlohmann::ordered_json to_json() const;
    static Item from_json(const nlohmann::ordered_json& j);
};

/// A post-call configuration: the target (or result) plus object arguments.
struct Outcome {
    Item main;
    std::vector<Item> object_args;  ///< post-call object arguments, in argument order

    std::string text() const;
    nlohmann::ordered_json to_json() const;
    static Outcome from_json(const nlohmann::ordered_json& j);
};

struct Witness {
    WitnessKind kind = WitnessKind::postcondition_incomplete;
    std::optional<BuildTrace> prestate;  ///< absent for constructors
    std::string prestate_text;
    std::vector<Item> args;
    /// Precondition witnesses: a second prestate abstractly equal to the first.
    std::optional<BuildTrace> other_prestate;
    Outcome first;
    Outcome second;

    std::string sort_key() const;
    nlohmann::ordered_json to_json() const;
    static Witness from_json(const nlohmann::ordered_json& j);
};

struct CheckVerdict {
    std::string type;
    std::string feature;
    contracts::FeatureKind kind = contracts::FeatureKind::command;
    std::string origin;
    bool pre_sound = true;
    bool post_sound = true;
    bool post_complete = true;
    std::optional<contracts::Cause> tag;
    std::vector<Witness> witnesses;  ///< canonically sorted, truncated
    std::size_t witness_count = 0;   ///< before truncation
    std::size_t states_checked = 0;

    nlohmann::ordered_json to_json() const;
    static CheckVerdict from_json(const nlohmann::ordered_json& j);
};

/// Enumerations are cached per type so several features share them.
class Checker {
public:
    Checker(const Registry& registry, EnumerationConfig cfg, RunContext run = {});

    const StateSpace& space(std::string_view type);
    const EnumerationConfig& config() const { return cfg_; }
    const RunContext& run() const { return run_; }
    const Registry& registry() const { return *registry_; }

    /// pre(o1) = pre(o2) for abstractly equal o1, o2 and every argument tuple.
    CheckVerdict check_precondition_soundness(std::string_view type, std::string_view feature);
    /// Commands: soundness and completeness against candidate poststates.
    CheckVerdict check_command_completeness(std::string_view type, std::string_view feature);
    /// Queries (and constructors, as value-bound queries).
    CheckVerdict check_query_completeness(std::string_view type, std::string_view feature);
    /// All of the above for one feature.
    CheckVerdict check_feature(std::string_view type, std::string_view feature);

    /// Maximum witnesses kept per verdict.
    std::size_t witness_limit = 5;

private:
    const Registry* registry_;
    EnumerationConfig cfg_;
    RunContext run_;
    std::map<std::string, StateSpace, std::less<>> spaces_;
};

/// Re-checks a witness from scratch by rebuilding its objects. True iff it
/// still demonstrates what it claims.
bool reverify(const Registry& registry, const CheckVerdict& verdict, const Witness& w, const RunContext& run);

// ---------------------------------------------------------------------------
// Library report

inline constexpr std::string_view report_schema = "mbc.completeness-report/1";

struct LibraryReport {
    EnumerationConfig cfg;
    std::vector<CheckVerdict> verdicts;
    std::size_t features = 0;
    std::size_t incomplete = 0;
    std::size_t unsound = 0;
    std::vector<std::string> untagged;          ///< incomplete without a benign cause
    std::vector<std::string> tagged_complete;   ///< tagged, yet found complete
    std::vector<std::string> refused;           ///< refusal messages, one per refused check

    double incomplete_fraction() const;
    /// No untagged incompleteness and no unsoundness.
    bool ok() const;
    nlohmann::ordered_json to_json() const;
    static LibraryReport from_json(const nlohmann::ordered_json& j);
    std::string table() const;
};

/// Classifies every public (non-model) feature of the given types, or of all
/// registered types when `types` is empty.
LibraryReport classify_library(const Registry& registry, const EnumerationConfig& cfg, const RunContext& run,
                               const std::vector<std::string>& types = {});

// ---------------------------------------------------------------------------
// Adequacy

/// A view of the abstract state used as the model under test.
struct ModelProjection {
    std::string name;
    std::function<std::vector<Value>(const AbstractState&)> project;
};

/// "full" (the declared model), or for sequence-modeled types "count_last"
/// (count and last element) and "count_first" (count and first element).
ModelProjection projection(const ClassSpec& spec, std::string_view name);

struct AdequacyConfig {
    std::size_t depth = 3;
    std::set<std::string> hidden;  ///< features removed from the interface
    std::string projection = "full";
};

enum class Direction { distinguishable, indistinguishable };

std::string_view to_string(Direction d);

struct AdequacyWitness {
    /// `distinguishable`: equal models, yet some call sequence tells them
    /// apart (the model is too coarse). `indistinguishable`: different
    /// models, yet no call sequence up to the depth tells them apart
    /// (the model is not minimal).
    Direction direction;
    BuildTrace first;
    BuildTrace second;
    std::string first_text;
    std::string second_text;
    std::string observation;  ///< distinguishing observation, if any
};

inline constexpr std::string_view adequacy_schema = "mbc.adequacy/1";

struct AdequacyVerdict {
    std::string type;
    std::string projection;
    std::size_t depth = 0;
    std::vector<std::string> hidden;
    bool coarse_ok = true;    ///< model-equal implies indistinguishable
    bool minimal_ok = true;   ///< indistinguishable implies model-equal
    std::size_t objects = 0;
    std::size_t pairs = 0;
    std::vector<AdequacyWitness> witnesses;  ///< at most one per direction

    bool adequate() const { return coarse_ok && minimal_ok; }
    nlohmann::ordered_json to_json() const;
};

AdequacyVerdict check_observational_adequacy(const Registry& registry, std::string_view type,
                                             const EnumerationConfig& cfg, const AdequacyConfig& acfg,
                                             const RunContext& run);

}  // namespace mbc::checkers
