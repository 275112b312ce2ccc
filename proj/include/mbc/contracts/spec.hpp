// Class specifications: model signatures, feature descriptors and
// model-based contracts, registered per container type.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mbc/contracts/object.hpp"
#include "mbc/contracts/signature.hpp"

namespace mbc::contracts {

enum class FeatureKind { constructor, command, value_query, reference_query, model_query };
enum class ArgKind { element, integer, boolean, path, object };
enum class Binding { value, reference };

/// Benign sources of postcondition incompleteness.
enum class Cause { nondeterministic, inheritance, information_hiding };

/// `model` clauses talk about model queries; `classic` clauses are the
/// traditional contract written against concrete attributes.
enum class ClauseStyle { model, classic };
enum class ClauseFilter { all, classic_only, model_only };

std::string_view to_string(FeatureKind k);
std::string_view to_string(ArgKind k);
std::string_view to_string(Binding b);
std::string_view to_string(Cause c);
std::string_view to_string(ClauseFilter f);
std::optional<Cause> parse_cause(std::string_view s);
std::optional<ClauseFilter> parse_clause_filter(std::string_view s);

bool is_query(FeatureKind k);

/// Named seeded-bug switches; all off by default.
class FaultSwitch {
public:
    FaultSwitch() = default;
    explicit FaultSwitch(std::set<std::string> enabled) : enabled_(std::move(enabled)) {}

    bool on(std::string_view name) const { return enabled_.contains(std::string(name)); }
    void enable(std::string name) { enabled_.insert(std::move(name)); }
    const std::set<std::string>& enabled() const { return enabled_; }

private:
    std::set<std::string> enabled_;
};

/// Ambient configuration of a checked run.
struct RunContext {
    FaultSwitch faults;
    /// Number of distinct element tokens (a, b, c, ...) in play.
    std::size_t universe = 4;
    ClauseFilter filter = ClauseFilter::all;
    std::uint64_t seed = 0;
};

struct ArgSpec {
    std::string name;
    ArgKind kind;
    Binding binding = Binding::value;
    /// For object arguments: the specification the argument is checked against.
    std::string object_type;
};

struct ResultSpec {
    std::optional<Sort> sort;   ///< a model value result
    std::string object_type;    ///< an object result (constructors, duplicate...)

    bool is_none() const { return !sort && object_type.empty(); }
    bool is_object() const { return !object_type.empty(); }
};

class ClassSpec;

/// What a precondition can see: the target (value-bound through its abstract
/// state) and the actual arguments.
struct PreContext {
    const Object* target = nullptr;
    const AbstractState* state = nullptr;
    std::span<const Argument> args;
    const RunContext* run = nullptr;

    const Value& model(std::string_view query) const { return (*state)[query]; }
    const Value& arg(std::size_t i) const { return value_arg(args, i); }
    const Object& object(std::size_t i) const { return *object_arg(args, i); }
};

/// One side (before or after) of an object taking part in a call.
struct Side {
    const Object* object = nullptr;
    const AbstractState* state = nullptr;
};

/// Everything a postcondition clause may mention: old and new target state,
/// arguments (with old and new states for object arguments) and the result.
///
/// The context records which post-call components a clause reads so the
/// completeness checker can skip candidates that cannot change a verdict.
class CallContext {
public:
    CallContext(const ClassSpec& spec, const RunContext& run, std::span<const Argument> args);

    void set_target(Side before, Side after);
    void set_object_arg(std::size_t i, Side before, Side after);
    void set_result(const Result* result, const AbstractState* result_state);

    /// Model (or derived model) query of the target before the call.
    Value old(std::string_view query) const;
    /// ... and after the call.
    Value now(std::string_view query) const;
    const AbstractState& old_state() const;
    const AbstractState& state() const;
    const Object& old_target() const;
    const Object& target() const;

    template <class T>
    const T& old_target_as() const { return downcast<T>(old_target()); }
    template <class T>
    const T& target_as() const { return downcast<T>(target()); }

    const Value& arg(std::size_t i) const { return value_arg(args_, i); }
    std::span<const Argument> args() const { return args_; }

    Value old_arg(std::size_t i, std::string_view query) const;
    Value now_arg(std::size_t i, std::string_view query) const;
    const Object& old_arg_object(std::size_t i) const;
    const Object& arg_object(std::size_t i) const;

    /// Identity of the actual argument (reference-bound view).
    ObjectId arg_identity(std::size_t i) const;

    const Value& result() const;
    Value result_model(std::string_view query) const;
    const Object& result_object() const;

    const RunContext& run() const { return *run_; }
    const ClassSpec& spec() const { return *spec_; }

    // Access tracking.
    void reset_tracking() const { touched_after_ = 0; }
    bool touched_after_target() const { return (touched_after_ & 1u) != 0; }
    bool touched_after_arg(std::size_t i) const { return (touched_after_ & (2ull << i)) != 0; }

private:
    template <class T>
    static const T& downcast(const Object& o)
    {
        auto* p = dynamic_cast<const T*>(&o);
        if (p == nullptr) {
            throw UsageError("clause expected a different concrete type than " + std::string(o.type_name()));
        }
        return *p;
    }

    Value lookup(const Side& side, std::string_view query) const;
    const Side& arg_side(const std::vector<Side>& sides, std::size_t i) const;

    const ClassSpec* spec_;
    const RunContext* run_;
    std::span<const Argument> args_;
    Side before_;
    Side after_;
    std::vector<Side> args_before_;
    std::vector<Side> args_after_;
    const Result* result_ = nullptr;
    const AbstractState* result_state_ = nullptr;
    mutable std::uint64_t touched_after_ = 0;
};

struct Clause {
    /// Stable identifier, e.g. "put_right/sequence".
    std::string id;
    std::function<bool(const CallContext&)> holds;
    ClauseStyle style = ClauseStyle::model;
};

struct InvariantClause {
    std::string id;
    std::function<bool(const Object&, const AbstractState&)> holds;
    ClauseStyle style = ClauseStyle::model;
};

using Precondition = std::function<bool(const PreContext&)>;

struct FeatureContract {
    Precondition pre;  ///< empty means `True`
    std::vector<Clause> post;
    /// Model queries whose new value the postcondition constrains.
    std::set<std::string> mentioned;
    /// Model queries the command may modify without a precise new value.
    std::set<std::string> relevant;
    std::optional<Cause> incompleteness;
};

struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::command;
    std::vector<ArgSpec> args;
    ResultSpec result;
    FeatureContract contract;
    /// Constructors only.
    std::function<ObjectPtr(std::span<const Argument>, const RunContext&)> construct;
    /// Class that introduced the feature.
    std::string origin;
    /// Explicit post clauses followed by implicit frame clauses; filled on registration.
    std::vector<Clause> effective_post;

    bool has_object_args() const;
};

/// A model query inherited from an ancestor whose value is defined through a
/// linking invariant in terms of this class's own model queries.
struct DerivedQuery {
    std::string name;
    Sort sort;
    std::vector<std::string> depends_on;
};

/// Interface descriptor: the feature partition of a class.
struct InterfaceEntry {
    std::string name;
    FeatureKind kind;
    std::vector<Binding> bindings;
};

class ClassSpec {
public:
    std::string name;
    bool deferred = false;
    std::vector<std::string> parents;
    /// Concrete heirs whose instances stand for objects of a deferred class.
    std::vector<std::string> heirs;
    SignaturePtr signature;
    std::vector<DerivedQuery> derived;
    std::vector<Feature> features;
    std::vector<InvariantClause> invariant;
    /// Upper bound on the number of concrete objects for an enumeration
    /// (universe, max size, max integer magnitude); optional.
    std::function<double(std::size_t, std::size_t, std::int64_t)> estimate;

    const Feature* find(std::string_view feature) const;
    const Feature& feature(std::string_view feature) const;
    const DerivedQuery* find_derived(std::string_view query) const;

    AbstractState abstract_state(const Object& o) const;
    std::vector<InterfaceEntry> interface() const;
    std::vector<const Feature*> constructors() const;
};

/// Closed-world frame expansion: for every model query neither mentioned
/// nor relevant, append the implicit clause `s = old s`. Idempotent (framed
/// queries join `mentioned`). Throws ConfigurationError for unknown names.
FeatureContract expand_frame(const FeatureContract& contract, const ClassSpec& spec, std::string_view feature);

/// Copies an ancestor's features (with their contracts) and invariants into
/// an heir; features the heir already declares are strengthened with the
/// ancestor's clauses.
void inherit(ClassSpec& heir, const ClassSpec& ancestor);

class UnknownType : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Registry {
public:
    /// Validates the specification and computes effective postconditions.
    void add(ClassSpec spec);

    const ClassSpec& get(std::string_view name) const;
    const ClassSpec* find(std::string_view name) const;
    /// Registration order.
    const std::vector<std::string>& names() const { return order_; }

    /// Concrete spec used to build instances standing for `name`.
    const ClassSpec& instance_source(std::string_view name) const;

private:
    std::map<std::string, std::shared_ptr<const ClassSpec>, std::less<>> specs_;
    std::vector<std::string> order_;
};

}  // namespace mbc::contracts
