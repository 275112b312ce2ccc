#include "mbc/contracts/spec.hpp"

#include <algorithm>

namespace mbc::contracts {

std::string_view to_string(FeatureKind k)
{
    switch (k) {
    case FeatureKind::constructor: return "constructor";
    case FeatureKind::command: return "command";
    case FeatureKind::value_query: return "value-bound query";
    case FeatureKind::reference_query: return "reference-bound query";
    case FeatureKind::model_query: return "model query";
    }
    return "?";
}

std::string_view to_string(ArgKind k)
{
    switch (k) {
    case ArgKind::element: return "element";
    case ArgKind::integer: return "integer";
    case ArgKind::boolean: return "boolean";
    case ArgKind::path: return "path";
    case ArgKind::object: return "object";
    }
    return "?";
}

std::string_view to_string(Binding b)
{
    return b == Binding::value ? "value" : "reference";
}

std::string_view to_string(Cause c)
{
    switch (c) {
    case Cause::nondeterministic: return "nondeterministic";
    case Cause::inheritance: return "inheritance";
    case Cause::information_hiding: return "information-hiding";
    }
    return "?";
}

std::string_view to_string(ClauseFilter f)
{
    switch (f) {
    case ClauseFilter::all: return "all";
    case ClauseFilter::classic_only: return "classic-only";
    case ClauseFilter::model_only: return "model-only";
    }
    return "?";
}

std::optional<Cause> parse_cause(std::string_view s)
{
    for (auto c : {Cause::nondeterministic, Cause::inheritance, Cause::information_hiding}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    return std::nullopt;
}

std::optional<ClauseFilter> parse_clause_filter(std::string_view s)
{
    for (auto f : {ClauseFilter::all, ClauseFilter::classic_only, ClauseFilter::model_only}) {
        if (to_string(f) == s) {
            return f;
        }
    }
    return std::nullopt;
}

bool is_query(FeatureKind k)
{
    return k == FeatureKind::value_query || k == FeatureKind::reference_query || k == FeatureKind::model_query;
}

// ---------------------------------------------------------------------------
// CallContext

CallContext::CallContext(const ClassSpec& spec, const RunContext& run, std::span<const Argument> args)
    : spec_(&spec), run_(&run), args_(args), args_before_(args.size()), args_after_(args.size())
{
}

void CallContext::set_target(Side before, Side after)
{
    before_ = before;
    after_ = after;
}

void CallContext::set_object_arg(std::size_t i, Side before, Side after)
{
    if (i >= args_before_.size()) {
        throw UsageError("object argument index out of range");
    }
    args_before_[i] = before;
    args_after_[i] = after;
}

void CallContext::set_result(const Result* result, const AbstractState* result_state)
{
    result_ = result;
    result_state_ = result_state;
}

Value CallContext::lookup(const Side& side, std::string_view query) const
{
    if (side.state == nullptr || side.object == nullptr) {
        throw UsageError("clause read a state that is not available for this call");
    }
    if (side.state->signature().has(query)) {
        return (*side.state)[query];
    }
    // Derived (ancestor) model queries come from the implementation; the
    // linking invariant ties them to the state.
    try {
        return side.object->model(query);
    }
    catch (const UnknownFeature&) {
        throw UsageError("'" + std::string(query) + "' is not a model query of " + std::string(side.object->type_name()));
    }
}

Value CallContext::old(std::string_view query) const
{
    return lookup(before_, query);
}

Value CallContext::now(std::string_view query) const
{
    touched_after_ |= 1u;
    return lookup(after_, query);
}

const AbstractState& CallContext::old_state() const
{
    if (before_.state == nullptr) {
        throw UsageError("no old state for this call");
    }
    return *before_.state;
}

const AbstractState& CallContext::state() const
{
    touched_after_ |= 1u;
    if (after_.state == nullptr) {
        throw UsageError("no new state for this call");
    }
    return *after_.state;
}

const Object& CallContext::old_target() const
{
    if (before_.object == nullptr) {
        throw UsageError("no old target for this call");
    }
    return *before_.object;
}

const Object& CallContext::target() const
{
    touched_after_ |= 1u;
    if (after_.object == nullptr) {
        throw UsageError("no target for this call");
    }
    return *after_.object;
}

const Side& CallContext::arg_side(const std::vector<Side>& sides, std::size_t i) const
{
    if (i >= sides.size() || sides[i].object == nullptr) {
        throw UsageError("argument " + std::to_string(i) + " is not an object argument");
    }
    return sides[i];
}

Value CallContext::old_arg(std::size_t i, std::string_view query) const
{
    return lookup(arg_side(args_before_, i), query);
}

Value CallContext::now_arg(std::size_t i, std::string_view query) const
{
    touched_after_ |= 2ull << i;
    return lookup(arg_side(args_after_, i), query);
}

const Object& CallContext::old_arg_object(std::size_t i) const
{
    return *arg_side(args_before_, i).object;
}

const Object& CallContext::arg_object(std::size_t i) const
{
    touched_after_ |= 2ull << i;
    return *arg_side(args_after_, i).object;
}

ObjectId CallContext::arg_identity(std::size_t i) const
{
    return object_arg(args_, i)->identity();
}

const Value& CallContext::result() const
{
    if (result_ == nullptr) {
        throw UsageError("no result for this call");
    }
    auto* v = std::get_if<Value>(result_);
    if (v == nullptr) {
        throw UsageError("result is not a model value");
    }
    return *v;
}

Value CallContext::result_model(std::string_view query) const
{
    if (result_state_ == nullptr) {
        throw UsageError("result has no abstract state");
    }
    return (*result_state_)[query];
}

const Object& CallContext::result_object() const
{
    if (result_ == nullptr) {
        throw UsageError("no result for this call");
    }
    auto* o = std::get_if<ObjectPtr>(result_);
    if (o == nullptr || !*o) {
        throw UsageError("result is not an object");
    }
    return **o;
}

// ---------------------------------------------------------------------------
// ClassSpec

bool Feature::has_object_args() const
{
    return std::any_of(args.begin(), args.end(), [](const ArgSpec& a) { return a.kind == ArgKind::object; });
}

const Feature* ClassSpec::find(std::string_view feature) const
{
    auto it = std::find_if(features.begin(), features.end(), [&](const Feature& f) { return f.name == feature; });
    return it == features.end() ? nullptr : &*it;
}

const Feature& ClassSpec::feature(std::string_view feature) const
{
    const auto* f = find(feature);
    if (f == nullptr) {
        throw UnknownFeature(name + " has no feature '" + std::string(feature) + "'");
    }
    return *f;
}

const DerivedQuery* ClassSpec::find_derived(std::string_view query) const
{
    auto it = std::find_if(derived.begin(), derived.end(), [&](const DerivedQuery& d) { return d.name == query; });
    return it == derived.end() ? nullptr : &*it;
}

AbstractState ClassSpec::abstract_state(const Object& o) const
{
    std::vector<Value> values;
    values.reserve(signature->size());
    for (const auto& q : signature->queries()) {
        try {
            values.push_back(o.model(q.name));
        }
        catch (const model::ModelError& e) {
            throw SpecificationError(name + "." + q.name + ": " + e.what());
        }
        catch (const UnknownFeature& e) {
            throw SpecificationError(name + "." + q.name + ": " + e.what());
        }
    }
    return AbstractState(signature, std::move(values));
}

std::vector<InterfaceEntry> ClassSpec::interface() const
{
    std::vector<InterfaceEntry> out;
    for (const auto& q : signature->queries()) {
        out.push_back({q.name, FeatureKind::model_query, {}});
    }
    for (const auto& d : derived) {
        out.push_back({d.name, FeatureKind::model_query, {}});
    }
    for (const auto& f : features) {
        InterfaceEntry e{f.name, f.kind, {}};
        for (const auto& a : f.args) {
            e.bindings.push_back(a.binding);
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<const Feature*> ClassSpec::constructors() const
{
    std::vector<const Feature*> out;
    for (const auto& f : features) {
        if (f.kind == FeatureKind::constructor) {
            out.push_back(&f);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Frame expansion and inheritance

namespace {

bool known_query(const ClassSpec& spec, const std::string& q)
{
    return spec.signature->has(q) || spec.find_derived(q) != nullptr;
}

std::string frame_id(std::string_view feature, const std::string& query)
{
    return std::string(feature) + "/frame:" + query;
}

}  // namespace

FeatureContract expand_frame(const FeatureContract& contract, const ClassSpec& spec, std::string_view feature)
{
    for (const auto* names : {&contract.mentioned, &contract.relevant}) {
        for (const auto& q : *names) {
            if (!known_query(spec, q)) {
                throw ConfigurationError(spec.name + "." + std::string(feature) + " names unknown model query '" + q + "'");
            }
        }
    }

    // A derived query is pinned only through the queries it is defined from,
    // so mentioning it lifts the frame on those as well.
    std::set<std::string> covered = contract.mentioned;
    covered.insert(contract.relevant.begin(), contract.relevant.end());
    for (const auto& q : std::set<std::string>(covered)) {
        if (const auto* d = spec.find_derived(q)) {
            covered.insert(d->depends_on.begin(), d->depends_on.end());
        }
    }

    FeatureContract out = contract;
    for (const auto& q : spec.signature->queries()) {
        if (covered.contains(q.name)) {
            continue;
        }
        std::string id = frame_id(feature, q.name);
        bool present = std::any_of(out.post.begin(), out.post.end(), [&](const Clause& c) { return c.id == id; });
        if (!present) {
            std::string name = q.name;
            out.post.push_back({id, [name](const CallContext& c) { return c.now(name) == c.old(name); }, ClauseStyle::model});
        }
        out.mentioned.insert(q.name);
    }
    return out;
}

void inherit(ClassSpec& heir, const ClassSpec& ancestor)
{
    for (const auto& d : ancestor.derived) {
        if (heir.find_derived(d.name) == nullptr && !heir.signature->has(d.name)) {
            heir.derived.push_back(d);
        }
    }
    for (const auto& q : ancestor.signature->queries()) {
        if (!known_query(heir, q.name)) {
            throw ConfigurationError(heir.name + " inherits model query '" + q.name + "' from " + ancestor.name +
                                     " without a linking definition");
        }
    }

    std::vector<Feature> merged;
    for (const auto& af : ancestor.features) {
        if (af.kind == FeatureKind::constructor) {
            continue;  // creation procedures are not inherited
        }
        Feature f = af;
        f.effective_post.clear();
        if (const auto* own = heir.find(af.name)) {
            f.kind = own->kind;
            f.args = own->args;
            f.result = own->result;
            if (own->contract.pre) {
                f.contract.pre = own->contract.pre;
            }
            f.contract.post.insert(f.contract.post.end(), own->contract.post.begin(), own->contract.post.end());
            f.contract.mentioned.insert(own->contract.mentioned.begin(), own->contract.mentioned.end());
            f.contract.relevant.insert(own->contract.relevant.begin(), own->contract.relevant.end());
            f.contract.incompleteness = own->contract.incompleteness;
        }
        merged.push_back(std::move(f));
    }
    for (const auto& own : heir.features) {
        if (ancestor.find(own.name) == nullptr || own.kind == FeatureKind::constructor) {
            Feature f = own;
            if (f.origin.empty()) {
                f.origin = heir.name;
            }
            merged.push_back(std::move(f));
        }
    }
    heir.features = std::move(merged);

    std::vector<InvariantClause> inv = ancestor.invariant;
    for (const auto& c : heir.invariant) {
        bool dup = std::any_of(inv.begin(), inv.end(), [&](const InvariantClause& x) { return x.id == c.id; });
        if (!dup) {
            inv.push_back(c);
        }
    }
    heir.invariant = std::move(inv);

    if (std::find(heir.parents.begin(), heir.parents.end(), ancestor.name) == heir.parents.end()) {
        heir.parents.push_back(ancestor.name);
    }
}

// ---------------------------------------------------------------------------
// Registry

void Registry::add(ClassSpec spec)
{
    if (spec.name.empty()) {
        throw ConfigurationError("specification without a name");
    }
    if (specs_.contains(spec.name)) {
        throw ConfigurationError("duplicate specification '" + spec.name + "'");
    }
    if (!spec.signature || spec.signature->size() == 0) {
        throw ConfigurationError(spec.name + " has an empty model signature");
    }
    if (spec.deferred && spec.heirs.empty()) {
        throw ConfigurationError("deferred " + spec.name + " names no concrete heir");
    }
    if (!spec.deferred && spec.constructors().empty()) {
        throw ConfigurationError(spec.name + " has no constructor");
    }
    std::set<std::string> names;
    for (const auto& q : spec.signature->queries()) {
        names.insert(q.name);
    }
    for (const auto& d : spec.derived) {
        names.insert(d.name);
    }
    for (auto& f : spec.features) {
        if (!names.insert(f.name).second) {
            throw ConfigurationError(spec.name + " declares '" + f.name + "' twice");
        }
        if (f.kind == FeatureKind::model_query) {
            throw ConfigurationError(spec.name + "." + f.name + ": model queries belong in the signature");
        }
        if (f.kind == FeatureKind::constructor && !f.construct) {
            throw ConfigurationError(spec.name + "." + f.name + ": constructor without a body");
        }
        if (f.origin.empty()) {
            f.origin = spec.name;
        }
        for (const auto& a : f.args) {
            if (a.kind == ArgKind::object && a.object_type.empty()) {
                throw ConfigurationError(spec.name + "." + f.name + ": object argument '" + a.name + "' has no type");
            }
        }
        if (f.kind == FeatureKind::command) {
            auto expanded = expand_frame(f.contract, spec, f.name);
            f.effective_post = std::move(expanded.post);
        }
        else {
            for (const auto* set : {&f.contract.mentioned, &f.contract.relevant}) {
                for (const auto& q : *set) {
                    if (!known_query(spec, q)) {
                        throw ConfigurationError(spec.name + "." + f.name + " names unknown model query '" + q + "'");
                    }
                }
            }
            f.effective_post = f.contract.post;
        }
        std::set<std::string> ids;
        for (const auto& c : f.effective_post) {
            if (!ids.insert(c.id).second) {
                throw ConfigurationError(spec.name + "." + f.name + ": duplicate clause id '" + c.id + "'");
            }
        }
    }
    order_.push_back(spec.name);
    auto name = spec.name;
    specs_.emplace(std::move(name), std::make_shared<const ClassSpec>(std::move(spec)));
}

const ClassSpec* Registry::find(std::string_view name) const
{
    auto it = specs_.find(name);
    return it == specs_.end() ? nullptr : it->second.get();
}

const ClassSpec& Registry::get(std::string_view name) const
{
    const auto* s = find(name);
    if (s == nullptr) {
        throw UnknownType("unknown type '" + std::string(name) + "'");
    }
    return *s;
}

const ClassSpec& Registry::instance_source(std::string_view name) const
{
    const ClassSpec* s = &get(name);
    for (int hops = 0; s->deferred; ++hops) {
        if (hops > 16) {
            throw ConfigurationError("heir chain of " + std::string(name) + " does not reach a concrete class");
        }
        s = &get(s->heirs.front());
    }
    return *s;
}

}  // namespace mbc::contracts
