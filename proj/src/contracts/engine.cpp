#include "mbc/contracts/engine.hpp"

namespace mbc::contracts {

std::string_view to_string(ViolationKind k)
{
    switch (k) {
    case ViolationKind::precondition: return "precondition";
    case ViolationKind::postcondition: return "postcondition";
    case ViolationKind::class_invariant: return "class-invariant";
    case ViolationKind::abstract_purity: return "abstract-purity";
    }
    return "?";
}

namespace {

ViolationKind parse_kind(const std::string& s)
{
    for (auto k : {ViolationKind::precondition, ViolationKind::postcondition, ViolationKind::class_invariant,
                   ViolationKind::abstract_purity}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw UsageError("unknown violation kind '" + s + "'");
}

}  // namespace

nlohmann::ordered_json ContractViolation::to_json() const
{
    nlohmann::ordered_json j;
    j["schema"] = violation_schema;
    j["type"] = type;
    j["feature"] = feature;
    j["clause"] = clause;
    j["kind"] = to_string(kind);
    j["old_state"] = old_state;
    j["new_state"] = new_state;
    j["args"] = args;
    j["seed"] = seed;
    j["evaluated"] = evaluated;
    if (!detail.empty()) {
        j["detail"] = detail;
    }
    return j;
}

ContractViolation ContractViolation::from_json(const nlohmann::ordered_json& j)
{
    if (j.value("schema", "") != violation_schema) {
        throw UsageError("not a violation record");
    }
    ContractViolation v;
    v.type = j.at("type").get<std::string>();
    v.feature = j.at("feature").get<std::string>();
    v.clause = j.at("clause").get<std::string>();
    v.kind = parse_kind(j.at("kind").get<std::string>());
    v.old_state = j.at("old_state").get<std::string>();
    v.new_state = j.at("new_state").get<std::string>();
    v.args = j.at("args").get<std::vector<std::string>>();
    v.seed = j.at("seed").get<std::uint64_t>();
    v.evaluated = j.value("evaluated", std::vector<std::string>{});
    v.detail = j.value("detail", "");
    return v;
}

bool ContractViolation::same_fault(const ContractViolation& other) const
{
    return feature == other.feature && clause == other.clause && kind == other.kind;
}

bool selected(ClauseStyle style, ClauseFilter filter)
{
    switch (filter) {
    case ClauseFilter::all: return true;
    case ClauseFilter::classic_only: return style == ClauseStyle::classic;
    case ClauseFilter::model_only: return style == ClauseStyle::model;
    }
    return true;
}

bool precondition_holds(const Feature& f, const PreContext& ctx)
{
    if (!f.contract.pre) {
        return true;
    }
    try {
        return f.contract.pre(ctx);
    }
    catch (const model::ModelError&) {
        return false;
    }
    catch (const UsageError&) {
        return false;
    }
}

std::optional<std::string> first_failing(std::span<const Clause> clauses, const CallContext& ctx, ClauseFilter filter,
                                         std::vector<std::string>* evaluated)
{
    for (const auto& c : clauses) {
        if (!selected(c.style, filter)) {
            continue;
        }
        if (evaluated != nullptr) {
            evaluated->push_back(c.id);
        }
        bool ok = false;
        try {
            ok = c.holds(ctx);
        }
        catch (const model::ModelError&) {
            ok = false;
        }
        catch (const UsageError&) {
            ok = false;
        }
        if (!ok) {
            return c.id;
        }
    }
    return std::nullopt;
}

std::optional<std::string> failing_invariant(const ClassSpec& spec, const Object& o, const AbstractState& s,
                                             ClauseFilter filter)
{
    for (const auto& c : spec.invariant) {
        if (!selected(c.style, filter)) {
            continue;
        }
        bool ok = false;
        try {
            ok = c.holds(o, s);
        }
        catch (const model::ModelError&) {
            ok = false;
        }
        catch (const UsageError&) {
            ok = false;
        }
        if (!ok) {
            return c.id;
        }
    }
    return std::nullopt;
}

bool object_equal(const ClassSpec& spec, const Object& x, const Object& y)
{
    return abstract_equal(spec.abstract_state(x), spec.abstract_state(y));
}

bool check_linking_invariant(const ModelSignature& heir, std::string_view parent_query,
                             const std::function<bool(const AbstractState&, const Value&)>& link,
                             const AbstractState& state, const Value& parent_value)
{
    if (!(state.signature() == heir)) {
        throw UsageError("linking invariant applied to a state of another signature");
    }
    if (heir.has(parent_query)) {
        throw UsageError("'" + std::string(parent_query) + "' is a model query of the heir, not a derived one");
    }
    try {
        return link(state, parent_value);
    }
    catch (const model::ModelError&) {
        return false;
    }
}

const ClassSpec& argument_spec(const Registry& registry, const Feature& f, std::size_t i)
{
    if (i >= f.args.size() || f.args[i].kind != ArgKind::object) {
        throw UsageError(f.name + ": argument " + std::to_string(i) + " is not an object argument");
    }
    return registry.get(f.args[i].object_type);
}

std::string describe(const Registry& registry, const Feature& f, std::span<const Argument> args, std::size_t i)
{
    if (auto* v = std::get_if<Value>(&args[i])) {
        return model::to_string(*v);
    }
    const auto& spec = argument_spec(registry, f, i);
    return spec.name + to_string(spec.abstract_state(*std::get<ObjectPtr>(args[i])));
}

namespace {

struct ArgSnapshot {
    std::size_t index;
    const ClassSpec* spec;
    ObjectPtr live;
    ObjectPtr before;
    std::optional<AbstractState> before_state;
    std::optional<AbstractState> after_state;
};

class Checker {
public:
    Checker(const Registry& registry, const ClassSpec& spec, const Feature& f, std::span<const Argument> args,
            const RunContext& run)
        : registry_(registry), spec_(spec), f_(f), args_(args), run_(run)
    {
    }

    ContractViolation violation(ViolationKind kind, std::string clause, const std::string& old_state,
                                const std::string& new_state) const
    {
        ContractViolation v;
        v.type = spec_.name;
        v.feature = f_.name;
        v.clause = std::move(clause);
        v.kind = kind;
        v.old_state = old_state;
        v.new_state = new_state;
        v.args = arg_text_;
        v.seed = run_.seed;
        v.evaluated = evaluated_;
        return v;
    }

    /// Snapshots object arguments and records argument text (pre-call view).
    void snapshot_args()
    {
        for (std::size_t i = 0; i < args_.size(); ++i) {
            arg_text_.push_back(describe(registry_, f_, args_, i));
            if (std::holds_alternative<ObjectPtr>(args_[i])) {
                const auto& spec = argument_spec(registry_, f_, i);
                const auto& live = std::get<ObjectPtr>(args_[i]);
                ArgSnapshot s{i, &spec, live, live->clone(), spec.abstract_state(*live), std::nullopt};
                snaps_.push_back(std::move(s));
            }
        }
    }

    void capture_args_after(CallContext& ctx)
    {
        for (auto& s : snaps_) {
            s.after_state = s.spec->abstract_state(*s.live);
        }
        for (auto& s : snaps_) {
            ctx.set_object_arg(s.index, Side{s.before.get(), &*s.before_state}, Side{s.live.get(), &*s.after_state});
        }
    }

    std::optional<ContractViolation> check_post(const CallContext& ctx, const std::string& old_text,
                                                const std::string& new_text)
    {
        if (auto bad = first_failing(f_.effective_post, ctx, run_.filter, &evaluated_)) {
            return violation(ViolationKind::postcondition, *bad, old_text, new_text);
        }
        return std::nullopt;
    }

    std::optional<ContractViolation> check_invariants(const Object* target, const AbstractState* state,
                                                      const std::string& old_text, const std::string& new_text)
    {
        if (target != nullptr) {
            if (auto bad = failing_invariant(spec_, *target, *state, run_.filter)) {
                evaluated_.push_back(*bad);
                return violation(ViolationKind::class_invariant, *bad, old_text, new_text);
            }
        }
        for (const auto& s : snaps_) {
            if (auto bad = failing_invariant(*s.spec, *s.live, *s.after_state, run_.filter)) {
                evaluated_.push_back(*bad);
                return violation(ViolationKind::class_invariant, *bad, old_text, new_text);
            }
        }
        return std::nullopt;
    }

    std::optional<ContractViolation> check_arg_purity(const std::string& old_text, const std::string& new_text)
    {
        for (const auto& s : snaps_) {
            std::string id = f_.name + "/purity:" + f_.args[s.index].name;
            evaluated_.push_back(id);
            if (!(*s.after_state == *s.before_state)) {
                return violation(ViolationKind::abstract_purity, id, old_text, new_text);
            }
        }
        return std::nullopt;
    }

    CallOutcome body_failure(const std::string& what, const std::string& old_text)
    {
        std::string id = f_.name + "/no-exception";
        evaluated_.push_back(id);
        auto v = violation(ViolationKind::postcondition, id, old_text, "");
        v.detail = what;
        return CallOutcome{CallStatus::violated, std::monostate{}, std::move(v)};
    }

    const Registry& registry_;
    const ClassSpec& spec_;
    const Feature& f_;
    std::span<const Argument> args_;
    const RunContext& run_;
    std::vector<std::string> arg_text_;
    std::vector<std::string> evaluated_;
    std::vector<ArgSnapshot> snaps_;
};

CallOutcome run_on_target(const Registry& registry, const ClassSpec& spec, const Feature& f, const ObjectPtr& target,
                          std::span<const Argument> args, const RunContext& run, bool query)
{
    if (!target) {
        throw UsageError(spec.name + "." + f.name + " called without a target");
    }
    AbstractState old_state = spec.abstract_state(*target);
    PreContext pre{target.get(), &old_state, args, &run};
    if (!precondition_holds(f, pre)) {
        return CallOutcome{CallStatus::rejected, std::monostate{}, std::nullopt};
    }

    Checker ck(registry, spec, f, args, run);
    ck.snapshot_args();
    ObjectPtr old_target = target->clone();
    std::string old_text = to_string(old_state);

    Result result;
    try {
        result = target->call(f.name, args);
    }
    catch (const UsageError&) {
        throw;
    }
    catch (const UnknownFeature&) {
        throw;
    }
    catch (const std::exception& e) {
        return ck.body_failure(e.what(), old_text);
    }

    AbstractState new_state = spec.abstract_state(*target);
    std::string new_text = to_string(new_state);

    CallContext ctx(spec, run, args);
    ctx.set_target(Side{old_target.get(), &old_state}, Side{target.get(), &new_state});
    ck.capture_args_after(ctx);

    std::optional<AbstractState> result_state;
    const ClassSpec* result_spec = nullptr;
    if (auto* o = std::get_if<ObjectPtr>(&result); o != nullptr && *o) {
        result_spec = &registry.get(f.result.object_type);
        result_state = result_spec->abstract_state(**o);
    }
    ctx.set_result(&result, result_state ? &*result_state : nullptr);

    if (auto v = ck.check_post(ctx, old_text, new_text)) {
        return CallOutcome{CallStatus::violated, std::move(result), std::move(v)};
    }
    if (auto v = ck.check_invariants(target.get(), &new_state, old_text, new_text)) {
        return CallOutcome{CallStatus::violated, std::move(result), std::move(v)};
    }
    if (result_spec != nullptr) {
        const auto& obj = *std::get<ObjectPtr>(result);
        if (auto bad = failing_invariant(*result_spec, obj, *result_state, run.filter)) {
            ck.evaluated_.push_back(*bad);
            auto v = ck.violation(ViolationKind::class_invariant, *bad, old_text, new_text);
            return CallOutcome{CallStatus::violated, std::move(result), std::move(v)};
        }
    }
    if (query) {
        std::string id = f.name + "/purity";
        ck.evaluated_.push_back(id);
        if (!(new_state == old_state)) {
            auto v = ck.violation(ViolationKind::abstract_purity, id, old_text, new_text);
            return CallOutcome{CallStatus::violated, std::move(result), std::move(v)};
        }
        if (auto v = ck.check_arg_purity(old_text, new_text)) {
            return CallOutcome{CallStatus::violated, std::move(result), std::move(v)};
        }
    }
    return CallOutcome{CallStatus::passed, std::move(result), std::nullopt};
}

}  // namespace

CallOutcome checked_command(const Registry& registry, const ClassSpec& spec, const Feature& f, const ObjectPtr& target,
                            std::span<const Argument> args, const RunContext& run)
{
    return run_on_target(registry, spec, f, target, args, run, false);
}

CallOutcome checked_query(const Registry& registry, const ClassSpec& spec, const Feature& f, const ObjectPtr& target,
                          std::span<const Argument> args, const RunContext& run)
{
    return run_on_target(registry, spec, f, target, args, run, true);
}

CallOutcome checked_construct(const Registry& registry, const ClassSpec& spec, const Feature& f,
                              std::span<const Argument> args, const RunContext& run)
{
    PreContext pre{nullptr, nullptr, args, &run};
    if (!precondition_holds(f, pre)) {
        return CallOutcome{CallStatus::rejected, std::monostate{}, std::nullopt};
    }
    Checker ck(registry, spec, f, args, run);
    ck.snapshot_args();

    ObjectPtr created;
    try {
        created = f.construct(args, run);
    }
    catch (const UsageError&) {
        throw;
    }
    catch (const std::exception& e) {
        return ck.body_failure(e.what(), "");
    }
    AbstractState state = spec.abstract_state(*created);
    std::string new_text = to_string(state);

    CallContext ctx(spec, run, args);
    ctx.set_target(Side{}, Side{created.get(), &state});
    ck.capture_args_after(ctx);
    Result result = created;
    ctx.set_result(&result, &state);

    if (auto v = ck.check_post(ctx, "", new_text)) {
        return CallOutcome{CallStatus::violated, std::move(result), std::move(v)};
    }
    if (auto v = ck.check_invariants(created.get(), &state, "", new_text)) {
        return CallOutcome{CallStatus::violated, std::move(result), std::move(v)};
    }
    return CallOutcome{CallStatus::passed, std::move(result), std::nullopt};
}

CallOutcome checked_call(const Registry& registry, const ClassSpec& spec, const Feature& f, const ObjectPtr& target,
                         std::span<const Argument> args, const RunContext& run)
{
    switch (f.kind) {
    case FeatureKind::constructor: return checked_construct(registry, spec, f, args, run);
    case FeatureKind::command: return checked_command(registry, spec, f, target, args, run);
    case FeatureKind::value_query:
    case FeatureKind::reference_query:
    case FeatureKind::model_query: return checked_query(registry, spec, f, target, args, run);
    }
    throw UsageError("unknown feature kind");
}

}  // namespace mbc::contracts
