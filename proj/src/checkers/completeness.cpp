#include <algorithm>
#include <cstdio>

#include "mbc/checkers/checkers.hpp"
#include "mbc/model/json.hpp"

namespace mbc::checkers {

using namespace contracts;

std::string_view to_string(WitnessKind k)
{
    switch (k) {
    case WitnessKind::precondition_unsound: return "precondition-unsound";
    case WitnessKind::postcondition_unsound: return "postcondition-unsound";
    case WitnessKind::postcondition_incomplete: return "postcondition-incomplete";
    }
    return "?";
}

namespace {

WitnessKind parse_witness_kind(const std::string& s)
{
    for (auto k : {WitnessKind::precondition_unsound, WitnessKind::postcondition_unsound,
                   WitnessKind::postcondition_incomplete}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw UsageError("unknown witness kind '" + s + "'");
}

}  // namespace

nlohmann::ordered_json Item::to_json() const
{
    nlohmann::ordered_json j;
    if (value) {
        j["value"] = model::to_json(*value);
    }
    if (trace) {
        j["trace"] = checkers::to_json(*trace);
    }
    if (!value && !trace) {
        j["alias"] = true;
    }
    j["text"] = text;
    return j;
}

Item Item::from_json(const nlohmann::ordered_json& j)
{
    Item it;
    if (j.contains("value")) {
        it.value = model::value_from_json(j.at("value"));
    }
    if (j.contains("trace")) {
        it.trace = trace_from_json(j.at("trace"));
    }
    it.text = j.at("text").get<std::string>();
    return it;
}

std::string Outcome::text() const
{
    std::string out = main.text;
    for (const auto& a : object_args) {
        out += " & " + a.text;
    }
    return out;
}

nlohmann::ordered_json Outcome::to_json() const
{
    nlohmann::ordered_json j;
    j["main"] = main.to_json();
    j["object_args"] = nlohmann::ordered_json::array();
    for (const auto& a : object_args) {
        j["object_args"].push_back(a.to_json());
    }
    return j;
}

Outcome Outcome::from_json(const nlohmann::ordered_json& j)
{
    Outcome o;
    o.main = Item::from_json(j.at("main"));
    for (const auto& a : j.at("object_args")) {
        o.object_args.push_back(Item::from_json(a));
    }
    return o;
}

std::string Witness::sort_key() const
{
    // Smaller prestates first, then text order.
    char size[16];
    std::snprintf(size, sizeof size, "%08zu", prestate_text.size());
    std::string key(to_string(kind));
    key += "\x1f" + std::string(size) + prestate_text;
    for (const auto& a : args) {
        key += "\x1f" + a.text;
    }
    key += "\x1f" + first.text() + "\x1f" + second.text();
    return key;
}

nlohmann::ordered_json Witness::to_json() const
{
    nlohmann::ordered_json j;
    j["kind"] = to_string(kind);
    if (prestate) {
        j["prestate"] = checkers::to_json(*prestate);
    }
    j["prestate_text"] = prestate_text;
    j["args"] = nlohmann::ordered_json::array();
    for (const auto& a : args) {
        j["args"].push_back(a.to_json());
    }
    if (other_prestate) {
        j["other_prestate"] = checkers::to_json(*other_prestate);
    }
    j["first"] = first.to_json();
    j["second"] = second.to_json();
    return j;
}

Witness Witness::from_json(const nlohmann::ordered_json& j)
{
    Witness w;
    w.kind = parse_witness_kind(j.at("kind").get<std::string>());
    if (j.contains("prestate")) {
        w.prestate = trace_from_json(j.at("prestate"));
    }
    w.prestate_text = j.at("prestate_text").get<std::string>();
    for (const auto& a : j.at("args")) {
        w.args.push_back(Item::from_json(a));
    }
    if (j.contains("other_prestate")) {
        w.other_prestate = trace_from_json(j.at("other_prestate"));
    }
    w.first = Outcome::from_json(j.at("first"));
    w.second = Outcome::from_json(j.at("second"));
    return w;
}

nlohmann::ordered_json CheckVerdict::to_json() const
{
    nlohmann::ordered_json j;
    j["type"] = type;
    j["feature"] = feature;
    j["kind"] = contracts::to_string(kind);
    j["origin"] = origin;
    j["pre_sound"] = pre_sound;
    j["post_sound"] = post_sound;
    j["post_complete"] = post_complete;
    j["tag"] = tag ? nlohmann::ordered_json(contracts::to_string(*tag)) : nlohmann::ordered_json(nullptr);
    j["states_checked"] = states_checked;
    j["witness_count"] = witness_count;
    j["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : witnesses) {
        j["witnesses"].push_back(w.to_json());
    }
    return j;
}

CheckVerdict CheckVerdict::from_json(const nlohmann::ordered_json& j)
{
    CheckVerdict v;
    v.type = j.at("type").get<std::string>();
    v.feature = j.at("feature").get<std::string>();
    auto kind = j.at("kind").get<std::string>();
    for (auto k : {FeatureKind::constructor, FeatureKind::command, FeatureKind::value_query,
                   FeatureKind::reference_query, FeatureKind::model_query}) {
        if (contracts::to_string(k) == kind) {
            v.kind = k;
        }
    }
    v.origin = j.value("origin", "");
    v.pre_sound = j.at("pre_sound").get<bool>();
    v.post_sound = j.at("post_sound").get<bool>();
    v.post_complete = j.at("post_complete").get<bool>();
    if (!j.at("tag").is_null()) {
        v.tag = parse_cause(j.at("tag").get<std::string>());
    }
    v.states_checked = j.at("states_checked").get<std::size_t>();
    v.witness_count = j.value("witness_count", std::size_t{0});
    for (const auto& w : j.at("witnesses")) {
        v.witnesses.push_back(Witness::from_json(w));
    }
    return v;
}

// ---------------------------------------------------------------------------

namespace {

/// One choice for one argument position.
struct Choice {
    const Value* value = nullptr;
    const EnumeratedObject* object = nullptr;  ///< null with value null: alias of the target
};

Item value_item(const Value& v)
{
    return Item{v, std::nullopt, model::to_string(v)};
}

Item object_item(const ClassSpec& spec, const EnumeratedObject& o)
{
    return Item{std::nullopt, o.trace, spec.name + o.text};
}

Item alias_item()
{
    return Item{std::nullopt, std::nullopt, "Current"};
}

/// Everything one feature check needs, built once per feature.
class FeatureCheck {
public:
    FeatureCheck(Checker& checker, std::string_view type, std::string_view feature)
        : checker_(checker), registry_(checker.registry()), space_(checker.space(type)), spec_(*space_.spec),
          f_(spec_.feature(feature)), run_(checker.run())
    {
        verdict_.type = spec_.name;
        verdict_.feature = f_.name;
        verdict_.kind = f_.kind;
        verdict_.origin = f_.origin;
        verdict_.tag = f_.contract.incompleteness;
        const auto& cfg = checker.config();
        for (std::size_t i = 0; i < f_.args.size(); ++i) {
            const auto& a = f_.args[i];
            if (a.kind == ArgKind::object) {
                const auto& arg_space = checker.space(a.object_type);
                arg_spaces_.push_back(&arg_space);
                object_positions_.push_back(i);
                domains_.emplace_back();
            }
            else {
                arg_spaces_.push_back(nullptr);
                domains_.push_back(argument_domain(a.kind, cfg));
            }
        }
        // Materialize choice lists per position.
        for (std::size_t i = 0; i < f_.args.size(); ++i) {
            std::vector<Choice> cs;
            if (arg_spaces_[i] != nullptr) {
                for (const auto& o : arg_spaces_[i]->objects) {
                    cs.push_back(Choice{nullptr, &o});
                }
                if (f_.kind != FeatureKind::constructor && f_.args[i].object_type == spec_.name) {
                    cs.push_back(Choice{nullptr, nullptr});
                }
            }
            else {
                for (const auto& v : domains_[i]) {
                    cs.push_back(Choice{&v, nullptr});
                }
            }
            choices_.push_back(std::move(cs));
        }
        double work = static_cast<double>(space_.objects.size()) * static_cast<double>(space_.objects.size());
        for (const auto& cs : choices_) {
            work *= static_cast<double>(std::max<std::size_t>(cs.size(), 1));
        }
        if (work > cfg.limit) {
            throw EnumerationRefused(spec_.name + "." + f_.name, work, cfg.limit, "checks");
        }
    }

    /// Calls `fn(tuple)` for every argument tuple.
    template <class Fn>
    void for_each_tuple(Fn&& fn) const
    {
        std::vector<Choice> tuple(f_.args.size());
        for_each_tuple_from(0, tuple, fn);
    }

    std::vector<Argument> materialize(const std::vector<Choice>& tuple, const ObjectPtr& target) const
    {
        std::vector<Argument> args;
        for (const auto& c : tuple) {
            if (c.value != nullptr) {
                args.emplace_back(*c.value);
            }
            else if (c.object != nullptr) {
                args.emplace_back(c.object->object);
            }
            else {
                args.emplace_back(target);
            }
        }
        return args;
    }

    std::vector<Item> arg_items(const std::vector<Choice>& tuple) const
    {
        std::vector<Item> items;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            const auto& c = tuple[i];
            if (c.value != nullptr) {
                items.push_back(value_item(*c.value));
            }
            else if (c.object != nullptr) {
                items.push_back(object_item(*arg_spaces_[i]->spec, *c.object));
            }
            else {
                items.push_back(alias_item());
            }
        }
        return items;
    }

    bool pre(const EnumeratedObject* target, std::span<const Argument> args) const
    {
        PreContext ctx{target ? target->object.get() : nullptr, target ? &target->state : nullptr, args, &run_};
        return precondition_holds(f_, ctx);
    }

    bool post(const CallContext& ctx) const
    {
        return !first_failing(f_.effective_post, ctx, ClauseFilter::all).has_value();
    }

    void check_precondition()
    {
        if (f_.kind == FeatureKind::constructor || !f_.contract.pre) {
            return;
        }
        // Representative of each abstract class, then compare every other member.
        std::map<std::size_t, const EnumeratedObject*> rep;
        for (const auto& o : space_.objects) {
            rep.emplace(o.cls, &o);
        }
        for (const auto& o : space_.objects) {
            const auto* r = rep.at(o.cls);
            if (r == &o) {
                continue;
            }
            for_each_tuple([&](const std::vector<Choice>& tuple) {
                auto a1 = materialize(tuple, r->object);
                auto a2 = materialize(tuple, o.object);
                bool p1 = pre(r, a1);
                bool p2 = pre(&o, a2);
                ++verdict_.states_checked;
                if (p1 != p2) {
                    verdict_.pre_sound = false;
                    Witness w;
                    w.kind = WitnessKind::precondition_unsound;
                    w.prestate = r->trace;
                    w.prestate_text = r->text;
                    w.other_prestate = o.trace;
                    w.args = arg_items(tuple);
                    w.first.main = value_item(Value::boolean(p1));
                    w.second.main = value_item(Value::boolean(p2));
                    witnesses_.push_back(std::move(w));
                }
            });
        }
    }

    void check_command()
    {
        std::vector<std::size_t> free;  // object-argument positions that vary independently
        for (auto i : object_positions_) {
            free.push_back(i);
        }
        for (const auto& p : space_.objects) {
            for_each_tuple([&](const std::vector<Choice>& tuple) {
                auto args = materialize(tuple, p.object);
                if (!pre(&p, args)) {
                    return;
                }
                ++verdict_.states_checked;
                Instance inst(*this, &p, tuple);
                CallContext ctx(spec_, run_, args);
                std::vector<std::size_t> varying;
                for (auto i : free) {
                    if (tuple[i].object == nullptr) {
                        continue;  // alias: follows the target
                    }
                    varying.push_back(i);
                }
                for (const auto& t : space_.objects) {
                    ctx.set_target(Side{p.object.get(), &p.state}, Side{t.object.get(), &t.state});
                    for (auto i : free) {
                        const auto* before = tuple[i].object ? tuple[i].object : &p;
                        const auto* after = tuple[i].object ? tuple[i].object : &t;
                        ctx.set_object_arg(i, Side{before->object.get(), &before->state},
                                           Side{after->object.get(), &after->state});
                    }
                    if (varying.empty()) {
                        inst.record({t.cls}, post(ctx), Outcome{object_item(spec_, t), after_items(tuple, {})});
                        continue;
                    }
                    std::vector<std::size_t> at(varying.size(), 0);
                    bool first = true;
                    while (true) {
                        std::vector<const EnumeratedObject*> afters;
                        std::vector<std::size_t> key{t.cls};
                        for (std::size_t k = 0; k < varying.size(); ++k) {
                            auto i = varying[k];
                            const auto& a = arg_spaces_[i]->objects[at[k]];
                            afters.push_back(&a);
                            key.push_back(a.cls);
                            ctx.set_object_arg(i, Side{tuple[i].object->object.get(), &tuple[i].object->state},
                                               Side{a.object.get(), &a.state});
                        }
                        ctx.reset_tracking();
                        bool ok = post(ctx);
                        bool touched = false;
                        for (auto i : varying) {
                            touched = touched || ctx.touched_after_arg(i);
                        }
                        Outcome out{object_item(spec_, t), after_items(tuple, afters)};
                        if (first && !ok && !touched) {
                            // The failing clause never looked at the argument poststates.
                            inst.record_all_false(t.cls, std::move(out));
                            break;
                        }
                        first = false;
                        inst.record(std::move(key), ok, std::move(out));
                        if (!advance(at, varying)) {
                            break;
                        }
                    }
                }
                inst.finish();
            });
        }
    }

    void check_query()
    {
        bool constructor = f_.kind == FeatureKind::constructor;
        // Candidate results.
        const StateSpace* result_space = nullptr;
        std::vector<Value> result_values;
        if (constructor) {
            result_space = &space_;
        }
        else if (f_.result.is_object()) {
            result_space = &checker_.space(f_.result.object_type);
        }
        else if (f_.result.sort) {
            const auto& cfg = checker_.config();
            switch (*f_.result.sort) {
            case Sort::boolean: result_values = argument_domain(ArgKind::boolean, cfg); break;
            case Sort::reference: result_values = argument_domain(ArgKind::element, cfg); break;
            case Sort::integer:
                for (auto i = -cfg.result_bound(); i <= cfg.result_bound(); ++i) {
                    result_values.push_back(Value::integer(i));
                }
                break;
            default: throw UsageError(f_.name + ": no candidate results for this sort");
            }
        }
        else {
            throw UsageError(f_.name + ": query without a result");
        }

        auto run_prestate = [&](const EnumeratedObject* p) {
            for_each_tuple([&](const std::vector<Choice>& tuple) {
                auto args = materialize(tuple, p ? p->object : ObjectPtr{});
                if (!pre(p, args)) {
                    return;
                }
                ++verdict_.states_checked;
                Instance inst(*this, p, tuple);
                CallContext ctx(spec_, run_, args);
                if (p != nullptr) {
                    ctx.set_target(Side{p->object.get(), &p->state}, Side{p->object.get(), &p->state});
                }
                for (auto i : object_positions_) {
                    const auto* o = tuple[i].object ? tuple[i].object : p;
                    ctx.set_object_arg(i, Side{o->object.get(), &o->state}, Side{o->object.get(), &o->state});
                }
                auto unchanged = after_items(tuple, {});
                if (result_space != nullptr) {
                    for (const auto& r : result_space->objects) {
                        Result result = r.object;
                        if (constructor) {
                            ctx.set_target(Side{}, Side{r.object.get(), &r.state});
                        }
                        ctx.set_result(&result, &r.state);
                        inst.record({r.cls}, post(ctx), Outcome{object_item(*result_space->spec, r), unchanged});
                    }
                }
                else {
                    for (std::size_t k = 0; k < result_values.size(); ++k) {
                        Result result = result_values[k];
                        ctx.set_result(&result, nullptr);
                        inst.record({k}, post(ctx), Outcome{value_item(result_values[k]), unchanged});
                    }
                }
                inst.finish();
            });
        };

        if (constructor) {
            run_prestate(nullptr);
        }
        else {
            for (const auto& p : space_.objects) {
                run_prestate(&p);
            }
        }
    }

    CheckVerdict finish()
    {
        std::sort(witnesses_.begin(), witnesses_.end(),
                  [](const Witness& a, const Witness& b) { return a.sort_key() < b.sort_key(); });
        verdict_.witness_count = witnesses_.size();
        // Keep witnesses of every failing flag even after truncation.
        std::vector<Witness> kept;
        for (auto kind : {WitnessKind::precondition_unsound, WitnessKind::postcondition_unsound,
                          WitnessKind::postcondition_incomplete}) {
            std::size_t n = 0;
            for (auto& w : witnesses_) {
                if (w.kind == kind && n < checker_.witness_limit) {
                    kept.push_back(w);
                    ++n;
                }
            }
        }
        verdict_.witnesses = std::move(kept);
        return verdict_;
    }

private:
    /// Verdicts for one (prestate, arguments) pair.
    class Instance {
    public:
        Instance(FeatureCheck& owner, const EnumeratedObject* p, const std::vector<Choice>& tuple)
            : owner_(owner), p_(p), tuple_(tuple)
        {
        }

        void record(std::vector<std::size_t> key, bool ok, Outcome out)
        {
            auto it = seen_.find(key);
            if (it != seen_.end()) {
                if (it->second.ok != ok) {
                    unsound(it->second, Entry{ok, std::move(out)});
                }
                return;
            }
            if (ok) {
                if (auto w = all_false_.find(key.front()); w != all_false_.end()) {
                    // Same target poststate, same argument poststates: false there too.
                    unsound(Entry{false, Outcome{w->second.out.main, out.object_args}}, Entry{ok, out});
                }
            }
            seen_.emplace(std::move(key), Entry{ok, std::move(out)});
        }

        void record_all_false(std::size_t cls, Outcome out)
        {
            Entry e{false, std::move(out)};
            for (auto it = seen_.lower_bound({cls}); it != seen_.end() && it->first.front() == cls; ++it) {
                if (it->second.ok) {
                    unsound(Entry{false, Outcome{e.out.main, it->second.out.object_args}}, it->second);
                    break;
                }
            }
            all_false_.emplace(cls, std::move(e));
        }

        void finish()
        {
            const Entry* first = nullptr;
            for (const auto& [key, e] : seen_) {
                if (!e.ok) {
                    continue;
                }
                if (first == nullptr) {
                    first = &e;
                    continue;
                }
                owner_.verdict_.post_complete = false;
                auto w = base(WitnessKind::postcondition_incomplete);
                w.first = first->out;
                w.second = e.out;
                owner_.witnesses_.push_back(std::move(w));
                break;
            }
        }

    private:
        struct Entry {
            bool ok;
            Outcome out;
        };

        Witness base(WitnessKind kind) const
        {
            Witness w;
            w.kind = kind;
            if (p_ != nullptr) {
                w.prestate = p_->trace;
                w.prestate_text = p_->text;
            }
            w.args = owner_.arg_items(tuple_);
            return w;
        }

        void unsound(const Entry& a, const Entry& b)
        {
            owner_.verdict_.post_sound = false;
            if (reported_unsound_) {
                return;
            }
            reported_unsound_ = true;
            auto w = base(WitnessKind::postcondition_unsound);
            // First outcome satisfies the postcondition, second does not.
            w.first = a.ok ? a.out : b.out;
            w.second = a.ok ? b.out : a.out;
            owner_.witnesses_.push_back(std::move(w));
        }

        FeatureCheck& owner_;
        const EnumeratedObject* p_;
        const std::vector<Choice>& tuple_;
        std::map<std::vector<std::size_t>, Entry> seen_;
        std::map<std::size_t, Entry> all_false_;
        bool reported_unsound_ = false;
    };

    std::vector<Item> after_items(const std::vector<Choice>& tuple,
                                  const std::vector<const EnumeratedObject*>& varying_afters) const
    {
        std::vector<Item> items;
        std::size_t k = 0;
        for (auto i : object_positions_) {
            if (tuple[i].object == nullptr) {
                items.push_back(alias_item());
            }
            else if (k < varying_afters.size()) {
                items.push_back(object_item(*arg_spaces_[i]->spec, *varying_afters[k++]));
            }
            else {
                items.push_back(object_item(*arg_spaces_[i]->spec, *tuple[i].object));
            }
        }
        return items;
    }

    bool advance(std::vector<std::size_t>& at, const std::vector<std::size_t>& varying) const
    {
        for (std::size_t k = at.size(); k-- > 0;) {
            if (++at[k] < arg_spaces_[varying[k]]->objects.size()) {
                return true;
            }
            at[k] = 0;
        }
        return false;
    }

    template <class Fn>
    void for_each_tuple_from(std::size_t i, std::vector<Choice>& tuple, Fn& fn) const
    {
        if (i == tuple.size()) {
            fn(static_cast<const std::vector<Choice>&>(tuple));
            return;
        }
        for (const auto& c : choices_[i]) {
            tuple[i] = c;
            for_each_tuple_from(i + 1, tuple, fn);
        }
    }

    Checker& checker_;
    const Registry& registry_;
    const StateSpace& space_;
    const ClassSpec& spec_;
    const Feature& f_;
    const RunContext& run_;
    std::vector<const StateSpace*> arg_spaces_;
    std::vector<std::size_t> object_positions_;
    std::vector<std::vector<Value>> domains_;
    std::vector<std::vector<Choice>> choices_;
    CheckVerdict verdict_;
    std::vector<Witness> witnesses_;
};

}  // namespace

Checker::Checker(const Registry& registry, EnumerationConfig cfg, RunContext run)
    : registry_(&registry), cfg_(cfg), run_(std::move(run))
{
    run_.universe = cfg_.universe;
    run_.filter = ClauseFilter::all;
}

const StateSpace& Checker::space(std::string_view type)
{
    auto it = spaces_.find(type);
    if (it == spaces_.end()) {
        it = spaces_.emplace(std::string(type), enumerate_states(*registry_, type, cfg_, run_)).first;
    }
    return it->second;
}

CheckVerdict Checker::check_precondition_soundness(std::string_view type, std::string_view feature)
{
    FeatureCheck fc(*this, type, feature);
    fc.check_precondition();
    return fc.finish();
}

CheckVerdict Checker::check_command_completeness(std::string_view type, std::string_view feature)
{
    FeatureCheck fc(*this, type, feature);
    if (registry_->get(type).feature(feature).kind != FeatureKind::command) {
        throw UsageError(std::string(type) + "." + std::string(feature) + " is not a command");
    }
    fc.check_command();
    return fc.finish();
}

CheckVerdict Checker::check_query_completeness(std::string_view type, std::string_view feature)
{
    const auto& f = registry_->get(type).feature(feature);
    if (f.kind == FeatureKind::command || f.kind == FeatureKind::model_query) {
        throw UsageError(std::string(type) + "." + std::string(feature) + " is not a query or constructor");
    }
    FeatureCheck fc(*this, type, feature);
    fc.check_query();
    return fc.finish();
}

CheckVerdict Checker::check_feature(std::string_view type, std::string_view feature)
{
    const auto& f = registry_->get(type).feature(feature);
    if (f.kind == FeatureKind::model_query) {
        throw UsageError(std::string(type) + "." + std::string(feature) + " is a model query");
    }
    FeatureCheck fc(*this, type, feature);
    fc.check_precondition();
    if (f.kind == FeatureKind::command) {
        fc.check_command();
    }
    else {
        fc.check_query();
    }
    return fc.finish();
}

// ---------------------------------------------------------------------------
// Independent re-verification

namespace {

struct Resolved {
    ObjectPtr object;
    std::optional<Value> value;
};

Resolved resolve(const Registry& registry, std::string_view type, const Item& item, const ObjectPtr& alias,
                 const RunContext& run)
{
    if (item.value) {
        return {nullptr, *item.value};
    }
    if (item.trace) {
        return {rebuild(registry, type, *item.trace, run), std::nullopt};
    }
    return {alias, std::nullopt};
}

}  // namespace

bool reverify(const Registry& registry, const CheckVerdict& verdict, const Witness& w, const RunContext& given)
{
    RunContext run = given;
    run.filter = ClauseFilter::all;
    const auto& spec = registry.get(verdict.type);
    const auto& f = spec.feature(verdict.feature);
    bool constructor = f.kind == FeatureKind::constructor;

    ObjectPtr pre_obj = w.prestate ? rebuild(registry, spec.name, *w.prestate, run) : nullptr;
    if (!constructor && !pre_obj) {
        return false;
    }
    std::vector<Argument> args;
    for (std::size_t i = 0; i < f.args.size() && i < w.args.size(); ++i) {
        auto type = f.args[i].kind == ArgKind::object ? f.args[i].object_type : spec.name;
        auto r = resolve(registry, type, w.args[i], pre_obj, run);
        if (r.value) {
            args.emplace_back(*r.value);
        }
        else {
            args.emplace_back(r.object);
        }
    }
    if (args.size() != f.args.size()) {
        return false;
    }
    std::optional<AbstractState> pre_state;
    if (pre_obj) {
        pre_state = spec.abstract_state(*pre_obj);
    }

    if (w.kind == WitnessKind::precondition_unsound) {
        if (!w.other_prestate) {
            return false;
        }
        ObjectPtr other = rebuild(registry, spec.name, *w.other_prestate, run);
        auto other_state = spec.abstract_state(*other);
        if (!abstract_equal(*pre_state, other_state)) {
            return false;
        }
        // Aliased arguments follow their own prestate.
        std::vector<Argument> other_args = args;
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            if (!w.args[i].value && !w.args[i].trace) {
                other_args[i] = other;
            }
        }
        bool p1 = precondition_holds(f, PreContext{pre_obj.get(), &*pre_state, args, &run});
        bool p2 = precondition_holds(f, PreContext{other.get(), &other_state, other_args, &run});
        return p1 != p2;
    }

    if (!precondition_holds(f, PreContext{pre_obj.get(), pre_state ? &*pre_state : nullptr, args, &run})) {
        return false;
    }

    // Evaluates the effective postcondition on one outcome; also yields the
    // abstract outcome for comparison.
    struct Evaluated {
        bool holds;
        std::vector<std::string> abstract;
    };
    auto evaluate = [&](const Outcome& out) -> Evaluated {
        CallContext ctx(spec, run, args);
        std::vector<AbstractState> keep;
        keep.reserve(2 + f.args.size());
        std::vector<ObjectPtr> objects;
        Evaluated e{false, {}};

        Result result;
        ObjectPtr main_obj;
        if (f.kind == FeatureKind::command || constructor) {
            main_obj = rebuild(registry, spec.name, *out.main.trace, run);
            keep.push_back(spec.abstract_state(*main_obj));
            e.abstract.push_back(to_string(keep.back()));
            if (constructor) {
                ctx.set_target(Side{}, Side{main_obj.get(), &keep.back()});
                result = main_obj;
                ctx.set_result(&result, &keep.back());
            }
            else {
                ctx.set_target(Side{pre_obj.get(), &*pre_state}, Side{main_obj.get(), &keep.back()});
            }
        }
        else {
            ctx.set_target(Side{pre_obj.get(), &*pre_state}, Side{pre_obj.get(), &*pre_state});
            if (out.main.value) {
                result = *out.main.value;
                e.abstract.push_back(model::to_string(*out.main.value));
                ctx.set_result(&result, nullptr);
            }
            else {
                auto obj = rebuild(registry, f.result.object_type, *out.main.trace, run);
                keep.push_back(registry.get(f.result.object_type).abstract_state(*obj));
                e.abstract.push_back(to_string(keep.back()));
                result = obj;
                ctx.set_result(&result, &keep.back());
            }
        }
        std::vector<AbstractState> befores;
        befores.reserve(f.args.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            if (f.args[i].kind != ArgKind::object) {
                continue;
            }
            const auto& arg_spec = registry.get(f.args[i].object_type);
            const auto& before_obj = std::get<ObjectPtr>(args[i]);
            befores.push_back(arg_spec.abstract_state(*before_obj));
            ObjectPtr after_obj;
            if (k < out.object_args.size() && out.object_args[k].trace && f.kind == FeatureKind::command) {
                after_obj = rebuild(registry, arg_spec.name, *out.object_args[k].trace, run);
            }
            else if (k < out.object_args.size() && !out.object_args[k].trace && f.kind == FeatureKind::command) {
                after_obj = main_obj;  // alias
            }
            else {
                after_obj = before_obj;
            }
            ++k;
            objects.push_back(after_obj);
            keep.push_back(arg_spec.abstract_state(*after_obj));
            e.abstract.push_back(to_string(keep.back()));
            ctx.set_object_arg(i, Side{before_obj.get(), &befores.back()}, Side{after_obj.get(), &keep.back()});
        }
        e.holds = !first_failing(f.effective_post, ctx, ClauseFilter::all).has_value();
        return e;
    };

    auto a = evaluate(w.first);
    auto b = evaluate(w.second);
    if (w.kind == WitnessKind::postcondition_incomplete) {
        return a.holds && b.holds && a.abstract != b.abstract;
    }
    return a.abstract == b.abstract && a.holds && !b.holds;
}

}  // namespace mbc::checkers
