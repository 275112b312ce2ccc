// A small specified class with deliberately flawed features, for checker
// and engine tests. Model: (set). A hidden `flag` is toggled by `touch`.

#pragma once

#include <set>

#include "mbc/contracts/engine.hpp"
#include "mbc/contracts/spec.hpp"

namespace mbc::test {

using namespace contracts;

class Bin final : public Object {
public:
    std::string_view type_name() const override { return "Bin"; }

    Value model(std::string_view query) const override
    {
        if (query != "set") {
            throw UnknownFeature("Bin has no model query '" + std::string(query) + "'");
        }
        std::vector<Value> items;
        for (auto id : items_) {
            items.push_back(Value::reference(id));
        }
        return model::Set::of(std::move(items));
    }

    Result call(std::string_view feature, std::span<const Argument> args) override
    {
        if (feature == "add") {
            items_.insert(element_arg(args, 0).id);
            return {};
        }
        if (feature == "touch") {
            flag_ = !flag_;
            return {};
        }
        if (feature == "ready") {
            return {};
        }
        if (feature == "count") {
            return Value::integer(static_cast<std::int64_t>(items_.size()));
        }
        if (feature == "sneaky_count") {
            items_.insert(0);
            return Value::integer(static_cast<std::int64_t>(items_.size()));
        }
        if (feature == "one") {
            auto r = std::make_shared<Bin>();
            r->items_.insert(0);
            return ObjectPtr(r);
        }
        throw UnknownFeature("Bin has no feature '" + std::string(feature) + "'");
    }

    ObjectPtr clone() const override { return std::make_shared<Bin>(*this); }
    std::size_t measure() const override { return items_.size(); }
    std::string concrete_key() const override { return model::to_string(model("set")) + (flag_ ? "*" : ""); }

    bool flag() const { return flag_; }

private:
    std::set<std::uint32_t> items_;
    bool flag_ = false;
};

inline ClassSpec bin_spec()
{
    auto set_of = [](const Value& v) { return v.as_set(); };
    ClassSpec s;
    s.name = "Bin";
    s.signature = std::make_shared<const ModelSignature>(std::vector<ModelQuery>{{"set", Sort::set}});

    Feature make;
    make.name = "make";
    make.kind = FeatureKind::constructor;
    make.result.object_type = "Bin";
    make.contract.post = {{"make/set", [=](const CallContext& c) { return set_of(c.now("set")).is_empty(); }}};
    make.contract.mentioned = {"set"};
    make.construct = [](std::span<const Argument>, const RunContext&) -> ObjectPtr { return std::make_shared<Bin>(); };
    s.features.push_back(make);

    Feature add;
    add.name = "add";
    add.args = {{"v", ArgKind::element}};
    add.contract.post = {{"add/set", [=](const CallContext& c) {
                              return set_of(c.now("set")) == set_of(c.old("set")).extended(c.arg(0));
                          }}};
    add.contract.mentioned = {"set"};
    s.features.push_back(add);

    Feature touch;
    touch.name = "touch";
    s.features.push_back(touch);

    // Precondition reads the hidden flag: unsound.
    Feature ready;
    ready.name = "ready";
    ready.contract.pre = [](const PreContext& c) { return dynamic_cast<const Bin&>(*c.target).flag(); };
    s.features.push_back(ready);

    Feature count;
    count.name = "count";
    count.kind = FeatureKind::value_query;
    count.result.sort = Sort::integer;
    count.contract.post = {{"count/result", [=](const CallContext& c) {
                                return c.result().as_integer() == set_of(c.old("set")).count();
                            }}};
    s.features.push_back(count);

    // Changes the model while claiming to be a query.
    Feature sneaky = count;
    sneaky.name = "sneaky_count";
    sneaky.contract.post = {};
    s.features.push_back(sneaky);

    // Only pins the size of the result.
    Feature one;
    one.name = "one";
    one.kind = FeatureKind::value_query;
    one.result.object_type = "Bin";
    one.contract.post = {{"one/count", [=](const CallContext& c) { return set_of(c.result_model("set")).count() == 1; }}};
    s.features.push_back(one);
    return s;
}

inline Registry bin_registry()
{
    Registry r;
    r.add(bin_spec());
    return r;
}

}  // namespace mbc::test
