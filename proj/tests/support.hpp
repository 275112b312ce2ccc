// Shared helpers for the test suites.

#pragma once

#include <doctest.h>

#include <vector>

#include "mbc/containers/containers.hpp"
#include "mbc/contracts/engine.hpp"
#include "mbc/model/value.hpp"

namespace mbc::test {

using contracts::Argument;
using contracts::CallOutcome;
using contracts::CallStatus;
using contracts::ObjectPtr;
using model::Value;

inline Value tok(std::uint32_t id)
{
    return Value::reference(id);
}

inline const Value a = tok(0);
inline const Value b = tok(1);
inline const Value c = tok(2);
inline const Value d = tok(3);

inline Value num(std::int64_t i)
{
    return Value::integer(i);
}

inline std::string text(const Value& v)
{
    return model::to_string(v);
}

/// Every sequence of length <= max_len over `tokens`, shortest first.
inline std::vector<model::Sequence> all_sequences(const std::vector<Value>& tokens, std::size_t max_len)
{
    std::vector<model::Sequence> out{model::Sequence()};
    std::size_t from = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t to = out.size();
        for (std::size_t i = from; i < to; ++i) {
            for (const auto& t : tokens) {
                out.push_back(out[i].extended(t));
            }
        }
        from = to;
    }
    return out;
}

/// Checked calls against a registry, building objects through constructors.
class Driver {
public:
    explicit Driver(contracts::Registry registry, contracts::RunContext run = {})
        : registry_(std::move(registry)), run_(std::move(run))
    {
    }

    ObjectPtr make(const std::string& type, const std::string& ctor, std::vector<Argument> args = {})
    {
        const auto& spec = registry_.get(type);
        auto out = contracts::checked_construct(registry_, spec, spec.feature(ctor), args, run_);
        REQUIRE(out.status == CallStatus::passed);
        return std::get<ObjectPtr>(out.result);
    }

    CallOutcome call(const std::string& type, const ObjectPtr& target, const std::string& feature,
                     std::vector<Argument> args = {})
    {
        const auto& spec = registry_.get(type);
        return contracts::checked_call(registry_, spec, spec.feature(feature), target, args, run_);
    }

    /// Call that must pass.
    contracts::Result ok(const std::string& type, const ObjectPtr& target, const std::string& feature,
                         std::vector<Argument> args = {})
    {
        auto out = call(type, target, feature, std::move(args));
        if (out.violation) {
            FAIL_CHECK(out.violation->clause);
        }
        REQUIRE(out.status == CallStatus::passed);
        return out.result;
    }

    contracts::AbstractState state(const std::string& type, const ObjectPtr& o) const
    {
        return registry_.get(type).abstract_state(*o);
    }

    std::string state_text(const std::string& type, const ObjectPtr& o) const
    {
        return contracts::to_string(state(type, o));
    }

    const contracts::Registry& registry() const { return registry_; }
    contracts::RunContext& run() { return run_; }

private:
    contracts::Registry registry_;
    contracts::RunContext run_;
};

}  // namespace mbc::test
