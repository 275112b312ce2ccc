// Shorthand for writing class specifications.

#pragma once

#include <memory>

#include "mbc/containers/containers.hpp"

namespace mbc::containers::build {

using namespace contracts;
using model::Bag;
using model::IntInterval;
using model::Map;
using model::Relation;
using model::Sequence;
using model::Set;

inline ArgSpec element(std::string name)
{
    return {std::move(name), ArgKind::element};
}

inline ArgSpec integer(std::string name)
{
    return {std::move(name), ArgKind::integer};
}

inline ArgSpec boolean(std::string name)
{
    return {std::move(name), ArgKind::boolean};
}

inline ArgSpec path(std::string name)
{
    return {std::move(name), ArgKind::path};
}

inline ArgSpec object(std::string name, std::string type, Binding binding = Binding::reference)
{
    return {std::move(name), ArgKind::object, binding, std::move(type)};
}

inline Clause model_clause(std::string id, std::function<bool(const CallContext&)> holds)
{
    return {std::move(id), std::move(holds), ClauseStyle::model};
}

inline Clause classic_clause(std::string id, std::function<bool(const CallContext&)> holds)
{
    return {std::move(id), std::move(holds), ClauseStyle::classic};
}

inline InvariantClause model_invariant(std::string id, std::function<bool(const Object&, const AbstractState&)> holds)
{
    return {std::move(id), std::move(holds), ClauseStyle::model};
}

inline InvariantClause classic_invariant(std::string id, std::function<bool(const Object&, const AbstractState&)> holds)
{
    return {std::move(id), std::move(holds), ClauseStyle::classic};
}

inline SignaturePtr signature(std::vector<ModelQuery> queries)
{
    return std::make_shared<const ModelSignature>(std::move(queries));
}

inline ResultSpec returns(Sort s)
{
    return {s, {}};
}

inline ResultSpec returns_object(std::string type)
{
    return {std::nullopt, std::move(type)};
}

inline Value integer_value(std::int64_t i)
{
    return Value::integer(i);
}

inline Value boolean_value(bool b)
{
    return Value::boolean(b);
}

/// Throws contracts::UnknownFeature.
[[noreturn]] void unknown_feature(std::string_view type, std::string_view feature);

}  // namespace mbc::containers::build
