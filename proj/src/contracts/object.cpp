#include "mbc/contracts/object.hpp"

#include <atomic>

namespace mbc::contracts {

namespace {

std::atomic<ObjectId> next_identity{1};

}  // namespace

Object::Object() : identity_(next_identity.fetch_add(1, std::memory_order_relaxed)) {}

Object::Object(const Object&) : identity_(next_identity.fetch_add(1, std::memory_order_relaxed)) {}

const Value& value_arg(std::span<const Argument> args, std::size_t i)
{
    if (i >= args.size()) {
        throw UsageError("missing argument " + std::to_string(i));
    }
    auto* v = std::get_if<Value>(&args[i]);
    if (v == nullptr) {
        throw UsageError("argument " + std::to_string(i) + " is an object, expected a value");
    }
    return *v;
}

model::Ref element_arg(std::span<const Argument> args, std::size_t i)
{
    return value_arg(args, i).as_reference();
}

std::int64_t integer_arg(std::span<const Argument> args, std::size_t i)
{
    return value_arg(args, i).as_integer();
}

bool boolean_arg(std::span<const Argument> args, std::size_t i)
{
    return value_arg(args, i).as_boolean();
}

const ObjectPtr& object_arg(std::span<const Argument> args, std::size_t i)
{
    if (i >= args.size()) {
        throw UsageError("missing argument " + std::to_string(i));
    }
    auto* o = std::get_if<ObjectPtr>(&args[i]);
    if (o == nullptr || !*o) {
        throw UsageError("argument " + std::to_string(i) + " is not an object");
    }
    return *o;
}

std::string to_string(const Argument& a)
{
    if (auto* v = std::get_if<Value>(&a)) {
        return model::to_string(*v);
    }
    const auto& o = std::get<ObjectPtr>(a);
    return std::string(o->type_name()) + "#" + std::to_string(o->identity());
}

std::string to_string(const Result& r)
{
    if (std::holds_alternative<std::monostate>(r)) {
        return "()";
    }
    if (auto* v = std::get_if<Value>(&r)) {
        return model::to_string(*v);
    }
    const auto& o = std::get<ObjectPtr>(r);
    return std::string(o->type_name()) + "#" + std::to_string(o->identity());
}

}  // namespace mbc::contracts
