#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "mbc/contracts/signature.hpp"

namespace mbc::contracts {

using ObjectId = std::uint64_t;

class Object;
using ObjectPtr = std::shared_ptr<Object>;

/// An actual argument: a model value (elements, integers, paths) or a
/// reference to another specified object.
using Argument = std::variant<Value, ObjectPtr>;

/// What a feature call returns: nothing (commands), a model value, or an object.
using Result = std::variant<std::monostate, Value, ObjectPtr>;

/// A feature name the object does not implement was invoked.
class UnknownFeature : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A specified object: concrete implementation behind a contracted interface.
///
/// Implementations expose their model queries through `model` and every other
/// public feature through `call`. They never see contracts; the engine wraps
/// every call with checking.
class Object {
public:
    Object();
    /// Copies get a fresh identity.
    Object(const Object&);
    Object& operator=(const Object&) = delete;
    virtual ~Object() = default;

    ObjectId identity() const { return identity_; }

    virtual std::string_view type_name() const = 0;
    /// Value of a model query; throws UnknownFeature for other names.
    virtual Value model(std::string_view query) const = 0;
    virtual Result call(std::string_view feature, std::span<const Argument> args) = 0;
    /// Deep copy with a fresh identity.
    virtual ObjectPtr clone() const = 0;
    /// Number of stored elements, used to bound enumeration.
    virtual std::size_t measure() const = 0;
    /// Text that distinguishes concretely different objects (including
    /// hidden representation details).
    virtual std::string concrete_key() const = 0;

private:
    ObjectId identity_;
};

inline bool reference_equal(const Object& x, const Object& y)
{
    return x.identity() == y.identity();
}

// Argument accessors for implementations. All throw UsageError on a kind mismatch.
const Value& value_arg(std::span<const Argument> args, std::size_t i);
model::Ref element_arg(std::span<const Argument> args, std::size_t i);
std::int64_t integer_arg(std::span<const Argument> args, std::size_t i);
bool boolean_arg(std::span<const Argument> args, std::size_t i);
const ObjectPtr& object_arg(std::span<const Argument> args, std::size_t i);

template <class T>
T& object_arg_as(std::span<const Argument> args, std::size_t i)
{
    auto* p = dynamic_cast<T*>(object_arg(args, i).get());
    if (p == nullptr) {
        throw UsageError("argument " + std::to_string(i) + " has the wrong object type");
    }
    return *p;
}

std::string to_string(const Argument& a);
std::string to_string(const Result& r);

}  // namespace mbc::contracts
