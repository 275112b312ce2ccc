#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mbc/model/value.hpp"

namespace mbc::contracts {

using model::Value;

/// Misuse of the engine API (e.g. comparing states of different signatures).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A specification is malformed (unknown model-query name, duplicate name...).
class ConfigurationError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Evaluating a model query failed or produced a value of the wrong sort.
class SpecificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Sort { boolean, integer, reference, sequence, set, bag, map, relation };

std::string_view to_string(Sort s);
bool has_sort(const Value& v, Sort s);

struct ModelQuery {
    std::string name;
    Sort sort;
};

/// The ordered list of model queries of a class (its `note model:` clause).
class ModelSignature {
public:
    ModelSignature() = default;
    /// Throws ConfigurationError on duplicate names.
    explicit ModelSignature(std::vector<ModelQuery> queries);

    std::span<const ModelQuery> queries() const { return queries_; }
    std::size_t size() const { return queries_.size(); }
    std::optional<std::size_t> position(std::string_view name) const;
    bool has(std::string_view name) const { return position(name).has_value(); }

    friend bool operator==(const ModelSignature& a, const ModelSignature& b);

private:
    std::vector<ModelQuery> queries_;
};

using SignaturePtr = std::shared_ptr<const ModelSignature>;

/// A point of the abstract object space: one model value per model query,
/// in signature order.
class AbstractState {
public:
    /// Throws SpecificationError when arity or sorts do not match.
    AbstractState(SignaturePtr signature, std::vector<Value> values);

    const ModelSignature& signature() const { return *signature_; }
    const SignaturePtr& signature_ptr() const { return signature_; }
    std::span<const Value> values() const { return values_; }

    /// Throws UsageError for names outside the signature.
    const Value& operator[](std::string_view name) const;

    /// Componentwise comparison; callers compare states of one signature.
    friend bool operator==(const AbstractState& a, const AbstractState& b) { return a.values_ == b.values_; }
    friend std::strong_ordering operator<=>(const AbstractState& a, const AbstractState& b)
    {
        return std::lexicographical_compare_three_way(a.values_.begin(), a.values_.end(),
                                                      b.values_.begin(), b.values_.end());
    }

private:
    SignaturePtr signature_;
    std::vector<Value> values_;
};

/// `(⟨a,b⟩, 1)`; a single component is written `(⟨a⟩,)`.
std::string to_string(const AbstractState& s);

/// Model-tuple equality. Throws UsageError when signatures differ.
bool abstract_equal(const AbstractState& a, const AbstractState& b);

}  // namespace mbc::contracts
