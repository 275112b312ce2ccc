#include "mbc/contracts/signature.hpp"

#include <algorithm>

namespace mbc::contracts {

std::string_view to_string(Sort s)
{
    switch (s) {
    case Sort::boolean: return "BOOLEAN";
    case Sort::integer: return "INTEGER";
    case Sort::reference: return "G";
    case Sort::sequence: return "MML_SEQUENCE";
    case Sort::set: return "MML_SET";
    case Sort::bag: return "MML_BAG";
    case Sort::map: return "MML_MAP";
    case Sort::relation: return "MML_RELATION";
    }
    return "?";
}

bool has_sort(const Value& v, Sort s)
{
    return static_cast<int>(v.tag()) == static_cast<int>(s);
}

ModelSignature::ModelSignature(std::vector<ModelQuery> queries) : queries_(std::move(queries))
{
    for (std::size_t i = 0; i < queries_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (queries_[i].name == queries_[j].name) {
                throw ConfigurationError("duplicate model query '" + queries_[i].name + "'");
            }
        }
    }
}

std::optional<std::size_t> ModelSignature::position(std::string_view name) const
{
    auto it = std::find_if(queries_.begin(), queries_.end(), [&](const ModelQuery& q) { return q.name == name; });
    if (it == queries_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - queries_.begin());
}

bool operator==(const ModelSignature& a, const ModelSignature& b)
{
    return std::equal(a.queries_.begin(), a.queries_.end(), b.queries_.begin(), b.queries_.end(),
                      [](const ModelQuery& x, const ModelQuery& y) { return x.name == y.name && x.sort == y.sort; });
}

AbstractState::AbstractState(SignaturePtr signature, std::vector<Value> values)
    : signature_(std::move(signature)), values_(std::move(values))
{
    if (!signature_) {
        throw UsageError("abstract state without a signature");
    }
    if (values_.size() != signature_->size()) {
        throw SpecificationError("abstract state has " + std::to_string(values_.size()) + " components, signature has " +
                                 std::to_string(signature_->size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const auto& q = signature_->queries()[i];
        if (!has_sort(values_[i], q.sort)) {
            throw SpecificationError("model query '" + q.name + "' returned " + std::string(model::to_string(values_[i].tag())) +
                                     ", expected " + std::string(to_string(q.sort)));
        }
    }
}

const Value& AbstractState::operator[](std::string_view name) const
{
    auto pos = signature_->position(name);
    if (!pos) {
        throw UsageError("'" + std::string(name) + "' is not a model query of this signature");
    }
    return values_[*pos];
}

std::string to_string(const AbstractState& s)
{
    std::string out = "(";
    auto values = s.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += model::to_string(values[i]);
    }
    if (values.size() == 1) {
        out += ",";
    }
    out += ")";
    return out;
}

bool abstract_equal(const AbstractState& a, const AbstractState& b)
{
    if (a.signature_ptr() != b.signature_ptr() && !(a.signature() == b.signature())) {
        throw UsageError("abstract_equal on states of different signatures");
    }
    return a == b;
}

}  // namespace mbc::contracts
