// Structural JSON encoding of model values (round-trippable, unlike the
// human-oriented text form).
//
//   true / 3              boolean / integer
//   {"ref": 2}            reference token
//   {"seq": [..]}         sequence
//   {"set": [..]}         set
//   {"bag": [[v, n]..]}   bag
//   {"map": [[k, v]..]}   map
//   {"rel": [[x, y]..]}   relation

#pragma once

#include <json.hpp>
#include "mbc/model/value.hpp"

namespace mbc::model {

nlohmann::ordered_json to_json(const Value& v);

/// Throws ModelError on malformed input.
Value value_from_json(const nlohmann::ordered_json& j);

}  // namespace mbc::model
