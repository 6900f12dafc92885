#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "wcetw/linear.h"
#include "wcetw/logic.h"
#include "wcetw/model.h"
#include "wcetw/theory.h"

namespace wcetw::io {

using Json = nlohmann::ordered_json;

// Both throw Error(kParse) on I/O or syntax failure.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

// Accessors that raise kParse with the field name instead of a json exception.
const Json& field(const Json& j, const char* name);
std::string string_field(const Json& j, const char* name);

linear::LinearSystem scope_from_json(const Json& j);
Json to_json(const linear::LinearSystem& s);
Json to_json(const linear::Valuation& k);

model::Metamodel metamodel_from_json(const Json& j);
Json to_json(const model::Metamodel& mm);

// Facts not listed keep the concrete defaults: existence TRUE, equality the
// identity, everything else FALSE. "exists" and "equals" name the implicit
// symbols.
model::PartialModel model_from_json(const Json& j, model::SignaturePtr sig);
Json to_json(const model::PartialModel& m);

// A predicate is either the text form or {name, params, body} where body is
// text or an AST object.
logic::Predicate predicate_from_json(const Json& j);
Json to_json(const logic::Predicate& p);
logic::NodePtr formula_from_json(const Json& j);
Json to_json(const logic::NodePtr& n);

model::Theory theory_from_json(const Json& j);
Json to_json(const model::Theory& t);

}  // namespace wcetw::io
