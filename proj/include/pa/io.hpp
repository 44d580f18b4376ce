#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "pa/cohomology.hpp"
#include "pa/zoo.hpp"

namespace pa::io {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// Rationals are "num/den" strings; JSON numbers are rejected.
json rational_to_json(const Q& q);
Q rational_from_json(const json& j);

json hopf_to_json(const HopfAlgebra& H);
// Identical base algebras share one HopfPtr, so files loaded separately can be combined.
HopfPtr hopf_from_json(const json& j);
json module_to_json(const FreeModule& M);
ModulePtr module_from_json(const HopfPtr& H, const json& j);

// Term {"slots": [[exponents], ...], "coeff": [exponents], "basis": k, "c": "num/den"}; n − 1 slots is
// canonical, n slots is straightened on load.
json pt_to_json(const PTElem& e, int dim);
PTElem pt_from_json(const HopfAlgebra& H, const json& j, int arity, int rank);
json helem_to_json(const HElem& h, int dim);
HElem helem_from_json(const HopfAlgebra& H, const json& j);

// [{"tuple": [...], "value": [terms]}, ...]
json table_to_json(const ValueTable& t, int dim);
ValueTable table_from_json(const HopfAlgebra& H, const json& j, int arity, int rank, int tuple_bound);

// Files: {"meta": {"schema_version": "1", "kind": ..., "conventions": {...}}, "hopf": ..., ...}.
// kinds: quasi_twilled, algebra, map, cochain, ingredients.
json conventions_json(const PCFlags& pc, CESign ce, Twist2Form tw);
json structure_to_json(const QuasiTwilled& S);
json algebra_to_json(const LiePseudoalgebra& L);
json map_to_json(const HModuleMap& m, std::optional<MapKind> kind = std::nullopt);
json cochain_to_json(const Cochain& f);
json ingredients_to_json(const Ingredients& in);

std::string file_kind(const json& j);  // InputError on a missing or wrong schema version
// Loaders throw InputError on schema problems and, with validate, ValidationError when the load-time
// checks (check_lie, check_pc) fail.
QuasiTwilled structure_from_json(const json& j, bool validate = true);
LiePseudoalgebra algebra_from_json(const json& j, bool validate = true);
// Matrix against given modules; rank mismatches are input errors.
HModuleMap map_from_json(const json& j, const ModulePtr& from, const ModulePtr& to);
std::optional<MapKind> map_kind_of(const json& j);
// With modules given, the file's basis names must match them.
Cochain cochain_from_json(const json& j, const ModulePtr& source = nullptr, const ModulePtr& target = nullptr);
Ingredients ingredients_from_json(const json& j);

json read_file(const std::string& path);  // InputError if unreadable or not JSON
void write_file(const std::string& path, const json& j);
std::string dump(const json& j);  // 2-space indent, keys sorted, trailing newline

}  // namespace pa::io
