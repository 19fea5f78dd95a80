#ifndef AVA_IO_HPP
#define AVA_IO_HPP

#include <string>

#include "json.hpp"

#include "ava/bundling.hpp"
#include "ava/gap.hpp"
#include "ava/instance.hpp"
#include "ava/lp_models.hpp"

namespace ava {

using Json = nlohmann::ordered_json;

/// A number, or a string "p/q" / decimal.  Error InvalidInstance otherwise.
Rational rational_from_json(const Json& j);
/// A JSON number when the double round-trips exactly, else the exact string.
Json rational_to_json(const Rational& r);

/// Instance schema:
///   { "buyers": [{"id", "rho", "budgets"?: {res: num}}],
///     "items": [{"id", "values": {buyer: num}, "costs"?: {buyer: num},
///                "resource_costs"?: {res: {buyer: num}}}],
///     "notes"?: [str] }
/// Unknown fields are rejected with Error InvalidInstance.
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& inst);

/// Model schema: the instance schema plus a top-level "horizon" and a "prob" on
/// every item.
IidModel model_from_json(const Json& j);
Json model_to_json(const IidModel& model);

Instance load_instance(const std::string& path);
IidModel load_model(const std::string& path);
/// True when the file holds a model (top-level "horizon").
bool is_model_file(const std::string& path);
void save_json(const std::string& path, const Json& j);

Json allocation_to_json(const Instance& inst, const Allocation& alloc);
Json bundling_to_json(const Instance& inst, const BundledAllocation& bundling);

/// GAP file:
///   { "eps_gap", "capacity": 1,
///     "elements": [item id],
///     "bins": [{"p": item id, "buyer": buyer id, "group": item id}],
///     "entries": [{"element", "bin", "value", "size"}],     // allowed pairs only
///     "constraint": "partition", "correspondence": "maximal" }
/// "bin" indexes "bins"; one bin per group may be used.
Json gap_to_json(const Instance& inst, const GapInstance& gap);

}  // namespace ava

#endif  // AVA_IO_HPP
