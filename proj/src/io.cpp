#include "ava/io.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "ava/error.hpp"

namespace ava {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::InvalidInstance, msg); }

void only_fields(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail("unknown field '" + key + "' in " + where);
  }
}

const Json& required(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

std::size_t buyer_index(const std::map<std::string, std::size_t>& buyers, const std::string& id,
                        const std::string& where) {
  auto it = buyers.find(id);
  if (it == buyers.end()) fail("unknown buyer '" + id + "' in " + where);
  return it->second;
}

Instance build_instance(const Json& j, bool with_probs, std::vector<Rational>* probs) {
  if (with_probs) {
    only_fields(j, {"buyers", "items", "notes", "horizon"}, "model");
  } else {
    only_fields(j, {"buyers", "items", "notes"}, "instance");
  }
  InstanceBuilder b;
  std::map<std::string, std::size_t> buyers, resources;
  auto resource = [&](const std::string& name) {
    auto it = resources.find(name);
    if (it != resources.end()) return it->second;
    const auto r = b.add_resource(name);
    resources.emplace(name, r);
    return r;
  };

  const auto& buyer_list = required(j, "buyers", "instance");
  if (!buyer_list.is_array()) fail("'buyers' must be an array");
  for (const auto& buyer : buyer_list) {
    only_fields(buyer, {"id", "rho", "budgets"}, "buyer");
    const auto id = required(buyer, "id", "buyer").get<std::string>();
    const auto index = b.add_buyer(id, rational_from_json(required(buyer, "rho", "buyer '" + id + "'")));
    buyers.emplace(id, index);
  }
  for (const auto& buyer : buyer_list) {
    if (!buyer.contains("budgets")) continue;
    const auto index = buyers.at(buyer["id"].get<std::string>());
    for (const auto& [res, amount] : buyer["budgets"].items()) b.set_budget(index, resource(res), rational_from_json(amount));
  }

  const auto& item_list = required(j, "items", "instance");
  if (!item_list.is_array()) fail("'items' must be an array");
  for (const auto& item : item_list) {
    if (with_probs) {
      only_fields(item, {"id", "values", "costs", "resource_costs", "prob"}, "item");
    } else {
      only_fields(item, {"id", "values", "costs", "resource_costs"}, "item");
    }
    const auto id = required(item, "id", "item").get<std::string>();
    const std::string where = "item '" + id + "'";
    const auto i = b.add_item(id);
    const auto& values = required(item, "values", where);
    if (!values.is_object()) fail("'values' of " + where + " must be an object");
    for (const auto& [buyer, v] : values.items()) b.set_value(i, buyer_index(buyers, buyer, where), rational_from_json(v));
    if (item.contains("costs")) {
      b.enable_costs();
      for (const auto& [buyer, c] : item["costs"].items()) b.set_cost(i, buyer_index(buyers, buyer, where), rational_from_json(c));
    }
    if (item.contains("resource_costs")) {
      for (const auto& [res, per_buyer] : item["resource_costs"].items()) {
        const auto r = resource(res);
        for (const auto& [buyer, l] : per_buyer.items()) {
          b.set_resource_cost(i, buyer_index(buyers, buyer, where), r, rational_from_json(l));
        }
      }
    }
    if (with_probs) probs->push_back(rational_from_json(required(item, "prob", where)));
  }
  if (j.contains("notes")) {
    for (const auto& note : j["notes"]) b.add_note(note.get<std::string>());
  }
  return b.build();
}

Json values_of(const Instance& inst, std::size_t i, const auto& get) {
  Json out = Json::object();
  for (auto j : inst.buyers_of(i)) out[inst.buyer_id(j)] = rational_to_json(get(i, j));
  return out;
}

}  // namespace

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
    if (j.is_number_float()) return rational_from_double(j.get<double>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  fail("expected a number, got " + j.dump());
}

Json rational_to_json(const Rational& r) {
  if (denominator(r) == 1 && abs(numerator(r)) < (std::int64_t{1} << 53)) {
    return Json(numerator(r).convert_to<std::int64_t>());
  }
  const double d = to_double(r);
  if (std::isfinite(d) && rational_from_double(d) == r) return Json(d);
  return Json(to_string(r));
}

Instance instance_from_json(const Json& j) { return build_instance(j, false, nullptr); }

Json instance_to_json(const Instance& inst) {
  Json out;
  out["buyers"] = Json::array();
  for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
    Json buyer;
    buyer["id"] = inst.buyer_id(j);
    buyer["rho"] = rational_to_json(inst.rho(j));
    Json budgets = Json::object();
    for (std::size_t r = 0; r < inst.num_resources(); ++r) {
      if (const auto& b = inst.budget(j, r)) budgets[inst.resource_name(r)] = rational_to_json(*b);
    }
    if (!budgets.empty()) buyer["budgets"] = budgets;
    out["buyers"].push_back(buyer);
  }
  out["items"] = Json::array();
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    Json item;
    item["id"] = inst.item_id(i);
    item["values"] = values_of(inst, i, [&](auto a, auto b) { return inst.value(a, b); });
    if (inst.generalized()) item["costs"] = values_of(inst, i, [&](auto a, auto b) { return inst.cost(a, b); });
    Json resource_costs = Json::object();
    for (std::size_t r = 0; r < inst.num_resources(); ++r) {
      Json per_buyer = Json::object();
      for (auto j : inst.buyers_of(i)) {
        if (inst.resource_cost(i, j, r) != 0) per_buyer[inst.buyer_id(j)] = rational_to_json(inst.resource_cost(i, j, r));
      }
      if (!per_buyer.empty()) resource_costs[inst.resource_name(r)] = per_buyer;
    }
    if (!resource_costs.empty()) item["resource_costs"] = resource_costs;
    out["items"].push_back(item);
  }
  if (!inst.notes().empty()) out["notes"] = inst.notes();
  return out;
}

IidModel model_from_json(const Json& j) {
  IidModel model;
  model.types = build_instance(j, true, &model.probs);
  const auto& horizon = required(j, "horizon", "model");
  if (!horizon.is_number_unsigned()) fail("'horizon' must be a positive integer");
  model.horizon = horizon.get<std::size_t>();
  model.validate();
  return model;
}

Json model_to_json(const IidModel& model) {
  Json out = instance_to_json(model.types);
  for (std::size_t i = 0; i < model.probs.size(); ++i) out["items"][i]["prob"] = rational_to_json(model.probs[i]);
  out["horizon"] = model.horizon;
  return out;
}

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail("'" + path + "': " + e.what());
  }
}

}  // namespace

Instance load_instance(const std::string& path) { return instance_from_json(read_json(path)); }
IidModel load_model(const std::string& path) { return model_from_json(read_json(path)); }
bool is_model_file(const std::string& path) { return read_json(path).contains("horizon"); }

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

Json allocation_to_json(const Instance& inst, const Allocation& alloc) {
  Json out;
  out["value"] = rational_to_json(allocation_value(inst, alloc));
  Json assignment = Json::object();
  for (std::size_t i = 0; i < alloc.num_items(); ++i) {
    if (const auto& j = alloc.buyer(i)) assignment[inst.item_id(i)] = inst.buyer_id(*j);
  }
  out["assignment"] = assignment;
  return out;
}

Json bundling_to_json(const Instance& inst, const BundledAllocation& bundling) {
  Json out;
  out["value"] = rational_to_json(bundling_value(inst, bundling));
  out["bundles"] = Json::array();
  for (const auto& b : bundling.bundles) {
    Json bundle;
    bundle["buyer"] = inst.buyer_id(b.buyer);
    bundle["p_item"] = inst.item_id(b.p_item);
    bundle["n_items"] = Json::array();
    for (auto i : b.n_items) bundle["n_items"].push_back(inst.item_id(i));
    out["bundles"].push_back(bundle);
  }
  return out;
}

Json gap_to_json(const Instance& inst, const GapInstance& gap) {
  Json out;
  out["eps_gap"] = rational_to_json(gap.eps_gap);
  out["capacity"] = 1;
  out["elements"] = Json::array();
  for (std::size_t e = 0; e < gap.num_elements; ++e) out["elements"].push_back(inst.item_id(e));
  out["bins"] = Json::array();
  for (const auto& bin : gap.bins) {
    out["bins"].push_back({{"p", inst.item_id(bin.p)}, {"buyer", inst.buyer_id(bin.buyer)}, {"group", inst.item_id(bin.p)}});
  }
  out["entries"] = Json::array();
  for (std::size_t e = 0; e < gap.num_elements; ++e) {
    for (std::size_t b = 0; b < gap.bins.size(); ++b) {
      const auto& entry = gap.entry(e, b);
      if (!entry.allowed) continue;
      out["entries"].push_back({{"element", e},
                                {"bin", b},
                                {"value", rational_to_json(entry.value)},
                                {"size", rational_to_json(entry.size)}});
    }
  }
  out["constraint"] = "partition";
  out["correspondence"] = "maximal";
  return out;
}

}  // namespace ava
