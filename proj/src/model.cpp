#include "barter/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace barter {

namespace {

using nlohmann::json;

// Builds a DOM like nlohmann's own parser, except floating-point literals
// are kept as their source text so they can be read exactly.
class ExactNumberSax {
 public:
  explicit ExactNumberSax(json& root) : dom_(root, true) {}

  bool null() { return dom_.null(); }
  bool boolean(bool v) { return dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return dom_.number_unsigned(v); }
  bool number_float(json::number_float_t, const json::string_t& text) {
    json::string_t copy = text;
    return dom_.string(copy);
  }
  bool string(json::string_t& v) { return dom_.string(v); }
  bool binary(json::binary_t& v) { return dom_.binary(v); }
  bool start_object(std::size_t n) { return dom_.start_object(n); }
  bool key(json::string_t& v) { return dom_.key(v); }
  bool end_object() { return dom_.end_object(); }
  bool start_array(std::size_t n) { return dom_.start_array(n); }
  bool end_array() { return dom_.end_array(); }
  bool parse_error(std::size_t pos, const std::string& token,
                   const nlohmann::detail::exception& ex) {
    return dom_.parse_error(pos, token, ex);
  }

 private:
  nlohmann::detail::json_sax_dom_parser<json> dom_;
};

// Line of the k-th occurrence of `"name"` in the source, 0 if not found.
std::size_t line_of(std::string_view text, const std::string& name, std::size_t occurrence) {
  const std::string needle = "\"" + name + "\"";
  std::size_t pos = 0;
  for (std::size_t k = 0;; ++k) {
    pos = text.find(needle, pos);
    if (pos == std::string_view::npos) return 0;
    if (k == occurrence) break;
    pos += needle.size();
  }
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
}

Rational read_value(const json& field, const std::string& what) {
  if (field.is_number_integer()) {
    // dump() of an integer is its exact decimal text
    return Rational::parse(field.dump());
  }
  if (field.is_string()) return Rational::parse(field.get<std::string>());
  throw std::invalid_argument(what + " must be a number or numeric string");
}

json exact_value(const Rational& r) { return r.str(); }

}  // namespace

std::string_view to_string(PlayerId p) { return p == PlayerId::X ? "X" : "Y"; }

PlayerId parse_player(std::string_view text) {
  if (text == "X" || text == "x") return PlayerId::X;
  if (text == "Y" || text == "y") return PlayerId::Y;
  throw std::invalid_argument("unknown owner tag '" + std::string(text) + "' (expected X or Y)");
}

Instance::Instance(std::vector<Item> items, bool allow_negative) : items_(std::move(items)) {
  if (items_.size() > kMaxItems) {
    throw InstanceError("instance has " + std::to_string(items_.size()) +
                        " items; at most " + std::to_string(kMaxItems) + " are supported");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const Item& item = items_[i];
    if (!names.insert(item.name).second) {
      throw InstanceError("duplicate item name '" + item.name + "'");
    }
    if (!allow_negative && (item.value_to_x.sign() < 0 || item.value_to_y.sign() < 0)) {
      throw InstanceError("item '" + item.name + "' has a negative utility");
    }
    const ItemMask bit = ItemMask{1} << i;
    if (item.owner == PlayerId::X) {
      x_mask_ |= bit;
      ++p_;
    } else {
      y_mask_ |= bit;
      ++q_;
    }
  }
}

Instance parse_instance(std::string_view text) {
  json doc;
  ExactNumberSax sax(doc);
  try {
    json::sax_parse(text.begin(), text.end(), &sax);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array()) {
    throw ParseError("instance must be an object with an \"items\" array");
  }

  std::vector<Item> items;
  std::set<std::string> seen;
  std::size_t index = 0;
  for (const json& entry : doc["items"]) {
    const std::string where = "item #" + std::to_string(index);
    if (!entry.is_object()) throw ParseError(where + ": expected an object");
    if (!entry.contains("name") || !entry["name"].is_string()) {
      throw ParseError(where + ": missing string field \"name\"");
    }
    Item item;
    item.name = entry["name"].get<std::string>();
    const auto occurrence = static_cast<std::size_t>(std::count_if(
        items.begin(), items.end(), [&](const Item& it) { return it.name == item.name; }));
    const std::size_t line = line_of(text, item.name, occurrence);
    const std::string context = where + " '" + item.name + "'" +
                                (line ? " (line " + std::to_string(line) + ")" : std::string());
    if (!seen.insert(item.name).second) throw ParseError(context + ": duplicate item name");

    try {
      if (!entry.contains("owner") || !entry["owner"].is_string()) {
        throw std::invalid_argument("missing string field \"owner\"");
      }
      item.owner = parse_player(entry["owner"].get<std::string>());
      for (const char* field : {"value_to_x", "value_to_y"}) {
        if (!entry.contains(field)) {
          throw std::invalid_argument(std::string("missing field \"") + field + "\"");
        }
      }
      item.value_to_x = read_value(entry["value_to_x"], "value_to_x");
      item.value_to_y = read_value(entry["value_to_y"], "value_to_y");
    } catch (const std::invalid_argument& e) {
      throw ParseError(context + ": " + e.what());
    }
    if (item.value_to_x.sign() < 0 || item.value_to_y.sign() < 0) {
      throw ParseError(context + ": negative utility");
    }
    items.push_back(std::move(item));
    ++index;
  }
  try {
    return Instance(std::move(items));
  } catch (const InstanceError& e) {
    throw ParseError(e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string serialize_instance(const Instance& inst) {
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const Item& item : inst.items()) {
    nlohmann::ordered_json entry;
    entry["name"] = item.name;
    entry["owner"] = std::string(to_string(item.owner));
    entry["value_to_x"] = exact_value(item.value_to_x);
    entry["value_to_y"] = exact_value(item.value_to_y);
    items.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc;
  doc["items"] = std::move(items);
  return doc.dump(2) + "\n";
}

void validate_exchange(const Instance& inst, const Exchange& ex) {
  const ItemMask in_range = inst.size() >= 64 ? ~ItemMask{0} : (ItemMask{1} << inst.size()) - 1;
  if ((ex.moved() & ~in_range) != 0) {
    throw std::out_of_range("exchange references item index " +
                            std::to_string(std::countr_zero(ex.moved() & ~in_range)) +
                            " outside an instance of " + std::to_string(inst.size()) + " items");
  }
  if ((ex.give_x & ~inst.owned_by(PlayerId::X)) != 0 || (ex.give_y & ~inst.owned_by(PlayerId::Y)) != 0) {
    throw std::out_of_range("exchange moves an item away from a player who does not own it");
  }
}

OutcomePoint marginal_utilities(const Instance& inst, const Exchange& ex) {
  validate_exchange(inst, ex);
  OutcomePoint pt;
  const auto& items = inst.items();
  for (ItemMask m = ex.give_x; m != 0; m &= m - 1) {
    const Item& item = items[static_cast<std::size_t>(std::countr_zero(m))];
    pt.u_x -= item.value_to_x;
    pt.u_y += item.value_to_y;
  }
  for (ItemMask m = ex.give_y; m != 0; m &= m - 1) {
    const Item& item = items[static_cast<std::size_t>(std::countr_zero(m))];
    pt.u_x += item.value_to_x;
    pt.u_y -= item.value_to_y;
  }
  return pt;
}

std::vector<std::string> item_names(const Instance& inst, ItemMask mask) {
  std::vector<std::string> names;
  for (ItemMask m = mask; m != 0; m &= m - 1) {
    names.push_back(inst.items()[static_cast<std::size_t>(std::countr_zero(m))].name);
  }
  return names;
}

std::string describe(const Instance& inst, const Exchange& ex) {
  auto join = [](const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) out += ", ";
      out += names[i];
    }
    return out + "}";
  };
  return "X gives " + join(item_names(inst, ex.give_x)) + ", Y gives " + join(item_names(inst, ex.give_y));
}

}  // namespace barter
