#pragma once

#include <string>
#include <utility>
#include <vector>

#include "barter/model.hpp"

namespace fixtures {

using barter::Instance;
using barter::Item;
using barter::PlayerId;
using barter::Rational;

inline Item item(std::string name, PlayerId owner, const char* to_x, const char* to_y) {
  return {std::move(name), owner, Rational::parse(to_x), Rational::parse(to_y)};
}

// Rows of the uneven periphery table, u_x then u_y, as printed.
inline const std::vector<std::pair<const char*, const char*>> kTableRows = {
    {"0", "32.0"},  {"1", "31.5"},  {"3", "31.0"},  {"5", "30.5"}, {"6", "30.0"},
    {"7", "29.5"},  {"9", "28.0"},  {"11", "27.0"}, {"16", "24.0"}, {"21", "21.0"},
    {"27", "17.0"}, {"34", "9.0"},  {"39", "0.0"}};

inline const std::vector<const char*> kTableProducts = {"0.0",   "31.5",  "93.0",  "152.5", "180.0",
                                                        "206.5", "252.0", "297.0", "384.0", "441.0",
                                                        "459.0", "306.0", "0.0"};

// X owns one item per table row, Y owns a single item G. Swapping row k's
// item for G lands exactly on row k; every other exchange either costs X or
// costs Y, so the first quadrant holds the table and nothing else.
inline Instance table_instance() {
  std::vector<Item> items;
  for (std::size_t k = 0; k < kTableRows.size(); ++k) {
    const Rational a = Rational::parse(kTableRows[k].first);
    const Rational b = Rational::parse(kTableRows[k].second);
    items.push_back({"row" + std::to_string(k), PlayerId::X, Rational(100) - a, Rational(100) + b});
  }
  items.push_back({"G", PlayerId::Y, Rational(100), Rational(100)});
  return Instance(std::move(items));
}

// Every item valued more by its owner.
inline Instance dominance_table() {
  return Instance({
      item("radio", PlayerId::X, "11", "4"),
      item("laptop", PlayerId::X, "8", "3"),
      item("book", PlayerId::X, "5", "1"),
      item("watch", PlayerId::X, "6", "1"),
      item("pen", PlayerId::X, "4", "3"),
      item("bike", PlayerId::Y, "4", "7"),
      item("TV", PlayerId::Y, "2", "3"),
      item("cell", PlayerId::Y, "10", "11"),
      item("chair", PlayerId::Y, "5", "6"),
  });
}

// X's values for all of Y's items sum to 11, below X's cheapest own item.
inline Instance compensation_table() {
  return Instance({
      item("radio", PlayerId::X, "14", "10"),
      item("laptop", PlayerId::X, "12", "16"),
      item("book", PlayerId::X, "13", "7"),
      item("watch", PlayerId::X, "12", "17"),
      item("pen", PlayerId::X, "13", "5"),
      item("bike", PlayerId::Y, "3", "2"),
      item("TV", PlayerId::Y, "1", "8"),
      item("cell", PlayerId::Y, "4", "13"),
      item("chair", PlayerId::Y, "3", "2"),
  });
}

// Three items worth 10 to both on X's side, two worth 17 on Y's.
inline Instance zero_sum_instance() {
  return Instance({
      item("a", PlayerId::X, "10", "10"),
      item("b", PlayerId::X, "10", "10"),
      item("c", PlayerId::X, "10", "10"),
      item("d", PlayerId::Y, "17", "17"),
      item("e", PlayerId::Y, "17", "17"),
  });
}

// X's H is worth 10 to X and 20 to Y; Y's A and B are worth 6 to X and 5
// to Y each. No single swap pays X, the two-for-one does.
inline Instance greedy_trap() {
  return Instance({
      item("H", PlayerId::X, "10", "20"),
      item("A", PlayerId::Y, "6", "5"),
      item("B", PlayerId::Y, "6", "5"),
  });
}

// X receives r (10 to X) for p1 and p2 (4 and 5 to X).
inline Instance flip_instance() {
  return Instance({
      item("p1", PlayerId::X, "4", "8"),
      item("p2", PlayerId::X, "5", "8"),
      item("r", PlayerId::Y, "10", "3"),
  });
}

inline Instance bike_book() {
  return Instance({
      item("bike", PlayerId::X, "8", "3"),
      item("book", PlayerId::Y, "2", "6"),
  });
}

// Empty periphery with no detector firing.
inline Instance silent_no_trade() {
  return Instance({
      item("a", PlayerId::X, "5", "6"),
      item("b", PlayerId::X, "1", "0.5"),
      item("c", PlayerId::Y, "2", "5"),
  });
}

}  // namespace fixtures
