#include <doctest.h>

#include "cdl/trace.hpp"
#include "support/gen.hpp"

using namespace cdl;

namespace {
const Alphabet sigma({"a", "b", "c", "d", "e"});
Event ev(std::initializer_list<const char*> names) {
  Event e;
  for (auto n : names) e.insert(sigma.at(n));
  return e;
}
LabeledAction la(const char* n, int p) { return {sigma.at(n), party_from_index(p)}; }
}  // namespace

TEST_CASE("labeled union") {
  CHECK(labeled_union(ev({"c", "d"}), ev({"d", "e"})) == LabeledEvent{la("c", 0), la("d", 0), la("d", 1), la("e", 1)});
  CHECK(labeled_union({}, {}).empty());
  CHECK(labeled_union(ev({"a"}), ev({"a"})) == LabeledEvent{la("a", 0), la("a", 1)});
}

TEST_CASE("labeled union is injective per component") {
  for (std::uint64_t x = 0; x < 32; ++x)
    for (std::uint64_t y = 0; y < 32; ++y) {
      auto u = labeled_union(Event(x), Event(y));
      CHECK(u.project(Party::zero) == Event(x));
      CHECK(u.project(Party::one) == Event(y));
    }
}

TEST_CASE("stepwise meet") {
  CHECK(stepwise_meet(ev({"c", "d"}), ev({"d", "e"})) == ev({"d"}));
  CHECK(stepwise_meet({}, ev({"a"})).empty());
  CHECK(stepwise_meet(ev({"a", "b"}), ev({"a", "b"})) == ev({"a", "b"}));
}

TEST_CASE("interactions and slices") {
  Interaction x({ev({"a"}), ev({"b"}), ev({"c"}), ev({"d"})}, {ev({}), ev({"a"}), ev({}), ev({"e"})});
  CHECK(slice(x, 1, 3).size() == 3);
  CHECK(slice(x, 1, 3).origin() == 1);
  CHECK(slice(x, 2, 1).empty());
  auto one = slice(x, 2, 2);
  REQUIRE(one.size() == 1);
  CHECK(one.at(Party::zero, 0) == ev({"c"}));
  CHECK(one.at(Party::one, 0) == ev({}));
  CHECK_THROWS_AS(slice(x, 2, 4), std::out_of_range);
  CHECK_THROWS_AS(Interaction({ev({"a"})}, {}), std::invalid_argument);
}

TEST_CASE("slice composition") {
  testing::Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    auto x = testing::random_interaction(rng, testing::ab(), 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i; j < 6; ++j)
        for (std::size_t m = 0; m <= j - i; ++m) {
          auto lhs = slice(slice(x, i, static_cast<std::ptrdiff_t>(j)), 0, static_cast<std::ptrdiff_t>(m));
          auto rhs = slice(x, i, static_cast<std::ptrdiff_t>(i + m));
          CHECK(lhs == rhs);
        }
  }
}

TEST_CASE("to_labeled") {
  const Alphabet robots({"charge0", "charge1", "detectProd", "lift", "putOnShelf"});
  Event detect;
  detect.insert(robots.at("detectProd"));
  auto l = to_labeled(Interaction({detect}, {Event{}}));
  REQUIRE(l.size() == 1);
  CHECK(l[0] == LabeledEvent{LabeledAction{robots.at("detectProd"), Party::zero}});
  CHECK(to_labeled(Interaction()).empty());
  auto f = to_labeled(Interaction({ev({"a"})}, {ev({"c"})}));
  CHECK(f[0] == LabeledEvent{la("a", 0), la("c", 1)});
  testing::Rng rng(8);
  auto x = testing::random_interaction(rng, testing::ab(), 5);
  CHECK(to_labeled(x).size() == x.size());
}
