#include <doctest.h>

#include "cdl/parser.hpp"
#include "cdl/rex.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace cdl;

namespace {

const Alphabet abc({"a", "b", "c"});

LabeledEvent E(std::initializer_list<const char*> atoms) {
  LabeledEvent e;
  for (std::string s : atoms) {
    auto cut = s.rfind('_');
    e.insert({abc.at(s.substr(0, cut)), party_from_index(s[cut + 1] - '0')});
  }
  return e;
}

RexClass cls(const char* re, std::vector<LabeledEvent> t) {
  auto r = parse_regex(re, abc);
  return classify(compile_regex(r), t);
}

}  // namespace

TEST_CASE("tight match of a plus") {
  CHECK(cls("a_0+", {E({"a_0"})}) == RexClass::tight_match);
  CHECK(cls("a_0+", {E({"a_0"}), E({"a_0"})}) == RexClass::past);
  CHECK(cls("a_0+", {E({"b_0"})}) == RexClass::fell_out);
}

TEST_CASE("sequence classes") {
  CHECK(cls("a_0 ; b_0", {E({"a_0"})}) == RexClass::prefix);
  CHECK(cls("a_0 ; b_0", {E({"a_0"}), E({"b_0"})}) == RexClass::tight_match);
  CHECK(cls("a_0 ; b_0", {E({"a_0"}), E({"c_0"})}) == RexClass::fell_out);
  CHECK(cls("a_0 ; b_0", {E({"a_0"}), E({"c_0"}), E({})}) == RexClass::past);
}

TEST_CASE("single-action trigger") {
  const Alphabet robots({"charge0", "charge1", "detectProd", "lift", "putOnShelf"});
  auto d = compile_regex(parse_regex("detectProd_0", robots));
  std::vector<LabeledEvent> t{LabeledEvent{LabeledAction{robots.at("detectProd"), Party::zero}}};
  CHECK(classify(d, t) == RexClass::tight_match);
}

TEST_CASE("dead positions do not keep a trace in the prefix class") {
  CHECK(cls("(a_0 ; false) + b_0", {E({"a_0"})}) == RexClass::fell_out);
}

TEST_CASE("empty language is rejected") {
  CHECK_THROWS_AS(compile_regex(parse_regex("[a_0 & !a_0]", abc)), std::invalid_argument);
  CHECK_THROWS_AS(compile_regex(parse_regex("a_0 ; false", abc)), std::invalid_argument);
}

TEST_CASE("the dfa is deterministic and total with sink states") {
  testing::Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    auto d = compile_regex(testing::random_regex(rng, testing::ab(), 3));
    for (TightDfa::State s = 0; s < d.state_count(); ++s) {
      const auto& es = d.edges(s);
      for (auto e : testing::all_events(testing::ab())) {
        int hits = 0;
        for (const auto& x : es) hits += x.guard.holds(e);
        CHECK(hits == 1);
      }
    }
    for (auto sink : {d.matched(), d.failed()}) {
      REQUIRE(d.edges(sink).size() == 1);
      CHECK(d.edges(sink)[0].target == sink);
    }
  }
}

TEST_CASE("classification agrees with the set-definition oracle") {
  testing::Rng rng(1234);
  const auto events = testing::all_events(testing::ab());
  std::size_t traces = 0;
  for (int k = 0; k < 200; ++k) {
    auto re = testing::random_regex(rng, testing::ab(), 3);
    auto d = compile_regex(re);
    std::vector<LabeledEvent> t;
    // Depth-first over every trace of length 1..4.
    std::function<void()> walk = [&] {
      if (!t.empty()) {
        const auto got = classify(d, t);
        const auto want = oracle::classify(re, t);
        if (got != want) {
          INFO(to_string(re, testing::ab()));
          CHECK(to_string(got) == std::string(to_string(want)));
        }
        ++traces;
      }
      if (t.size() == 4) return;
      for (auto e : events) {
        t.push_back(e);
        walk();
        t.pop_back();
      }
    };
    walk();
  }
  CHECK(traces == 200u * (16 + 256 + 4096 + 65536));
}

TEST_CASE("a trace reaches a tight match at most once") {
  testing::Rng rng(77);
  for (int k = 0; k < 200; ++k) {
    auto d = compile_regex(testing::random_regex(rng, testing::ab(), 3));
    for (int n = 0; n < 20; ++n) {
      auto x = to_labeled(testing::random_interaction(rng, testing::ab(), 8));
      auto cs = classify_prefixes(d, x);
      CHECK(std::count(cs.begin(), cs.end(), RexClass::tight_match) <= 1);
    }
  }
}
