#include <algorithm>

#include "helpers.hpp"
#include "qdiscord/partition.hpp"

using namespace qdiscord;

namespace {

std::set<Partition> set_of(std::initializer_list<const char*> items) {
  std::set<Partition> out;
  for (const char* s : items) out.insert(Partition::parse(s));
  return out;
}

}  // namespace

TEST_SUITE("partition") {

TEST_CASE("parse and print") {
  const auto p = Partition::parse(" AB | C|DE ");
  CHECK(p.size() == 3);
  CHECK(p.to_string() == "AB|C|DE");
  CHECK(p.labels() == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(p.contains_label(3));
  CHECK_FALSE(p.contains_label(5));
  CHECK(Partition::parse("A|C").to_string() == "A|C");
}

TEST_CASE("malformed partitions") {
  CHECK_THROWS_AS(Partition::parse("AC|B"), ArgumentError);  // blocks out of order
  CHECK_THROWS_AS(Partition::parse("BA"), ArgumentError);
  CHECK_THROWS_AS(Partition::parse("A||B"), ArgumentError);
  CHECK_THROWS_AS(Partition::parse("A|A"), ArgumentError);
  CHECK_THROWS_AS(Partition::parse("a|b"), ArgumentError);
}

TEST_CASE("moves") {
  const auto p = Partition::parse("A|B|CD");
  CHECK(apply_move(p, {MoveKind::DiscardBlock, {1}}).to_string() == "A|CD");
  CHECK(apply_move(p, {MoveKind::MergeBlocks, {0, 1}}).to_string() == "AB|CD");
  CHECK(apply_move(p, {MoveKind::MergeBlocks, {0, 2}}).to_string() == "ABCD");
  CHECK(apply_move(p, {MoveKind::TrimLastBlock, {3}}).to_string() == "A|B|C");
  CHECK_THROWS_AS(apply_move(p, {MoveKind::TrimLastBlock, {2, 3}}), ArgumentError);
  CHECK_THROWS_AS(apply_move(p, {MoveKind::TrimLastBlock, {1}}), ArgumentError);
  CHECK_THROWS_AS(apply_move(p, {MoveKind::DiscardBlock, {5}}), ArgumentError);
}

TEST_CASE("coarsening relation") {
  const auto top = Partition::parse("A|B|C|D");
  const auto chain = is_coarser(top, Partition::parse("AB|D"));
  REQUIRE(chain.has_value());
  Partition cur = chain->source;
  for (const auto& m : chain->moves) cur = apply_move(cur, m);
  CHECK(cur == Partition::parse("AB|D"));
  CHECK(is_coarser(top, top)->moves.empty());
  CHECK_FALSE(is_coarser(Partition::parse("A|BC"), Partition::parse("A|C"), MoveSet::discard_merge()));
  CHECK(is_coarser(Partition::parse("A|BC"), Partition::parse("A|C")));
  CHECK_FALSE(is_coarser(Partition::parse("AB|C"), Partition::parse("A|C")));
  CHECK_FALSE(is_coarser(Partition::parse("A|B"), Partition::parse("A|B|C")));
}

// counts frozen from tests/oracles/xi_oracle.py
TEST_CASE("coarser sets") {
  CHECK(coarser_set(Partition::parse("A|B|C")).size() == 5);
  CHECK(coarser_set(Partition::parse("A|BC")).size() == 2);
  CHECK(coarser_set(Partition::parse("A|BC"), MoveSet::discard_merge()).empty());
  CHECK(coarser_set(Partition::parse("A|B|C|D")).size() == 24);
  CHECK(coarser_set(Partition::parse("AB|CD")).size() == 2);
}

TEST_CASE("xi sets") {
  const auto five = xi_set(Partition::parse("A|B|C|D|E"), Partition::parse("A|C"));
  CHECK(five.size() == 44);
  CHECK(five.count(Partition::parse("B|C|DE")));
  CHECK_FALSE(five.count(Partition::parse("A|C|D")));

  const auto cde = xi_set(Partition::parse("A|B|CD|E"), Partition::parse("A|B"));
  CHECK(cde.size() == 19);
  CHECK(cde.count(Partition::parse("ACD|E")));
  CHECK(xi_set(Partition::parse("A|B|CD|E"), Partition::parse("A|B"), MoveSet::discard_only()).size() == 7);

  const auto top = Partition::parse("A|B|C|D");
  CHECK(xi_set(top, Partition::parse("A|B|C")).size() == 12);
  CHECK(xi_set(top, Partition::parse("A|B")).size() == 11);
  CHECK(xi_set(top, Partition::parse("A|B|C"), MoveSet::discard_only()) ==
        set_of({"A|B|D", "A|C|D", "B|C|D", "A|D", "B|D", "C|D"}));
  CHECK(xi_set(top, Partition::parse("A|B"), MoveSet::discard_only()) ==
        set_of({"C|D", "A|C|D", "B|C|D", "A|C", "A|D", "B|C", "B|D"}));
  CHECK(xi_set(Partition::parse("A|B|C"), Partition::parse("A|B")) == set_of({"A|C", "B|C"}));
  CHECK_THROWS_AS(xi_set(Partition::parse("A|B"), Partition::parse("A|C")), ArgumentError);
}

}
