#include <cmath>

#include "helpers.hpp"
#include "qdiscord/discord.hpp"

using namespace qdiscord;
using testing::quick_config;

// Reference numbers frozen from tests/oracles/discord_oracle.py.

TEST_SUITE("discord") {

TEST_CASE("measure names") {
  CHECK(parse_measure_kind("GQD") == MeasureKind::GQD);
  CHECK(to_string(MeasureKind::MQD) == "mqd");
  CHECK_THROWS_AS(parse_measure_kind("xyz"), ArgumentError);
}

TEST_CASE("bipartite discord of a Bell pair") {
  const auto r = compute_discord(make_named_state("bell"), MeasureKind::QD, Partition::parse("A|B"), quick_config());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.opt.certified);
  REQUIRE(r.tree.has_value());
  CHECK(mqd_objective(make_named_state("bell"), *r.tree) == doctest::Approx(r.raw_value).epsilon(1e-12));
}

TEST_CASE("W state values") {
  const auto w = make_named_state("w", std::vector<double>{3});
  CHECK(mqd(w, Partition::parse("A|B|C"), quick_config()).value == doctest::Approx(1.46834359).epsilon(1e-5));
  CHECK(mqd(w, Partition::parse("A|B"), quick_config()).value == doctest::Approx(0.55004776).epsilon(1e-5));
  CHECK(gqd(w, Partition::parse("A|B|C"), quick_config()).value == doctest::Approx(1.5849625).epsilon(1e-5));
}

TEST_CASE("GHZ") {
  const auto r = mqd(make_named_state("ghz", std::vector<double>{3}), Partition::parse("A|B|C"), quick_config());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.opt.certified);
}

TEST_CASE("GQD on the two-qubit marginal of the counterexample") {
  const auto rho = make_named_state("paper_cx_1p11");
  CHECK(gqd(rho, Partition::parse("A|B"), quick_config()).value == doctest::Approx(0.20175207).epsilon(1e-5));
  CHECK(gqd(rho, Partition::parse("A|C"), quick_config()).value < 1e-6);
}

TEST_CASE("classical and product states have no discord") {
  const auto cl = make_named_state("classical_random", std::vector<double>{3, 5});
  CHECK(mqd(cl, Partition::parse("A|B|C"), quick_config()).value < 1e-6);
  CHECK(gqd(cl, Partition::parse("A|B|C"), quick_config()).value < 1e-6);
  const auto pr = make_named_state("product_random", std::vector<double>{3, 5});
  CHECK(mqd(pr, Partition::parse("A|B|C"), quick_config()).value < 1e-6);
}

TEST_CASE("block order of the ordered discord") {
  const auto rho = sample_random_state(std::vector<int>{2, 2}, 2, 21);
  const auto ab = qd_bipartite(rho, {0}, {1}, quick_config());
  const auto ba = qd_bipartite(rho, {1}, {0}, quick_config());
  const auto ba2 = mqd_ordered(rho, {{1}, {0}}, quick_config());
  CHECK(ba.value == doctest::Approx(ba2.value).epsilon(1e-9));
  CHECK(ab.ordering == std::vector<Block>{{0}, {1}});
  CHECK(ba.ordering == std::vector<Block>{{1}, {0}});
  CHECK(ab.value >= 0.0);
}

TEST_CASE("nonnegativity and grouped blocks") {
  const auto rho = sample_random_state(std::vector<int>{2, 2, 2}, 2, 33);
  const auto r = mqd(rho, Partition::parse("A|BC"), quick_config());
  CHECK(r.value >= 0.0);
  const auto g = gqd(rho, Partition::parse("AB|C"), quick_config());
  CHECK(g.value >= 0.0);
  CHECK_FALSE(g.opt.certified);  // 4-dimensional block, no grid
  REQUIRE(g.product.has_value());
  CHECK(gqd_objective(rho, Partition::parse("AB|C"), *g.product) == doctest::Approx(g.raw_value).epsilon(1e-12));
}

TEST_CASE("input errors") {
  const auto rho = make_named_state("bell");
  CHECK_THROWS_AS(mqd(rho, Partition::parse("A"), quick_config()), ArgumentError);
  CHECK_THROWS_AS(mqd(rho, Partition::parse("A|C"), quick_config()), ArgumentError);
  CHECK_THROWS_AS(qd_bipartite(rho, {0}, {0}, quick_config()), ArgumentError);
}

TEST_CASE("d-quantity conventions") {
  const auto rho = sample_random_state(std::vector<int>{2, 2, 2}, 3, 12);
  const auto r = mqd(rho, Partition::parse("A|B|C"), quick_config());
  const auto& tree = *r.tree;
  // D_{A;B;C} = d_{A;B} + d_{AB;C}
  const double split = d_quantity(rho, {{0}}, {1}, tree) + d_quantity(rho, {{0}, {1}}, {2}, tree);
  CHECK(split == doctest::Approx(r.raw_value).epsilon(1e-10));
  CHECK(d_quantity(rho, {{0}}, {1}, tree) >= -1e-12);
  CHECK(d_quantity(rho, {{1}}, {2}, tree) >= -1e-12);
  CHECK_THROWS_AS(d_quantity(rho, {{1}}, {0}, tree), ArgumentError);
}

TEST_CASE("GQD defect identity") {
  const auto rho = sample_random_state(std::vector<int>{2, 2, 2}, 4, 14);
  const auto p = Partition::parse("A|B|C");
  std::vector<double> params{0.3, 1.0, 1.1, 0.2, 0.7, 2.5};
  const auto m = ProductMeasurement::from_params(p, std::vector<int>{2, 2, 2}, params);
  for (const std::vector<Block>& sub : {std::vector<Block>{{0}, {1}}, {{1}, {2}}, {{0}, {2}}}) {
    const auto pair = gqd_defect(rho, p, sub, m);
    CHECK(pair.defect == doctest::Approx(pair.relative_entropy_form).epsilon(1e-9));
  }
  const auto sub = restrict_measurement(m, {{0}, {2}});
  CHECK(sub.bases.size() == 2);
  CHECK(sub.bases[1].target == Block{2});
}

}
