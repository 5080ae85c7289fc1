#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "linnet/abstraction.hpp"
#include "linnet/select.hpp"
#include "support/fixtures.hpp"

using namespace linnet;

namespace {

std::vector<int> all_nodes(int n) {
  std::vector<int> v;
  for (int k = 1; k <= n; ++k) v.push_back(k);
  return v;
}

}  // namespace

TEST_CASE("selection search finds the three known answers on the showcase network") {
  auto m = testsupport::selection_example();
  auto g = StructuralGraph::from_model(m);
  auto results = select_nodes(g, 1, 2, all_nodes(6));

  REQUIRE(results.size() == 3);

  // Cheapest first: measure the inner node of the short parallel route and
  // abstract everything else.
  CHECK(results[0].cost == 3);
  CHECK(results[0].partition.s_tilde == std::vector<int>{1, 2, 3});
  CHECK(results[0].partition.l_set.empty());
  CHECK(results[0].partition.v_set.empty());
  CHECK(results[0].partition.z_tilde == std::vector<int>{4, 5, 6});

  // Next: observe node 3 through node 4, measure node 5.
  CHECK(results[1].cost == 4);
  CHECK(results[1].partition.s_tilde == std::vector<int>{1, 2, 5});
  CHECK(results[1].partition.l_set == std::vector<int>{4});
  CHECK(results[1].partition.v_set == std::vector<int>{3});
  CHECK(results[1].partition.z_tilde == std::vector<int>{6});

  // Last: observe both inner nodes through nodes 4 and 6.
  CHECK(results[2].cost == 4);
  CHECK(results[2].partition.s_tilde == std::vector<int>{1, 2});
  CHECK(results[2].partition.l_set == std::vector<int>{4, 6});
  CHECK(results[2].partition.v_set == std::vector<int>{3, 5});
  CHECK(results[2].partition.z_tilde.empty());

  // Every reported selection passes both admissibility screens, and the
  // observation-based ones also pass the numeric rank check on the model.
  for (const auto& sel : results) {
    CHECK(check_generalized_invariance(g, {1, 2, sel.partition}));
    CHECK(has_disjoint_observation_routes(g, sel.partition));
    CHECK(check_indirect_observations(m, sel.partition));
  }

  // Deterministic output.
  auto again = select_nodes(g, 1, 2, all_nodes(6));
  REQUIRE(again.size() == results.size());
  for (size_t k = 0; k < results.size(); ++k) {
    CHECK(again[k].partition.s_tilde == results[k].partition.s_tilde);
    CHECK(again[k].partition.l_set == results[k].partition.l_set);
    CHECK(again[k].partition.v_set == results[k].partition.v_set);
  }
}

TEST_CASE("selection on a chain measures the path node") {
  StructuralGraph g(3);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  auto results = select_nodes(g, 1, 3, all_nodes(3));
  REQUIRE(results.size() == 1);
  CHECK(results[0].partition.s_tilde == std::vector<int>{1, 2, 3});
  CHECK(results[0].partition.z_tilde.empty());
}

TEST_CASE("a direct module with no interference needs only its endpoints") {
  StructuralGraph g(4);
  g.add_edge(1, 2);
  g.add_edge(3, 4);  // unrelated corner of the network
  auto results = select_nodes(g, 1, 2, all_nodes(4));
  REQUIRE(!results.empty());
  CHECK(results[0].cost == 2);
  CHECK(results[0].partition.s_tilde == std::vector<int>{1, 2});
  CHECK(results[0].partition.z_tilde == std::vector<int>{3, 4});
}

TEST_CASE("an unmeasurable parallel node can be saved by an observation point") {
  StructuralGraph g(4);
  g.add_edge(1, 2);  // module of interest
  g.add_edge(1, 3);
  g.add_edge(3, 2);  // parallel route through unmeasurable node 3
  g.add_edge(3, 4);  // escape hatch: node 4 hears node 3

  // Without node 4 being measurable there is no way out.
  CHECK_THROWS_AS(select_nodes(g, 1, 2, {1, 2}), NoFeasibleSelection);

  // With node 4 measurable the search observes node 3 through it.
  auto results = select_nodes(g, 1, 2, {1, 2, 4});
  REQUIRE(results.size() == 1);
  CHECK(results[0].partition.s_tilde == std::vector<int>{1, 2});
  CHECK(results[0].partition.l_set == std::vector<int>{4});
  CHECK(results[0].partition.v_set == std::vector<int>{3});
  CHECK(results[0].cost == 3);
}

TEST_CASE("exhausted search budget falls back to measuring everything") {
  auto m = testsupport::selection_example();
  auto g = StructuralGraph::from_model(m);
  SelectOptions opts;
  opts.budget = 1;  // only the root state gets evaluated
  auto results = select_nodes(g, 1, 2, all_nodes(6), opts);
  REQUIRE(results.size() == 1);
  CHECK(results[0].partition.s_tilde == all_nodes(6));
  CHECK(results[0].cost == 6);
}

TEST_CASE("result cap truncates the enumeration") {
  auto m = testsupport::selection_example();
  auto g = StructuralGraph::from_model(m);
  SelectOptions opts;
  opts.max_results = 1;
  auto results = select_nodes(g, 1, 2, all_nodes(6), opts);
  REQUIRE(results.size() == 1);
  CHECK(results[0].partition.s_tilde == std::vector<int>{1, 2, 3});
}

TEST_CASE("selection rejects bad endpoints") {
  StructuralGraph g(3);
  g.add_edge(1, 2);
  CHECK_THROWS_AS(select_nodes(g, 1, 1, all_nodes(3)), InvalidPartition);
  CHECK_THROWS_AS(select_nodes(g, 1, 2, {1}), InvalidPartition);  // j missing
  CHECK_THROWS_AS(select_nodes(g, 1, 9, all_nodes(3)), DimensionMismatch);
}

TEST_CASE("selections always contain the endpoints and pass the screens") {
  std::mt19937 rng(90210u);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int produced = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int n = 4 + static_cast<int>(rng() % 3);
    StructuralGraph g(n);
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b)
        if (a != b && coin(rng) < 0.3) g.add_edge(a, b);
    int i = 1 + static_cast<int>(rng() % n);
    int j = 1 + static_cast<int>(rng() % n);
    if (i == j) continue;
    std::vector<Selection> results;
    try {
      results = select_nodes(g, i, j, all_nodes(n));
    } catch (const NoFeasibleSelection&) {
      continue;
    }
    int last_cost = 0;
    for (const auto& sel : results) {
      ++produced;
      INFO("trial " << trial << " i=" << i << " j=" << j);
      validate_partition(sel.partition, n);
      CHECK(check_generalized_invariance(g, {i, j, sel.partition}));
      CHECK(has_disjoint_observation_routes(g, sel.partition));
      CHECK(sel.cost >= last_cost);  // cheapest first
      last_cost = sel.cost;
      const auto& st = sel.partition.s_tilde;
      CHECK(std::find(st.begin(), st.end(), i) != st.end());
      CHECK(std::find(st.begin(), st.end(), j) != st.end());
    }
  }
  CHECK(produced > 100);
}
