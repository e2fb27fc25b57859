#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rostop/maxflow.hpp"
#include "rostop/testing/oracles.hpp"

using namespace rostop;

namespace {

double cut_capacity(const FlowGraph& g, const std::vector<bool>& side)
{
  double c = 0.0;
  for (const auto& a : g.arcs) {
    if (side[a.from] && !side[a.to]) { c += a.capacity; }
  }
  return c;
}

}  // namespace

TEST_CASE("single arc")
{
  FlowGraph g;
  g.node_count = 2;
  g.add_arc(0, 1, 3.0);
  const auto r = max_flow(g);
  CHECK(r.value == 3.0);
  CHECK(r.source_side == std::vector<bool>{true, false});
}

TEST_CASE("two-branch example")
{
  FlowGraph g;
  g.node_count = 2;
  const auto a = g.add_node(), b = g.add_node();
  g.add_arc(0, a, 2);
  g.add_arc(0, b, 2);
  g.add_arc(a, 1, 1);
  g.add_arc(b, 1, 3);
  const auto r = max_flow(g);
  CHECK(r.value == doctest::Approx(3.0));
  CHECK(r.source_side[0]);
  CHECK(r.source_side[a]);
  CHECK_FALSE(r.source_side[b]);
  CHECK_FALSE(r.source_side[1]);
  CHECK(cut_capacity(g, r.source_side) == doctest::Approx(3.0));
}

TEST_CASE("disconnected sink")
{
  FlowGraph g;
  g.node_count = 4;
  g.add_arc(0, 2, 5);
  g.add_arc(3, 1, 5);
  const auto r = max_flow(g);
  CHECK(r.value == 0.0);
  CHECK(r.source_side == std::vector<bool>{true, false, true, false});
}

TEST_CASE("max flow matches brute-force min cut and conserves flow")
{
  std::mt19937_64 rng(99);
  for (int round = 0; round < 300; ++round) {
    const auto g = testing::random_flow_graph(rng, 12);
    const auto r = max_flow(g);
    CHECK(r.value == doctest::Approx(testing::brute_force_min_cut(g)).epsilon(1e-12));
    REQUIRE(r.flows.size() == g.arcs.size());
    std::vector<double> net(g.node_count, 0.0);
    for (std::size_t k = 0; k < g.arcs.size(); ++k) {
      CHECK(r.flows[k] >= -1e-12);
      CHECK(r.flows[k] <= g.arcs[k].capacity + 1e-12);
      net[g.arcs[k].from] -= r.flows[k];
      net[g.arcs[k].to] += r.flows[k];
    }
    for (std::size_t v = 2; v < g.node_count; ++v) { CHECK(std::abs(net[v]) <= 1e-9); }
    CHECK(net[1] == doctest::Approx(r.value));
    CHECK(r.source_side[0]);
    CHECK_FALSE(r.source_side[1]);
    CHECK(cut_capacity(g, r.source_side) == doctest::Approx(r.value));
  }
}

TEST_CASE("real capacities")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    auto g = testing::random_flow_graph(rng, 10);
    for (auto& a : g.arcs) { a.capacity *= u(rng); }
    CHECK(std::abs(max_flow(g).value - testing::brute_force_min_cut(g)) <= 1e-9);
  }
}

TEST_CASE("closure examples")
{
  ClosureProblem p;
  const auto a = p.add_node(5.0), b = p.add_node(-3.0);
  p.add_arc(a, b);
  auto r = maximal_closure(p);
  CHECK(r.weight == doctest::Approx(2.0));
  CHECK(r.in_closure == std::vector<bool>{true, true});

  ClosureProblem neg;
  neg.add_node(-1.0);
  neg.add_node(-2.0);
  neg.offset = 1.5;
  r = maximal_closure(neg);
  CHECK(r.weight == 1.5);
  CHECK(r.in_closure == std::vector<bool>{false, false});

  ClosureProblem single;
  single.add_node(7.0);
  r = maximal_closure(single);
  CHECK(r.weight == 7.0);
  CHECK(r.in_closure == std::vector<bool>{true});
}

TEST_CASE("zero-gain ties leave nodes out")
{
  ClosureProblem p;
  const auto a = p.add_node(3.0), b = p.add_node(-3.0), c = p.add_node(0.0);
  p.add_arc(a, b);
  const auto r = maximal_closure(p);
  CHECK(r.weight == 0.0);
  CHECK_FALSE(r.in_closure[a]);
  CHECK_FALSE(r.in_closure[b]);
  CHECK_FALSE(r.in_closure[c]);
}

TEST_CASE("closure matches brute force on random problems")
{
  std::mt19937_64 rng(123);
  for (int round = 0; round < 300; ++round) {
    const auto p = testing::random_closure_problem(rng, 12);
    const auto r = maximal_closure(p);
    CHECK(is_closed(p, r.in_closure));
    CHECK(r.weight == doctest::Approx(closure_weight(p, r.in_closure)));
    CHECK(r.weight == doctest::Approx(testing::brute_force_closure(p)).epsilon(1e-12));
  }
}

TEST_CASE("closure helpers")
{
  ClosureProblem p;
  p.add_node(1.0);
  p.add_node(2.0);
  p.add_arc(0, 1);
  p.offset = 0.5;
  CHECK_FALSE(is_closed(p, {true, false}));
  CHECK(is_closed(p, {false, true}));
  CHECK(closure_weight(p, {true, true}) == 3.5);

  std::ostringstream dot;
  write_dot(dot, p, {"alpha", "beta"});
  CHECK(dot.str().find("digraph") != std::string::npos);
  CHECK(dot.str().find("alpha") != std::string::npos);
}
