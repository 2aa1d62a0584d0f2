#include <gtest/gtest.h>

#include <sstream>
#include <unordered_set>

#include "hyperprof/cayley.hpp"
#include "hyperprof/engines.hpp"
#include "hyperprof/spec_parser.hpp"
#include "oracles.hpp"

using namespace hyperprof;

TEST(BuildBall, FreeGroupSizes) {
  auto f = engine_free(2);
  for (std::uint32_t r = 0; r <= 4; ++r) {
    std::size_t expected = oracle::free_ball_size(2, r);
    EXPECT_EQ(build_ball(*f, r).size(), expected) << "r=" << r;
  }
  EXPECT_EQ(build_ball(*f, 2).size(), 17u);
}

TEST(BuildBall, CyclicGroups) {
  auto c5 = build_ball(*engine_cyclic(5), 3);
  EXPECT_EQ(c5.size(), 5u);
  EXPECT_EQ(c5.edges.size(), 5u);
  EXPECT_TRUE(c5.is_closed());
  EXPECT_EQ(c5.trusted_radius, 3u);

  auto line = build_ball(*engine_cyclic(0), 4);
  EXPECT_EQ(line.size(), 9u);
  EXPECT_EQ(line.edges.size(), 8u);
  EXPECT_EQ(line.trusted_radius, 2u);

  // Involutive generator: one edge, not two.
  auto c2 = build_ball(*engine_cyclic(2), 1);
  EXPECT_EQ(c2.edges.size(), 1u);
  // Trivial group: no self-loops.
  EXPECT_TRUE(build_ball(*engine_cyclic(1), 3).edges.empty());
}

TEST(BuildBall, VertexOrderIsBreadthFirstByGeneratorOrder) {
  auto f = engine_free(2);
  auto ball = build_ball(*f, 1);
  ASSERT_EQ(ball.size(), 5u);
  EXPECT_EQ(ball.elements[1], (Element{1}));
  EXPECT_EQ(ball.elements[2], (Element{-1}));
  EXPECT_EQ(ball.elements[3], (Element{2}));
  EXPECT_EQ(ball.elements[4], (Element{-2}));
}

TEST(BuildBall, CapExceeded) {
  try {
    build_ball(*engine_free(2), 10, 1000);
    FAIL();
  } catch (SizeError const& e) {
    EXPECT_EQ(e.partial(), 1000u);
  }
  EXPECT_THROW(build_full_graph(*engine_cyclic(0)), SizeError);
}

TEST(BallGrowth, Sequences) {
  EXPECT_EQ(ball_growth(*engine_free(2), 3), (std::vector<std::size_t>{1, 5, 17, 53}));
  EXPECT_EQ(ball_growth(*engine_cyclic(6), 4), (std::vector<std::size_t>{1, 3, 5, 6, 6}));
  EXPECT_EQ(ball_growth(*parse_engine_spec("dp(cyclic:0,cyclic:0)"), 3), (std::vector<std::size_t>{1, 5, 13, 25}));
  EXPECT_EQ(ball_growth(*parse_engine_spec("fp(cyclic:2,cyclic:2)"), 5),
            (std::vector<std::size_t>{1, 3, 5, 7, 9, 11}));
  for (std::uint32_t r = 0; r <= 5; ++r) {
    EXPECT_EQ(ball_growth(*engine_free(2), r).back(), 2 * static_cast<std::size_t>(std::pow(3, r)) - 1);
  }
}

namespace {

void check_ball_invariants(GroupEngine const& e, CayleyBall const& ball) {
  ASSERT_EQ(ball.depth[0], 0u);
  EXPECT_EQ(ball.elements[0], e.identity());
  std::unordered_set<Element, ElementHash> unique(ball.elements.begin(), ball.elements.end());
  EXPECT_EQ(unique.size(), ball.size());
  for (std::size_t i = 1; i < ball.size(); ++i) EXPECT_GE(ball.depth[i], ball.depth[i - 1]);
  for (auto const& edge : ball.edges) {
    EXPECT_EQ(e.multiply_gen(ball.elements[edge.u], {edge.generator, edge.sign}), ball.elements[edge.v]);
    auto du = static_cast<int>(ball.depth[edge.u]), dv = static_cast<int>(ball.depth[edge.v]);
    EXPECT_LE(std::abs(du - dv), 1);
  }
  if (auto ord = e.order()) {
    EXPECT_LE(ball.size(), *ord);
  }
}

}  // namespace

TEST(BuildBall, Invariants) {
  for (char const* spec : {"free:2", "cyclic:7", "heis:3", "dp(cyclic:0,cyclic:0)", "fp(cyclic:3,cyclic:3)",
                           "fp(cyclic:4,cyclic:2)", "dp(heis:3,cyclic:2)"}) {
    auto e = parse_engine_spec(spec);
    for (std::uint32_t r : {0u, 1u, 3u, 5u}) check_ball_invariants(*e, build_ball(*e, r));
  }
}

TEST(BuildBall, FiniteGroupsSaturate) {
  auto h = engine_heisenberg_p(3);
  auto full = build_full_graph(*h);
  EXPECT_EQ(full.size(), 27u);
  EXPECT_EQ(build_ball(*h, full.radius).size(), 27u);
  EXPECT_LT(build_ball(*h, full.radius - 1).size(), 27u);
  EXPECT_TRUE(build_ball(*h, full.radius).is_closed());
  EXPECT_FALSE(build_ball(*h, full.radius - 1).is_closed());
}

TEST(GraphFile, RoundTrip) {
  auto ball = build_ball(*engine_cyclic(5), 3);
  std::stringstream ss;
  write_graph(ball, ss);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "cayley v1 n=5 r=3 t=3 gens=1");
  CayleyBall back = read_graph(ss);
  EXPECT_EQ(back.edges.size(), 5u);
  EXPECT_EQ(back.edges, ball.edges);
  EXPECT_EQ(back.depth, ball.depth);
  EXPECT_EQ(back.radius, ball.radius);
  EXPECT_EQ(back.trusted_radius, ball.trusted_radius);

  std::stringstream again;
  write_graph(back, again);
  std::stringstream first;
  write_graph(ball, first);
  EXPECT_EQ(again.str(), first.str());
}

TEST(GraphFile, Deterministic) {
  auto e = parse_engine_spec("fp(cyclic:3,dp(cyclic:0,cyclic:2))");
  std::stringstream a, b;
  write_graph(build_ball(*e, 4), a);
  write_graph(build_ball(*parse_engine_spec(e->render()), 4), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(GraphFile, Errors) {
  auto line_of = [](std::string const& text) {
    std::istringstream in(text);
    try {
      read_graph(in);
    } catch (FormatError const& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  {
    std::istringstream in("");
    try {
      read_graph(in);
      FAIL();
    } catch (FormatError const& e) {
      EXPECT_NE(std::string(e.what()).find("missing header"), std::string::npos);
    }
  }
  EXPECT_EQ(line_of("cayley v1 n=2 r=1 t=0 gens=1\nv 0 0\nv 1 1\ne 0 2 0 1\n"), 4u);
  EXPECT_EQ(line_of("cayley v1 n=2 r=1 t=0 gens=1\nv 0 0\nv 1 1\ne 0 1 1 1\n"), 4u);
  EXPECT_EQ(line_of("cayley v1 n=2 r=1 t=0 gens=1\nv 0 0\nx\n"), 3u);
  EXPECT_EQ(line_of("cayley v1 n=2 r=1 t=0 gens=1\nv 0 0\n"), 2u);
  EXPECT_EQ(line_of("cayley v2 n=2 r=1 t=0 gens=1\n"), 1u);
}

TEST(BallFromEdges, RootedDepths) {
  auto c4 = ball_from_edges(4, oracle::cycle_edges(4));
  EXPECT_EQ(c4.depth, (std::vector<std::uint32_t>{0, 1, 2, 1}));
  EXPECT_EQ(c4.core().size(), 4u);
  EXPECT_THROW(ball_from_edges(3, {{0, 1}}), StructureError);
}
