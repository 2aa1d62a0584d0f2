#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <functional>
#include <set>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "hyperprof/cayley.hpp"
#include "hyperprof/engines.hpp"
#include "hyperprof/spec_parser.hpp"
#include "hyperprof/surjection.hpp"
#include "hyperprof/table.hpp"
#include "oracles.hpp"

using namespace hyperprof;

namespace {

constexpr Letter a{0, 1}, A{0, -1}, b{1, 1}, B{1, -1};

}  // namespace

TEST(FreeReduce, Cancellation) {
  EXPECT_EQ(free_reduce({a, A}), Word{});
  EXPECT_EQ(free_reduce({a, b, B, a}), (Word{a, a}));
  EXPECT_EQ(free_reduce({B, a, A, b}), Word{});
}

TEST(FreeReduce, IdempotentAndReduced) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Word w;
    int len = static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) w.push_back({static_cast<std::uint32_t>(rng() % 2), rng() % 2 ? 1 : -1});
    Word r = free_reduce(w);
    EXPECT_TRUE(is_reduced(r));
    EXPECT_EQ(free_reduce(r), r);
    // Same element: w * r^-1 reduces to the empty word.
    Word both = w;
    Word inv = inverse(r);
    both.insert(both.end(), inv.begin(), inv.end());
    EXPECT_TRUE(free_reduce(both).empty());
  }
}

TEST(FreeEngine, Examples) {
  auto f = engine_free(2);
  EXPECT_EQ(f->multiply_gen(f->identity(), a), (Element{1}));
  Element ab = f->evaluate({a, b});
  EXPECT_EQ(f->multiply_gen(ab, B), (Element{1}));
  EXPECT_EQ(build_ball(*engine_free(1), 3).size(), 7u);
  EXPECT_THROW(engine_free(0), ValidationError);
}

TEST(CyclicEngine, Examples) {
  auto c5 = engine_cyclic(5);
  EXPECT_EQ(c5->multiply_gen({3}, {0, 1}), (Element{4}));
  EXPECT_EQ(c5->multiply_gen({4}, {0, 1}), (Element{0}));
  auto z = engine_cyclic(0);
  EXPECT_EQ(z->multiply_gen({7}, {0, -1}), (Element{6}));
  EXPECT_FALSE(z->is_finite());
  auto c1 = engine_cyclic(1);
  EXPECT_EQ(c1->multiply_gen(c1->identity(), {0, 1}), c1->identity());
  EXPECT_EQ(c1->multiply_gen(c1->identity(), {0, -1}), c1->identity());
}

TEST(TableEngine, KleinAndS3) {
  auto klein = engine_finite_table(oracle::klein_table());
  EXPECT_EQ(klein->order(), 4u);
  EXPECT_EQ(klein->rank(), 2u);
  auto s3 = engine_finite_table(oracle::s3_table());
  EXPECT_EQ(s3->order(), 6u);
  // (12) and (123) do not commute.
  Element x = s3->evaluate({a}), y = s3->evaluate({b});
  EXPECT_NE(s3->multiply(x, y), s3->multiply(y, x));
}

TEST(TableEngine, RejectsNonGroups) {
  auto t = oracle::klein_table();
  // Row/column 0 still act as identity but element 3 squares to 1.
  t.entries[3 * 4 + 3] = 1;
  t.entries[3 * 4 + 1] = 3;
  t.entries[1 * 4 + 3] = 3;
  try {
    engine_finite_table(t);
    FAIL() << "expected a validation error";
  } catch (ValidationError const& e) {
    EXPECT_NE(std::string(e.what()).find("no inverse for element"), std::string::npos) << e.what();
  }

  // Smallest non-associative loop: identity and inverses exist.
  MultiplicationTable loop;
  loop.order = 5;
  loop.entries = {0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0};
  loop.generators = {1, 2};
  try {
    engine_finite_table(loop);
    FAIL() << "expected a validation error";
  } catch (ValidationError const& e) {
    EXPECT_NE(std::string(e.what()).find("associativity fails"), std::string::npos) << e.what();
  }

  auto no_id = oracle::klein_table();
  no_id.entries[0] = 1;
  EXPECT_THROW(engine_finite_table(no_id), ValidationError);

  auto weak_gens = oracle::klein_table();
  weak_gens.generators = {1};
  EXPECT_THROW(engine_finite_table(weak_gens), ValidationError);
}

TEST(TableEngine, FileFormat) {
  std::istringstream in("order 4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\ngens 1 2\n");
  auto t = read_table(in);
  EXPECT_EQ(t.order, 4u);
  EXPECT_EQ(t.generators, (std::vector<std::uint32_t>{1, 2}));
  std::ostringstream out;
  write_table(out, t);
  EXPECT_EQ(out.str(), "order 4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\ngens 1 2\n");

  std::istringstream short_row("order 2\n0 1\n1\ngens 1\n");
  try {
    read_table(short_row);
    FAIL();
  } catch (FormatError const& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream empty("");
  EXPECT_THROW(read_table(empty), FormatError);
}

TEST(HeisenbergEngine, Examples) {
  auto h = engine_heisenberg_p(3);
  EXPECT_EQ(h->multiply({1, 0, 0}, {0, 1, 0}), (Element{1, 1, 1}));
  EXPECT_EQ(h->multiply({0, 1, 0}, {1, 0, 0}), (Element{1, 1, 0}));
  EXPECT_EQ(h->order(), 27u);
  EXPECT_EQ(build_full_graph(*h).size(), 27u);
  EXPECT_THROW(engine_heisenberg_p(2), ValidationError);
  EXPECT_THROW(engine_heisenberg_p(9), ValidationError);
}

TEST(HeisenbergEngine, ExponentAndClass) {
  auto h = engine_heisenberg_p(5);
  auto g = build_full_graph(*h);
  for (auto const& x : g.elements) {
    Element pow = h->identity();
    for (int i = 0; i < 5; ++i) pow = h->multiply(pow, x);
    EXPECT_EQ(pow, h->identity());
    // Commutators are central.
    for (auto const& y : g.elements) {
      Element comm = h->multiply(h->multiply(x, y), h->inverse(h->multiply(y, x)));
      EXPECT_EQ(comm[0], 0);
      EXPECT_EQ(comm[1], 0);
    }
  }
}

TEST(FreeProductEngine, Syllables) {
  auto d = engine_free_product(engine_cyclic(2), engine_cyclic(2));
  Element aba = d->evaluate({a, b, a});
  EXPECT_EQ(FreeProductEngine::syllables(aba).size(), 3u);
  EXPECT_EQ(d->evaluate({a, a}), d->identity());

  auto t = engine_free_product(engine_cyclic(3), engine_cyclic(3));
  auto syl = FreeProductEngine::syllables(t->evaluate({a, a, b}));
  ASSERT_EQ(syl.size(), 2u);
  EXPECT_EQ(syl[0], (Syllable{0, {2}}));
  EXPECT_EQ(syl[1], (Syllable{1, {1}}));
}

TEST(FreeProductEngine, MatchesFreeGroupGrowth) {
  auto fp = engine_free_product(engine_free(1), engine_free(1));
  std::size_t expected = oracle::free_ball_size(2, 2);
  EXPECT_EQ(expected, 17u);
  EXPECT_EQ(build_ball(*fp, 2).size(), expected);
  EXPECT_EQ(build_ball(*engine_free(2), 2).size(), expected);
}

TEST(DirectProductEngine, Examples) {
  auto zz = engine_direct_product(engine_cyclic(0), engine_cyclic(0));
  Element p = DirectProductEngine::pack({2}, {3});
  EXPECT_EQ(zz->multiply_gen(p, {1, 1}), DirectProductEngine::pack({2}, {4}));
  EXPECT_EQ(build_ball(*zz, 2).size(), 13u);
}

TEST(DirectProductEngine, KleinCayleyGraphIsomorphism) {
  auto v4 = engine_direct_product(engine_cyclic(2), engine_cyclic(2));
  auto klein = engine_finite_table(oracle::klein_table());
  auto g1 = build_full_graph(*v4);
  auto g2 = build_full_graph(*klein);
  ASSERT_EQ(g1.size(), 4u);
  ASSERT_EQ(g2.size(), 4u);
  // Brute-force isomorphism over all 24 vertex bijections.
  auto edge_set = [](CayleyBall const& g) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> s;
    for (auto const& e : g.edges) s.insert(std::minmax(e.u, e.v));
    return s;
  };
  auto e1 = edge_set(g1), e2 = edge_set(g2);
  std::vector<std::uint32_t> perm{0, 1, 2, 3};
  bool iso = false;
  do {
    std::set<std::pair<std::uint32_t, std::uint32_t>> mapped;
    for (auto [u, v] : e1) mapped.insert(std::minmax(perm[u], perm[v]));
    iso = iso || mapped == e2;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_TRUE(iso);
}

namespace {

std::vector<EnginePtr> sample_engines() {
  return {engine_free(2),
          engine_cyclic(0),
          engine_cyclic(7),
          engine_cyclic(1),
          engine_heisenberg_p(3),
          engine_finite_table(oracle::klein_table()),
          engine_finite_table(oracle::s3_table()),
          engine_direct_product(engine_cyclic(0), engine_cyclic(3)),
          engine_free_product(engine_cyclic(3), engine_cyclic(2)),
          engine_free_product(engine_free(1), engine_finite_table(oracle::s3_table())),
          engine_direct_product(engine_heisenberg_p(3), engine_cyclic(2))};
}

}  // namespace

TEST(EngineInvariants, GeneratorThenInverseIsIdentity) {
  for (auto const& e : sample_engines()) {
    auto ball = build_ball(*e, 3);
    for (auto const& g : ball.elements) {
      for (std::uint32_t s = 0; s < e->rank(); ++s) {
        for (int sign : {1, -1}) {
          EXPECT_EQ(e->multiply_gen(e->multiply_gen(g, {s, sign}), {s, -sign}), g) << e->render();
        }
      }
      EXPECT_EQ(e->evaluate(e->word_of(g)), g) << e->render();
      EXPECT_EQ(e->multiply(g, e->inverse(g)), e->identity()) << e->render();
    }
  }
}

TEST(EngineInvariants, MultiplicationConsistentOnSmallFiniteEngines) {
  for (auto const& e : sample_engines()) {
    if (!e->is_finite() || *e->order() > 64) continue;
    auto g = build_full_graph(*e);
    ASSERT_EQ(g.size(), *e->order()) << e->render();
    std::unordered_set<Element, ElementHash> all(g.elements.begin(), g.elements.end());
    for (auto const& x : g.elements) {
      for (auto const& y : g.elements) {
        Element xy = e->multiply(x, y);
        ASSERT_TRUE(all.contains(xy));
        // Word concatenation agrees with the engine product.
        Word w = e->word_of(x);
        Word wy = e->word_of(y);
        w.insert(w.end(), wy.begin(), wy.end());
        EXPECT_EQ(e->evaluate(w), xy) << e->render();
        for (auto const& z : g.elements) {
          EXPECT_EQ(e->multiply(xy, z), e->multiply(x, e->multiply(y, z)));
        }
      }
    }
  }
}

TEST(EngineInvariants, FreeProductLengthIsSumOfSyllableLengths) {
  auto fp = engine_free_product(engine_cyclic(5), engine_free(1));
  auto ball = build_ball(*fp, 5);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    EXPECT_EQ(oracle::word_length(*fp, ball.elements[i]), ball.depth[i]);
  }
}

TEST(EngineSpec, Examples) {
  auto zz = parse_engine_spec("dp(cyclic:0,cyclic:0)");
  EXPECT_EQ(zz->kind(), EngineKind::direct_product);
  EXPECT_EQ(zz->rank(), 2u);
  auto fp = parse_engine_spec("fp(cyclic:3,cyclic:3)");
  EXPECT_EQ(fp->kind(), EngineKind::free_product);
  EXPECT_EQ(fp->rank(), 2u);
  try {
    parse_engine_spec("heis:4");
    FAIL();
  } catch (ValidationError const& e) {
    EXPECT_STREQ(e.what(), "p must be an odd prime");
  }
}

TEST(EngineSpec, SyntaxErrorsCarryOffsets) {
  auto offset_of = [](std::string const& s) {
    try {
      parse_engine_spec(s);
    } catch (ParseError const& e) {
      return e.offset();
    }
    return std::size_t{999};
  };
  EXPECT_EQ(offset_of("bogus"), 0u);
  EXPECT_EQ(offset_of("free:"), 5u);
  EXPECT_EQ(offset_of("fp(free:1;free:1)"), 9u);
  EXPECT_EQ(offset_of("dp(free:1,free:1"), 16u);
  EXPECT_EQ(offset_of("cyclic:3x"), 8u);
  EXPECT_THROW(parse_engine_spec("free:0"), ValidationError);
}

TEST(EngineSpec, TableFiles) {
  auto path = std::filesystem::temp_directory_path() / "hyperprof_klein.txt";
  {
    std::ofstream out(path);
    write_table(out, oracle::klein_table());
  }
  auto e = parse_engine_spec("dp(table:" + path.string() + ",cyclic:2)");
  EXPECT_EQ(e->order(), 8u);
  EXPECT_EQ(parse_engine_spec(e->render())->render(), e->render());
  EXPECT_THROW(parse_engine_spec("table:/nonexistent/file"), IoError);
  std::filesystem::remove(path);
}

TEST(EngineSpec, RenderRoundTripsOnRandomSpecs) {
  std::mt19937 rng(11);
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    switch (depth > 2 ? rng() % 3 : rng() % 5) {
      case 0: return "free:" + std::to_string(1 + rng() % 3);
      case 1: return "cyclic:" + std::to_string(rng() % 12);
      case 2: return "heis:" + std::to_string(std::array{3, 5, 7, 11}[rng() % 4]);
      case 3: return "fp(" + gen(depth + 1) + "," + gen(depth + 1) + ")";
      default: return "dp(" + gen(depth + 1) + "," + gen(depth + 1) + ")";
    }
  };
  for (int i = 0; i < 300; ++i) {
    std::string s = gen(0);
    auto e = parse_engine_spec(s);
    EXPECT_EQ(e->render(), s);
    EXPECT_EQ(parse_engine_spec(e->render())->render(), s);
  }
}

TEST(Surjection, CyclicReductions) {
  auto z = engine_cyclic(0), z9 = engine_cyclic(9), z3 = engine_cyclic(3);
  EXPECT_TRUE(check_surjection({z, z9, {{1}}}).valid);
  Surjection bond{z9, z3, {{1}}};
  auto rep = check_surjection(bond);
  EXPECT_TRUE(rep.valid) << rep.message;
  EXPECT_EQ(rep.checked_pairs, 81u);
  EXPECT_EQ(bond.apply({7}), (Element{1}));

  auto dead = check_surjection({z9, z3, {{0}}});
  EXPECT_FALSE(dead.valid);
  EXPECT_FALSE(dead.generates);
  EXPECT_TRUE(dead.homomorphism);

  // Z/3 -> Z/9 with 1 -> 1 is not well defined.
  auto bad = check_surjection({z3, z9, {{1}}});
  EXPECT_FALSE(bad.valid);
  EXPECT_FALSE(bad.homomorphism);

  EXPECT_FALSE(check_surjection({z9, z, {{1}}}).valid);
}

TEST(Surjection, HeisenbergAbelianization) {
  auto h = engine_heisenberg_p(3);
  auto ab = engine_direct_product(engine_cyclic(3), engine_cyclic(3));
  Surjection s{h, ab, {DirectProductEngine::pack({1}, {0}), DirectProductEngine::pack({0}, {1})}};
  auto rep = check_surjection(s);
  EXPECT_TRUE(rep.valid) << rep.message;
  EXPECT_EQ(rep.checked_pairs, 27u * 27u);
  // Oracle: the map is the coordinate projection (a, b, c) -> (a, b).
  for (auto const& g : build_full_graph(*h).elements) {
    EXPECT_EQ(s.apply(g), DirectProductEngine::pack({g[0]}, {g[1]}));
  }
  EXPECT_EQ(s.apply({1, 2, 2}), DirectProductEngine::pack({1}, {2}));
}
