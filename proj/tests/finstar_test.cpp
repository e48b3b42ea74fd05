#include <gtest/gtest.h>

#include "opcat/finstar.hpp"

using namespace opcat;

namespace {

std::vector<PointedMap> maps_up_to(std::uint32_t N) {
  std::vector<PointedMap> out;
  for (std::uint32_t n = 0; n <= N; ++n)
    for (std::uint32_t m = 0; m <= N; ++m)
      for (auto& f : all_pointed_maps(n, m)) out.push_back(f);
  return out;
}

}  // namespace

TEST(ComposePointed, Examples) {
  auto f = parse_pointed_map("3->2:[1,0,2]");
  auto g = parse_pointed_map("2->1:[1,1]");
  EXPECT_EQ(serialize(compose_pointed(f, g)), "3->1:[1,0,1]");
  EXPECT_EQ(compose_pointed(PointedMap::identity(3), f), f);
  EXPECT_EQ(compose_pointed(f, PointedMap::identity(2)), f);
  EXPECT_THROW(compose_pointed(g, f), Error);
}

TEST(ComposePointed, ActivesAndInertsAreClosed) {
  const auto maps = maps_up_to(3);
  for (const auto& f : maps) {
    for (const auto& g : maps) {
      if (f.target != g.source) continue;
      const auto h = compose_pointed(f, g);
      if (is_active(f) && is_active(g)) EXPECT_TRUE(is_active(h)) << serialize(f) << " " << serialize(g);
      if (is_inert(f) && is_inert(g)) EXPECT_TRUE(is_inert(h)) << serialize(f) << " " << serialize(g);
    }
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(PointedMap::identity(3)), InertActiveTag::both);
  EXPECT_EQ(classify(parse_pointed_map("2->1:[1,0]")), InertActiveTag::inert);
  EXPECT_EQ(classify(parse_pointed_map("2->1:[1,1]")), InertActiveTag::active);
  EXPECT_EQ(classify(parse_pointed_map("2->2:[1,1]")), InertActiveTag::active);
  EXPECT_EQ(classify(parse_pointed_map("2->2:[1,0]")), InertActiveTag::neither);
}

TEST(Factorize, Examples) {
  auto fold = PointedMap::fold(2);
  auto [i1, a1] = inert_active_factorize(fold);
  EXPECT_EQ(i1, PointedMap::identity(2));
  EXPECT_EQ(a1, fold);

  auto rho = PointedMap::projection(3, 2);
  auto [i2, a2] = inert_active_factorize(rho);
  EXPECT_EQ(i2, rho);
  EXPECT_EQ(a2, PointedMap::identity(1));

  auto [i3, a3] = inert_active_factorize(parse_pointed_map("3->2:[2,0,2]"));
  EXPECT_EQ(serialize(i3), "3->2:[1,0,2]");
  EXPECT_EQ(serialize(a3), "2->2:[2,2]");
}

TEST(Factorize, UniqueUpToOrderingExhaustive) {
  for (const auto& f : maps_up_to(3)) {
    auto [inert, active] = inert_active_factorize(f);
    ASSERT_TRUE(is_inert(inert));
    ASSERT_TRUE(is_active(active));
    ASSERT_EQ(compose_pointed(inert, active), f);
    // oracle: every inert-then-active factorization through some <k> uses
    // k = number of survivors, and only the order-preserving one keeps
    // survivors in source order
    std::size_t order_preserving = 0;
    for (std::uint32_t k = 0; k <= 3; ++k) {
      for (const auto& i : all_pointed_maps(f.source, k)) {
        if (!is_inert(i)) continue;
        for (const auto& a : all_pointed_maps(k, f.target)) {
          if (!is_active(a) || compose_pointed(i, a) != f) continue;
          EXPECT_EQ(k, inert.target);
          bool monotone = true;
          std::uint32_t last = 0;
          for (auto v : i.images) {
            if (v == 0) continue;
            monotone = monotone && v > last;
            last = v;
          }
          if (monotone) {
            ++order_preserving;
            EXPECT_EQ(i, inert);
            EXPECT_EQ(a, active);
          }
        }
      }
    }
    EXPECT_EQ(order_preserving, 1u) << serialize(f);
  }
}

TEST(Serialize, RoundTripAndErrors) {
  for (const auto& f : maps_up_to(2)) EXPECT_EQ(parse_pointed_map(serialize(f)), f);
  EXPECT_EQ(serialize(PointedMap{0, 2, {}}), "0->2:[]");
  EXPECT_THROW(parse_pointed_map("2->1:[1]"), Error);
  EXPECT_THROW(parse_pointed_map("2->1:[1,2]"), Error);
  EXPECT_THROW(parse_pointed_map("2 -> 1:[1,1]"), Error);
}

TEST(FinStarTruncated, HomCounts) {
  auto F0 = fin_star_truncated(0);
  EXPECT_EQ(F0.object_count(), 1u);
  EXPECT_EQ(F0.arrow_count(), 1u);
  auto F1 = fin_star_truncated(1);
  EXPECT_EQ(F1.hom(1, 1).size(), 2u);
  auto F2 = fin_star_truncated(2);
  EXPECT_EQ(F2.hom(2, 1).size(), 4u);
  EXPECT_TRUE(check_category_laws(F2, 1).empty());
  // |Hom(<n>,<m>)| = (m+1)^n
  auto F3 = fin_star_truncated(3);
  std::size_t total = 0;
  for (ObjectId n = 0; n <= 3; ++n)
    for (ObjectId m = 0; m <= 3; ++m) {
      std::size_t expected = 1;
      for (ObjectId k = 0; k < n; ++k) expected *= m + 1;
      EXPECT_EQ(F3.hom(n, m).size(), expected);
      total += expected;
    }
  EXPECT_EQ(F3.arrow_count(), total);
}

TEST(GammaStar, ObjectsAndHoms) {
  auto G = gamma_star_truncated(2);
  std::vector<std::string> over2;
  for (ObjectId x = 0; x < G.category->object_count(); ++x)
    if (G.projection(x) == 2) over2.push_back(G.category->object_name(x));
  EXPECT_EQ(over2, (std::vector<std::string>{"(<2>,1)", "(<2>,2)"}));
  auto x11 = *G.category->find_object("(<1>,1)");
  auto x21 = *G.category->find_object("(<2>,1)");
  EXPECT_EQ(G.category->hom(x11, x21).size(), 1u);
  EXPECT_EQ(G.category->hom(x21, x11).size(), 2u);
  EXPECT_TRUE(check_category_laws(*G.category).empty());
  EXPECT_TRUE(is_functor(G.projection));
}

TEST(GammaStar, FibersAreDiscrete) {
  auto G = gamma_star_truncated(3);
  for (ObjectId n = 1; n <= 3; ++n) {
    std::size_t objects = 0;
    for (ObjectId x = 0; x < G.category->object_count(); ++x) {
      if (G.projection(x) != n) continue;
      ++objects;
      for (ObjectId y = 0; y < G.category->object_count(); ++y) {
        if (G.projection(y) != n) continue;
        std::size_t vertical = 0;
        for (ArrowId a : G.category->hom(x, y))
          if (G.base->is_identity(G.projection.map_arrow(a))) ++vertical;
        EXPECT_EQ(vertical, x == y ? 1u : 0u);
      }
    }
    EXPECT_EQ(objects, n);
  }
}
