#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "opcat/fincat.hpp"
#include "support/random_categories.hpp"

using namespace opcat;

namespace {

CategoryTables walking_arrow_tables() {
  CategoryTables t;
  t.objects = {"a", "b"};
  t.arrows = {{"id_a", 0, 0}, {"id_b", 1, 1}, {"f", 0, 1}};
  t.identities = {0, 1};
  return t;
}

// Brute force: every typed assignment of objects and arrows, filtered by the
// functor laws. Independent of the backtracking search.
std::size_t brute_force_functor_count(const FinCategory& C, const FinCategory& D) {
  std::size_t count = 0;
  std::vector<ObjectId> om(C.object_count());
  std::vector<ArrowId> am(C.arrow_count());
  std::function<void(std::size_t)> arrows = [&](std::size_t a) {
    if (a == C.arrow_count()) {
      for (ObjectId x = 0; x < C.object_count(); ++x)
        if (am[C.identity(x)] != D.identity(om[x])) return;
      for (ArrowId f = 0; f < C.arrow_count(); ++f)
        for (ArrowId g = 0; g < C.arrow_count(); ++g)
          if (C.target(f) == C.source(g) && am[C.compose(g, f)] != D.compose(am[g], am[f])) return;
      ++count;
      return;
    }
    for (ArrowId b = 0; b < D.arrow_count(); ++b) {
      if (D.source(b) != om[C.source(a)] || D.target(b) != om[C.target(a)]) continue;
      am[a] = b;
      arrows(a + 1);
    }
  };
  std::function<void(std::size_t)> objects = [&](std::size_t x) {
    if (x == C.object_count()) return arrows(0);
    for (ObjectId y = 0; y < D.object_count(); ++y) {
      om[x] = y;
      objects(x + 1);
    }
  };
  objects(0);
  return count;
}

}  // namespace

TEST(ValidateCategory, TerminalIsValid) {
  CategoryTables t{{"*"}, {{"id", 0, 0}}, {0}, {}};
  auto v = validate_category(t);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.category->object_count(), 1u);
  EXPECT_EQ(v.category->arrow_count(), 1u);
}

TEST(ValidateCategory, WalkingArrowIsValid) {
  auto v = validate_category(walking_arrow_tables());
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.category->arrow_count(), 3u);
  EXPECT_EQ(v.category->compose(1, 2), 2u);
}

TEST(ValidateCategory, NonAssociativeTableIsReported) {
  // End(a) = {id, x, y} with x.x = y, x.y = x, y.x = y, y.y = y; b is bare.
  CategoryTables t;
  t.objects = {"a", "b"};
  t.arrows = {{"id_a", 0, 0}, {"id_b", 1, 1}, {"x", 0, 0}, {"y", 0, 0}};
  t.identities = {0, 1};
  t.composites = {{2, 2, 3}, {2, 3, 2}, {3, 2, 3}, {3, 3, 3}};
  // independent oracle: search the multiplication table for a failing triple
  auto mul = [](int g, int f) {  // on indices 2 (x), 3 (y)
    if (g == 2 && f == 2) return 3;
    if (g == 2 && f == 3) return 2;
    return 3;
  };
  bool oracle_found = false;
  for (int a : {2, 3})
    for (int b : {2, 3})
      for (int c : {2, 3}) oracle_found |= mul(mul(a, b), c) != mul(a, mul(b, c));
  ASSERT_TRUE(oracle_found);

  auto v = validate_category(t);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violations.front().kind, ErrorKind::not_associative);
  EXPECT_EQ(v.violations.front().arrows.size(), 3u);
}

TEST(ValidateCategory, IllTypedAndMissing) {
  auto t = walking_arrow_tables();
  t.composites.push_back({2, 2, 2});  // f.f is not composable
  auto v = validate_category(t);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violations.front().kind, ErrorKind::ill_typed_composite);

  auto t2 = walking_arrow_tables();
  t2.identities = {0, no_arrow};
  auto v2 = validate_category(t2);
  ASSERT_FALSE(v2.ok());
  EXPECT_EQ(v2.violations.front().kind, ErrorKind::missing_identity);

  auto t3 = walking_arrow_tables();
  t3.arrows.push_back({"g", 1, 0});
  auto v3 = validate_category(t3);
  ASSERT_FALSE(v3.ok());
  EXPECT_EQ(v3.violations.front().kind, ErrorKind::missing_composite);
}

TEST(Product, WalkingArrowSquared) {
  auto I1 = ordinal_category(1);
  auto P = product(I1, I1);
  EXPECT_EQ(P.object_count(), 4u);
  EXPECT_EQ(P.arrow_count(), 9u);
  EXPECT_TRUE(check_category_laws(P).empty());
}

TEST(Product, TerminalIsUnit) {
  SearchBudget budget;
  auto D = share(walking_isomorphism());
  auto P = share(product(terminal_category(), *D));
  EXPECT_TRUE(category_iso(P, D, budget).has_value());
}

TEST(Product, ObjectCountsMultiply) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto C = corpus::random_small_category(rng);
    auto D = corpus::random_small_category(rng);
    auto P = product(C, D);
    EXPECT_EQ(P.object_count(), C.object_count() * D.object_count());
    EXPECT_EQ(P.arrow_count(), C.arrow_count() * D.arrow_count());
    EXPECT_TRUE(check_category_laws(P).empty());
  }
}

TEST(FunctorCategory, WalkingArrowIntoItself) {
  auto I1 = share(ordinal_category(1));
  ASSERT_EQ(brute_force_functor_count(*I1, *I1), 3u);
  SearchBudget budget;
  auto F = functor_category(I1, I1, budget);
  EXPECT_EQ(F.category->object_count(), 3u);
  EXPECT_EQ(F.category->arrow_count(), 6u);
  EXPECT_TRUE(check_category_laws(*F.category).empty());
}

TEST(FunctorCategory, UnitAndTerminal) {
  SearchBudget budget;
  auto pt = share(terminal_category());
  auto C = share(walking_isomorphism());
  auto FC = functor_category(pt, C, budget);
  EXPECT_TRUE(category_iso(FC.category, C, budget).has_value());
  auto K = share(ordinal_category(2));
  auto FK = functor_category(K, pt, budget);
  EXPECT_TRUE(category_iso(FK.category, pt, budget).has_value());
}

TEST(FunctorCategory, CountMatchesBruteForce) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    auto K = share(corpus::random_small_category(rng));
    auto C = share(corpus::random_small_category(rng));
    if (K->arrow_count() > 6 || C->arrow_count() > 6) continue;
    SearchBudget budget;
    auto F = functor_category(K, C, budget);
    EXPECT_EQ(F.category->object_count(), brute_force_functor_count(*K, *C));
    for (const auto& fn : F.functors) EXPECT_TRUE(is_functor(fn));
  }
}

TEST(FunctorCategory, BudgetExceeded) {
  auto K = share(discrete_category({"a", "b", "c", "d", "e", "f"}));
  auto C = share(discrete_category({"0", "1", "2", "3", "4", "5"}));
  SearchBudget budget(100);
  try {
    functor_category(K, C, budget);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
    EXPECT_NE(std::string(e.what()).find("1e"), std::string::npos);
  }
}

TEST(IsIsomorphism, Examples) {
  auto I1 = ordinal_category(1);
  EXPECT_TRUE(is_isomorphism(I1, "id_0"));
  EXPECT_FALSE(is_isomorphism(I1, "0<1"));
  auto iso = walking_isomorphism();
  EXPECT_TRUE(is_isomorphism(iso, "f"));
  EXPECT_TRUE(is_isomorphism(iso, "g"));
  EXPECT_THROW(is_isomorphism(iso, "nope"), Error);
}

TEST(SaturateMarking, Examples) {
  auto I1 = share(ordinal_category(1, {"a", "b"}));
  auto m0 = saturate_marking(I1, std::vector<ArrowId>{});
  EXPECT_EQ(m0.marked_count(), 2u);
  auto m1 = saturate_marking(I1, std::vector<ArrowId>{*I1->find_arrow("a<b")});
  EXPECT_EQ(m1.marked_count(), 3u);
  auto I2 = share(ordinal_category(2, {"a", "b", "c"}));
  auto m2 = saturate_marking(I2, std::vector<ArrowId>{*I2->find_arrow("a<b"), *I2->find_arrow("b<c")});
  EXPECT_TRUE(m2.marked[*I2->find_arrow("a<c")]);
}

TEST(SaturateMarking, IdempotentAndMonotone) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto C = share(corpus::random_small_category(rng));
    std::bernoulli_distribution coin(0.3);
    std::vector<bool> S(C->arrow_count()), T(C->arrow_count());
    for (std::size_t a = 0; a < S.size(); ++a) {
      S[a] = coin(rng);
      T[a] = S[a] || coin(rng);
    }
    auto mS = saturate_marking(C, S);
    auto mT = saturate_marking(C, T);
    EXPECT_EQ(saturate_marking(C, mS.marked).marked, mS.marked);
    for (std::size_t a = 0; a < S.size(); ++a)
      if (mS.marked[a]) EXPECT_TRUE(mT.marked[a]);
  }
}

TEST(MarkedProjections, Examples) {
  SearchBudget budget;
  auto I1 = share(ordinal_category(1));
  std::vector<bool> all(I1->arrow_count(), true);
  auto [full0, full1] = marked_projections(saturate_marking(I1, all));
  EXPECT_TRUE(category_iso(full0, I1, budget).has_value());
  EXPECT_EQ(full1, I1);

  auto [p0, p1] = marked_projections(saturate_marking(I1, std::vector<ArrowId>{}));
  auto disc = share(discrete_category({"x", "y"}));
  EXPECT_TRUE(category_iso(p0, disc, budget).has_value());
  EXPECT_EQ(p1, I1);
}

TEST(MarkedProjections, MinimalMarkingIsMaximalGroupoid) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto C = share(corpus::random_small_category(rng));
    auto [p0, p1] = marked_projections(saturate_marking(C, std::vector<ArrowId>{}));
    // oracle: count isomorphisms by brute-force inverse search
    std::size_t isos = 0;
    for (ArrowId f = 0; f < C->arrow_count(); ++f) {
      for (ArrowId g = 0; g < C->arrow_count(); ++g) {
        if (C->source(g) == C->target(f) && C->target(g) == C->source(f) && C->compose(g, f) == C->identity(C->source(f)) &&
            C->compose(f, g) == C->identity(C->target(f))) {
          ++isos;
          break;
        }
      }
    }
    EXPECT_EQ(p0->arrow_count(), isos);
    EXPECT_EQ(p0->object_count(), C->object_count());
  }
}

TEST(CategoryIso, Examples) {
  SearchBudget budget;
  auto C = share(ordinal_category(2));
  auto self = category_iso(C, C, budget);
  ASSERT_TRUE(self.has_value());
  EXPECT_TRUE(is_functor(self->first));
  EXPECT_EQ(compose(self->second, self->first), identity_functor(C));

  auto I1 = share(ordinal_category(1));
  EXPECT_FALSE(category_iso(I1, share(discrete_category({"a", "b"})), budget).has_value());
  EXPECT_TRUE(category_iso(share(product(ordinal_category(1), terminal_category())), I1, budget).has_value());
}

TEST(CategoryIso, EquivalenceRelationOnCorpus) {
  SearchBudget budget;
  std::mt19937 rng(17);
  std::vector<CategoryPtr> corpus{share(terminal_category()), share(ordinal_category(1)), share(ordinal_category(2)),
                                  share(walking_isomorphism()), share(discrete_category({"a", "b"}))};
  for (int i = 0; i < 6; ++i) corpus.push_back(share(corpus::random_small_category(rng)));
  corpus.push_back(share(product(ordinal_category(1), terminal_category())));
  for (const auto& A : corpus) {
    for (const auto& B : corpus) {
      auto ab = category_iso(A, B, budget);
      auto ba = category_iso(B, A, budget);
      EXPECT_EQ(ab.has_value(), ba.has_value());
      if (!ab) continue;
      EXPECT_TRUE(is_functor(ab->first));
      EXPECT_TRUE(is_functor(ab->second));
      EXPECT_EQ(compose(ab->second, ab->first), identity_functor(A));
      for (const auto& Cc : corpus) {
        auto bc = category_iso(B, Cc, budget);
        if (!bc) continue;
        auto ac = compose(bc->first, ab->first);
        EXPECT_TRUE(is_functor(ac));
        EXPECT_TRUE(is_bijective(ac));
      }
    }
  }
}

TEST(Equivalence, InclusionOfSkeleton) {
  auto iso = share(walking_isomorphism());
  auto pt = share(terminal_category());
  Functor F{pt, iso, {0}, {0}};
  EXPECT_TRUE(is_functor(F));
  EXPECT_TRUE(is_equivalence(F));
  auto I1 = share(ordinal_category(1));
  Functor G{pt, I1, {0}, {0}};
  EXPECT_FALSE(is_equivalence(G));
}

TEST(Pullback, FiberOfProjection) {
  auto C = share(ordinal_category(1));
  auto D = share(walking_isomorphism());
  auto CxD = share(product(*C, *D));
  auto [p, q] = product_projections(CxD, C, D);
  Functor pick{share(terminal_category()), C, {1}, {C->identity(1)}};
  auto fiber = pullback(p, pick);
  SearchBudget budget;
  EXPECT_TRUE(category_iso(share(fiber), D, budget).has_value());
}

TEST(Dot, ListsNonIdentityArrows) {
  auto dot = to_dot(ordinal_category(1, {"a", "b"}), "I1");
  EXPECT_NE(dot.find("\"a\" -> \"b\" [label=\"a<b\"]"), std::string::npos);
  EXPECT_EQ(dot.find("id_a"), std::string::npos);
}
