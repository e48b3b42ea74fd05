#include <gtest/gtest.h>

#include <random>

#include "opcat/verify.hpp"
#include "support/over_base_corpus.hpp"
#include "support/random_operads.hpp"

using namespace opcat;

namespace {

// Every table of operation images for every color map, filtered by the
// morphism laws. nullopt when the candidate space exceeds `cap`.
std::optional<std::size_t> brute_force_morphism_count(const SetOperad& O, const SetOperad& P, std::size_t bound, std::size_t cap) {
  const OperadIndex index(O, bound);
  const std::size_t n = O.color_count(), m = P.color_count();
  std::size_t total = 0;
  std::vector<ColorId> colors(n, 0);
  while (true) {
    OperadMorphism f{O, P, bound, colors, {}};
    std::vector<std::size_t> radix;
    for (const auto& op : index.all()) radix.push_back(P.op_count(f.image(op.signature)));
    double space = 1;
    for (auto r : radix) space *= static_cast<double>(r);
    if (space > static_cast<double>(cap)) return std::nullopt;
    if (space >= 1) {
      std::vector<std::size_t> digits(radix.size(), 0);
      while (true) {
        f.on_ops.clear();
        for (std::size_t id = 0; id < index.size(); ++id) f.on_ops[index.op(id).signature].push_back(static_cast<OpIndex>(digits[id]));
        if (morphism_violations(f, 1).empty()) ++total;
        std::size_t i = digits.size();
        while (i > 0 && digits[i - 1] + 1 == radix[i - 1]) digits[--i] = 0;
        if (i == 0) break;
        ++digits[i - 1];
      }
    }
    std::size_t i = n;
    while (i > 0 && colors[i - 1] + 1 == m) colors[--i] = 0;
    if (i == 0) break;
    ++colors[i - 1];
  }
  if (m == 0 && n > 0) return 0;
  return total;
}

// Colors of C and its unary operations, composed by ∘_1.
CategoryPtr underlying_category(const SetOperad& C) {
  std::vector<std::string> objects;
  for (ColorId c = 0; c < C.color_count(); ++c) objects.push_back(C.color_name(c));
  std::vector<ArrowInfo> arrows;
  std::vector<Operation> ops;
  std::vector<ArrowId> ids(C.color_count());
  for (ColorId x = 0; x < C.color_count(); ++x) {
    for (ColorId y = 0; y < C.color_count(); ++y) {
      for (const auto& op : C.operations({{x}, y})) {
        if (op == C.unit(x)) ids[x] = static_cast<ArrowId>(arrows.size());
        arrows.push_back({C.describe(op), x, y});
        ops.push_back(op);
      }
    }
  }
  auto cat = FinCategory::generate(objects, arrows, ids, [&](ArrowId g, ArrowId f) {
    const Operation r = C.compose_at(ops[g], 0, ops[f]);
    return static_cast<ArrowId>(std::find(ops.begin(), ops.end(), r) - ops.begin());
  });
  return share(std::move(cat));
}

std::vector<SetOperad> targets() { return {terminal_com(), trivial_operad(), sample_operad()}; }

}  // namespace

TEST(OperadMorphisms, IdentityIsAmongEndomorphisms) {
  for (const auto& O : {terminal_com(), trivial_operad(2), sample_operad(), free_operad(corolla(2)), sqcup(ordinal_category(1))}) {
    const auto ms = operad_morphisms(O, O, 3);
    EXPECT_NE(std::find(ms.begin(), ms.end(), identity_morphism(O, 3)), ms.end()) << O.name();
    for (const auto& m : ms) EXPECT_TRUE(morphism_violations(m).empty());
  }
}

TEST(OperadMorphisms, Counts) {
  EXPECT_EQ(operad_morphisms(terminal_com(), terminal_com(), 3).size(), 1u);
  EXPECT_EQ(operad_morphisms(trivial_operad(), sample_operad(), 3).size(), 2u);
  EXPECT_EQ(operad_morphisms(terminal_com(), trivial_operad(), 3).size(), 0u);
  // only r carries a commutative algebra structure
  EXPECT_EQ(operad_morphisms(terminal_com(), sample_operad(), 3).size(), 1u);
  // m -> m with the sign kept or forgotten, or m -> r
  EXPECT_EQ(operad_morphisms(sample_operad(), sample_operad(), 3).size(), 3u);
}

TEST(OperadMorphisms, AgreeWithBruteForce) {
  std::mt19937 rng(11);
  std::size_t compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const SetOperad O = corpus::random_small_operad(rng, 0);
    const SetOperad P = corpus::random_small_operad(rng, 0);
    if (O.color_count() > 4 || P.color_count() > 4) continue;
    auto expected = brute_force_morphism_count(O, P, 2, 20000);
    if (!expected) continue;
    ++compared;
    EXPECT_EQ(operad_morphisms(O, P, 2).size(), *expected) << O.name() << " -> " << P.name();
  }
  EXPECT_GE(compared, 20u);
}

TEST(OperadMorphisms, BudgetIsEnforced) {
  SearchBudget tiny(2);
  EXPECT_THROW(operad_morphisms(trivial_operad(3), sample_operad(), 2, tiny), Error);
}

TEST(OperadIso, SelfIsoIsFound) {
  for (const auto& O : {terminal_com(), trivial_operad(2), sample_operad(), free_operad(corolla(2))}) {
    auto w = operad_iso(O, O, 3);
    ASSERT_TRUE(w.has_value()) << O.name();
    EXPECT_TRUE(iso_witness_violations(*w).empty());
  }
}

TEST(OperadIso, DiagramOperadIsPullback) {
  for (const auto& [name, K] : corpus::corpus_categories()) {
    for (const auto& O : {terminal_com(), trivial_operad(), free_operad(corolla(2)), sample_operad()}) {
      auto w = operad_iso(diagram_operad(K, O), product_over_com(sqcup(K), O), 2);
      ASSERT_TRUE(w.has_value()) << name << " " << O.name();
      EXPECT_TRUE(iso_witness_violations(*w).empty()) << name << " " << O.name();
    }
  }
}

TEST(OperadIso, SqcupIntervalIsNotTrivial) {
  EXPECT_FALSE(operad_iso(sqcup(ordinal_category(1)), trivial_operad(2), 3).has_value());
  EXPECT_FALSE(operad_iso(terminal_com(), trivial_operad(), 3).has_value());
  EXPECT_FALSE(operad_iso(free_operad(corolla(2)), free_operad(Forest({"r", "m", "l"}, {{"u", {1}, 0}, {"w", {2}, 1}})), 3));
}

TEST(OperadIso, ShuffledForestsGiveIsomorphicFreeOperads) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto F = corpus::random_forest(rng, 5);
    auto G = corpus::shuffled(F, rng);
    auto w = operad_iso(free_operad(F), free_operad(G), 3);
    ASSERT_TRUE(w.has_value()) << corpus::canonical_form(F);
    EXPECT_TRUE(iso_witness_violations(*w).empty());
  }
}

TEST(OperadIso, CorruptedOperadIsNotIsomorphic) {
  const SetOperad D = diagram_operad(share(terminal_category()), sample_operad());
  EXPECT_FALSE(operad_iso(D, corrupt_composition(D, 2), 2).has_value());
}

TEST(AlgCategory, ComInComIsTerminal) {
  const auto A = alg_category(terminal_com(), terminal_com(), 3);
  SearchBudget budget;
  EXPECT_TRUE(category_iso(A.category(), share(terminal_category()), budget).has_value());
}

TEST(AlgCategory, TrivialAlgebrasAreTheUnderlyingCategory) {
  for (const auto& C : {terminal_com(), trivial_operad(2), sample_operad(), sqcup(walking_isomorphism()), free_operad(corolla(1))}) {
    const auto A = alg_category(trivial_operad(), C, 3);
    const auto U = underlying_category(C);
    SearchBudget budget;
    EXPECT_TRUE(category_iso(A.category(), U, budget).has_value()) << C.name();
  }
}

TEST(AlgCategory, ComInTrivialIsEmpty) {
  EXPECT_EQ(alg_category(terminal_com(), trivial_operad(), 3).category()->object_count(), 0u);
}

TEST(AlgCategory, MorphismsAreVertical) {
  const auto A = alg_category(trivial_operad(), sample_operad(), 2);
  const auto& Y = A.target;
  for (const auto& t : A.algebras.transformations)
    for (ArrowId c : t.components) EXPECT_TRUE(Y.base->is_identity(Y.projection.map_arrow(c)));
}

TEST(InertFunctorBijection, Corpus) {
  for (const auto& O : {trivial_operad(), terminal_com()}) {
    for (const auto& C : targets()) {
      const auto r = inert_functor_bijection_check(O, C, 3);
      EXPECT_TRUE(r.ok()) << O.name() << " " << C.name() << ": " << r.witness;
      if (O.name() == "triv") EXPECT_EQ(r.morphisms, C.color_count());
    }
  }
}

TEST(InertFunctorBijection, RandomSmallOperads) {
  std::mt19937 rng(3);
  std::size_t checked = 0, nonempty = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const SetOperad O = corpus::random_small_operad(rng, 0);
    const SetOperad C = corpus::random_small_operad(rng, 0);
    if (O.color_count() > 3 || C.color_count() > 3) continue;
    const auto r = inert_functor_bijection_check(O, C, 2);
    EXPECT_TRUE(r.ok()) << O.name() << " -> " << C.name() << ": " << to_string(r);
    ++checked;
    if (r.morphisms > 0) ++nonempty;
  }
  EXPECT_GE(checked, 15u);
  EXPECT_GE(nonempty, 8u);
}

TEST(Restriction, TerminalIsIsomorphism) {
  const auto T = share(terminal_category());
  for (const auto& C : targets()) {
    SearchBudget budget(SearchBudget::default_verify_limit);
    const auto R = restriction_functor(T, sample_operad(), C, 2, budget);
    EXPECT_EQ(functor_violation(R.functor), "");
    EXPECT_TRUE(is_bijective(R.functor)) << C.name();
  }
}

TEST(Restriction, TrivialOverIntervalIsDiagramsInUnderlying) {
  const auto I1 = share(ordinal_category(1, {"a", "b"}));
  for (const auto& C : targets()) {
    SearchBudget budget(SearchBudget::default_verify_limit);
    const auto R = restriction_functor(I1, trivial_operad(), C, 3, budget);
    const auto expected = functor_category(I1, underlying_category(C), budget);
    EXPECT_TRUE(category_iso(R.diagrams.category, expected.category, budget).has_value()) << C.name();
    EXPECT_TRUE(category_iso(R.diagram_algebras.category(), expected.category, budget).has_value()) << C.name();
    EXPECT_TRUE(is_bijective(R.functor)) << C.name();
  }
}

TEST(UniversalProperty, PassesOnCorpusAtArityTwo) {
  for (const auto& [name, K] : corpus::corpus_categories()) {
    for (const auto& O : {trivial_operad(), terminal_com()}) {
      for (const auto& C : targets()) {
        const auto r = universal_property_check(K, O, C, 2);
        EXPECT_TRUE(r.pass()) << name << " " << O.name() << " " << C.name() << "\n" << to_string(r);
        EXPECT_TRUE(r.equivalence);
      }
    }
  }
}

TEST(UniversalProperty, CorruptedDiagramOperadFails) {
  for (const auto& [name, K] : {corpus::corpus_categories()[0], corpus::corpus_categories()[1]}) {
    const SetOperad bad = corrupt_composition(diagram_operad(K, sample_operad()), 2);
    const auto r = universal_property_check(K, sample_operad(), sample_operad(), 2, bad);
    EXPECT_FALSE(r.pass()) << name;
    EXPECT_FALSE(r.witness.empty());
    EXPECT_NE(to_string(r).find("witness: "), std::string::npos);
  }
}

TEST(UniversalProperty, ReportFieldOrderIsStable) {
  const auto r = universal_property_check(share(terminal_category()), trivial_operad(), sample_operad(), 2);
  EXPECT_EQ(to_string(r),
            "universal: pass\nbound: 2\ndiagram-algebras: 2 objects, 3 arrows\ndiagrams: 2 objects, 3 arrows\n"
            "isomorphism: yes\nequivalence: yes\n");
}
