#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "opcat/finstar.hpp"
#include "opcat/operad/operator_category.hpp"

namespace opcat {

// A marked category B with a functor p: B -> Fin_* (truncated).
struct CategoryOverBase {
  std::string name;
  std::shared_ptr<const FinStar> finstar;
  CategoryPtr category;
  Functor projection;
  std::vector<bool> marked;
};

// Builds p from the arity of each object and the pointed map under each
// arrow, and marks the arrows lying over inert maps. Throws if p is not a
// functor.
inline CategoryOverBase over_base(std::string name, CategoryPtr B, std::uint32_t N, const std::vector<std::uint32_t>& arities,
                                  const std::vector<PointedMap>& maps) {
  CategoryOverBase out{std::move(name), std::make_shared<const FinStar>(N), std::move(B), {}, {}};
  out.projection = Functor{out.category, out.finstar->category(), arities, {}};
  for (const auto& f : maps) {
    out.projection.on_arrows.push_back(out.finstar->arrow_id(f));
    out.marked.push_back(is_inert(f));
  }
  if (auto why = functor_violation(out.projection); !why.empty()) {
    throw Error(ErrorKind::invalid_structure, out.name + ": projection is not a functor: " + why);
  }
  return out;
}

struct RepresentabilityReport {
  std::string name;
  std::uint32_t bound = 0;
  std::size_t functors_to_sqcup = 0;      // over the base, B -> K^⊔
  std::size_t functors_from_pullback = 0;  // B ×_{Fin_*} Γ* -> K
  std::size_t marked_to_sqcup = 0;         // also preserving the marking
  std::size_t marked_from_pullback = 0;    // inverting nothing: marked arrows go to identities
  bool bijective = false;
  std::string witness;

  bool ok() const {
    return bijective && functors_to_sqcup == functors_from_pullback && marked_to_sqcup == marked_from_pullback;
  }
};

// Compares the two sides of the universal property of K^⊔ by enumerating
// both: functors F: B -> K^⊔ over Fin_* against functors B ×_{Fin_*} Γ* -> K.
// The transpose of F sends (b, (<n>, i)) to the i-th object of F(b) and an
// arrow (u, i -> j) to the (i, j) component of F(u). The marked variant
// restricts to F preserving the marking and to functors sending every
// arrow over a marked u to an identity.
inline RepresentabilityReport sqcup_representability_check(const CategoryOverBase& B, const CategoryPtr& K, SearchBudget& budget) {
  RepresentabilityReport report;
  report.name = B.name;
  const std::uint32_t N = B.finstar->bound();
  report.bound = N;
  const OperatorCategory X = operator_category(sqcup(K), N);
  const auto& S = *X.structure;
  const detail::ArrowTuples tuples(K);

  // Left side: functors over the base.
  FunctorSearchOptions over;
  over.object_ok = [&](ObjectId b, ObjectId x) { return X.projection(x) == B.projection(b); };
  over.arrow_ok = [&](ArrowId u, ArrowId a) { return X.projection.map_arrow(a) == B.projection.map_arrow(u); };
  const auto lefts = all_functors(B.category, X.total, budget, over);
  report.functors_to_sqcup = lefts.size();

  // Right side: functors out of the pullback.
  const GammaStar G = gamma_star_truncated(N);
  std::vector<std::pair<ObjectId, ObjectId>> obj_origin;
  std::vector<std::pair<ArrowId, ArrowId>> arr_origin;
  const CategoryPtr P = share(pullback(B.projection, G.projection, &obj_origin, &arr_origin));
  const auto rights = all_functors(P, K, budget);
  report.functors_from_pullback = rights.size();
  std::set<std::vector<ArrowId>> right_set;
  for (const auto& R : rights) right_set.insert(R.on_arrows);

  auto fail = [&](std::string why) {
    if (report.witness.empty()) report.witness = std::move(why);
  };
  auto marked_side = [&](const Functor& R) {
    for (ArrowId a = 0; a < P->arrow_count(); ++a)
      if (B.marked[arr_origin[a].first] && !K->is_identity(R.map_arrow(a))) return false;
    return true;
  };
  for (const auto& R : rights)
    if (marked_side(R)) ++report.marked_from_pullback;

  std::set<std::vector<ArrowId>> images;
  for (const auto& F : lefts) {
    Functor T{P, K, {}, {}};
    for (const auto& [b, g] : obj_origin) T.on_objects.push_back(S.object_colors[F(b)][G.objects[g].second - 1]);
    for (const auto& [u, g] : arr_origin) {
      const ArrowId a = F.map_arrow(u);
      const PointedMap& f = X.base_map(a);
      const std::uint32_t i = G.objects[G.category->source(g)].second;
      const std::uint32_t j = f(i);
      const ObjectId x = S.arrow_source[a], y = S.arrow_target[a];
      std::vector<ObjectId> sources;
      std::size_t position = 0;
      for (auto k : f.preimage(j)) {
        if (k == i) position = sources.size();
        sources.push_back(S.object_colors[x][k - 1]);
      }
      const auto component = tuples.decode(sources, S.object_colors[y][j - 1], S.arrow_ops[a][j - 1]);
      T.on_arrows.push_back(component[position]);
    }
    if (auto why = functor_violation(T); !why.empty()) {
      fail("transpose of a functor is not a functor: " + why);
      continue;
    }
    if (!right_set.count(T.on_arrows)) fail("transpose missing from the enumeration");
    if (!images.insert(T.on_arrows).second) fail("two functors have the same transpose");
    bool preserves = true;
    for (ArrowId u = 0; u < B.category->arrow_count(); ++u)
      if (B.marked[u] && !X.marked[F.map_arrow(u)]) preserves = false;
    if (preserves) ++report.marked_to_sqcup;
    if (preserves != marked_side(T)) fail("transposition does not respect the marking");
  }
  if (images.size() != right_set.size()) fail("transposition misses some functors out of the pullback");
  report.bijective = report.witness.empty();
  return report;
}

inline std::string to_string(const RepresentabilityReport& r) {
  return r.name + " N=" + std::to_string(r.bound) + " left=" + std::to_string(r.functors_to_sqcup) +
         " right=" + std::to_string(r.functors_from_pullback) + " marked_left=" + std::to_string(r.marked_to_sqcup) +
         " marked_right=" + std::to_string(r.marked_from_pullback) + (r.ok() ? " pass" : " FAIL " + r.witness);
}

}  // namespace opcat
