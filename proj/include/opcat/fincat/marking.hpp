#pragma once

#include <deque>
#include <utility>
#include <vector>

#include "opcat/fincat/search.hpp"

namespace opcat {

// A category with a distinguished set of arrows containing all identities and
// all isomorphisms, closed under composition.
struct MarkedFinCategory {
  CategoryPtr underlying;
  std::vector<bool> marked;  // by arrow id

  std::size_t marked_count() const { return static_cast<std::size_t>(std::count(marked.begin(), marked.end(), true)); }
};

// Smallest composition-closed marking containing S and every isomorphism.
inline MarkedFinCategory saturate_marking(const CategoryPtr& C, const std::vector<ArrowId>& S) {
  std::vector<bool> marked(C->arrow_count(), false);
  std::deque<ArrowId> work;
  auto mark = [&](ArrowId a) {
    if (a >= C->arrow_count()) throw Error(ErrorKind::unknown_arrow, "arrow index " + std::to_string(a));
    if (!marked[a]) {
      marked[a] = true;
      work.push_back(a);
    }
  };
  for (ArrowId a = 0; a < C->arrow_count(); ++a)
    if (is_isomorphism(*C, a)) mark(a);
  for (ArrowId a : S) mark(a);
  while (!work.empty()) {
    const ArrowId a = work.front();
    work.pop_front();
    for (ArrowId g : C->out(C->target(a)))
      if (marked[g]) mark(C->compose(g, a));
    for (ArrowId f : C->in(C->source(a)))
      if (marked[f]) mark(C->compose(a, f));
  }
  return {C, std::move(marked)};
}

inline MarkedFinCategory saturate_marking(const CategoryPtr& C, const std::vector<bool>& S) {
  std::vector<ArrowId> ids;
  for (ArrowId a = 0; a < S.size(); ++a)
    if (S[a]) ids.push_back(a);
  return saturate_marking(C, ids);
}

// (p0, p1): the wide subcategory of marked arrows, and the underlying category.
inline std::pair<CategoryPtr, CategoryPtr> marked_projections(const MarkedFinCategory& M) {
  const auto& C = *M.underlying;
  auto p0 = subcategory(C, std::vector<bool>(C.object_count(), true), M.marked);
  return {share(std::move(p0)), M.underlying};
}

}  // namespace opcat
