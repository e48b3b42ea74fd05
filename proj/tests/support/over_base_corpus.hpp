#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "opcat/operad.hpp"

namespace opcat::corpus {

// Projection data for a thin category: each non-identity arrow is sent to
// the map registered for its (source, target) pair.
inline CategoryOverBase thin_over_base(std::string name, const FinCategory& C, const std::vector<std::uint32_t>& arities,
                                       const std::map<std::pair<ObjectId, ObjectId>, PointedMap>& maps) {
  std::vector<PointedMap> under;
  for (ArrowId a = 0; a < C.arrow_count(); ++a) {
    if (C.is_identity(a)) {
      under.push_back(PointedMap::identity(arities[C.source(a)]));
    } else {
      under.push_back(maps.at({C.source(a), C.target(a)}));
    }
  }
  return over_base(std::move(name), share(C), 2, arities, under);
}

inline CategoryOverBase finstar_over_base(std::string name, std::uint32_t n) {
  const FinStar fs(n);
  std::vector<std::uint32_t> arities;
  for (std::uint32_t k = 0; k <= n; ++k) arities.push_back(k);
  std::vector<PointedMap> maps;
  for (ArrowId a = 0; a < fs.category()->arrow_count(); ++a) maps.push_back(fs.map(a));
  return over_base(std::move(name), fs.category(), 2, arities, maps);
}

// Marked categories over Fin_* truncated at <2>, each with at most six
// objects. Arrows over inert maps are marked.
inline std::vector<CategoryOverBase> representability_corpus() {
  std::vector<CategoryOverBase> out;
  const PointedMap fold = PointedMap::fold(2), rho1 = PointedMap::projection(2, 1), kill{1, 0, {0}};
  const PointedMap swap{2, 2, {2, 1}};

  out.push_back(thin_over_base("point@<2>", terminal_category(), {2}, {}));
  out.push_back(thin_over_base("fold", ordinal_category(1, {"a", "b"}), {2, 1}, {{{0, 1}, fold}}));
  out.push_back(thin_over_base("rho1", ordinal_category(1, {"a", "b"}), {2, 1}, {{{0, 1}, rho1}}));
  out.push_back(thin_over_base("chain", ordinal_category(2, {"a", "b", "c"}), {2, 1, 0},
                               {{{0, 1}, fold}, {{1, 2}, kill}, {{0, 2}, compose_pointed(fold, kill)}}));
  out.push_back(thin_over_base("swap", walking_isomorphism(), {2, 2}, {{{0, 1}, swap}, {{1, 0}, swap}}));
  out.push_back(thin_over_base("disjoint", discrete_category({"u", "v"}), {1, 2}, {}));
  {
    std::vector<ArrowInfo> arrows{{"id_x", 0, 0}, {"id_y1", 1, 1}, {"id_y2", 2, 2}, {"p1", 0, 1}, {"p2", 0, 2}};
    auto span = FinCategory::generate({"x", "y1", "y2"}, arrows, {0, 1, 2}, [&](ArrowId g, ArrowId f) {
      return arrows[g].source == arrows[g].target ? f : g;
    });
    out.push_back(over_base("span", share(span), 2, {2, 1, 1},
                            {PointedMap::identity(2), PointedMap::identity(1), PointedMap::identity(1), rho1, PointedMap::projection(2, 2)}));
  }
  out.push_back(finstar_over_base("fin*<=1", 1));
  out.push_back(finstar_over_base("fin*<=2", 2));
  {
    const FinStar fs(2);
    const auto& C = *fs.category();
    std::vector<bool> inert(C.arrow_count());
    for (ArrowId a = 0; a < C.arrow_count(); ++a) inert[a] = is_inert(fs.map(a));
    std::vector<ArrowId> origin;
    auto sub = subcategory(C, std::vector<bool>(C.object_count(), true), inert, &origin);
    std::vector<PointedMap> maps;
    for (ArrowId a : origin) maps.push_back(fs.map(a));
    out.push_back(over_base("inerts<=2", share(sub), 2, {0, 1, 2}, maps));
  }
  {
    const GammaStar G = gamma_star_truncated(2);
    const FinStar fs(2);
    std::vector<PointedMap> maps;
    for (ArrowId a = 0; a < G.category->arrow_count(); ++a) maps.push_back(fs.map(G.projection.map_arrow(a)));
    out.push_back(over_base("gamma*<=2", G.category, 2, G.projection.on_objects, maps));
  }
  {
    const FinStar fs(2);
    const auto I1 = ordinal_category(1, {"a", "b"});
    auto C = product(*fs.category(), I1);
    const std::size_t ad = I1.arrow_count(), nd = I1.object_count();
    std::vector<std::uint32_t> arities;
    for (ObjectId x = 0; x < C.object_count(); ++x) arities.push_back(static_cast<std::uint32_t>(x / nd));
    std::vector<PointedMap> maps;
    for (ArrowId a = 0; a < C.arrow_count(); ++a) maps.push_back(fs.map(static_cast<ArrowId>(a / ad)));
    out.push_back(over_base("fin*<=2x[1]", share(C), 2, arities, maps));
  }
  return out;
}

// The five categories K used throughout the acceptance corpus.
inline std::vector<std::pair<std::string, CategoryPtr>> corpus_categories() {
  return {{"terminal", share(terminal_category())},
          {"[1]", share(ordinal_category(1, {"a", "b"}))},
          {"[2]", share(ordinal_category(2, {"a", "b", "c"}))},
          {"iso", share(walking_isomorphism())},
          {"disc2", share(discrete_category({"a", "b"}))}};
}

}  // namespace opcat::corpus
