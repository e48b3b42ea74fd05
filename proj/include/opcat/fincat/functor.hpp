#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "opcat/fincat/category.hpp"

namespace opcat {

struct Functor {
  CategoryPtr source;
  CategoryPtr target;
  std::vector<ObjectId> on_objects;
  std::vector<ArrowId> on_arrows;

  ObjectId operator()(ObjectId x) const { return on_objects[x]; }
  ArrowId map_arrow(ArrowId f) const { return on_arrows[f]; }

  friend bool operator==(const Functor& a, const Functor& b) {
    return a.on_objects == b.on_objects && a.on_arrows == b.on_arrows;
  }
};

// Vertical data between parallel functors: components[x] : source(x) -> target(x).
struct NatTransform {
  std::vector<ArrowId> components;

  friend bool operator==(const NatTransform&, const NatTransform&) = default;
};

inline Functor identity_functor(const CategoryPtr& c) {
  Functor f{c, c, {}, {}};
  f.on_objects.resize(c->object_count());
  f.on_arrows.resize(c->arrow_count());
  for (ObjectId x = 0; x < c->object_count(); ++x) f.on_objects[x] = x;
  for (ArrowId a = 0; a < c->arrow_count(); ++a) f.on_arrows[a] = a;
  return f;
}

// second after first.
inline Functor compose(const Functor& second, const Functor& first) {
  Functor f{first.source, second.target, {}, {}};
  f.on_objects.reserve(first.on_objects.size());
  for (ObjectId x : first.on_objects) f.on_objects.push_back(second.on_objects[x]);
  f.on_arrows.reserve(first.on_arrows.size());
  for (ArrowId a : first.on_arrows) f.on_arrows.push_back(second.on_arrows[a]);
  return f;
}

// Returns an empty string when F is a functor, else a description of the
// first law it breaks.
inline std::string functor_violation(const Functor& F) {
  const auto& C = *F.source;
  const auto& D = *F.target;
  if (F.on_objects.size() != C.object_count() || F.on_arrows.size() != C.arrow_count()) return "map sizes differ";
  for (ArrowId a = 0; a < C.arrow_count(); ++a) {
    const ArrowId b = F.on_arrows[a];
    if (b >= D.arrow_count()) return "arrow " + C.arrow_name(a) + " has no image";
    if (D.source(b) != F.on_objects[C.source(a)] || D.target(b) != F.on_objects[C.target(a)]) {
      return "arrow " + C.arrow_name(a) + " maps to " + D.arrow_name(b) + " with wrong endpoints";
    }
  }
  for (ObjectId x = 0; x < C.object_count(); ++x) {
    if (F.on_arrows[C.identity(x)] != D.identity(F.on_objects[x])) return "identity of " + C.object_name(x) + " not preserved";
  }
  for (ArrowId f = 0; f < C.arrow_count(); ++f) {
    for (ArrowId g : C.out(C.target(f))) {
      if (F.on_arrows[C.compose(g, f)] != D.compose(F.on_arrows[g], F.on_arrows[f])) {
        return "composite " + C.arrow_name(g) + "." + C.arrow_name(f) + " not preserved";
      }
    }
  }
  return {};
}

inline bool is_functor(const Functor& F) { return functor_violation(F).empty(); }

inline bool is_natural(const Functor& F, const Functor& G, const NatTransform& t) {
  const auto& C = *F.source;
  const auto& D = *F.target;
  for (ObjectId x = 0; x < C.object_count(); ++x) {
    const ArrowId c = t.components[x];
    if (D.source(c) != F(x) || D.target(c) != G(x)) return false;
  }
  for (ArrowId a = 0; a < C.arrow_count(); ++a) {
    const ArrowId lhs = D.compose(G.map_arrow(a), t.components[C.source(a)]);
    const ArrowId rhs = D.compose(t.components[C.target(a)], F.map_arrow(a));
    if (lhs != rhs) return false;
  }
  return true;
}

inline FinCategory terminal_category() {
  return FinCategory::generate({"*"}, {{"id_*", 0, 0}}, {0}, [](ArrowId, ArrowId) { return ArrowId{0}; });
}

inline FinCategory discrete_category(const std::vector<std::string>& names) {
  std::vector<ArrowInfo> arrows;
  std::vector<ArrowId> ids;
  for (ObjectId i = 0; i < names.size(); ++i) {
    arrows.push_back({"id_" + names[i], i, i});
    ids.push_back(i);
  }
  return FinCategory::generate(names, std::move(arrows), std::move(ids), [](ArrowId g, ArrowId) { return g; });
}

// The poset [n] = {0 < 1 < ... < n}; objects are named by `names` when given.
inline FinCategory ordinal_category(std::size_t n, std::vector<std::string> names = {}) {
  if (names.empty())
    for (std::size_t i = 0; i <= n; ++i) names.push_back(std::to_string(i));
  std::vector<ArrowInfo> arrows;
  std::vector<ArrowId> ids(n + 1);
  std::vector<ArrowId> index((n + 1) * (n + 1), no_arrow);
  for (ObjectId i = 0; i <= n; ++i) {
    for (ObjectId j = i; j <= n; ++j) {
      index[i * (n + 1) + j] = static_cast<ArrowId>(arrows.size());
      if (i == j) {
        ids[i] = static_cast<ArrowId>(arrows.size());
        arrows.push_back({"id_" + names[i], i, j});
      } else {
        arrows.push_back({names[i] + "<" + names[j], i, j});
      }
    }
  }
  const auto copy = arrows;
  return FinCategory::generate(names, std::move(arrows), std::move(ids), [&](ArrowId g, ArrowId f) {
    return index[copy[f].source * (n + 1) + copy[g].target];
  });
}

// Two objects and a pair of mutually inverse arrows.
inline FinCategory walking_isomorphism() {
  // arrows: id_a, id_b, f:a->b, g:b->a
  std::vector<ArrowInfo> arrows{{"id_a", 0, 0}, {"id_b", 1, 1}, {"f", 0, 1}, {"g", 1, 0}};
  const auto copy = arrows;
  return FinCategory::generate({"a", "b"}, std::move(arrows), {0, 1}, [copy](ArrowId g, ArrowId f) {
    if (copy[f].source == copy[g].target) return copy[f].source == 0 ? ArrowId{0} : ArrowId{1};
    return copy[f].source == 0 ? ArrowId{2} : ArrowId{3};
  });
}

inline std::string pair_name(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

inline FinCategory product(const FinCategory& C, const FinCategory& D) {
  const std::size_t nd = D.object_count(), ad = D.arrow_count();
  std::vector<std::string> objects;
  for (ObjectId x = 0; x < C.object_count(); ++x)
    for (ObjectId y = 0; y < nd; ++y) objects.push_back(pair_name(C.object_name(x), D.object_name(y)));
  std::vector<ArrowInfo> arrows;
  for (ArrowId f = 0; f < C.arrow_count(); ++f)
    for (ArrowId g = 0; g < ad; ++g) {
      arrows.push_back({pair_name(C.arrow_name(f), D.arrow_name(g)), static_cast<ObjectId>(C.source(f) * nd + D.source(g)),
                        static_cast<ObjectId>(C.target(f) * nd + D.target(g))});
    }
  std::vector<ArrowId> ids;
  for (ObjectId x = 0; x < C.object_count(); ++x)
    for (ObjectId y = 0; y < nd; ++y) ids.push_back(static_cast<ArrowId>(C.identity(x) * ad + D.identity(y)));
  return FinCategory::generate(std::move(objects), std::move(arrows), std::move(ids), [&](ArrowId g, ArrowId f) {
    return static_cast<ArrowId>(C.compose(g / ad, f / ad) * ad + D.compose(g % ad, f % ad));
  });
}

// Projections out of product(C, D), in that order.
inline std::pair<Functor, Functor> product_projections(const CategoryPtr& CxD, const CategoryPtr& C, const CategoryPtr& D) {
  Functor p{CxD, C, {}, {}}, q{CxD, D, {}, {}};
  const std::size_t nd = D->object_count(), ad = D->arrow_count();
  for (ObjectId x = 0; x < CxD->object_count(); ++x) {
    p.on_objects.push_back(static_cast<ObjectId>(x / nd));
    q.on_objects.push_back(static_cast<ObjectId>(x % nd));
  }
  for (ArrowId a = 0; a < CxD->arrow_count(); ++a) {
    p.on_arrows.push_back(static_cast<ArrowId>(a / ad));
    q.on_arrows.push_back(static_cast<ArrowId>(a % ad));
  }
  return {p, q};
}

// Subcategory on the given objects and arrows. The selection must contain the
// identities of the kept objects and be closed under composition.
inline FinCategory subcategory(const FinCategory& C, const std::vector<bool>& keep_object, const std::vector<bool>& keep_arrow,
                               std::vector<ArrowId>* arrow_origin = nullptr, std::vector<ObjectId>* object_origin = nullptr) {
  std::vector<ObjectId> obj_new(C.object_count(), static_cast<ObjectId>(-1));
  std::vector<ArrowId> arr_new(C.arrow_count(), no_arrow);
  std::vector<std::string> objects;
  std::vector<ObjectId> obj_old;
  for (ObjectId x = 0; x < C.object_count(); ++x) {
    if (!keep_object[x]) continue;
    obj_new[x] = static_cast<ObjectId>(objects.size());
    objects.push_back(C.object_name(x));
    obj_old.push_back(x);
  }
  std::vector<ArrowInfo> arrows;
  std::vector<ArrowId> arr_old;
  for (ArrowId a = 0; a < C.arrow_count(); ++a) {
    if (!keep_arrow[a] || !keep_object[C.source(a)] || !keep_object[C.target(a)]) continue;
    arr_new[a] = static_cast<ArrowId>(arrows.size());
    arrows.push_back({C.arrow_name(a), obj_new[C.source(a)], obj_new[C.target(a)]});
    arr_old.push_back(a);
  }
  std::vector<ArrowId> ids;
  for (ObjectId x : obj_old) {
    if (arr_new[C.identity(x)] == no_arrow) throw Error(ErrorKind::missing_identity, "subcategory drops identity of " + C.object_name(x));
    ids.push_back(arr_new[C.identity(x)]);
  }
  auto sub = FinCategory::generate(std::move(objects), std::move(arrows), std::move(ids), [&](ArrowId g, ArrowId f) {
    const ArrowId h = arr_new[C.compose(arr_old[g], arr_old[f])];
    if (h == no_arrow) throw Error(ErrorKind::invalid_structure, "subcategory is not closed under composition");
    return h;
  });
  if (arrow_origin) *arrow_origin = std::move(arr_old);
  if (object_origin) *object_origin = std::move(obj_old);
  return sub;
}

inline FinCategory full_subcategory(const FinCategory& C, const std::vector<bool>& keep_object,
                                    std::vector<ObjectId>* object_origin = nullptr, std::vector<ArrowId>* arrow_origin = nullptr) {
  return subcategory(C, keep_object, std::vector<bool>(C.arrow_count(), true), arrow_origin, object_origin);
}

// C ×_E D for F: C -> E and G: D -> E, as a subcategory of the product.
// The origins, when requested, are the (C, D) components of each object and
// arrow.
inline FinCategory pullback(const Functor& F, const Functor& G,
                            std::vector<std::pair<ObjectId, ObjectId>>* object_origin = nullptr,
                            std::vector<std::pair<ArrowId, ArrowId>>* arrow_origin = nullptr) {
  const auto& C = *F.source;
  const auto& D = *G.source;
  const FinCategory CxD = product(C, D);
  const std::size_t nd = D.object_count(), ad = D.arrow_count();
  std::vector<bool> keep_obj(CxD.object_count()), keep_arr(CxD.arrow_count());
  for (ObjectId x = 0; x < CxD.object_count(); ++x) keep_obj[x] = F(x / nd) == G(x % nd);
  for (ArrowId a = 0; a < CxD.arrow_count(); ++a) keep_arr[a] = F.map_arrow(a / ad) == G.map_arrow(a % ad);
  std::vector<ArrowId> arrows;
  std::vector<ObjectId> objects;
  auto P = subcategory(CxD, keep_obj, keep_arr, &arrows, &objects);
  if (object_origin) {
    object_origin->clear();
    for (ObjectId x : objects) object_origin->emplace_back(static_cast<ObjectId>(x / nd), static_cast<ObjectId>(x % nd));
  }
  if (arrow_origin) {
    arrow_origin->clear();
    for (ArrowId a : arrows) arrow_origin->emplace_back(static_cast<ArrowId>(a / ad), static_cast<ArrowId>(a % ad));
  }
  return P;
}

// Graph-description (DOT) export: nodes are objects, edges non-identity arrows.
inline std::string to_dot(const FinCategory& C, const std::string& name = "C") {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  for (ObjectId x = 0; x < C.object_count(); ++x) os << "  \"" << C.object_name(x) << "\";\n";
  for (ArrowId a = 0; a < C.arrow_count(); ++a) {
    if (C.is_identity(a)) continue;
    os << "  \"" << C.object_name(C.source(a)) << "\" -> \"" << C.object_name(C.target(a)) << "\" [label=\""
       << C.arrow_name(a) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace opcat
