#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "opcat/fincat/functor.hpp"

namespace opcat {

struct FunctorSearchOptions {
  // Extra admissibility tests for images; null means "anything typed".
  std::function<bool(ObjectId, ObjectId)> object_ok;
  std::function<bool(ArrowId, ArrowId)> arrow_ok;
  // Lower values are decided first. Variables of equal priority go by index.
  std::function<std::int64_t(ObjectId)> object_priority;
  std::function<std::int64_t(ArrowId)> arrow_priority;
  bool injective = false;
  bool preserve_hom_sizes = false;
};

namespace detail {

// Backtracking over object images, each object immediately followed by the
// arrows whose endpoints are then both decided. Composition constraints are
// checked as soon as all three arrows of a composable pair are mapped, so a
// composite whose factors are known is forced.
class FunctorSearch {
 public:
  FunctorSearch(const FinCategory& C, const FinCategory& D, const FunctorSearchOptions& opt, SearchBudget& budget)
      : C_(C), D_(D), opt_(opt), budget_(budget) {
    std::vector<ObjectId> objs(C.object_count());
    std::iota(objs.begin(), objs.end(), 0);
    auto oprio = [&](ObjectId x) { return opt.object_priority ? opt.object_priority(x) : 0; };
    std::stable_sort(objs.begin(), objs.end(), [&](ObjectId a, ObjectId b) { return oprio(a) < oprio(b); });
    std::vector<std::size_t> pos(C.object_count());
    for (std::size_t i = 0; i < objs.size(); ++i) pos[objs[i]] = i;
    std::vector<std::vector<ArrowId>> bucket(objs.size());
    for (ArrowId a = 0; a < C.arrow_count(); ++a) bucket[std::max(pos[C.source(a)], pos[C.target(a)])].push_back(a);
    auto aprio = [&](ArrowId a) { return opt.arrow_priority ? opt.arrow_priority(a) : 0; };
    for (std::size_t p = 0; p < objs.size(); ++p) {
      auto& b = bucket[p];
      std::stable_sort(b.begin(), b.end(), [&](ArrowId x, ArrowId y) {
        return std::make_pair(!C.is_identity(x), aprio(x)) < std::make_pair(!C.is_identity(y), aprio(y));
      });
      vars_.push_back({true, objs[p]});
      for (ArrowId a : b) vars_.push_back({false, a});
    }
    incidence_.resize(C.arrow_count());
    for (ArrowId f = 0; f < C.arrow_count(); ++f) {
      for (ArrowId g : C.out(C.target(f))) {
        const auto t = static_cast<std::uint32_t>(triples_.size());
        const ArrowId h = C.compose(g, f);
        triples_.push_back({g, f, h});
        incidence_[g].push_back(t);
        if (f != g) incidence_[f].push_back(t);
        if (h != f && h != g) incidence_[h].push_back(t);
      }
    }
    obj_map_.assign(C.object_count(), unset);
    arr_map_.assign(C.arrow_count(), no_arrow);
    if (opt.injective) {
      obj_used_.assign(D.object_count(), false);
      arr_used_.assign(D.arrow_count(), false);
    }
    double est = 0;
    if (D.object_count() > 0) est += C.object_count() * std::log10(static_cast<double>(D.object_count()));
    if (D.object_count() > 0 && D.arrow_count() > D.object_count()) {
      est += C.arrow_count() * std::log10(static_cast<double>(D.arrow_count()) / D.object_count());
    }
    budget_.set_estimate(est);
  }

  template <class Visit>
  void run(Visit&& visit) {
    stop_ = false;
    step(0, visit);
  }

 private:
  static constexpr ObjectId unset = static_cast<ObjectId>(-1);

  struct Var {
    bool is_object;
    std::uint32_t id;
  };

  bool object_viable(ObjectId x, ObjectId y) const {
    if (opt_.injective && obj_used_[y]) return false;
    if (opt_.object_ok && !opt_.object_ok(x, y)) return false;
    if (opt_.preserve_hom_sizes) {
      if (C_.hom(x, x).size() != D_.hom(y, y).size()) return false;
      for (ObjectId z = 0; z < C_.object_count(); ++z) {
        if (obj_map_[z] == unset) continue;
        if (C_.hom(x, z).size() != D_.hom(y, obj_map_[z]).size()) return false;
        if (C_.hom(z, x).size() != D_.hom(obj_map_[z], y).size()) return false;
      }
    }
    return true;
  }

  bool arrow_viable(ArrowId a, ArrowId b) const {
    if (opt_.injective && arr_used_[b]) return false;
    if (opt_.arrow_ok && !opt_.arrow_ok(a, b)) return false;
    for (std::uint32_t t : incidence_[a]) {
      const auto& [g, f, h] = triples_[t];
      const ArrowId G = g == a ? b : arr_map_[g];
      const ArrowId F = f == a ? b : arr_map_[f];
      const ArrowId H = h == a ? b : arr_map_[h];
      if (G == no_arrow || F == no_arrow || H == no_arrow) continue;
      if (D_.compose(G, F) != H) return false;
    }
    return true;
  }

  void viable_images(std::size_t k, std::vector<std::uint32_t>& viable) const {
    viable.clear();
    const Var v = vars_[k];
    if (v.is_object) {
      for (ObjectId y = 0; y < D_.object_count(); ++y)
        if (object_viable(v.id, y)) viable.push_back(y);
    } else if (C_.is_identity(v.id)) {
      const ArrowId b = D_.identity(obj_map_[C_.source(v.id)]);
      if (arrow_viable(v.id, b)) viable.push_back(b);
    } else {
      for (ArrowId b : D_.hom(obj_map_[C_.source(v.id)], obj_map_[C_.target(v.id)]))
        if (arrow_viable(v.id, b)) viable.push_back(b);
    }
  }

  void set(std::size_t k, std::uint32_t y) {
    const Var v = vars_[k];
    if (v.is_object) {
      obj_map_[v.id] = y;
      if (opt_.injective) obj_used_[y] = true;
    } else {
      arr_map_[v.id] = y;
      if (opt_.injective) arr_used_[y] = true;
    }
  }

  void unset_var(std::size_t k) {
    const Var v = vars_[k];
    if (v.is_object) {
      if (opt_.injective) obj_used_[obj_map_[v.id]] = false;
      obj_map_[v.id] = unset;
    } else {
      if (opt_.injective) arr_used_[arr_map_[v.id]] = false;
      arr_map_[v.id] = no_arrow;
    }
  }

  // Depth-first over vars_ with an explicit stack; categories of operators
  // have tens of thousands of variables.
  template <class Visit>
  void step(std::size_t, Visit& visit) {
    struct Frame {
      std::vector<std::uint32_t> viable;
      std::size_t next = 0;
      bool assigned = false;
    };
    const std::size_t n = vars_.size();
    std::vector<Frame> frames(n);
    auto open = [&](std::size_t k) {
      viable_images(k, frames[k].viable);
      frames[k].next = 0;
      frames[k].assigned = false;
      if (frames[k].viable.size() > 1) budget_.charge(frames[k].viable.size() - 1);
    };
    if (n == 0) {
      if (!visit(obj_map_, arr_map_)) stop_ = true;
      return;
    }
    std::size_t k = 0;
    open(0);
    while (true) {
      Frame& f = frames[k];
      if (f.assigned) {
        unset_var(k);
        f.assigned = false;
      }
      if (stop_ || f.next == f.viable.size()) {
        if (k == 0) return;
        --k;
        continue;
      }
      set(k, f.viable[f.next++]);
      f.assigned = true;
      if (k + 1 == n) {
        if (!visit(obj_map_, arr_map_)) stop_ = true;
        continue;
      }
      ++k;
      open(k);
    }
  }

  const FinCategory& C_;
  const FinCategory& D_;
  const FunctorSearchOptions& opt_;
  SearchBudget& budget_;
  std::vector<Var> vars_;
  std::vector<std::tuple<ArrowId, ArrowId, ArrowId>> triples_;
  std::vector<std::vector<std::uint32_t>> incidence_;
  std::vector<ObjectId> obj_map_;
  std::vector<ArrowId> arr_map_;
  std::vector<bool> obj_used_, arr_used_;
  bool stop_ = false;
};

}  // namespace detail

// Enumerates every functor C -> D admitted by `opt`, in a deterministic order.
// visit(object_map, arrow_map) returns false to stop early.
template <class Visit>
void search_functors(const FinCategory& C, const FinCategory& D, const FunctorSearchOptions& opt, SearchBudget& budget,
                     Visit&& visit) {
  detail::FunctorSearch s(C, D, opt, budget);
  s.run(visit);
}

inline std::vector<Functor> all_functors(const CategoryPtr& C, const CategoryPtr& D, SearchBudget& budget,
                                         const FunctorSearchOptions& opt = {}) {
  std::vector<Functor> out;
  search_functors(*C, *D, opt, budget, [&](const auto& om, const auto& am) {
    out.push_back({C, D, om, am});
    return true;
  });
  return out;
}

// All natural transformations F => G, in lexicographic order of components.
// `component_ok` may restrict the allowed components.
inline std::vector<NatTransform> natural_transformations(const Functor& F, const Functor& G, SearchBudget& budget,
                                                         const std::function<bool(ObjectId, ArrowId)>& component_ok = {}) {
  const auto& C = *F.source;
  const auto& D = *F.target;
  std::vector<NatTransform> out;
  std::vector<std::vector<ArrowId>> closes(C.object_count());  // arrows checkable once x is assigned
  for (ArrowId a = 0; a < C.arrow_count(); ++a) closes[std::max(C.source(a), C.target(a))].push_back(a);
  NatTransform t{std::vector<ArrowId>(C.object_count(), no_arrow)};
  std::function<void(ObjectId)> step = [&](ObjectId x) {
    if (x == C.object_count()) {
      out.push_back(t);
      return;
    }
    std::vector<ArrowId> viable;
    for (ArrowId c : D.hom(F(x), G(x))) {
      if (component_ok && !component_ok(x, c)) continue;
      t.components[x] = c;
      bool ok = true;
      for (ArrowId a : closes[x]) {
        if (D.compose(G.map_arrow(a), t.components[C.source(a)]) != D.compose(t.components[C.target(a)], F.map_arrow(a))) {
          ok = false;
          break;
        }
      }
      if (ok) viable.push_back(c);
    }
    if (viable.size() > 1) budget.charge(viable.size() - 1);
    for (ArrowId c : viable) {
      t.components[x] = c;
      step(x + 1);
    }
    t.components[x] = no_arrow;
  };
  step(0);
  return out;
}

// A category whose objects are functors and whose arrows are natural
// transformations, together with the enumerated data it was built from.
struct FunctorCategory {
  CategoryPtr category;
  std::vector<Functor> functors;             // by object id
  std::vector<NatTransform> transformations;  // by arrow id

  std::optional<ObjectId> find_functor(const Functor& F) const {
    for (ObjectId i = 0; i < functors.size(); ++i)
      if (functors[i] == F) return i;
    return std::nullopt;
  }
  std::optional<ArrowId> find_transformation(ObjectId from, ObjectId to, const NatTransform& t) const {
    for (ArrowId a : category->hom(from, to))
      if (transformations[a] == t) return a;
    return std::nullopt;
  }
};

// Assembles a category from a list of functors (objects) using the
// transformations produced by `transforms(F, G)`; composition is componentwise.
template <class TransformsFn>
FunctorCategory assemble_functor_category(const std::vector<Functor>& functors, TransformsFn&& transforms,
                                          const std::string& prefix) {
  FunctorCategory result;
  result.functors = functors;
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < functors.size(); ++i) objects.push_back(prefix + std::to_string(i));
  std::vector<ArrowInfo> arrows;
  std::vector<ArrowId> ids(functors.size(), no_arrow);
  std::map<std::pair<ObjectId, std::vector<ArrowId>>, ArrowId> lookup;  // (source, components) -> arrow
  for (ObjectId i = 0; i < functors.size(); ++i) {
    for (ObjectId j = 0; j < functors.size(); ++j) {
      const auto ts = transforms(functors[i], functors[j]);
      for (std::size_t k = 0; k < ts.size(); ++k) {
        const auto id = static_cast<ArrowId>(arrows.size());
        arrows.push_back({objects[i] + "=>" + objects[j] + "#" + std::to_string(k), i, j});
        result.transformations.push_back(ts[k]);
        lookup.emplace(std::make_pair(i, ts[k].components), id);
        if (i == j && ids[i] == no_arrow) {
          const auto& C = *functors[i].source;
          bool is_id = true;
          for (ObjectId x = 0; x < C.object_count(); ++x)
            is_id = is_id && ts[k].components[x] == functors[i].target->identity(functors[i](x));
          if (is_id) ids[i] = id;
        }
      }
    }
  }
  const auto& trans = result.transformations;
  const auto copy = arrows;
  auto cat = FinCategory::generate(std::move(objects), std::move(arrows), std::move(ids), [&](ArrowId g, ArrowId f) {
    const auto& D = *functors[copy[f].source].target;
    std::vector<ArrowId> comps(trans[f].components.size());
    for (std::size_t x = 0; x < comps.size(); ++x) comps[x] = D.compose(trans[g].components[x], trans[f].components[x]);
    auto it = lookup.find({copy[f].source, comps});
    if (it == lookup.end()) throw Error(ErrorKind::invalid_structure, "vertical composite is not a listed transformation");
    return it->second;
  });
  result.category = share(std::move(cat));
  return result;
}

// Fun(K, C): objects all functors, arrows all natural transformations.
inline FunctorCategory functor_category(const CategoryPtr& K, const CategoryPtr& C, SearchBudget& budget) {
  const auto functors = all_functors(K, C, budget);
  return assemble_functor_category(
      functors, [&](const Functor& F, const Functor& G) { return natural_transformations(F, G, budget); }, "F");
}

inline std::optional<ArrowId> inverse_of(const FinCategory& C, ArrowId f) {
  if (f >= C.arrow_count()) throw Error(ErrorKind::unknown_arrow, "arrow index " + std::to_string(f));
  const ObjectId s = C.source(f), t = C.target(f);
  for (ArrowId g : C.hom(t, s)) {
    if (C.compose(g, f) == C.identity(s) && C.compose(f, g) == C.identity(t)) return g;
  }
  return std::nullopt;
}

inline bool is_isomorphism(const FinCategory& C, ArrowId f) { return inverse_of(C, f).has_value(); }

inline bool is_isomorphism(const FinCategory& C, std::string_view arrow) {
  auto f = C.find_arrow(arrow);
  if (!f) throw Error(ErrorKind::unknown_arrow, std::string(arrow));
  return is_isomorphism(C, *f);
}

namespace detail {

struct ArrowShape {
  bool identity, endo, iso;
  std::size_t factorizations, hom_size, out_of_target, into_source;
  auto operator<=>(const ArrowShape&) const = default;
};

inline std::vector<ArrowShape> arrow_shapes(const FinCategory& C) {
  std::vector<std::size_t> fact(C.arrow_count(), 0);
  for (ArrowId f = 0; f < C.arrow_count(); ++f)
    for (ArrowId g : C.out(C.target(f))) ++fact[C.compose(g, f)];
  std::vector<ArrowShape> s;
  for (ArrowId a = 0; a < C.arrow_count(); ++a) {
    s.push_back({C.is_identity(a), C.source(a) == C.target(a), is_isomorphism(C, a), fact[a],
                 C.hom(C.source(a), C.target(a)).size(), C.out(C.target(a)).size(), C.in(C.source(a)).size()});
  }
  return s;
}

inline std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> object_shapes(const FinCategory& C) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> s;
  for (ObjectId x = 0; x < C.object_count(); ++x) s.emplace_back(C.hom(x, x).size(), C.out(x).size(), C.in(x).size());
  return s;
}

// Joint color refinement of the objects of C and D: start from the object
// shapes and split classes by the multiset of (class, hom size) to and from
// every other object until stable. Isomorphisms preserve the classes.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refined_object_classes(const FinCategory& C, const FinCategory& D) {
  using Key = std::vector<std::size_t>;
  const std::size_t nc = C.object_count(), nd = D.object_count();
  std::vector<std::size_t> cls(nc + nd);
  {
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> ids;
    const auto a = object_shapes(C), b = object_shapes(D);
    for (std::size_t x = 0; x < nc; ++x) cls[x] = ids.emplace(a[x], ids.size()).first->second;
    for (std::size_t x = 0; x < nd; ++x) cls[nc + x] = ids.emplace(b[x], ids.size()).first->second;
  }
  std::size_t classes = *std::max_element(cls.begin(), cls.end()) + 1;
  for (std::size_t round = 0; round <= nc + nd; ++round) {
    std::map<Key, std::size_t> ids;
    std::vector<std::size_t> next(cls.size());
    auto key = [&](const FinCategory& X, std::size_t offset, ObjectId x) {
      std::vector<std::array<std::size_t, 3>> pairs;
      for (ObjectId y = 0; y < X.object_count(); ++y) {
        const std::size_t out = X.hom(x, y).size(), in = X.hom(y, x).size();
        if (out || in) pairs.push_back({cls[offset + y], out, in});
      }
      std::sort(pairs.begin(), pairs.end());
      Key k{cls[offset + x]};
      for (const auto& p : pairs) k.insert(k.end(), p.begin(), p.end());
      return k;
    };
    for (ObjectId x = 0; x < nc; ++x) next[x] = ids.emplace(key(C, 0, x), ids.size()).first->second;
    for (ObjectId x = 0; x < nd; ++x) next[nc + x] = ids.emplace(key(D, nc, x), ids.size()).first->second;
    cls = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {std::vector<std::size_t>(cls.begin(), cls.begin() + nc), std::vector<std::size_t>(cls.begin() + nc, cls.end())};
}

}  // namespace detail

// Inverse of a bijective functor (caller guarantees bijectivity).
inline Functor inverse_functor(const Functor& F) {
  Functor G{F.target, F.source, std::vector<ObjectId>(F.target->object_count()), std::vector<ArrowId>(F.target->arrow_count())};
  for (ObjectId x = 0; x < F.on_objects.size(); ++x) G.on_objects[F.on_objects[x]] = x;
  for (ArrowId a = 0; a < F.on_arrows.size(); ++a) G.on_arrows[F.on_arrows[a]] = a;
  return G;
}

// Finds mutually inverse functors C -> D -> C, or nothing when C and D are
// not isomorphic. `extra` may add constraints (e.g. compatibility with
// projections to a common base).
inline std::optional<std::pair<Functor, Functor>> category_iso(const CategoryPtr& C, const CategoryPtr& D, SearchBudget& budget,
                                                               const FunctorSearchOptions& extra = {}) {
  if (C->object_count() != D->object_count() || C->arrow_count() != D->arrow_count()) return std::nullopt;
  const auto cs = detail::arrow_shapes(*C), ds = detail::arrow_shapes(*D);
  const auto co = detail::object_shapes(*C), dob = detail::object_shapes(*D);
  {
    auto a = cs, b = ds;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  const auto [cc, dc] = detail::refined_object_classes(*C, *D);
  {
    auto a = cc, b = dc;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  FunctorSearchOptions opt = extra;
  opt.injective = true;
  opt.preserve_hom_sizes = true;
  opt.object_ok = [&, user = extra.object_ok](ObjectId x, ObjectId y) {
    return co[x] == dob[y] && cc[x] == dc[y] && (!user || user(x, y));
  };
  opt.arrow_ok = [&, user = extra.arrow_ok](ArrowId a, ArrowId b) { return cs[a] == ds[b] && (!user || user(a, b)); };
  std::optional<std::pair<Functor, Functor>> found;
  search_functors(*C, *D, opt, budget, [&](const auto& om, const auto& am) {
    Functor F{C, D, om, am};
    found.emplace(F, inverse_functor(F));
    return false;
  });
  return found;
}

inline bool is_bijective(const Functor& F) {
  std::vector<bool> so(F.target->object_count()), sa(F.target->arrow_count());
  if (so.size() != F.on_objects.size() || sa.size() != F.on_arrows.size()) return false;
  for (ObjectId y : F.on_objects) {
    if (so[y]) return false;
    so[y] = true;
  }
  for (ArrowId b : F.on_arrows) {
    if (sa[b]) return false;
    sa[b] = true;
  }
  return true;
}

// Fully faithful and essentially surjective.
inline bool is_equivalence(const Functor& F) {
  const auto& C = *F.source;
  const auto& D = *F.target;
  for (ObjectId x = 0; x < C.object_count(); ++x) {
    for (ObjectId y = 0; y < C.object_count(); ++y) {
      const auto hc = C.hom(x, y);
      const auto hd = D.hom(F(x), F(y));
      if (hc.size() != hd.size()) return false;
      std::vector<ArrowId> img;
      for (ArrowId a : hc) img.push_back(F.map_arrow(a));
      std::sort(img.begin(), img.end());
      if (std::adjacent_find(img.begin(), img.end()) != img.end()) return false;
    }
  }
  for (ObjectId d = 0; d < D.object_count(); ++d) {
    bool hit = false;
    for (ObjectId x = 0; x < C.object_count() && !hit; ++x)
      for (ArrowId a : D.hom(F(x), d))
        if (is_isomorphism(D, a)) {
          hit = true;
          break;
        }
    if (!hit) return false;
  }
  return true;
}

}  // namespace opcat
