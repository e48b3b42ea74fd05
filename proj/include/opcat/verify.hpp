#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "opcat/fincat.hpp"
#include "opcat/operad.hpp"

namespace opcat {

namespace detail {

// Backtracking over operation images for a fixed color map. Units are fixed
// up front; every decision is pushed through symmetry and partial
// composition, so most operations end up forced by a few generators.
class OperadMapSearch {
 public:
  OperadMapSearch(const SetOperad& O, const SetOperad& P, std::size_t bound) : O_(O), P_(P), index_(O, bound) {
    const std::size_t n = index_.size();
    sym_.resize(n);
    outer_.resize(n);
    inner_.resize(n);
    auto id_of = [&](const Operation& op) {
      auto id = index_.id(op);
      if (!id || op.index >= index_.count(op.signature)) {
        throw Error(ErrorKind::invalid_structure, O.name() + ": " + O.describe(op.signature) + " has no operation " + std::to_string(op.index));
      }
      return *id;
    };
    for (std::size_t id = 0; id < n; ++id) {
      const Operation& phi = index_.op(id);
      const std::size_t a = phi.signature.arity();
      for (const auto& sigma : all_permutations(a)) {
        if (!is_identity_permutation(sigma)) sym_[id].push_back({sigma, id_of(O.act(phi, sigma))});
      }
      for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t psi : index_.into(phi.signature.inputs[i])) {
          if (a + index_.op(psi).signature.arity() - 1 > bound) continue;
          const std::size_t r = id_of(O.compose_at(phi, i, index_.op(psi)));
          outer_[id].push_back({i, psi, r});
          inner_[psi].push_back({id, i, r});
        }
      }
    }
  }

  const OperadIndex& index() const { return index_; }

  // visit(values) receives the image index of every operation by id and
  // returns false to stop.
  template <class Visit>
  void run(const std::vector<ColorId>& colors, bool injective, SearchBudget& budget, Visit&& visit) {
    const std::size_t n = index_.size();
    images_.assign(n, {});
    counts_.assign(n, 0);
    slot_.assign(n, 0);
    std::map<Signature, std::size_t> offsets;
    std::size_t used = 0;
    for (std::size_t id = 0; id < n; ++id) {
      const Signature& s = index_.op(id).signature;
      images_[id].output = colors[s.output];
      for (auto c : s.inputs) images_[id].inputs.push_back(colors[c]);
      counts_[id] = P_.op_count(images_[id]);
      if (counts_[id] == 0) return;
      if (injective && counts_[id] != index_.count(s)) return;
      auto [it, fresh] = offsets.emplace(images_[id], used);
      if (fresh) used += counts_[id];
      slot_[id] = it->second;
    }
    injective_ = injective;
    used_.assign(used, false);
    values_.assign(n, unset);
    trail_.clear();
    queue_.clear();
    stop_ = false;
    for (ColorId c = 0; c < O_.color_count(); ++c) {
      auto id = index_.id(O_.unit(c));
      if (!id) continue;
      if (!assign(*id, P_.unit(colors[c]).index)) return;
    }
    if (!propagate()) return;
    search(0, budget, visit);
  }

 private:
  static constexpr OpIndex unset = static_cast<OpIndex>(-1);

  bool assign(std::size_t id, OpIndex v) {
    if (values_[id] != unset) return values_[id] == v;
    if (v >= counts_[id]) return false;
    if (injective_) {
      if (used_[slot_[id] + v]) return false;
      used_[slot_[id] + v] = true;
    }
    values_[id] = v;
    trail_.push_back(id);
    queue_.push_back(id);
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const std::size_t id = trail_.back();
      trail_.pop_back();
      if (injective_) used_[slot_[id] + values_[id]] = false;
      values_[id] = unset;
    }
  }

  Operation image(std::size_t id) const { return {images_[id], values_[id]}; }

  bool propagate() {
    while (!queue_.empty()) {
      const std::size_t id = queue_.back();
      queue_.pop_back();
      const Operation img = image(id);
      bool ok = true;
      for (const auto& [sigma, t] : sym_[id]) {
        if (!(ok = assign(t, P_.act(img, sigma).index))) break;
      }
      for (std::size_t k = 0; ok && k < outer_[id].size(); ++k) {
        const auto& [i, psi, r] = outer_[id][k];
        if (values_[psi] != unset) ok = assign(r, P_.compose_at(img, i, image(psi)).index);
      }
      for (std::size_t k = 0; ok && k < inner_[id].size(); ++k) {
        const auto& [phi, i, r] = inner_[id][k];
        if (values_[phi] != unset) ok = assign(r, P_.compose_at(image(phi), i, img).index);
      }
      if (!ok) {
        queue_.clear();
        return false;
      }
    }
    return true;
  }

  template <class Visit>
  void search(std::size_t from, SearchBudget& budget, Visit& visit) {
    while (from < values_.size() && values_[from] != unset) ++from;
    if (from == values_.size()) {
      if (!visit(values_)) stop_ = true;
      return;
    }
    std::vector<OpIndex> candidates;
    for (OpIndex v = 0; v < counts_[from]; ++v)
      if (!injective_ || !used_[slot_[from] + v]) candidates.push_back(v);
    if (candidates.size() > 1) budget.charge(candidates.size() - 1);
    for (OpIndex v : candidates) {
      const std::size_t mark = trail_.size();
      if (assign(from, v) && propagate()) search(from + 1, budget, visit);
      undo(mark);
      if (stop_) return;
    }
  }

  const SetOperad& O_;
  const SetOperad& P_;
  OperadIndex index_;
  std::vector<std::vector<std::pair<Permutation, std::size_t>>> sym_;
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>> outer_, inner_;
  std::vector<Signature> images_;
  std::vector<std::size_t> counts_, slot_;
  std::vector<OpIndex> values_;
  std::vector<bool> used_;
  std::vector<std::size_t> trail_, queue_;
  bool injective_ = false;
  bool stop_ = false;
};

inline OperadMorphism tabulate(const SetOperad& O, const SetOperad& P, std::size_t bound, const OperadIndex& index,
                               const std::vector<ColorId>& colors, const std::vector<OpIndex>& values) {
  OperadMorphism m{O, P, bound, colors, {}};
  for (std::size_t id = 0; id < index.size(); ++id) m.on_ops[index.op(id).signature].push_back(values[id]);
  return m;
}

}  // namespace detail

// Every morphism O -> P tabulated up to `bound`, ordered by color map and
// then by operation images.
inline std::vector<OperadMorphism> operad_morphisms(const SetOperad& O, const SetOperad& P, std::size_t bound, SearchBudget& budget) {
  std::vector<OperadMorphism> out;
  const std::size_t n = O.color_count(), m = P.color_count();
  if (m == 0 && n > 0) return out;
  detail::OperadMapSearch search(O, P, bound);
  std::vector<ColorId> colors(n, 0);
  while (true) {
    search.run(colors, false, budget, [&](const std::vector<OpIndex>& values) {
      out.push_back(detail::tabulate(O, P, bound, search.index(), colors, values));
      return true;
    });
    std::size_t i = n;
    while (i > 0 && colors[i - 1] + 1 == m) colors[--i] = 0;
    if (i == 0) break;
    if (n > 0) budget.charge();
    ++colors[i - 1];
  }
  return out;
}

inline std::vector<OperadMorphism> operad_morphisms(const SetOperad& O, const SetOperad& P, std::size_t bound) {
  SearchBudget budget(SearchBudget::default_verify_limit);
  return operad_morphisms(O, P, bound, budget);
}

struct IsoWitness {
  OperadMorphism forward;
  OperadMorphism backward;
};

// Checks the witness invariants: both maps are morphisms and both composites
// are identities within the bound.
inline std::vector<std::string> iso_witness_violations(const IsoWitness& w) {
  std::vector<std::string> out;
  for (const auto& v : morphism_violations(w.forward)) out.push_back("forward: " + v);
  for (const auto& v : morphism_violations(w.backward)) out.push_back("backward: " + v);
  if (!out.empty()) return out;
  if (!(compose(w.backward, w.forward) == identity_morphism(w.forward.source, w.forward.bound))) {
    out.push_back("backward after forward is not the identity");
  }
  if (!(compose(w.forward, w.backward) == identity_morphism(w.forward.target, w.backward.bound))) {
    out.push_back("forward after backward is not the identity");
  }
  return out;
}

// Searches color bijections (pruned by operation counts on signatures whose
// colors are all decided) and, for each, operation bijections commuting with
// units, symmetry and composition. Exhaustive within the bound.
inline std::optional<IsoWitness> operad_iso(const SetOperad& A, const SetOperad& B, std::size_t bound, SearchBudget& budget) {
  const std::size_t n = A.color_count();
  if (n != B.color_count()) return std::nullopt;
  const OperadIndex ia(A, bound), ib(B, bound);
  if (ia.size() != ib.size() || ia.signatures().size() != ib.signatures().size()) return std::nullopt;

  // Signatures of A, nonempty or not, bucketed by their largest color.
  std::vector<std::vector<Signature>> ready(n);
  for (auto& s : signatures_up_to(n, bound)) {
    ColorId top = s.output;
    for (auto c : s.inputs) top = std::max(top, c);
    ready[top].push_back(std::move(s));
  }
  detail::OperadMapSearch search(A, B, bound);
  std::optional<IsoWitness> found;
  std::vector<ColorId> colors(n, 0);
  std::vector<bool> taken(n, false);
  std::function<void(ColorId)> step = [&](ColorId c) {
    if (found) return;
    if (c == n) {
      search.run(colors, true, budget, [&](const std::vector<OpIndex>& values) {
        IsoWitness w{detail::tabulate(A, B, bound, search.index(), colors, values), {B, A, bound, std::vector<ColorId>(n), {}}};
        for (ColorId x = 0; x < n; ++x) w.backward.on_colors[colors[x]] = x;
        for (const auto& [t, first] : ib.signatures()) w.backward.on_ops[t].resize(ib.count(t));
        for (std::size_t id = 0; id < ia.size(); ++id) {
          const Operation& op = ia.op(id);
          w.backward.on_ops[w.forward.image(op.signature)][values[id]] = op.index;
        }
        if (!iso_witness_violations(w).empty()) return true;
        found = std::move(w);
        return false;
      });
      return;
    }
    std::vector<ColorId> candidates;
    for (ColorId d = 0; d < n; ++d) {
      if (taken[d]) continue;
      colors[c] = d;
      bool ok = true;
      for (const auto& s : ready[c]) {
        Signature t{{}, colors[s.output]};
        for (auto x : s.inputs) t.inputs.push_back(colors[x]);
        if (ia.count(s) != ib.count(t)) {
          ok = false;
          break;
        }
      }
      if (ok) candidates.push_back(d);
    }
    if (candidates.size() > 1) budget.charge(candidates.size() - 1);
    for (ColorId d : candidates) {
      colors[c] = d;
      taken[d] = true;
      step(c + 1);
      taken[d] = false;
      if (found) return;
    }
  };
  step(0);
  return found;
}

inline std::optional<IsoWitness> operad_iso(const SetOperad& A, const SetOperad& B, std::size_t bound) {
  SearchBudget budget(SearchBudget::default_verify_limit);
  return operad_iso(A, B, bound, budget);
}

// Colors first, then one line per operation of the source, in index order.
inline std::string to_string(const OperadMorphism& m) {
  std::string s = "colors:";
  for (ColorId c = 0; c < m.on_colors.size(); ++c) s += " " + m.source.color_name(c) + "->" + m.target.color_name(m.on_colors[c]);
  s += "\n";
  for (const auto& [sig, images] : m.on_ops) {
    for (OpIndex i = 0; i < images.size(); ++i) {
      s += "  " + m.source.describe({sig, i}) + " |-> " + m.target.describe({m.image(sig), images[i]}) + "\n";
    }
  }
  return s;
}

// The functor O^⊗ -> P^⊗ induced by a morphism, applied componentwise.
inline Functor operator_functor(const OperadMorphism& m, const OperatorCategory& X, const OperatorCategory& Y) {
  const auto& S = *X.structure;
  const auto& T = *Y.structure;
  Functor F{X.total, Y.total, {}, {}};
  std::vector<ColorId> cs;
  for (ObjectId x = 0; x < X.total->object_count(); ++x) {
    cs.clear();
    for (auto c : S.object_colors[x]) cs.push_back(m.on_colors[c]);
    F.on_objects.push_back(T.object_id(cs));
  }
  std::vector<OpIndex> ops;
  for (ArrowId a = 0; a < X.total->arrow_count(); ++a) {
    const PointedMap& f = X.base_map(a);
    const ObjectId x = S.arrow_source[a], y = S.arrow_target[a];
    ops.clear();
    for (std::uint32_t j = 1; j <= f.target; ++j) ops.push_back(m({S.component_signature(x, y, f, j), S.arrow_ops[a][j - 1]}).index);
    auto b = T.arrow_id(F(x), F(y), X.projection.map_arrow(a), ops);
    if (!b) throw Error(ErrorKind::invalid_structure, "image of " + X.total->arrow_name(a) + " is not an arrow");
    F.on_arrows.push_back(*b);
  }
  return F;
}

// Alg_O(C) at truncation N, together with the operator categories it was
// computed from.
struct AlgebraCategory {
  OperatorCategory source;  // O^⊗
  OperatorCategory target;  // C^⊗
  FunctorCategory algebras;

  const CategoryPtr& category() const { return algebras.category; }
};

// Objects: functors O^⊗ -> C^⊗ over Fin_* sending marked arrows to marked
// arrows. Arrows: natural transformations with components over identities.
inline AlgebraCategory alg_category(const SetOperad& O, const SetOperad& C, std::uint32_t N, SearchBudget& budget) {
  AlgebraCategory A{operator_category(O, N), operator_category(C, N), {}};
  const OperatorCategory& X = A.source;
  const OperatorCategory& Y = A.target;
  FunctorSearchOptions opt;
  opt.object_ok = [&](ObjectId x, ObjectId y) { return X.projection(x) == Y.projection(y); };
  opt.arrow_ok = [&](ArrowId a, ArrowId b) {
    return X.projection.map_arrow(a) == Y.projection.map_arrow(b) && (!X.marked[a] || Y.marked[b]);
  };
  const auto functors = all_functors(X.total, Y.total, budget, opt);
  const auto vertical = [&](ObjectId, ArrowId c) { return Y.base->is_identity(Y.projection.map_arrow(c)); };
  A.algebras = assemble_functor_category(
      functors, [&](const Functor& F, const Functor& G) { return natural_transformations(F, G, budget, vertical); }, "A");
  return A;
}

inline AlgebraCategory alg_category(const SetOperad& O, const SetOperad& C, std::uint32_t N) {
  SearchBudget budget(SearchBudget::default_verify_limit);
  return alg_category(O, C, N, budget);
}

struct BijectionReport {
  std::uint32_t bound = 0;
  std::size_t morphisms = 0;
  std::size_t algebras = 0;
  std::string witness;

  bool ok() const { return witness.empty() && morphisms == algebras; }
};

// Sends each operad morphism O -> C to its functor on operator categories and
// checks that this lands in, and exhausts, the objects of alg_category.
inline BijectionReport inert_functor_bijection_check(const SetOperad& O, const SetOperad& C, std::uint32_t N, SearchBudget& budget) {
  BijectionReport r;
  r.bound = N;
  const auto morphisms = operad_morphisms(O, C, N, budget);
  const AlgebraCategory A = alg_category(O, C, N, budget);
  r.morphisms = morphisms.size();
  r.algebras = A.algebras.functors.size();
  std::map<std::vector<ArrowId>, ObjectId> lookup;
  for (ObjectId i = 0; i < A.algebras.functors.size(); ++i) lookup.emplace(A.algebras.functors[i].on_arrows, i);
  std::set<ObjectId> hit;
  for (std::size_t k = 0; k < morphisms.size() && r.witness.empty(); ++k) {
    const Functor F = operator_functor(morphisms[k], A.source, A.target);
    auto it = lookup.find(F.on_arrows);
    if (it == lookup.end()) {
      r.witness = "morphism " + std::to_string(k) + " does not give an algebra";
    } else if (!hit.insert(it->second).second) {
      r.witness = "morphism " + std::to_string(k) + " gives the same algebra as an earlier one";
    }
  }
  if (r.witness.empty() && hit.size() != r.algebras) {
    for (ObjectId i = 0; i < r.algebras; ++i) {
      if (!hit.count(i)) {
        r.witness = "algebra " + A.category()->object_name(i) + " comes from no morphism";
        break;
      }
    }
  }
  return r;
}

inline BijectionReport inert_functor_bijection_check(const SetOperad& O, const SetOperad& C, std::uint32_t N) {
  SearchBudget budget(SearchBudget::default_verify_limit);
  return inert_functor_bijection_check(O, C, N, budget);
}

struct Restriction {
  AlgebraCategory diagram_algebras;  // Alg_{O_K}(C)
  AlgebraCategory algebras;          // Alg_O(C)
  FunctorCategory diagrams;          // Fun(K, Alg_O(C))
  Functor functor;
};

// The comparison Alg_{O_K}(C) -> Fun(K, Alg_O(C)). `diagram` replaces
// diagram_operad(K, O) and must share its color and operation numbering.
// Throws InvalidStructure when some restriction is not an object or arrow of
// the target.
inline Restriction restriction_functor(const CategoryPtr& K, const SetOperad& O, const SetOperad& C, std::uint32_t N, SearchBudget& budget,
                                       const std::optional<SetOperad>& diagram = std::nullopt) {
  const SetOperad D = diagram ? *diagram : diagram_operad(K, O);
  Restriction R{alg_category(D, C, N, budget), alg_category(O, C, N, budget), {}, {}};
  R.diagrams = functor_category(K, R.algebras.category(), budget);
  const OperatorCategory& XO = R.algebras.source;
  const OperatorCategory& XD = R.diagram_algebras.source;
  const auto& SO = *XO.structure;
  const auto& SD = *XD.structure;
  const detail::ArrowTuples tuples(K);
  const std::size_t width = O.color_count();
  const std::size_t no = XO.total->object_count(), ao = XO.total->arrow_count();

  auto fail = [](const std::string& why) { throw Error(ErrorKind::invalid_structure, why); };
  // O_K-operation made of an O-operation and arrows into k.
  auto diagram_op = [&](const std::vector<ObjectId>& ks, ObjectId k, OpIndex o, const std::vector<ArrowId>& arrows) {
    return static_cast<OpIndex>(o * tuples.count(ks, k) + tuples.encode(arrows));
  };
  auto lift_object = [&](ObjectId k, ObjectId x) {
    std::vector<ColorId> cs;
    for (auto c : SO.object_colors[x]) cs.push_back(static_cast<ColorId>(k * width + c));
    return SD.object_id(cs);
  };

  // inclusion[k]: O^⊗ -> O_K^⊗, x |-> (k, x).
  std::vector<Functor> inclusion;
  for (ObjectId k = 0; k < K->object_count(); ++k) {
    Functor I{XO.total, XD.total, {}, {}};
    for (ObjectId x = 0; x < no; ++x) I.on_objects.push_back(lift_object(k, x));
    const ArrowId idk = K->identity(k);
    for (ArrowId a = 0; a < ao; ++a) {
      const PointedMap& f = XO.base_map(a);
      const ObjectId x = SO.arrow_source[a], y = SO.arrow_target[a];
      std::vector<OpIndex> ops;
      for (std::uint32_t j = 1; j <= f.target; ++j) {
        const std::size_t fan = f.preimage(j).size();
        ops.push_back(diagram_op(std::vector<ObjectId>(fan, k), k, SO.arrow_ops[a][j - 1], std::vector<ArrowId>(fan, idk)));
      }
      auto b = SD.arrow_id(I(x), I(y), XO.projection.map_arrow(a), ops);
      if (!b) fail("no arrow over " + XO.total->arrow_name(a) + " at " + K->object_name(k));
      I.on_arrows.push_back(*b);
    }
    inclusion.push_back(std::move(I));
  }
  // transport[u][x]: the arrow (k, x) -> (k', x) over the identity made of
  // units of O and u.
  std::vector<std::vector<ArrowId>> transport(K->arrow_count());
  for (ArrowId u = 0; u < K->arrow_count(); ++u) {
    const ObjectId k = K->source(u), k2 = K->target(u);
    for (ObjectId x = 0; x < no; ++x) {
      const auto& cs = SO.object_colors[x];
      std::vector<OpIndex> ops;
      for (auto c : cs) ops.push_back(diagram_op({k}, k2, O.unit(c).index, {u}));
      const auto n = static_cast<ObjectId>(cs.size());
      auto b = SD.arrow_id(lift_object(k, x), lift_object(k2, x), XD.base->identity(n), ops);
      if (!b) fail("no transport arrow for " + K->arrow_name(u));
      transport[u].push_back(*b);
    }
  }

  std::map<std::vector<ArrowId>, ObjectId> algebra_id;
  for (ObjectId i = 0; i < R.algebras.algebras.functors.size(); ++i) algebra_id.emplace(R.algebras.algebras.functors[i].on_arrows, i);

  const auto& source = R.diagram_algebras.algebras;
  const auto& Src = *source.category;
  std::vector<std::vector<ObjectId>> restricted(Src.object_count());  // restricted[A][k]
  R.functor = Functor{source.category, R.diagrams.category, {}, {}};
  for (ObjectId A = 0; A < Src.object_count(); ++A) {
    const Functor& FA = source.functors[A];
    for (ObjectId k = 0; k < K->object_count(); ++k) {
      auto it = algebra_id.find(compose(FA, inclusion[k]).on_arrows);
      if (it == algebra_id.end()) fail("restriction of " + Src.object_name(A) + " to " + K->object_name(k) + " is not an algebra");
      restricted[A].push_back(it->second);
    }
    Functor diagram{K, R.algebras.category(), restricted[A], {}};
    for (ArrowId u = 0; u < K->arrow_count(); ++u) {
      NatTransform t;
      for (ObjectId x = 0; x < no; ++x) t.components.push_back(FA.map_arrow(transport[u][x]));
      auto m = R.algebras.algebras.find_transformation(restricted[A][K->source(u)], restricted[A][K->target(u)], t);
      if (!m) fail(Src.object_name(A) + " applied to " + K->arrow_name(u) + " is not an algebra morphism");
      diagram.on_arrows.push_back(*m);
    }
    auto d = R.diagrams.find_functor(diagram);
    if (!d) fail("restriction of " + Src.object_name(A) + " is not a functor out of K");
    R.functor.on_objects.push_back(*d);
  }
  for (ArrowId a = 0; a < Src.arrow_count(); ++a) {
    const ObjectId A = Src.source(a), B = Src.target(a);
    const NatTransform& theta = source.transformations[a];
    NatTransform image;
    for (ObjectId k = 0; k < K->object_count(); ++k) {
      NatTransform t;
      for (ObjectId x = 0; x < no; ++x) t.components.push_back(theta.components[inclusion[k](x)]);
      auto m = R.algebras.algebras.find_transformation(restricted[A][k], restricted[B][k], t);
      if (!m) fail("restriction of " + Src.arrow_name(a) + " to " + K->object_name(k) + " is not an algebra morphism");
      image.components.push_back(*m);
    }
    auto m = R.diagrams.find_transformation(R.functor(A), R.functor(B), image);
    if (!m) fail("restriction of " + Src.arrow_name(a) + " is not natural");
    R.functor.on_arrows.push_back(*m);
  }
  return R;
}

struct UniversalReport {
  std::uint32_t bound = 0;
  CategoryPtr diagram_algebras;  // Alg_{O_K}(C)
  CategoryPtr diagrams;          // Fun(K, Alg_O(C))
  std::optional<Functor> comparison;
  bool isomorphism = false;
  bool equivalence = false;  // reported separately, never part of the verdict
  std::string witness;

  bool pass() const { return isomorphism; }
};

// Decides whether the comparison functor is an isomorphism of finite
// categories. Structural failures in the (possibly replaced) diagram operad
// are reported as witnesses; running out of budget still throws.
inline UniversalReport universal_property_check(const CategoryPtr& K, const SetOperad& O, const SetOperad& C, std::uint32_t N,
                                                SearchBudget& budget, const std::optional<SetOperad>& diagram = std::nullopt) {
  UniversalReport report;
  report.bound = N;
  std::optional<Restriction> R;
  try {
    R.emplace(restriction_functor(K, O, C, N, budget, diagram));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::budget_exceeded) throw;
    report.witness = e.what();
    return report;
  }
  report.diagram_algebras = R->diagram_algebras.category();
  report.diagrams = R->diagrams.category;
  const Functor& F = R->functor;
  report.comparison = F;
  report.equivalence = is_equivalence(F);
  const auto& S = *F.source;
  const auto& T = *F.target;
  if (auto why = functor_violation(F); !why.empty()) {
    report.witness = "comparison is not a functor: " + why;
    return report;
  }
  std::vector<std::size_t> object_hits(T.object_count(), 0), arrow_hits(T.arrow_count(), 0);
  for (ObjectId x = 0; x < S.object_count(); ++x) {
    if (++object_hits[F(x)] == 2) {
      report.witness = "object " + T.object_name(F(x)) + " is hit twice, last by " + S.object_name(x);
      return report;
    }
  }
  for (ArrowId a = 0; a < S.arrow_count(); ++a) {
    if (++arrow_hits[F.map_arrow(a)] == 2) {
      report.witness = "arrow " + T.arrow_name(F.map_arrow(a)) + " is hit twice, last by " + S.arrow_name(a);
      return report;
    }
  }
  for (ObjectId y = 0; y < T.object_count(); ++y) {
    if (!object_hits[y]) {
      report.witness = "object " + T.object_name(y) + " is not hit";
      return report;
    }
  }
  for (ArrowId b = 0; b < T.arrow_count(); ++b) {
    if (!arrow_hits[b]) {
      report.witness = "arrow " + T.arrow_name(b) + " is not hit";
      return report;
    }
  }
  report.isomorphism = true;
  return report;
}

inline UniversalReport universal_property_check(const CategoryPtr& K, const SetOperad& O, const SetOperad& C, std::uint32_t N,
                                                const std::optional<SetOperad>& diagram = std::nullopt) {
  SearchBudget budget(SearchBudget::default_verify_limit);
  return universal_property_check(K, O, C, N, budget, diagram);
}

inline std::string to_string(const UniversalReport& r) {
  std::string s = "universal: " + std::string(r.pass() ? "pass" : "fail") + "\nbound: " + std::to_string(r.bound) + "\n";
  if (r.diagram_algebras) {
    s += "diagram-algebras: " + std::to_string(r.diagram_algebras->object_count()) + " objects, " +
         std::to_string(r.diagram_algebras->arrow_count()) + " arrows\n";
  }
  if (r.diagrams) {
    s += "diagrams: " + std::to_string(r.diagrams->object_count()) + " objects, " + std::to_string(r.diagrams->arrow_count()) + " arrows\n";
  }
  if (r.comparison) {
    s += "isomorphism: " + std::string(r.isomorphism ? "yes" : "no") + "\nequivalence: " + std::string(r.equivalence ? "yes" : "no") + "\n";
  }
  if (!r.witness.empty()) s += "witness: " + r.witness + "\n";
  return s;
}

inline std::string to_string(const BijectionReport& r) {
  return "bijection: " + std::string(r.ok() ? "pass" : "fail") + "\nbound: " + std::to_string(r.bound) +
         "\nmorphisms: " + std::to_string(r.morphisms) + "\nalgebras: " + std::to_string(r.algebras) + "\n" +
         (r.witness.empty() ? "" : "witness: " + r.witness + "\n");
}

}  // namespace opcat
