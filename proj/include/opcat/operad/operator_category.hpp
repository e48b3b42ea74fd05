#pragma once

#include <algorithm>
#include <functional>
#include <tuple>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "opcat/finstar.hpp"
#include "opcat/operad/constructions.hpp"
#include "opcat/operad/morphism.hpp"

namespace opcat {

struct OperatorCategory;

// Bookkeeping for categories of operators built from an operad: object
// colors, arrow components and constant-time arrow lookup.
class OperatorStructure {
 public:
  struct Block {
    ArrowId start;
    std::vector<std::size_t> radices;
  };

  SetOperad operad;
  std::uint32_t bound = 0;
  std::vector<std::vector<ColorId>> object_colors;
  std::vector<ObjectId> first_object;  // first object over <n>, n = 0..bound+1
  std::vector<ArrowId> arrow_base;
  std::vector<ObjectId> arrow_source;
  std::vector<ObjectId> arrow_target;
  std::vector<std::vector<OpIndex>> arrow_ops;

  ObjectId object_id(std::span<const ColorId> colors) const {
    std::uint64_t code = 0;
    for (auto c : colors) code = code * operad.color_count() + c;
    return static_cast<ObjectId>(first_object[colors.size()] + code);
  }

  std::optional<ArrowId> arrow_id(ObjectId x, ObjectId y, ArrowId base, std::span<const OpIndex> ops) const {
    auto it = blocks_.find(key(x, y, base));
    if (it == blocks_.end()) return std::nullopt;
    std::uint64_t code = 0;
    for (std::size_t j = 0; j < ops.size(); ++j) {
      if (ops[j] >= it->second.radices[j]) return std::nullopt;
      code = code * it->second.radices[j] + ops[j];
    }
    return static_cast<ArrowId>(it->second.start + code);
  }

  // Signature of component j (1-based) of an arrow x -> y over f.
  Signature component_signature(ObjectId x, ObjectId y, const PointedMap& f, std::uint32_t j) const {
    Signature s{{}, object_colors[y][j - 1]};
    for (auto i : f.preimage(j)) s.inputs.push_back(object_colors[x][i - 1]);
    return s;
  }

 private:
  friend OperatorCategory operator_category(const SetOperad&, std::uint32_t);
  std::uint64_t key(ObjectId x, ObjectId y, ArrowId base) const {
    return (static_cast<std::uint64_t>(x) * first_object.back() + y) * base_arrows_ + base;
  }
  std::size_t base_arrows_ = 0;
  std::unordered_map<std::uint64_t, Block> blocks_;
};

// A category over a truncation of Fin_*, with a marking. `structure` is set
// for categories built by operator_category and empty for edited ones.
struct OperatorCategory {
  std::shared_ptr<const FinStar> finstar;
  CategoryPtr base;
  CategoryPtr total;
  Functor projection;
  std::vector<bool> marked;
  std::shared_ptr<const OperatorStructure> structure;

  std::uint32_t bound() const { return finstar->bound(); }
  const PointedMap& base_map(ArrowId a) const { return finstar->map(projection.map_arrow(a)); }
};


namespace detail {

// g ∘ f in a category of operators: component k is gamma(psi_k; phi_j for
// j in beta^-1(k)), reordered so its inputs follow the source order.
inline ArrowId compose_operator_arrows(const OperatorStructure& S, const FinStar& fs, ArrowId g, ArrowId f) {
  const auto& O = S.operad;
  const ObjectId x = S.arrow_source[f], y = S.arrow_target[f], z = S.arrow_target[g];
  const PointedMap& alpha = fs.map(S.arrow_base[f]);
  const PointedMap& beta = fs.map(S.arrow_base[g]);
  std::vector<OpIndex> ops(beta.target);
  std::vector<Operation> inner;
  std::vector<std::uint32_t> order, sorted;
  for (std::uint32_t k = 1; k <= beta.target; ++k) {
    inner.clear();
    order.clear();
    for (auto j : beta.preimage(k)) {
      inner.push_back({S.component_signature(x, y, alpha, j), S.arrow_ops[f][j - 1]});
      for (auto i : alpha.preimage(j)) order.push_back(i);
    }
    const Operation outer{S.component_signature(y, z, beta, k), S.arrow_ops[g][k - 1]};
    Operation r = O.compose(outer, inner);
    sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != order) {
      Permutation sigma(order.size());
      for (std::size_t p = 0; p < sorted.size(); ++p) {
        sigma[p] = static_cast<std::uint32_t>(std::find(order.begin(), order.end(), sorted[p]) - order.begin());
      }
      r = O.act(r, sigma);
    }
    ops[k - 1] = r.index;
  }
  const ArrowId h = fs.arrow_id(compose_pointed(alpha, beta));
  auto id = S.arrow_id(x, z, h, ops);
  if (!id) throw Error(ErrorKind::missing_composite, "composite operation outside the category of operators");
  return *id;
}

}  // namespace detail

// The category of operators of O truncated at <N>: objects over <n> are
// color n-tuples, arrows over f: <n> -> <m> are families (phi_j) with phi_j
// from the colors at f^-1(j), in increasing order, to the j-th target color.
inline OperatorCategory operator_category(const SetOperad& O, std::uint32_t N) {
  if (auto m = O.max_arity(); m && *m < N) {
    throw Error(ErrorKind::bound_too_small, O.name() + " is truncated at arity " + std::to_string(*m) + " below " + std::to_string(N));
  }
  OperatorCategory X;
  X.finstar = std::make_shared<const FinStar>(N);
  X.base = X.finstar->category();
  auto st = std::make_shared<OperatorStructure>();
  st->operad = O;
  st->bound = N;
  st->base_arrows_ = X.base->arrow_count();
  const std::size_t C = O.color_count();

  std::vector<std::string> object_names;
  for (std::uint32_t n = 0; n <= N; ++n) {
    st->first_object.push_back(static_cast<ObjectId>(st->object_colors.size()));
    if (C == 0 && n > 0) continue;
    std::vector<ColorId> colors(n, 0);
    while (true) {
      std::string name = "<" + std::to_string(n) + ">(";
      for (std::uint32_t i = 0; i < n; ++i) name += (i ? "," : "") + O.color_name(colors[i]);
      object_names.push_back(name + ")");
      st->object_colors.push_back(colors);
      std::size_t i = n;
      while (i > 0 && colors[i - 1] + 1 == C) colors[--i] = 0;
      if (i == 0) break;
      ++colors[i - 1];
    }
  }
  st->first_object.push_back(static_cast<ObjectId>(st->object_colors.size()));

  std::map<Signature, std::size_t> counts;
  auto count = [&](const Signature& s) {
    auto it = counts.find(s);
    if (it == counts.end()) it = counts.emplace(s, O.op_count(s)).first;
    return it->second;
  };

  std::vector<ArrowInfo> arrows;
  for (ObjectId x = 0; x < st->object_colors.size(); ++x) {
    const auto n = static_cast<ObjectId>(st->object_colors[x].size());
    for (ObjectId m = 0; m <= N; ++m) {
      for (ArrowId a : X.base->hom(n, m)) {
        const PointedMap& f = X.finstar->map(a);
        // per target position, the admissible colors with their op counts
        std::vector<std::vector<std::pair<ColorId, std::size_t>>> options(m);
        bool empty = false;
        for (std::uint32_t j = 1; j <= m && !empty; ++j) {
          Signature s{{}, 0};
          for (auto i : f.preimage(j)) s.inputs.push_back(st->object_colors[x][i - 1]);
          for (ColorId y = 0; y < C; ++y) {
            s.output = y;
            if (const std::size_t k = count(s)) options[j - 1].emplace_back(y, k);
          }
          empty = options[j - 1].empty();
        }
        if (empty) continue;
        std::vector<std::size_t> choice(m, 0);
        while (true) {
          std::vector<ColorId> ycolors(m);
          OperatorStructure::Block block{static_cast<ArrowId>(arrows.size()), {}};
          for (std::uint32_t j = 0; j < m; ++j) {
            ycolors[j] = options[j][choice[j]].first;
            block.radices.push_back(options[j][choice[j]].second);
          }
          const ObjectId y = st->object_id(ycolors);
          const std::uint64_t total = detail::checked_product(block.radices);
          std::vector<Signature> sigs;
          for (std::uint32_t j = 1; j <= m; ++j) sigs.push_back(st->component_signature(x, y, f, j));
          const std::string prefix = serialize(f) + "|" + object_names[x] + "|" + object_names[y] + "|";
          for (std::uint64_t code = 0; code < total; ++code) {
            auto digits = detail::decode_digits(code, block.radices);
            std::string name = prefix;
            for (std::uint32_t j = 0; j < m; ++j) name += (j ? "," : "") + O.op_name(sigs[j], digits[j]);
            arrows.push_back({std::move(name), x, y});
            st->arrow_base.push_back(a);
            st->arrow_source.push_back(x);
            st->arrow_target.push_back(y);
            st->arrow_ops.emplace_back(digits.begin(), digits.end());
          }
          st->blocks_.emplace(st->key(x, y, a), std::move(block));
          std::size_t j = m;
          while (j > 0 && choice[j - 1] + 1 == options[j - 1].size()) choice[--j] = 0;
          if (j == 0) break;
          ++choice[j - 1];
        }
      }
    }
  }

  std::vector<ArrowId> ids;
  for (ObjectId x = 0; x < st->object_colors.size(); ++x) {
    const auto& cs = st->object_colors[x];
    std::vector<OpIndex> units;
    for (auto c : cs) units.push_back(O.unit(c).index);
    const ArrowId id = X.finstar->arrow_id(PointedMap::identity(static_cast<std::uint32_t>(cs.size())));
    ids.push_back(*st->arrow_id(x, x, id, units));
  }

  const OperatorStructure& S = *st;
  const FinStar& fs = *X.finstar;
  X.total = share(FinCategory::generate(std::move(object_names), std::move(arrows), std::move(ids),
                                        [&](ArrowId g, ArrowId f) { return detail::compose_operator_arrows(S, fs, g, f); }));
  X.projection = Functor{X.total, X.base, {}, S.arrow_base};
  for (const auto& cs : S.object_colors) X.projection.on_objects.push_back(static_cast<ObjectId>(cs.size()));
  X.marked.assign(X.total->arrow_count(), false);
  for (ArrowId a = 0; a < X.total->arrow_count(); ++a) {
    const PointedMap& f = fs.map(S.arrow_base[a]);
    if (!is_inert(f)) continue;
    bool units = true;
    const ObjectId x = S.arrow_source[a], y = S.arrow_target[a];
    for (std::uint32_t j = 1; j <= f.target && units; ++j) {
      const ColorId in = S.object_colors[x][f.preimage(j)[0] - 1], out = S.object_colors[y][j - 1];
      units = in == out && S.arrow_ops[a][j - 1] == O.unit(out).index;
    }
    X.marked[a] = units;
  }
  X.structure = std::move(st);
  return X;
}

// Objects over <n> and arrows over id_<n>.
inline FinCategory fiber(const OperatorCategory& X, std::uint32_t n, std::vector<ObjectId>* object_origin = nullptr,
                         std::vector<ArrowId>* arrow_origin = nullptr) {
  const ArrowId id = X.base->identity(n);
  std::vector<bool> keep_obj(X.total->object_count()), keep_arr(X.total->arrow_count());
  for (ObjectId x = 0; x < keep_obj.size(); ++x) keep_obj[x] = X.projection(x) == n;
  for (ArrowId a = 0; a < keep_arr.size(); ++a) keep_arr[a] = X.projection.map_arrow(a) == id;
  return subcategory(*X.total, keep_obj, keep_arr, arrow_origin, object_origin);
}

struct FibrousReport {
  bool pass = true;
  std::uint32_t bound = 0;
  std::string condition;  // empty on pass
  std::string witness;
};

namespace detail {

inline FibrousReport fibrous_failure(std::uint32_t bound, std::string condition, std::string witness) {
  return {false, bound, std::move(condition), std::move(witness)};
}

}  // namespace detail

// Checks, within the truncation: category laws, functoriality of the
// projection, that marked arrows lie over inert maps, then
//  (a) every inert map out of p(x) has a marked lift at x, and every marked
//      arrow is cocartesian;
//  (b) the chosen lifts over rho^1..rho^n identify the fiber over <n> with the
//      n-fold power of the fiber over <1>;
//  (c) arrows over f into y correspond, by composing with the chosen lifts at
//      y, to families of arrows over rho^j ∘ f.
// Reports the first failing datum in index order.
inline FibrousReport fibrous_check(const OperatorCategory& X) {
  const std::uint32_t N = X.bound();
  const FinCategory& T = *X.total;
  const FinCategory& B = *X.base;
  const FinStar& fs = *X.finstar;
  auto obj = [&](ObjectId x) { return T.object_name(x); };
  auto arr = [&](ArrowId a) { return T.arrow_name(a); };

  if (auto v = check_category_laws(T, 1); !v.empty()) return detail::fibrous_failure(N, "category-laws", describe(v.front()));
  if (X.projection.source.get() != X.total.get() || X.projection.target.get() != X.base.get()) {
    return detail::fibrous_failure(N, "projection", "projection is not a functor from the total category to the base");
  }
  if (auto v = functor_violation(X.projection); !v.empty()) return detail::fibrous_failure(N, "projection", v);
  if (X.marked.size() != T.arrow_count()) return detail::fibrous_failure(N, "marking", "marking has the wrong size");
  for (ArrowId a = 0; a < T.arrow_count(); ++a) {
    if (X.marked[a] && !is_inert(X.base_map(a))) {
      return detail::fibrous_failure(N, "marking", "marked arrow " + arr(a) + " lies over non-inert " + serialize(X.base_map(a)));
    }
  }

  // (a)
  std::vector<std::uint32_t> stamp(T.arrow_count(), 0);
  std::uint32_t epoch = 0;
  for (ObjectId x = 0; x < T.object_count(); ++x) {
    const ObjectId n = X.projection(x);
    for (ObjectId m = 0; m <= N; ++m) {
      for (ArrowId b : B.hom(n, m)) {
        const PointedMap& alpha = fs.map(b);
        if (!is_inert(alpha)) continue;
        bool found = false;
        for (ArrowId f : T.out(x)) {
          if (!X.marked[f] || X.projection.map_arrow(f) != b) continue;
          found = true;
          const ObjectId y = T.target(f);
          for (ObjectId z = 0; z < T.object_count(); ++z) {
            ++epoch;
            for (ArrowId g : T.hom(y, z)) {
              const ArrowId h = T.compose(g, f);
              if (stamp[h] == epoch) {
                return detail::fibrous_failure(N, "cocartesian-lift",
                                               "marked " + arr(f) + " is not cocartesian: two arrows out of " + obj(y) + " compose to " + arr(h));
              }
              stamp[h] = epoch;
            }
            for (ArrowId h : T.hom(x, z)) {
              if (stamp[h] == epoch) continue;
              const PointedMap& gamma = X.base_map(h);
              bool factors = true;
              for (std::uint32_t i = 1; i <= alpha.source && factors; ++i) factors = alpha(i) != 0 || gamma(i) == 0;
              if (factors) {
                return detail::fibrous_failure(N, "cocartesian-lift", "marked " + arr(f) + " is not cocartesian: " + arr(h) + " does not factor through it");
              }
            }
          }
        }
        if (!found) return detail::fibrous_failure(N, "cocartesian-lift", "object " + obj(x) + " has no marked lift of " + serialize(alpha));
      }
    }
  }

  // chosen lifts: lift[x][j-1] over rho^j
  std::vector<std::vector<ArrowId>> lift(T.object_count());
  for (ObjectId x = 0; x < T.object_count(); ++x) {
    const ObjectId n = X.projection(x);
    for (std::uint32_t j = 1; j <= n; ++j) {
      const ArrowId rho = fs.arrow_id(PointedMap::projection(n, j));
      for (ArrowId f : T.out(x)) {
        if (X.marked[f] && X.projection.map_arrow(f) == rho) {
          lift[x].push_back(f);
          break;
        }
      }
    }
  }
  auto vertical = [&](ObjectId a, ObjectId b) {
    std::vector<ArrowId> out;
    const ArrowId id = B.identity(X.projection(a));
    for (ArrowId u : T.hom(a, b))
      if (X.projection.map_arrow(u) == id) out.push_back(u);
    return out;
  };

  // (b)
  std::vector<ObjectId> over1;
  std::vector<std::vector<ObjectId>> over(N + 1);
  for (ObjectId x = 0; x < T.object_count(); ++x) over[X.projection(x)].push_back(x);
  if (over[0].size() != 1) {
    return detail::fibrous_failure(N, "fiber-product", "fiber over <0> has " + std::to_string(over[0].size()) + " objects");
  }
  if (auto v = vertical(over[0][0], over[0][0]); v.size() != 1) {
    return detail::fibrous_failure(N, "fiber-product", "fiber over <0> has " + std::to_string(v.size()) + " arrows");
  }
  for (std::uint32_t n = 2; n <= N; ++n) {
    std::size_t expected = 1;
    for (std::uint32_t j = 0; j < n; ++j) expected *= over[1].size();
    std::map<std::vector<ObjectId>, ObjectId> seen;
    for (ObjectId x : over[n]) {
      std::vector<ObjectId> tuple;
      for (ArrowId l : lift[x]) tuple.push_back(T.target(l));
      auto [it, fresh] = seen.emplace(tuple, x);
      if (!fresh) {
        return detail::fibrous_failure(N, "fiber-product", "objects " + obj(it->second) + " and " + obj(x) + " have the same restrictions");
      }
    }
    if (seen.size() != expected) {
      return detail::fibrous_failure(N, "fiber-product", "fiber over <" + std::to_string(n) + "> has " + std::to_string(seen.size()) +
                                                             " objects, expected " + std::to_string(expected));
    }
    for (ObjectId x : over[n]) {
      for (ObjectId x2 : over[n]) {
        const auto us = vertical(x, x2);
        std::size_t product = 1;
        for (std::uint32_t j = 0; j < n; ++j) product *= vertical(T.target(lift[x][j]), T.target(lift[x2][j])).size();
        if (us.size() != product) {
          return detail::fibrous_failure(N, "fiber-product", "vertical arrows " + obj(x) + " -> " + obj(x2) + ": " + std::to_string(us.size()) +
                                                                 ", product of restrictions: " + std::to_string(product));
        }
        std::set<std::vector<ArrowId>> images;
        for (ArrowId u : us) {
          std::vector<ArrowId> comps;
          for (std::uint32_t j = 0; j < n; ++j) {
            const ArrowId target_side = T.compose(lift[x2][j], u);
            std::optional<ArrowId> v;
            for (ArrowId c : vertical(T.target(lift[x][j]), T.target(lift[x2][j]))) {
              if (T.compose(c, lift[x][j]) != target_side) continue;
              if (v) return detail::fibrous_failure(N, "fiber-product", "restriction of " + arr(u) + " is not unique");
              v = c;
            }
            if (!v) return detail::fibrous_failure(N, "fiber-product", arr(u) + " has no restriction at position " + std::to_string(j + 1));
            comps.push_back(*v);
          }
          if (!images.insert(comps).second) return detail::fibrous_failure(N, "fiber-product", "restriction map is not injective at " + arr(u));
        }
      }
    }
  }

  // (c)
  for (ObjectId x = 0; x < T.object_count(); ++x) {
    for (ObjectId y = 0; y < T.object_count(); ++y) {
      const ObjectId n = X.projection(x), m = X.projection(y);
      std::map<ArrowId, std::vector<ArrowId>> by_base;
      for (ArrowId f : T.hom(x, y)) by_base[X.projection.map_arrow(f)].push_back(f);
      for (ArrowId b : B.hom(n, m)) {
        const auto& fs_over = by_base[b];
        std::size_t expected = 1;
        for (std::uint32_t j = 1; j <= m; ++j) {
          const ArrowId rb = B.compose(fs.arrow_id(PointedMap::projection(m, j)), b);
          std::size_t k = 0;
          for (ArrowId h : T.hom(x, T.target(lift[y][j - 1])))
            if (X.projection.map_arrow(h) == rb) ++k;
          expected *= k;
        }
        if (fs_over.size() != expected) {
          return detail::fibrous_failure(N, "mapping-decomposition", "arrows " + obj(x) + " -> " + obj(y) + " over " + serialize(fs.map(b)) +
                                                                          ": " + std::to_string(fs_over.size()) + ", families: " + std::to_string(expected));
        }
        std::set<std::vector<ArrowId>> images;
        for (ArrowId f : fs_over) {
          std::vector<ArrowId> comps;
          for (std::uint32_t j = 1; j <= m; ++j) comps.push_back(T.compose(lift[y][j - 1], f));
          if (!images.insert(comps).second) {
            return detail::fibrous_failure(N, "mapping-decomposition", arr(f) + " is not determined by its restrictions");
          }
        }
      }
    }
  }
  return {true, N, {}, {}};
}

inline std::string to_string(const FibrousReport& r) {
  std::string s = "fibrous: " + std::string(r.pass ? "pass" : "fail") + "\nbound: " + std::to_string(r.bound) + "\n";
  if (!r.pass) s += "condition: " + r.condition + "\nwitness: " + r.witness + "\n";
  return s;
}

// A single edit of a category over Fin_*, named for reporting.
struct OperatorMutation {
  std::string name;
  OperatorCategory category;
};

namespace detail {

inline OperatorCategory edited(const OperatorCategory& X, FinCategory total) {
  OperatorCategory Y = X;
  Y.total = share(std::move(total));
  Y.projection.source = Y.total;
  Y.structure.reset();
  return Y;
}

// Replaces object `victim` by two copies; arrows are all arrows of the
// original category between the images.
inline OperatorCategory duplicate_object(const OperatorCategory& X, ObjectId victim) {
  const FinCategory& T = *X.total;
  std::vector<ObjectId> origin;
  std::vector<std::string> names;
  for (ObjectId x = 0; x < T.object_count(); ++x) {
    origin.push_back(x);
    names.push_back(T.object_name(x));
  }
  origin.push_back(victim);
  names.push_back(T.object_name(victim) + "'");
  std::vector<std::vector<ObjectId>> copies(T.object_count());
  for (ObjectId x = 0; x < origin.size(); ++x) copies[origin[x]].push_back(x);
  std::vector<ArrowInfo> arrows;
  std::vector<ArrowId> arrow_origin;
  std::map<std::tuple<ArrowId, ObjectId, ObjectId>, ArrowId> index;
  for (ArrowId a = 0; a < T.arrow_count(); ++a) {
    for (ObjectId s : copies[T.source(a)]) {
      for (ObjectId t : copies[T.target(a)]) {
        index[{a, s, t}] = static_cast<ArrowId>(arrows.size());
        std::string name = T.arrow_name(a);
        if (s != T.source(a) || t != T.target(a)) name += "[" + names[s] + "," + names[t] + "]";
        arrows.push_back({std::move(name), s, t});
        arrow_origin.push_back(a);
      }
    }
  }
  std::vector<ArrowId> ids;
  for (ObjectId x = 0; x < origin.size(); ++x) ids.push_back(index.at({T.identity(origin[x]), x, x}));
  std::vector<ArrowInfo> info = arrows;
  FinCategory total = FinCategory::generate(std::move(names), std::move(arrows), std::move(ids), [&](ArrowId g, ArrowId f) {
    return index.at({T.compose(arrow_origin[g], arrow_origin[f]), info[f].source, info[g].target});
  });
  OperatorCategory Y = edited(X, std::move(total));
  Y.projection.on_objects.clear();
  for (ObjectId o : origin) Y.projection.on_objects.push_back(X.projection(o));
  Y.projection.on_arrows.clear();
  Y.marked.clear();
  for (ArrowId a : arrow_origin) {
    Y.projection.on_arrows.push_back(X.projection.map_arrow(a));
    Y.marked.push_back(X.marked[a]);
  }
  return Y;
}

}  // namespace detail

// Ten single edits of X, each of which breaks one of the conditions checked
// by fibrous_check. Edits that need a feature X lacks (for instance a
// non-identity endomorphism) are skipped, so the result may be shorter for
// degenerate inputs.
inline std::vector<OperatorMutation> fibrous_mutations(const OperatorCategory& X) {
  const FinCategory& T = *X.total;
  std::vector<OperatorMutation> out;
  auto over = [&](ObjectId x) { return X.projection(x); };
  auto base_of = [&](ArrowId a) { return X.projection.map_arrow(a); };

  // rewire a composite to another arrow over the same base arrow
  [&] {
    for (ArrowId f = 0; f < T.arrow_count(); ++f) {
      if (T.is_identity(f)) continue;
      for (ArrowId g : T.out(T.target(f))) {
        if (T.is_identity(g)) continue;
        const ArrowId h = T.compose(g, f);
        for (ArrowId h2 : T.hom(T.source(f), T.target(g))) {
          if (h2 == h || base_of(h2) != base_of(h)) continue;
          out.push_back({"rewire-composite", detail::edited(X, T.with_composite(g, f, h2))});
          return;
        }
      }
    }
  }();
  // rewire a composite to an arrow over a different base arrow
  [&] {
    for (ArrowId f = 0; f < T.arrow_count(); ++f) {
      if (T.is_identity(f)) continue;
      for (ArrowId g : T.out(T.target(f))) {
        if (T.is_identity(g)) continue;
        const ArrowId h = T.compose(g, f);
        for (ArrowId h2 : T.hom(T.source(f), T.target(g))) {
          if (base_of(h2) == base_of(h)) continue;
          out.push_back({"rewire-composite-over-base", detail::edited(X, T.with_composite(g, f, h2))});
          return;
        }
      }
    }
  }();
  // unmark a non-identity marked arrow
  for (ArrowId a = 0; a < T.arrow_count(); ++a) {
    if (!X.marked[a] || T.is_identity(a)) continue;
    OperatorCategory Y = detail::edited(X, T);
    Y.marked[a] = false;
    out.push_back({"unmark-inert-lift", std::move(Y)});
    break;
  }
  // unmark an identity over <1>
  for (ObjectId x = 0; x < T.object_count(); ++x) {
    if (over(x) != 1) continue;
    OperatorCategory Y = detail::edited(X, T);
    Y.marked[T.identity(x)] = false;
    out.push_back({"unmark-identity", std::move(Y)});
    break;
  }
  // mark an arrow over a non-inert map
  for (ArrowId a = 0; a < T.arrow_count(); ++a) {
    if (X.marked[a] || is_inert(X.base_map(a))) continue;
    OperatorCategory Y = detail::edited(X, T);
    Y.marked[a] = true;
    out.push_back({"mark-active", std::move(Y)});
    break;
  }
  // move an object over <1> to another base object
  for (ObjectId x = 0; x < T.object_count(); ++x) {
    if (over(x) != 1) continue;
    OperatorCategory Y = detail::edited(X, T);
    Y.projection.on_objects[x] = X.bound() > 1 ? 2 : 0;
    out.push_back({"reproject-object", std::move(Y)});
    break;
  }
  // send a non-identity arrow to another base arrow with the same ends
  [&] {
    for (ArrowId a = 0; a < T.arrow_count(); ++a) {
      if (T.is_identity(a)) continue;
      for (ArrowId b : X.base->hom(over(T.source(a)), over(T.target(a)))) {
        if (b == base_of(a)) continue;
        OperatorCategory Y = detail::edited(X, T);
        Y.projection.on_arrows[a] = b;
        out.push_back({"reproject-arrow", std::move(Y)});
        return;
      }
    }
  }();
  // declare a non-identity endomorphism to be the identity
  [&] {
    for (ObjectId x = 0; x < T.object_count(); ++x) {
      for (ArrowId e : T.hom(x, x)) {
        if (T.is_identity(e)) continue;
        out.push_back({"swap-identity", detail::edited(X, T.with_identity(x, e))});
        return;
      }
    }
  }();
  // delete the last object over the highest arity
  if (X.bound() >= 2) {
    std::vector<bool> keep(T.object_count(), true);
    for (ObjectId x = T.object_count(); x-- > 0;) {
      if (over(x) == X.bound()) {
        keep[x] = false;
        break;
      }
    }
    std::vector<ObjectId> objs;
    std::vector<ArrowId> arrs;
    FinCategory sub = full_subcategory(T, keep, &objs, &arrs);
    OperatorCategory Y = detail::edited(X, std::move(sub));
    Y.projection.on_objects.clear();
    Y.projection.on_arrows.clear();
    Y.marked.clear();
    for (ObjectId o : objs) Y.projection.on_objects.push_back(over(o));
    for (ArrowId a : arrs) {
      Y.projection.on_arrows.push_back(base_of(a));
      Y.marked.push_back(X.marked[a]);
    }
    out.push_back({"delete-object", std::move(Y)});
  }
  // add an isomorphic copy of an object over <1>
  for (ObjectId x = 0; x < T.object_count(); ++x) {
    if (over(x) != 1) continue;
    out.push_back({"duplicate-object", detail::duplicate_object(X, x)});
    break;
  }
  return out;
}

// Arrows of K^⊔ over f from the tuple x to the tuple y: one arrow x_i -> y_f(i)
// for every i with f(i) != *, listed by increasing i.
inline std::vector<std::vector<ArrowId>> sqcup_arrows(const FinCategory& K, const std::vector<ObjectId>& source,
                                                      const std::vector<ObjectId>& target, const PointedMap& f) {
  if (source.size() != f.source || target.size() != f.target || !f.valid()) {
    throw Error(ErrorKind::arity_mismatch, "object lists do not match " + serialize(f));
  }
  std::vector<std::span<const ArrowId>> choices;
  for (std::uint32_t i = 1; i <= f.source; ++i)
    if (f(i) != 0) choices.push_back(K.hom(source[i - 1], target[f(i) - 1]));
  std::vector<std::vector<ArrowId>> out;
  std::vector<ArrowId> current;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == choices.size()) {
      out.push_back(current);
      return;
    }
    for (ArrowId a : choices[k]) {
      current.push_back(a);
      rec(k + 1);
      current.pop_back();
    }
  };
  rec(0);
  return out;
}

// The fiber of O^⊗ over <n> built on its own: objects are n-tuples of
// colors, arrows are n-tuples of unary operations composed componentwise.
// Names and order agree with fiber(operator_category(O, n), n).
inline FinCategory operator_fiber(const SetOperad& O, std::uint32_t n) {
  const std::size_t C = O.color_count();
  std::vector<std::vector<ColorId>> tuples;
  std::vector<std::string> names;
  if (C > 0 || n == 0) {
    std::vector<ColorId> colors(n, 0);
    while (true) {
      std::string name = "<" + std::to_string(n) + ">(";
      for (std::uint32_t i = 0; i < n; ++i) name += (i ? "," : "") + O.color_name(colors[i]);
      names.push_back(name + ")");
      tuples.push_back(colors);
      std::size_t i = n;
      while (i > 0 && colors[i - 1] + 1 == C) colors[--i] = 0;
      if (i == 0) break;
      ++colors[i - 1];
    }
  }
  std::vector<std::size_t> unary(C * C);
  for (ColorId x = 0; x < C; ++x)
    for (ColorId y = 0; y < C; ++y) unary[x * C + y] = O.op_count({{x}, y});

  const std::string id_name = serialize(PointedMap::identity(n));
  std::vector<ArrowInfo> arrows;
  std::vector<std::vector<OpIndex>> ops;
  std::map<std::pair<ObjectId, ObjectId>, std::pair<ArrowId, std::vector<std::size_t>>> blocks;  // first arrow, radices
  for (ObjectId x = 0; x < tuples.size(); ++x) {
    for (ObjectId y = 0; y < tuples.size(); ++y) {
      std::vector<std::size_t> radices;
      for (std::uint32_t i = 0; i < n; ++i) radices.push_back(unary[tuples[x][i] * C + tuples[y][i]]);
      const std::uint64_t total = detail::checked_product(radices);
      if (total == 0) continue;
      blocks.emplace(std::make_pair(x, y), std::make_pair(static_cast<ArrowId>(arrows.size()), radices));
      for (std::uint64_t code = 0; code < total; ++code) {
        auto digits = detail::decode_digits(code, radices);
        std::string name = id_name + "|" + names[x] + "|" + names[y] + "|";
        for (std::uint32_t i = 0; i < n; ++i) name += (i ? "," : "") + O.op_name({{tuples[x][i]}, tuples[y][i]}, digits[i]);
        arrows.push_back({std::move(name), x, y});
        ops.emplace_back(digits.begin(), digits.end());
      }
    }
  }
  auto arrow_id = [&](ObjectId x, ObjectId y, const std::vector<std::uint32_t>& digits) {
    const auto& [start, radices] = blocks.at({x, y});
    return static_cast<ArrowId>(start + detail::encode_digits(digits, radices));
  };
  std::vector<ArrowId> ids;
  for (ObjectId x = 0; x < tuples.size(); ++x) {
    std::vector<std::uint32_t> digits;
    for (auto c : tuples[x]) digits.push_back(O.unit(c).index);
    ids.push_back(arrow_id(x, x, digits));
  }
  auto fiber = FinCategory::generate(names, arrows, ids, [&](ArrowId g, ArrowId f) {
    const ObjectId x = arrows[f].source, y = arrows[f].target, z = arrows[g].target;
    std::vector<std::uint32_t> digits(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const Operation first{{{tuples[x][i]}, tuples[y][i]}, ops[f][i]};
      const Operation second{{{tuples[y][i]}, tuples[z][i]}, ops[g][i]};
      digits[i] = O.compose_at(second, 0, first).index;
    }
    return arrow_id(x, z, digits);
  });
  return fiber;
}

// Fiber over <n> of the category of operators of K^⊔.
inline FinCategory sqcup_fiber(const FinCategory& K, std::uint32_t n) { return operator_fiber(sqcup(share(K)), n); }

// The comparison K × O^⊗ -> (K^⊔ ×_Com O)^⊗ over Fin_*.
struct GammaMap {
  OperatorCategory operad_side;  // O^⊗
  CategoryPtr source;            // K × O^⊗
  Functor source_projection;
  std::vector<bool> source_marked;  // (iso, marked)
  OperatorCategory target;
  Functor functor;
  bool preserves_marking = true;
  std::string marking_witness;
};

inline GammaMap gamma_map(const CategoryPtr& K, const SetOperad& O, std::uint32_t N) {
  GammaMap G;
  G.operad_side = operator_category(O, N);
  const OperatorCategory& Xo = G.operad_side;
  G.source = share(product(*K, *Xo.total));
  const SetOperad P = product_over_com(sqcup(K), O, N);
  G.target = operator_category(P, N);
  const auto& S = *Xo.structure;
  const auto& ST = *G.target.structure;
  const std::size_t no = Xo.total->object_count(), ao = Xo.total->arrow_count();
  const std::size_t width = O.color_count();
  const detail::ArrowTuples tuples(K);

  G.source_projection = Functor{G.source, Xo.base, {}, {}};
  G.functor = Functor{G.source, G.target.total, {}, {}};
  for (ObjectId k = 0; k < K->object_count(); ++k) {
    for (ObjectId x = 0; x < no; ++x) {
      G.source_projection.on_objects.push_back(Xo.projection(x));
      std::vector<ColorId> cs;
      for (auto c : S.object_colors[x]) cs.push_back(static_cast<ColorId>(k * width + c));
      G.functor.on_objects.push_back(ST.object_id(cs));
    }
  }
  for (ArrowId u = 0; u < K->arrow_count(); ++u) {
    const bool iso = is_isomorphism(*K, u);
    for (ArrowId b = 0; b < ao; ++b) {
      G.source_projection.on_arrows.push_back(Xo.projection.map_arrow(b));
      G.source_marked.push_back(iso && Xo.marked[b]);
      const PointedMap& f = Xo.base_map(b);
      const ObjectId x = S.arrow_source[b], y = S.arrow_target[b];
      std::vector<OpIndex> ops;
      for (std::uint32_t j = 1; j <= f.target; ++j) {
        const Signature s = S.component_signature(x, y, f, j);
        const std::vector<ArrowId> us(s.arity(), u);
        const std::size_t count_o = O.op_count(s);
        ops.push_back(static_cast<OpIndex>(tuples.encode(us) * count_o + S.arrow_ops[b][j - 1]));
      }
      const ObjectId fx = G.functor.on_objects[K->source(u) * no + x];
      const ObjectId fy = G.functor.on_objects[K->target(u) * no + y];
      auto image = ST.arrow_id(fx, fy, Xo.projection.map_arrow(b), ops);
      if (!image) throw Error(ErrorKind::invalid_structure, "gamma image of an arrow is missing");
      G.functor.on_arrows.push_back(*image);
    }
  }
  for (ArrowId a = 0; a < G.source_marked.size(); ++a) {
    if (G.source_marked[a] && !G.target.marked[G.functor.on_arrows[a]]) {
      G.preserves_marking = false;
      G.marking_witness = G.source->arrow_name(a);
      break;
    }
  }
  return G;
}

}  // namespace opcat
