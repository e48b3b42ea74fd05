#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "opcat/error.hpp"
#include "opcat/finstar.hpp"
#include "opcat/operad/core.hpp"

namespace opcat {

using EdgeId = std::uint32_t;
using VertexId = std::uint32_t;
inline constexpr VertexId no_vertex = std::numeric_limits<VertexId>::max();

struct Vertex {
  std::string name;
  std::vector<EdgeId> inputs;
  EdgeId output = 0;
};

// A finite disjoint union of rooted trees. Edges are the colors; a vertex has
// one output edge and a (possibly empty) list of input edges. Roots are
// edges that are no vertex's input, leaves are edges that are no vertex's
// output.
class Forest {
 public:
  Forest() = default;

  Forest(std::vector<std::string> edges, std::vector<Vertex> vertices)
      : edges_(std::move(edges)), vertices_(std::move(vertices)) {
    const auto n = edges_.size();
    above_.assign(n, no_vertex);
    below_.assign(n, no_vertex);
    if (auto d = first_duplicate(edges_, [](const std::string& e) -> const std::string& { return e; })) {
      throw Error(ErrorKind::duplicate_name, "edge " + *d + " is declared twice");
    }
    if (auto d = first_duplicate(vertices_, [](const Vertex& v) -> const std::string& { return v.name; })) {
      throw Error(ErrorKind::duplicate_name, "vertex " + *d + " is declared twice");
    }
    for (VertexId v = 0; v < vertices_.size(); ++v) {
      const auto& vx = vertices_[v];
      auto check = [&](EdgeId e) {
        if (e >= n) throw Error(ErrorKind::unknown_edge, "vertex " + vx.name + " uses edge #" + std::to_string(e));
      };
      check(vx.output);
      if (above_[vx.output] != no_vertex) {
        throw Error(ErrorKind::invalid_structure, "edge " + edges_[vx.output] + " is the output of two vertices");
      }
      above_[vx.output] = v;
      for (EdgeId e : vx.inputs) {
        check(e);
        if (below_[e] != no_vertex) throw Error(ErrorKind::invalid_structure, "edge " + edges_[e] + " is an input of two vertices");
        below_[e] = v;
      }
    }
    // Walking down from any edge must reach a root within n steps.
    for (EdgeId e = 0; e < n; ++e) {
      EdgeId x = e;
      for (std::size_t steps = 0; below_[x] != no_vertex; ++steps) {
        if (steps > n) throw Error(ErrorKind::invalid_structure, "edge " + edges_[e] + " lies on a cycle");
        x = vertices_[below_[x]].output;
      }
    }
  }

  std::size_t edge_count() const { return edges_.size(); }
  std::size_t vertex_count() const { return vertices_.size(); }
  const std::string& edge_name(EdgeId e) const { return edges_.at(e); }
  const std::vector<std::string>& edge_names() const { return edges_; }
  const Vertex& vertex(VertexId v) const { return vertices_.at(v); }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  // The vertex whose output is e, if any.
  VertexId vertex_above(EdgeId e) const { return above_.at(e); }
  // The vertex that has e as an input, if any.
  VertexId vertex_below(EdgeId e) const { return below_.at(e); }

  bool is_root(EdgeId e) const { return below_.at(e) == no_vertex; }
  bool is_leaf(EdgeId e) const { return above_.at(e) == no_vertex; }

  std::vector<EdgeId> roots() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edges_.size(); ++e)
      if (is_root(e)) out.push_back(e);
    return out;
  }
  std::vector<EdgeId> leaves() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edges_.size(); ++e)
      if (is_leaf(e)) out.push_back(e);
    return out;
  }

  std::optional<EdgeId> find_edge(std::string_view name) const {
    for (EdgeId e = 0; e < edges_.size(); ++e)
      if (edges_[e] == name) return e;
    return std::nullopt;
  }

  // Edges of the subtree hanging above e, e included.
  std::size_t subtree_size(EdgeId e) const {
    std::size_t n = 1;
    if (above_[e] != no_vertex)
      for (EdgeId i : vertices_[above_[e]].inputs) n += subtree_size(i);
    return n;
  }

 private:
  template <class T, class Key>
  static std::optional<std::string> first_duplicate(const std::vector<T>& items, Key key) {
    std::vector<std::string_view> names;
    names.reserve(items.size());
    for (const auto& x : items) names.emplace_back(key(x));
    std::sort(names.begin(), names.end());
    auto it = std::adjacent_find(names.begin(), names.end());
    if (it == names.end()) return std::nullopt;
    return std::string(*it);
  }

  std::vector<std::string> edges_;
  std::vector<Vertex> vertices_;
  std::vector<VertexId> above_;
  std::vector<VertexId> below_;
};

using ForestPtr = std::shared_ptr<const Forest>;

inline ForestPtr share(Forest F) { return std::make_shared<const Forest>(std::move(F)); }

inline Forest unit_tree() { return Forest({"e"}, {}); }

// A single vertex with the given number of inputs.
inline Forest corolla(std::size_t arity) {
  std::vector<std::string> edges{"r"};
  Vertex v{"v", {}, 0};
  for (std::size_t i = 1; i <= arity; ++i) {
    edges.push_back("l" + std::to_string(i));
    v.inputs.push_back(static_cast<EdgeId>(i));
  }
  return Forest(std::move(edges), {std::move(v)});
}

// Whether `set` is the leaf set of a subtree rooted at e: starting from {e},
// some pattern of replacing edges by the inputs of the vertex above them.
inline bool is_frontier(const Forest& F, EdgeId e, const std::vector<EdgeId>& set) {
  if (e >= F.edge_count()) throw Error(ErrorKind::unknown_edge, "edge #" + std::to_string(e) + " is not in the forest");
  thread_local std::vector<char> member;
  thread_local std::vector<EdgeId> stack;
  member.assign(F.edge_count(), 0);
  for (EdgeId x : set) {
    if (x >= F.edge_count() || member[x]) return false;
    member[x] = 1;
  }
  std::size_t matched = 0;
  stack.assign(1, e);
  while (!stack.empty()) {
    const EdgeId x = stack.back();
    stack.pop_back();
    if (member[x]) {
      ++matched;
      continue;
    }
    const VertexId v = F.vertex_above(x);
    if (v == no_vertex) return false;
    for (EdgeId i : F.vertex(v).inputs) stack.push_back(i);
  }
  return matched == set.size();
}

// All frontiers of e, each sorted by edge id, in lexicographic order.
inline std::vector<std::vector<EdgeId>> frontiers(const Forest& F, EdgeId e) {
  if (e >= F.edge_count()) throw Error(ErrorKind::unknown_edge, "edge #" + std::to_string(e) + " is not in the forest");
  std::vector<std::vector<EdgeId>> out{{e}};
  if (const VertexId v = F.vertex_above(e); v != no_vertex) {
    std::vector<std::vector<EdgeId>> partial{{}};
    for (EdgeId i : F.vertex(v).inputs) {
      const auto below = frontiers(F, i);
      std::vector<std::vector<EdgeId>> next;
      for (const auto& p : partial)
        for (const auto& q : below) {
          auto r = p;
          r.insert(r.end(), q.begin(), q.end());
          next.push_back(std::move(r));
        }
      partial = std::move(next);
    }
    for (auto& p : partial) {
      std::sort(p.begin(), p.end());
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::vector<EdgeId>> frontiers(const Forest& F, std::string_view edge) {
  auto e = F.find_edge(edge);
  if (!e) throw Error(ErrorKind::unknown_edge, "no edge named " + std::string(edge));
  return frontiers(F, *e);
}

namespace detail {

// o(F): one operation ((e_1..e_n); e) for each ordering of each frontier of e.
class FreeOperadData final : public OperadData {
 public:
  explicit FreeOperadData(ForestPtr F) : F_(std::move(F)) {}

  const Forest& forest() const { return *F_; }

  std::size_t color_count() const override { return F_->edge_count(); }
  std::string color_name(ColorId c) const override { return F_->edge_name(c); }
  std::size_t op_count(const Signature& s) const override {
    {
      std::shared_lock lock(mutex_);
      if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    }
    const std::size_t n = is_frontier(*F_, s.output, s.inputs) ? 1 : 0;
    std::unique_lock lock(mutex_);
    memo_.emplace(s, n);
    return n;
  }
  std::string op_name(const Signature& s, OpIndex) const override {
    if (s.arity() == 1 && s.inputs[0] == s.output) return "id_" + F_->edge_name(s.output);
    auto set = s.inputs;
    std::sort(set.begin(), set.end());
    std::string r = "fr{";
    for (std::size_t i = 0; i < set.size(); ++i) r += (i ? "," : "") + F_->edge_name(set[i]);
    return r + "}";
  }
  OpIndex unit(ColorId) const override { return 0; }
  OpIndex act(const Signature&, OpIndex, const Permutation&) const override { return 0; }
  OpIndex compose(const Signature&, OpIndex, std::span<const Operation>) const override { return 0; }

 private:
  ForestPtr F_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Signature, std::size_t> memo_;
};

}  // namespace detail

inline SetOperad free_operad(ForestPtr F, std::string name = "o(F)") {
  return SetOperad(std::move(name), std::make_shared<detail::FreeOperadData>(std::move(F)));
}
inline SetOperad free_operad(const Forest& F, std::string name = "o(F)") { return free_operad(share(F), std::move(name)); }

// An arrow of Φ: an edge map whose induced color map extends to an operad map
// o(source) -> o(target).
struct ForestMorphism {
  ForestPtr source;
  ForestPtr target;
  std::vector<EdgeId> on_edges;

  EdgeId operator()(EdgeId e) const { return on_edges.at(e); }
  friend bool operator==(const ForestMorphism& a, const ForestMorphism& b) { return a.on_edges == b.on_edges; }
};

// Empty when every corolla of the source lands bijectively on a frontier of
// the image of its output edge.
inline std::string forest_morphism_violation(const ForestMorphism& m) {
  const auto& F = *m.source;
  const auto& G = *m.target;
  if (m.on_edges.size() != F.edge_count()) return "edge map has the wrong size";
  for (EdgeId e : m.on_edges)
    if (e >= G.edge_count()) return "edge map leaves the target";
  for (const auto& v : F.vertices()) {
    std::vector<EdgeId> image;
    for (EdgeId e : v.inputs) image.push_back(m(e));
    if (!is_frontier(G, m(v.output), image)) {
      std::string s = "corolla " + v.name + " lands on {";
      for (std::size_t i = 0; i < image.size(); ++i) s += (i ? "," : "") + G.edge_name(image[i]);
      return s + "}, not a frontier of " + G.edge_name(m(v.output));
    }
  }
  return {};
}

inline ForestMorphism identity_morphism(const ForestPtr& F) {
  ForestMorphism m{F, F, {}};
  for (EdgeId e = 0; e < F->edge_count(); ++e) m.on_edges.push_back(e);
  return m;
}

// second ∘ first
inline ForestMorphism compose(const ForestMorphism& second, const ForestMorphism& first) {
  ForestMorphism m{first.source, second.target, {}};
  for (EdgeId e : first.on_edges) m.on_edges.push_back(second(e));
  return m;
}

// All arrows F -> G of Φ, in lexicographic order of edge maps. Roots choose
// any edge; each corolla then chooses an ordered frontier of its output's
// image.
inline std::vector<ForestMorphism> phi_hom(const ForestPtr& F, const ForestPtr& G, SearchBudget& budget) {
  struct Task {
    bool root;
    std::uint32_t id;
  };
  std::vector<Task> tasks;
  std::vector<EdgeId> queue = F->roots();
  for (EdgeId r : queue) tasks.push_back({true, r});
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const VertexId v = F->vertex_above(queue[k]);
    if (v == no_vertex) continue;
    tasks.push_back({false, v});
    for (EdgeId i : F->vertex(v).inputs) queue.push_back(i);
  }
  // Frontiers of each target edge, bucketed by size.
  std::vector<std::map<std::size_t, std::vector<std::vector<EdgeId>>>> by_size(G->edge_count());
  for (EdgeId e = 0; e < G->edge_count(); ++e)
    for (auto& fr : frontiers(*G, e)) by_size[e][fr.size()].push_back(std::move(fr));

  std::vector<ForestMorphism> out;
  std::vector<EdgeId> map(F->edge_count(), 0);
  std::function<void(std::size_t)> step = [&](std::size_t k) {
    if (k == tasks.size()) {
      out.push_back({F, G, map});
      return;
    }
    if (tasks[k].root) {
      for (EdgeId e = 0; e < G->edge_count(); ++e) {
        budget.charge();
        map[tasks[k].id] = e;
        step(k + 1);
      }
      return;
    }
    const auto& v = F->vertex(tasks[k].id);
    const auto& buckets = by_size[map[v.output]];
    auto it = buckets.find(v.inputs.size());
    if (it == buckets.end()) return;
    for (const auto& fr : it->second) {
      auto order = fr;
      do {
        budget.charge();
        for (std::size_t i = 0; i < order.size(); ++i) map[v.inputs[i]] = order[i];
        step(k + 1);
      } while (std::next_permutation(order.begin(), order.end()));
    }
  };
  step(0);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.on_edges < b.on_edges; });
  return out;
}

inline std::vector<ForestMorphism> phi_hom(const ForestPtr& F, const ForestPtr& G) {
  SearchBudget budget;
  return phi_hom(F, G, budget);
}

// Edge bijection F -> G carrying vertices to vertices, or nullopt. Candidate
// edges are pruned by (has a vertex above, number of inputs, subtree size).
inline std::optional<std::vector<EdgeId>> forest_iso(const Forest& F, const Forest& G) {
  if (F.edge_count() != G.edge_count() || F.vertex_count() != G.vertex_count()) return std::nullopt;
  auto degree = [](const Forest& X, EdgeId e) {
    const VertexId v = X.vertex_above(e);
    return std::tuple<bool, std::size_t, std::size_t>(v != no_vertex, v == no_vertex ? 0 : X.vertex(v).inputs.size(),
                                                      X.subtree_size(e));
  };
  std::vector<std::tuple<bool, std::size_t, std::size_t>> df, dg;
  for (EdgeId e = 0; e < F.edge_count(); ++e) df.push_back(degree(F, e));
  for (EdgeId e = 0; e < G.edge_count(); ++e) dg.push_back(degree(G, e));
  {
    auto a = df, b = dg;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  std::vector<EdgeId> map(F.edge_count(), 0);
  std::vector<char> used(G.edge_count(), 0);
  std::vector<EdgeId> froots = F.roots(), groots = G.roots();
  if (froots.size() != groots.size()) return std::nullopt;

  // Matches the edge lists `xs` (of F) and `ys` (of G) bijectively, then
  // continues with `rest`.
  std::function<bool(std::vector<std::pair<std::vector<EdgeId>, std::vector<EdgeId>>>)> match =
      [&](std::vector<std::pair<std::vector<EdgeId>, std::vector<EdgeId>>> work) -> bool {
    while (!work.empty() && work.back().first.empty()) work.pop_back();
    if (work.empty()) return true;
    auto [xs, ys] = work.back();
    work.pop_back();
    const EdgeId x = xs.back();
    xs.pop_back();
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const EdgeId y = ys[k];
      if (used[y] || df[x] != dg[y]) continue;
      used[y] = 1;
      map[x] = y;
      auto next = work;
      auto rest_y = ys;
      rest_y.erase(rest_y.begin() + static_cast<std::ptrdiff_t>(k));
      next.emplace_back(xs, rest_y);
      if (const VertexId v = F.vertex_above(x); v != no_vertex) {
        next.emplace_back(F.vertex(v).inputs, G.vertex(G.vertex_above(y)).inputs);
      }
      if (match(std::move(next))) return true;
      used[y] = 0;
    }
    return false;
  };
  if (!match({{froots, groots}})) return std::nullopt;
  return map;
}

// A simplex of Fin_*: a chain <k_0> -> <k_1> -> ... -> <k_n>.
class LevelForest {
 public:
  explicit LevelForest(std::uint32_t k0 = 1, std::vector<PointedMap> maps = {}) : k0_(k0), maps_(std::move(maps)) {
    std::uint32_t prev = k0_;
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      if (!maps_[i].valid() || maps_[i].source != prev) {
        throw Error(ErrorKind::arity_mismatch, "map " + std::to_string(i + 1) + " of the chain does not start at <" + std::to_string(prev) + ">");
      }
      prev = maps_[i].target;
    }
  }

  std::size_t dimension() const { return maps_.size(); }
  std::uint32_t arity(std::size_t level) const { return level == 0 ? k0_ : maps_.at(level - 1).target; }
  // The map from level i-1 to level i.
  const PointedMap& map(std::size_t i) const { return maps_.at(i - 1); }
  const std::vector<PointedMap>& maps() const { return maps_; }

  // Composite from level p to level q >= p.
  PointedMap composite(std::size_t p, std::size_t q) const {
    PointedMap f = PointedMap::identity(arity(p));
    for (std::size_t i = p + 1; i <= q; ++i) f = compose_pointed(f, map(i));
    return f;
  }

  friend bool operator==(const LevelForest&, const LevelForest&) = default;

 private:
  std::uint32_t k0_;
  std::vector<PointedMap> maps_;
};

inline std::string serialize(const LevelForest& A) {
  if (A.dimension() == 0) return "<" + std::to_string(A.arity(0)) + ">";
  std::string s;
  for (std::size_t i = 1; i <= A.dimension(); ++i) s += (i > 1 ? " ; " : "") + serialize(A.map(i));
  return s;
}

// A monotone map [m] -> [n], listed by its values.
using SimplicialOperator = std::vector<std::uint32_t>;

inline bool is_monotone(const SimplicialOperator& phi) { return std::is_sorted(phi.begin(), phi.end()); }

// A∘phi: level j of the result is level phi(j) of A.
inline LevelForest reindex(const LevelForest& A, const SimplicialOperator& phi) {
  if (phi.empty() || !is_monotone(phi) || phi.back() > A.dimension()) {
    throw Error(ErrorKind::incompatible_chains, "operator is not a monotone map into [" + std::to_string(A.dimension()) + "]");
  }
  std::vector<PointedMap> maps;
  for (std::size_t j = 1; j < phi.size(); ++j) maps.push_back(A.composite(phi[j - 1], phi[j]));
  return LevelForest(A.arity(phi[0]), std::move(maps));
}

// All monotone maps [m] -> [n].
inline std::vector<SimplicialOperator> simplicial_operators(std::size_t m, std::size_t n) {
  std::vector<SimplicialOperator> out;
  SimplicialOperator phi(m + 1, 0);
  while (true) {
    out.push_back(phi);
    std::size_t i = m + 1;
    while (i > 0 && phi[i - 1] == n) --i;
    if (i == 0) break;
    const auto v = phi[i - 1] + 1;
    for (std::size_t k = i - 1; k <= m; ++k) phi[k] = v;
  }
  return out;
}

namespace detail {

struct LevelIndex {
  std::vector<std::uint32_t> offset;  // first edge of each level

  explicit LevelIndex(const LevelForest& A) {
    std::uint32_t n = 0;
    for (std::size_t i = 0; i <= A.dimension(); ++i) {
      offset.push_back(n);
      n += A.arity(i);
    }
    offset.push_back(n);
  }
  EdgeId edge(std::size_t level, std::uint32_t a) const { return offset[level] + a - 1; }
};

}  // namespace detail

// ω(A): an edge (i, a) for each level i and each non-basepoint a of <k_i>;
// for i >= 1 and each b of level i a vertex with output (i, b) and inputs the
// (i-1, a) with α_i(a) = b. Elements sent to * have no vertex below them and
// root their own trees; unary vertices are kept.
inline Forest omega(const LevelForest& A) {
  const detail::LevelIndex ix(A);
  auto label = [](char prefix, std::size_t i, std::uint32_t a) {
    std::string s(1, prefix);
    s += std::to_string(i);
    s += '_';
    s += std::to_string(a);
    return s;
  };
  std::vector<std::string> edges;
  edges.reserve(ix.offset.back());
  for (std::size_t i = 0; i <= A.dimension(); ++i)
    for (std::uint32_t a = 1; a <= A.arity(i); ++a) edges.push_back(label('e', i, a));
  std::vector<Vertex> vertices;
  vertices.reserve(ix.offset.back() - A.arity(0));
  for (std::size_t i = 1; i <= A.dimension(); ++i) {
    const auto& f = A.map(i);
    for (std::uint32_t b = 1; b <= A.arity(i); ++b) {
      Vertex v{label('v', i, b), {}, ix.edge(i, b)};
      v.inputs.reserve(static_cast<std::size_t>(std::count(f.images.begin(), f.images.end(), b)));
      for (std::uint32_t a = 1; a <= f.source; ++a)
        if (f(a) == b) v.inputs.push_back(ix.edge(i - 1, a));
      vertices.push_back(std::move(v));
    }
  }
  return Forest(std::move(edges), std::move(vertices));
}

enum class Variance { covariant, contravariant };

// How ω transports simplicial operators. With B = A∘phi, omega_on_arrow
// gives ω(B) -> ω(A), so for a further psi with C = B∘psi the composite
// ω(C) -> ω(A) is ω(phi)∘ω(psi) when covariant and ω(psi)∘ω(phi), read
// diagrammatically, when contravariant. Both name the same edge map.
inline constexpr Variance omega_variance = Variance::covariant;

// The forest morphism ω(phi∘psi) predicted by functoriality.
inline ForestMorphism omega_composite(const ForestMorphism& of_phi, const ForestMorphism& of_psi) {
  if constexpr (omega_variance == Variance::covariant) {
    return compose(of_phi, of_psi);
  } else {
    return compose(of_psi, of_phi);
  }
}

namespace detail {

// omega_on_arrow for a B already known to be reindex(A, phi).
inline ForestMorphism omega_on_reindexed(const LevelForest& A, const ForestPtr& omega_a, const LevelForest& B, const ForestPtr& omega_b,
                                         const SimplicialOperator& phi) {
  const LevelIndex ia(A), ib(B);
  ForestMorphism m{omega_b, omega_a, std::vector<EdgeId>(omega_b->edge_count())};
  for (std::size_t j = 0; j <= B.dimension(); ++j)
    for (std::uint32_t b = 1; b <= B.arity(j); ++b) m.on_edges[ib.edge(j, b)] = ia.edge(phi[j], b);
  return m;
}

}  // namespace detail

// Variant with ω(A) and ω(B) already built.
inline ForestMorphism omega_on_arrow(const LevelForest& A, const ForestPtr& omega_a, const LevelForest& B, const ForestPtr& omega_b,
                                     const SimplicialOperator& phi) {
  if (phi.size() != B.dimension() + 1 || !(reindex(A, phi) == B)) {
    throw Error(ErrorKind::incompatible_chains, "chain " + serialize(B) + " is not the reindexing of " + serialize(A));
  }
  return detail::omega_on_reindexed(A, omega_a, B, omega_b, phi);
}

// For phi: [m] -> [n] with B = A∘phi, the morphism ω(B) -> ω(A) sending
// edge (j, b) to (phi(j), b).
inline ForestMorphism omega_on_arrow(const LevelForest& A, const LevelForest& B, const SimplicialOperator& phi) {
  return omega_on_arrow(A, share(omega(A)), B, share(omega(B)), phi);
}

// All chains of the given dimension with every arity at most max_arity, in
// lexicographic order of (arities, images).
inline void for_each_chain(std::size_t dimension, std::uint32_t max_arity, const std::function<void(const LevelForest&)>& fn) {
  std::vector<PointedMap> maps;
  std::function<void(std::uint32_t, std::size_t)> rec = [&](std::uint32_t k0, std::size_t i) {
    if (i == dimension) {
      fn(LevelForest(k0, maps));
      return;
    }
    const std::uint32_t from = maps.empty() ? k0 : maps.back().target;
    for (std::uint32_t to = 0; to <= max_arity; ++to) {
      for (auto& f : all_pointed_maps(from, to)) {
        maps.push_back(std::move(f));
        rec(k0, i + 1);
        maps.pop_back();
      }
    }
  };
  for (std::uint32_t k0 = 0; k0 <= max_arity; ++k0) rec(k0, 0);
}

struct OmegaSweepReport {
  std::size_t max_dimension = 0;
  std::uint32_t max_arity = 0;
  std::size_t chains = 0;
  std::size_t morphisms_checked = 0;
  std::size_t identity_checks = 0;
  std::size_t composition_checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

// Exhaustive check that ω is a functor on chains of dimension and arity
// within the bounds. Every omega_on_arrow(A, A∘phi, phi) is checked to be a
// forest morphism and identities go to identities. Composites are compared
// once per arity vector of A, since edge maps depend only on arities.
inline OmegaSweepReport omega_functoriality_sweep(std::size_t max_dimension, std::uint32_t max_arity, std::size_t limit = 8) {
  OmegaSweepReport report;
  report.max_dimension = max_dimension;
  report.max_arity = max_arity;
  std::vector<std::vector<SimplicialOperator>> ops_into(max_dimension + 1);
  for (std::size_t n = 0; n <= max_dimension; ++n)
    for (std::size_t m = 0; m <= max_dimension; ++m)
      for (auto& phi : simplicial_operators(m, n)) ops_into[n].push_back(std::move(phi));
  auto fail = [&](std::string s) {
    if (report.failures.size() < limit) report.failures.push_back(std::move(s));
  };
  auto show = [](const SimplicialOperator& phi) {
    std::string s = "[";
    for (std::size_t i = 0; i < phi.size(); ++i) s += (i ? "," : "") + std::to_string(phi[i]);
    return s + "]";
  };
  std::set<std::vector<std::uint32_t>> classes_seen;
  // Consecutive chains share most reindexings, so ω of the last one is kept.
  std::vector<std::vector<std::pair<LevelForest, ForestPtr>>> last_reindexed(max_dimension + 1);
  for (std::size_t n = 0; n <= max_dimension; ++n) {
    for_each_chain(n, max_arity, [&](const LevelForest& A) {
      ++report.chains;
      const ForestPtr wa = share(omega(A));
      std::vector<std::uint32_t> arities;
      for (std::size_t i = 0; i <= n; ++i) arities.push_back(A.arity(i));
      const bool new_class = classes_seen.insert(arities).second;

      ++report.identity_checks;
      if (!(omega_on_arrow(A, wa, A, wa, identity_permutation(n + 1)) == identity_morphism(wa))) {
        fail("identity law fails on " + serialize(A));
      }
      std::map<SimplicialOperator, std::pair<LevelForest, ForestMorphism>> images;
      auto& cache = last_reindexed[n];
      if (cache.size() != ops_into[n].size()) cache.resize(ops_into[n].size());
      for (std::size_t k = 0; k < ops_into[n].size(); ++k) {
        const auto& phi = ops_into[n][k];
        LevelForest B = reindex(A, phi);
        if (!cache[k].second || !(cache[k].first == B)) cache[k] = {B, share(omega(B))};
        auto m = detail::omega_on_reindexed(A, wa, B, cache[k].second, phi);
        ++report.morphisms_checked;
        if (auto why = forest_morphism_violation(m); !why.empty()) fail("omega of " + show(phi) + " on " + serialize(A) + ": " + why);
        if (new_class) images.emplace(phi, std::pair{std::move(B), std::move(m)});
      }
      if (!new_class) return;
      for (const auto& [phi, entry] : images) {
        const auto& [B, of_phi] = entry;
        for (std::size_t l = 0; l <= max_dimension; ++l) {
          for (const auto& psi : simplicial_operators(l, phi.size() - 1)) {
            const LevelForest C = reindex(B, psi);
            const auto of_psi = omega_on_arrow(B, of_phi.source, C, share(omega(C)), psi);
            SimplicialOperator both;
            for (auto j : psi) both.push_back(phi[j]);
            const auto direct = omega_on_arrow(A, wa, C, of_psi.source, both);
            ++report.composition_checks;
            if (!(omega_composite(of_phi, of_psi) == direct)) {
              fail("composition law fails for " + show(phi) + " after " + show(psi) + " on " + serialize(A));
            }
          }
        }
      }
    });
  }
  return report;
}

inline std::string to_dot(const Forest& F, const std::string& name = "F") {
  std::string s = "digraph \"" + name + "\" {\n";
  for (VertexId v = 0; v < F.vertex_count(); ++v) s += "  \"" + F.vertex(v).name + "\" [shape=circle];\n";
  for (EdgeId e = 0; e < F.edge_count(); ++e) {
    const std::string top = F.is_leaf(e) ? "leaf_" + F.edge_name(e) : F.vertex(F.vertex_above(e)).name;
    const std::string bottom = F.is_root(e) ? "root_" + F.edge_name(e) : F.vertex(F.vertex_below(e)).name;
    if (F.is_leaf(e)) s += "  \"" + top + "\" [shape=point];\n";
    if (F.is_root(e)) s += "  \"" + bottom + "\" [shape=point];\n";
    s += "  \"" + top + "\" -> \"" + bottom + "\" [label=\"" + F.edge_name(e) + "\"];\n";
  }
  return s + "}\n";
}

}  // namespace opcat
