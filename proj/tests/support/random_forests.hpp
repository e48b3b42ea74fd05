#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "opcat/dendroid.hpp"

namespace opcat::corpus {

// Builds a forest from parent data: parent[e] is the edge below e's vertex
// (e is then an input of the vertex above parent[e]) or -1 for a root;
// nullary[e] asks for a vertex with no inputs above a childless edge.
inline opcat::Forest forest_from_parents(const std::vector<int>& parent, const std::vector<bool>& nullary) {
  const auto n = parent.size();
  std::vector<std::string> names;
  for (std::size_t e = 0; e < n; ++e) names.push_back("x" + std::to_string(e));
  std::vector<std::vector<opcat::EdgeId>> children(n);
  for (std::size_t e = 0; e < n; ++e)
    if (parent[e] >= 0) children[parent[e]].push_back(static_cast<opcat::EdgeId>(e));
  std::vector<opcat::Vertex> vertices;
  for (std::size_t e = 0; e < n; ++e) {
    if (children[e].empty() && !nullary[e]) continue;
    vertices.push_back({"w" + std::to_string(e), children[e], static_cast<opcat::EdgeId>(e)});
  }
  return opcat::Forest(std::move(names), std::move(vertices));
}

// Isomorphism-invariant encoding, used as an oracle against forest_iso.
inline std::string canonical_form(const opcat::Forest& F) {
  std::function<std::string(opcat::EdgeId)> tree = [&](opcat::EdgeId e) -> std::string {
    const auto v = F.vertex_above(e);
    if (v == opcat::no_vertex) return "L";
    std::vector<std::string> parts;
    for (auto i : F.vertex(v).inputs) parts.push_back(tree(i));
    std::sort(parts.begin(), parts.end());
    std::string s = "V[";
    for (const auto& p : parts) s += p + ",";
    return s + "]";
  };
  std::vector<std::string> parts;
  for (auto r : F.roots()) parts.push_back(tree(r));
  std::sort(parts.begin(), parts.end());
  std::string s;
  for (const auto& p : parts) s += p + ";";
  return s;
}

// One representative of every isomorphism class of forests with 1..max_edges
// edges, vertices of any arity including 0.
inline std::vector<opcat::Forest> all_forests(std::size_t max_edges) {
  std::vector<opcat::Forest> out;
  std::set<std::string> seen;
  for (std::size_t n = 1; n <= max_edges; ++n) {
    std::vector<int> parent(n, -1);
    std::function<void(std::size_t)> rec = [&](std::size_t e) {
      if (e == n) {
        std::vector<bool> childless(n, true);
        for (std::size_t x = 0; x < n; ++x)
          if (parent[x] >= 0) childless[parent[x]] = false;
        std::vector<std::size_t> free;
        for (std::size_t x = 0; x < n; ++x)
          if (childless[x]) free.push_back(x);
        for (std::size_t mask = 0; mask < (std::size_t{1} << free.size()); ++mask) {
          std::vector<bool> nullary(n, false);
          for (std::size_t k = 0; k < free.size(); ++k) nullary[free[k]] = (mask >> k) & 1;
          auto F = forest_from_parents(parent, nullary);
          if (seen.insert(canonical_form(F)).second) out.push_back(std::move(F));
        }
        return;
      }
      for (int p = -1; p < static_cast<int>(e); ++p) {
        parent[e] = p;
        rec(e + 1);
      }
    };
    rec(0);
  }
  return out;
}

inline opcat::Forest random_forest(std::mt19937& rng, std::size_t max_edges) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_edges)(rng);
  std::vector<int> parent(n, -1);
  std::vector<bool> nullary(n, false);
  for (std::size_t e = 1; e < n; ++e) parent[e] = std::uniform_int_distribution<int>(-1, static_cast<int>(e) - 1)(rng);
  for (std::size_t e = 0; e < n; ++e) nullary[e] = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
  return forest_from_parents(parent, nullary);
}

// The same forest with edges and vertices renumbered.
inline opcat::Forest shuffled(const opcat::Forest& F, std::mt19937& rng) {
  std::vector<opcat::EdgeId> perm(F.edge_count());
  for (opcat::EdgeId e = 0; e < perm.size(); ++e) perm[e] = e;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> names(F.edge_count());
  for (opcat::EdgeId e = 0; e < perm.size(); ++e) names[perm[e]] = F.edge_name(e);
  std::vector<opcat::Vertex> vertices;
  for (const auto& v : F.vertices()) {
    opcat::Vertex w{v.name, {}, perm[v.output]};
    for (auto i : v.inputs) w.inputs.push_back(perm[i]);
    std::shuffle(w.inputs.begin(), w.inputs.end(), rng);
    vertices.push_back(std::move(w));
  }
  std::shuffle(vertices.begin(), vertices.end(), rng);
  return opcat::Forest(std::move(names), std::move(vertices));
}

}  // namespace opcat::corpus
