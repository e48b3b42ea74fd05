#pragma once

#include <map>
#include <string>
#include <vector>

#include "opcat/operad/constructions.hpp"
#include "opcat/operad/laws.hpp"

namespace opcat {

// A map of operads, tabulated on every operation of arity at most `bound`.
struct OperadMorphism {
  SetOperad source;
  SetOperad target;
  std::size_t bound = 0;
  std::vector<ColorId> on_colors;
  std::map<Signature, std::vector<OpIndex>> on_ops;

  Signature image(const Signature& s) const {
    Signature t{{}, on_colors[s.output]};
    for (auto c : s.inputs) t.inputs.push_back(on_colors[c]);
    return t;
  }

  Operation operator()(const Operation& op) const {
    auto it = on_ops.find(op.signature);
    if (it == on_ops.end() || op.index >= it->second.size()) {
      throw Error(ErrorKind::bound_too_small, "morphism is not tabulated on " + source.describe(op));
    }
    return {image(op.signature), it->second[op.index]};
  }

  friend bool operator==(const OperadMorphism& a, const OperadMorphism& b) {
    return a.on_colors == b.on_colors && a.on_ops == b.on_ops;
  }
};

inline OperadMorphism identity_morphism(const SetOperad& O, std::size_t bound) {
  OperadMorphism m{O, O, bound, {}, {}};
  for (ColorId c = 0; c < O.color_count(); ++c) m.on_colors.push_back(c);
  const OperadIndex index(O, bound);
  for (const auto& [s, first] : index.signatures()) {
    auto& v = m.on_ops[s];
    for (OpIndex i = 0; i < index.count(s); ++i) v.push_back(i);
  }
  return m;
}

// second ∘ first
inline OperadMorphism compose(const OperadMorphism& second, const OperadMorphism& first) {
  OperadMorphism m{first.source, second.target, std::min(first.bound, second.bound), {}, {}};
  for (auto c : first.on_colors) m.on_colors.push_back(second.on_colors[c]);
  for (const auto& [s, images] : first.on_ops) {
    if (s.arity() > m.bound) continue;
    auto& v = m.on_ops[s];
    for (OpIndex i = 0; i < images.size(); ++i) v.push_back(second(first({s, i})).index);
  }
  return m;
}

// Units, symmetry and partial compositions are preserved, on every operation
// within the bound.
inline std::vector<std::string> morphism_violations(const OperadMorphism& m, std::size_t limit = 4) {
  std::vector<std::string> out;
  const auto& O = m.source;
  const auto& P = m.target;
  auto report = [&](std::string s) {
    out.push_back(std::move(s));
    return out.size() >= limit;
  };
  if (m.on_colors.size() != O.color_count()) return {"color map has the wrong size"};
  for (auto c : m.on_colors)
    if (c >= P.color_count()) return {"color map leaves the target"};
  const OperadIndex index(O, m.bound);
  for (const auto& op : index.all()) {
    auto it = m.on_ops.find(op.signature);
    if (it == m.on_ops.end() || it->second.size() != index.count(op.signature)) return {"operation map misses " + O.describe(op)};
    if (it->second[op.index] >= P.op_count(m.image(op.signature))) return {"operation map leaves the target at " + O.describe(op)};
  }
  for (ColorId c = 0; c < O.color_count(); ++c) {
    if (m(O.unit(c)) != P.unit(m.on_colors[c]) && report("unit of " + O.color_name(c) + " is not preserved")) return out;
  }
  for (const auto& phi : index.all()) {
    const auto image = m(phi);
    for (const auto& sigma : all_permutations(phi.signature.arity())) {
      if (m(O.act(phi, sigma)) != P.act(image, sigma) && report("symmetry is not preserved at " + O.describe(phi))) return out;
    }
    for (std::size_t i = 0; i < phi.signature.arity(); ++i) {
      for (std::size_t id : index.into(phi.signature.inputs[i])) {
        const auto& psi = index.op(id);
        if (phi.signature.arity() + psi.signature.arity() - 1 > m.bound) continue;
        if (m(O.compose_at(phi, i, psi)) != P.compose_at(image, i, m(psi)) &&
            report("composition " + O.describe(phi) + " o" + std::to_string(i + 1) + " " + O.describe(psi) + " is not preserved")) {
          return out;
        }
      }
    }
  }
  return out;
}

inline bool is_com(const SetOperad& O) { return dynamic_cast<const detail::ComData*>(&O.data()) != nullptr; }

// The unique morphism O -> Com.
inline OperadMorphism to_com(const SetOperad& O, std::size_t bound) {
  OperadMorphism m{O, terminal_com(), bound, std::vector<ColorId>(O.color_count(), 0), {}};
  const OperadIndex index(O, bound);
  for (const auto& [s, first] : index.signatures()) m.on_ops[s].assign(index.count(s), 0);
  return m;
}

// The pullback of two morphisms into Com. Com is terminal, so this is the
// product; the morphisms are still checked to be the canonical ones.
inline SetOperad pullback_over_com(const OperadMorphism& m1, const OperadMorphism& m2) {
  for (const auto* m : {&m1, &m2}) {
    if (!is_com(m->target)) throw Error(ErrorKind::invalid_structure, "pullback over Com needs morphisms into Com");
    if (!(*m == to_com(m->source, m->bound))) throw Error(ErrorKind::invalid_structure, "morphism into Com is not the canonical one");
  }
  return product_operad(m1.source, m2.source);
}

inline SetOperad product_over_com(const SetOperad& O1, const SetOperad& O2, std::size_t bound = 3) {
  auto clamp = [&](const SetOperad& O) { return O.max_arity() ? std::min(bound, *O.max_arity()) : bound; };
  return pullback_over_com(to_com(O1, clamp(O1)), to_com(O2, clamp(O2)));
}

}  // namespace opcat
