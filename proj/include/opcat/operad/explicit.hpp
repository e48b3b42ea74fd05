#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "opcat/operad/core.hpp"

namespace opcat {

// A finite operad given by tables. Partial tables are completed by closure;
// see make_explicit_operad.
struct OperadTable {
  struct Op {
    std::string name;
    Signature signature;
  };
  // phi·perm = result
  struct Sym {
    std::size_t op;
    Permutation perm;
    std::size_t result;
  };
  // outer ∘_position inner = result, position 0-based
  struct Partial {
    std::size_t outer;
    std::size_t position;
    std::size_t inner;
    std::size_t result;
  };

  std::vector<std::string> colors;
  std::vector<Op> ops;
  std::vector<std::optional<std::size_t>> units;  // per color; empty entries are forced if possible
  std::vector<Sym> symmetries;
  std::vector<Partial> compositions;
  std::optional<std::size_t> bound;
};

inline std::size_t permutation_rank(const Permutation& p) {
  std::size_t rank = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[j] < p[i]) ++smaller;
    rank = rank * (p.size() - i) + smaller;
  }
  return rank;
}

namespace detail {

class ExplicitData final : public OperadData {
 public:
  std::size_t color_count() const override { return colors_.size(); }
  std::string color_name(ColorId c) const override { return colors_[c]; }
  std::size_t op_count(const Signature& s) const override {
    auto it = by_signature_.find(s);
    return it == by_signature_.end() ? 0 : it->second.size();
  }
  std::string op_name(const Signature& s, OpIndex i) const override { return ops_[by_signature_.at(s)[i]].name; }
  OpIndex unit(ColorId c) const override { return local_[units_[c]]; }
  OpIndex act(const Signature& s, OpIndex phi, const Permutation& sigma) const override {
    return local_[act_[by_signature_.at(s)[phi]][permutation_rank(sigma)]];
  }
  OpIndex compose(const Signature& s, OpIndex phi, std::span<const Operation> inner) const override {
    std::size_t r = by_signature_.at(s)[phi];
    // nullary insertions first so intermediate arities never exceed the result's
    for (std::size_t i = inner.size(); i-- > 0;)
      if (inner[i].signature.arity() == 0) r = partial(r, i, global(inner[i]));
    std::size_t position = 0;
    std::vector<std::pair<std::size_t, std::size_t>> rest;  // (position in r, op)
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i].signature.arity() == 0) continue;
      rest.emplace_back(position++, global(inner[i]));
    }
    for (std::size_t k = rest.size(); k-- > 0;) r = partial(r, rest[k].first, rest[k].second);
    return local_[r];
  }
  std::optional<std::size_t> max_arity() const override { return bound_; }

  std::size_t global(const Operation& op) const { return by_signature_.at(op.signature)[op.index]; }
  std::size_t partial(std::size_t outer, std::size_t position, std::size_t inner) const {
    auto it = partial_.find(key(outer, position, inner));
    if (it == partial_.end()) {
      throw Error(ErrorKind::missing_composite,
                  "no composite " + ops_[outer].name + " o" + std::to_string(position + 1) + " " + ops_[inner].name);
    }
    return it->second;
  }

  std::uint64_t key(std::size_t outer, std::size_t position, std::size_t inner) const {
    return (static_cast<std::uint64_t>(outer) * 64 + position) * ops_.size() + inner;
  }

  std::vector<std::string> colors_;
  std::vector<OperadTable::Op> ops_;
  std::vector<OpIndex> local_;
  std::map<Signature, std::vector<std::size_t>> by_signature_;
  std::vector<std::size_t> units_;
  std::vector<std::vector<std::size_t>> act_;  // by op, by permutation rank
  std::unordered_map<std::uint64_t, std::size_t> partial_;
  std::optional<std::size_t> bound_;
};

}  // namespace detail

// Builds a finite operad from tables, completing missing entries by closure:
// identities and units, inverses and products of permutations, singleton
// operation sets, equivariance and both associativity laws for partial
// compositions. Throws when a needed entry stays undetermined
// (MissingComposite), when two derivations disagree (NotAssociative), or on
// malformed entries.
inline SetOperad make_explicit_operad(std::string name, const OperadTable& t) {
  auto d = std::make_shared<detail::ExplicitData>();
  d->colors_ = t.colors;
  d->ops_ = t.ops;
  d->bound_ = t.bound;
  const std::size_t n_ops = t.ops.size();
  if (n_ops >= (std::size_t{1} << 20)) throw Error(ErrorKind::invalid_structure, "too many operations");
  for (std::size_t id = 0; id < n_ops; ++id) {
    const auto& s = t.ops[id].signature;
    for (auto c : s.inputs)
      if (c >= t.colors.size()) throw Error(ErrorKind::unresolved_name, "operation " + t.ops[id].name + " uses an unknown color");
    if (s.output >= t.colors.size()) throw Error(ErrorKind::unresolved_name, "operation " + t.ops[id].name + " uses an unknown color");
    if (s.arity() > 8) throw Error(ErrorKind::invalid_structure, "operation " + t.ops[id].name + " has arity above 8");
    if (t.bound && s.arity() > *t.bound) {
      throw Error(ErrorKind::bound_too_small, "operation " + t.ops[id].name + " exceeds the declared bound");
    }
    auto& list = d->by_signature_[s];
    d->local_.push_back(static_cast<OpIndex>(list.size()));
    list.push_back(id);
  }
  const SetOperad view(name, d);
  auto ops_of = [&](const Signature& s) -> const std::vector<std::size_t>* {
    auto it = d->by_signature_.find(s);
    return it == d->by_signature_.end() ? nullptr : &it->second;
  };
  auto describe_op = [&](std::size_t id) { return t.ops[id].name; };

  // units
  d->units_.assign(t.colors.size(), 0);
  for (ColorId c = 0; c < t.colors.size(); ++c) {
    std::optional<std::size_t> u = c < t.units.size() ? t.units[c] : std::nullopt;
    if (u) {
      if (t.ops[*u].signature != Signature{{c}, c}) {
        throw Error(ErrorKind::ill_typed_composite, "unit of " + t.colors[c] + " must have signature (" + t.colors[c] + ")->" + t.colors[c]);
      }
    } else {
      const auto* list = ops_of({{c}, c});
      if (!list || list->size() != 1) throw Error(ErrorKind::missing_identity, "color " + t.colors[c] + " has no determined unit");
      u = list->front();
    }
    d->units_[c] = *u;
  }
  std::vector<bool> is_unit(n_ops, false);
  for (auto u : d->units_) is_unit[u] = true;

  // symmetric action
  constexpr std::size_t unknown = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<Permutation>> perms(9);
  for (std::size_t n = 0; n <= 8; ++n) {
    bool needed = false;
    for (const auto& op : t.ops) needed = needed || op.signature.arity() == n;
    if (needed) perms[n] = all_permutations(n);
  }
  auto& act = d->act_;
  act.assign(n_ops, {});
  for (std::size_t id = 0; id < n_ops; ++id) {
    act[id].assign(perms[t.ops[id].signature.arity()].size(), unknown);
    act[id][0] = id;
  }
  auto set_act = [&](std::size_t id, const Permutation& p, std::size_t r) -> bool {
    if (t.ops[r].signature != permute(t.ops[id].signature, p)) {
      throw Error(ErrorKind::ill_typed_composite, "symmetry " + describe_op(id) + " -> " + describe_op(r) + " has the wrong signature");
    }
    auto& slot = act[id][permutation_rank(p)];
    if (slot == r) return false;
    if (slot != unknown) {
      throw Error(ErrorKind::not_associative,
                  "symmetry of " + describe_op(id) + " determined as both " + describe_op(slot) + " and " + describe_op(r));
    }
    slot = r;
    return true;
  };
  for (const auto& e : t.symmetries) {
    if (e.perm.size() != t.ops[e.op].signature.arity()) throw Error(ErrorKind::arity_mismatch, "symmetry of " + describe_op(e.op) + " has the wrong length");
    set_act(e.op, e.perm, e.result);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t id = 0; id < n_ops; ++id) {
      const auto& ps = perms[t.ops[id].signature.arity()];
      for (std::size_t r = 0; r < ps.size(); ++r) {
        if (act[id][r] == unknown) {
          const auto* list = ops_of(permute(t.ops[id].signature, ps[r]));
          if (list && list->size() == 1) changed = set_act(id, ps[r], list->front()) || changed;
          continue;
        }
        const std::size_t psi = act[id][r];
        changed = set_act(psi, inverse_permutation(ps[r]), id) || changed;
        for (std::size_t q = 0; q < ps.size(); ++q) {
          if (act[psi][q] == unknown) continue;
          changed = set_act(id, compose_permutations(ps[r], ps[q]), act[psi][q]) || changed;
        }
      }
    }
  }
  for (std::size_t id = 0; id < n_ops; ++id) {
    const auto& ps = perms[t.ops[id].signature.arity()];
    for (std::size_t r = 0; r < ps.size(); ++r) {
      if (act[id][r] != unknown) continue;
      std::string p;
      for (auto v : ps[r]) p += (p.empty() ? "" : ",") + std::to_string(v + 1);
      throw Error(ErrorKind::missing_composite, "symmetry of " + describe_op(id) + " by [" + p + "] is undetermined");
    }
  }
  auto act_by = [&](std::size_t id, const Permutation& p) { return act[id][permutation_rank(p)]; };

  // partial compositions
  auto arity = [&](std::size_t id) { return t.ops[id].signature.arity(); };
  auto within = [&](std::size_t n) { return !t.bound || n <= *t.bound; };
  auto& table = d->partial_;
  auto composite_signature = [&](std::size_t outer, std::size_t i, std::size_t inner) {
    Signature s = t.ops[outer].signature;
    const auto& in = t.ops[inner].signature.inputs;
    s.inputs.erase(s.inputs.begin() + static_cast<std::ptrdiff_t>(i));
    s.inputs.insert(s.inputs.begin() + static_cast<std::ptrdiff_t>(i), in.begin(), in.end());
    return s;
  };
  auto lookup = [&](std::size_t outer, std::size_t i, std::size_t inner) -> std::size_t {
    auto it = table.find(d->key(outer, i, inner));
    return it == table.end() ? unknown : it->second;
  };
  auto describe_triple = [&](std::size_t outer, std::size_t i, std::size_t inner) {
    return describe_op(outer) + " o" + std::to_string(i + 1) + " " + describe_op(inner);
  };
  auto set_partial = [&](std::size_t outer, std::size_t i, std::size_t inner, std::size_t r) -> bool {
    if (t.ops[r].signature != composite_signature(outer, i, inner)) {
      throw Error(ErrorKind::ill_typed_composite, describe_triple(outer, i, inner) + " = " + describe_op(r) + " has the wrong signature");
    }
    auto [it, inserted] = table.emplace(d->key(outer, i, inner), r);
    if (inserted) return true;
    if (it->second != r) {
      throw Error(ErrorKind::not_associative,
                  describe_triple(outer, i, inner) + " determined as both " + describe_op(it->second) + " and " + describe_op(r));
    }
    return false;
  };
  // x and y name the same composite; copy whichever is known
  auto equalize = [&](std::array<std::size_t, 3> x, std::array<std::size_t, 3> y) -> bool {
    const std::size_t a = lookup(x[0], x[1], x[2]), b = lookup(y[0], y[1], y[2]);
    if (a == unknown && b == unknown) return false;
    if (a == unknown) return set_partial(x[0], x[1], x[2], b);
    if (b == unknown) return set_partial(y[0], y[1], y[2], a);
    if (a != b) {
      throw Error(ErrorKind::not_associative, "associativity fails: " + describe_triple(x[0], x[1], x[2]) + " and " +
                                                  describe_triple(y[0], y[1], y[2]) + " give " + describe_op(a) + " and " + describe_op(b));
    }
    return false;
  };
  for (const auto& e : t.compositions) {
    if (e.position >= arity(e.outer)) throw Error(ErrorKind::arity_mismatch, "composition position out of range for " + describe_op(e.outer));
    if (t.ops[e.outer].signature.inputs[e.position] != t.ops[e.inner].signature.output) {
      throw Error(ErrorKind::ill_typed_composite, describe_triple(e.outer, e.position, e.inner) + " is ill-typed");
    }
    set_partial(e.outer, e.position, e.inner, e.result);
  }
  std::vector<std::vector<std::size_t>> into(t.colors.size());
  for (std::size_t id = 0; id < n_ops; ++id) into[t.ops[id].signature.output].push_back(id);
  auto for_each_triple = [&](auto&& fn) {
    for (std::size_t phi = 0; phi < n_ops; ++phi)
      for (std::size_t i = 0; i < arity(phi); ++i)
        for (std::size_t psi : into[t.ops[phi].signature.inputs[i]])
          if (within(arity(phi) + arity(psi) - 1)) fn(phi, i, psi);
  };
  for (bool changed = true; changed;) {
    changed = false;
    for_each_triple([&](std::size_t phi, std::size_t i, std::size_t psi) {
      std::size_t r = lookup(phi, i, psi);
      if (r == unknown) {
        if (is_unit[psi]) {
          changed = set_partial(phi, i, psi, phi) || changed;
        } else if (is_unit[phi]) {
          changed = set_partial(phi, i, psi, psi) || changed;
        } else if (const auto* list = ops_of(composite_signature(phi, i, psi)); list && list->size() == 1) {
          changed = set_partial(phi, i, psi, list->front()) || changed;
        }
        r = lookup(phi, i, psi);
        if (r == unknown) return;
      }
      const std::size_t a = arity(phi), b = arity(psi);
      // equivariance in the outer operation
      for (const auto& sigma : perms[a]) {
        std::vector<std::size_t> sizes(a, 1);
        sizes[i] = b;
        const auto inv = inverse_permutation(sigma);
        changed = set_partial(act_by(phi, sigma), inv[i], psi, act_by(r, block_permutation(sigma, sizes))) || changed;
      }
      // equivariance in the inner operation
      for (const auto& tau : perms[b]) {
        std::vector<Permutation> blocks;
        for (std::size_t k = 0; k < a; ++k) blocks.push_back(k == i ? tau : Permutation{0});
        changed = set_partial(phi, i, act_by(psi, tau), act_by(r, block_sum(blocks))) || changed;
      }
      // sequential associativity
      for (std::size_t j = 0; j < b; ++j) {
        for (std::size_t chi : into[t.ops[psi].signature.inputs[j]]) {
          if (!within(a + b + arity(chi) - 2)) continue;
          const std::size_t inner = lookup(psi, j, chi);
          if (inner == unknown) continue;
          changed = equalize({r, i + j, chi}, {phi, i, inner}) || changed;
        }
      }
      // parallel associativity
      for (std::size_t j = 0; j < a; ++j) {
        if (j == i) continue;
        for (std::size_t chi : into[t.ops[phi].signature.inputs[j]]) {
          const std::size_t c = arity(chi);
          if (!within(a + b + c - 2)) continue;
          const std::size_t other = lookup(phi, j, chi);
          if (other == unknown) continue;
          const std::size_t j_after = j < i ? j : j + b - 1;
          const std::size_t i_after = i < j ? i : i + c - 1;
          changed = equalize({r, j_after, chi}, {other, i_after, psi}) || changed;
        }
      }
    });
  }
  for_each_triple([&](std::size_t phi, std::size_t i, std::size_t psi) {
    if (lookup(phi, i, psi) == unknown) throw Error(ErrorKind::missing_composite, describe_triple(phi, i, psi) + " is undetermined");
  });
  return view;
}

// Operad identical to `base` except that one composite returns another
// operation of the same signature.
class CorruptedOperadData final : public OperadData {
 public:
  CorruptedOperadData(SetOperad base, Operation outer, std::vector<Operation> inner, OpIndex replacement)
      : base_(std::move(base)), outer_(std::move(outer)), inner_(std::move(inner)), replacement_(replacement) {}

  std::size_t color_count() const override { return base_.color_count(); }
  std::string color_name(ColorId c) const override { return base_.color_name(c); }
  std::size_t op_count(const Signature& s) const override { return base_.op_count(s); }
  std::string op_name(const Signature& s, OpIndex i) const override { return base_.op_name(s, i); }
  OpIndex unit(ColorId c) const override { return base_.unit(c).index; }
  OpIndex act(const Signature& s, OpIndex phi, const Permutation& sigma) const override { return base_.act({s, phi}, sigma).index; }
  OpIndex compose(const Signature& s, OpIndex phi, std::span<const Operation> inner) const override {
    if (s == outer_.signature && phi == outer_.index && std::equal(inner.begin(), inner.end(), inner_.begin(), inner_.end())) {
      return replacement_;
    }
    return base_.compose({s, phi}, inner).index;
  }
  std::optional<std::size_t> max_arity() const override { return base_.max_arity(); }

 private:
  SetOperad base_;
  Operation outer_;
  std::vector<Operation> inner_;
  OpIndex replacement_;
};

// Rewires the first composite phi ∘_i psi (phi, psi not units, in index order)
// whose signature carries at least two operations.
inline SetOperad corrupt_composition(const SetOperad& O, std::size_t bound) {
  OperadIndex index(O, bound);
  for (const auto& phi : index.all()) {
    if (phi.signature.arity() == 1 && phi == O.unit(phi.signature.output)) continue;
    for (std::size_t i = 0; i < phi.signature.arity(); ++i) {
      for (std::size_t id : index.into(phi.signature.inputs[i])) {
        const auto& psi = index.op(id);
        if (psi.signature.arity() == 1 && psi == O.unit(psi.signature.output)) continue;
        if (phi.signature.arity() + psi.signature.arity() - 1 > bound) continue;
        const Operation r = O.compose_at(phi, i, psi);
        const std::size_t n = O.op_count(r.signature);
        if (n < 2) continue;
        std::vector<Operation> inner;
        for (std::size_t k = 0; k < phi.signature.arity(); ++k) inner.push_back(k == i ? psi : O.unit(phi.signature.inputs[k]));
        return SetOperad("corrupt(" + O.name() + ")",
                         std::make_shared<CorruptedOperadData>(O, phi, std::move(inner), static_cast<OpIndex>((r.index + 1) % n)));
      }
    }
  }
  throw Error(ErrorKind::invalid_structure, O.name() + " has no composite that can be rewired within arity " + std::to_string(bound));
}

}  // namespace opcat
