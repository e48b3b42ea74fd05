#pragma once

#include <functional>
#include <string>
#include <vector>

#include "opcat/operad/core.hpp"

namespace opcat {

struct OperadLawReport {
  std::size_t bound = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

// Calls fn(inner) for every tuple of operations composable into phi whose
// total arity stays within `max_total`.
inline void for_each_inner_tuple(const OperadIndex& index, const Operation& phi, std::size_t max_total,
                                 const std::function<void(const std::vector<Operation>&)>& fn) {
  std::vector<Operation> inner;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t used) {
    if (k == phi.signature.arity()) {
      fn(inner);
      return;
    }
    for (std::size_t id : index.into(phi.signature.inputs[k])) {
      const auto& op = index.op(id);
      if (used + op.signature.arity() > max_total) continue;
      inner.push_back(op);
      rec(k + 1, used + op.signature.arity());
      inner.pop_back();
    }
  };
  rec(0, 0);
}

}  // namespace detail

// Units, group action, equivariance, both associativity laws for partial
// compositions, and agreement of full composition with iterated partial
// compositions, for every operation of arity at most `bound`. Stops after
// `limit` failures.
inline OperadLawReport check_operad_laws(const SetOperad& O, std::size_t bound, std::size_t limit = 8) {
  OperadLawReport report;
  report.bound = bound;
  const OperadIndex index(O, bound);
  std::vector<std::vector<Permutation>> perms;
  for (std::size_t n = 0; n <= bound; ++n) perms.push_back(all_permutations(n));

  struct Stop {};
  auto fail = [&](std::string what) {
    report.failures.push_back(std::move(what));
    if (report.failures.size() >= limit) throw Stop{};
  };
  auto expect = [&](const Operation& got, const Operation& want, const std::function<std::string()>& what) {
    ++report.checks;
    if (got != want) fail(what() + ": got " + O.describe(got) + ", expected " + O.describe(want));
  };
  auto is_unit = [&](const Operation& op) { return op.signature.arity() == 1 && op == O.unit(op.signature.output); };
  auto show = [&](const Operation& op) { return O.describe(op); };
  auto show_perm = [](const Permutation& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i] + 1);
    return s + "]";
  };

  try {
    for (ColorId c = 0; c < O.color_count(); ++c) {
      const auto u = O.unit(c);
      ++report.checks;
      if (u.index >= O.op_count(u.signature)) fail("unit of " + O.color_name(c) + " is not an operation");
    }
    for (const auto& phi : index.all()) {
      const std::size_t a = phi.signature.arity();
      // units
      std::vector<Operation> units;
      for (auto c : phi.signature.inputs) units.push_back(O.unit(c));
      expect(O.compose(phi, units), phi, [&] { return "right unit law for " + show(phi); });
      const Operation u = O.unit(phi.signature.output);
      expect(O.compose(u, std::vector<Operation>{phi}), phi, [&] { return "left unit law for " + show(phi); });
      // group action
      for (const auto& sigma : perms[a]) {
        const Operation ps = O.act(phi, sigma);
        ++report.checks;
        if (ps.index >= O.op_count(ps.signature)) fail(show(phi) + "·" + show_perm(sigma) + " is out of range");
        for (const auto& tau : perms[a]) {
          expect(O.act(ps, tau), O.act(phi, compose_permutations(sigma, tau)),
                 [&] { return "action law for " + show(phi) + " with " + show_perm(sigma) + "," + show_perm(tau); });
        }
      }
      // partial compositions
      for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t psi_id : index.into(phi.signature.inputs[i])) {
          const Operation& psi = index.op(psi_id);
          const std::size_t b = psi.signature.arity();
          if (a + b - 1 > bound) continue;
          const Operation r = O.compose_at(phi, i, psi);
          ++report.checks;
          if (r.index >= O.op_count(r.signature)) {
            fail(show(phi) + " o" + std::to_string(i + 1) + " " + show(psi) + " is not an operation");
          }
          if (is_unit(psi)) continue;
          for (const auto& sigma : perms[a]) {
            std::vector<std::size_t> sizes(a, 1);
            sizes[i] = b;
            const std::size_t p = inverse_permutation(sigma)[i];
            expect(O.compose_at(O.act(phi, sigma), p, psi), O.act(r, block_permutation(sigma, sizes)), [&] {
              return "equivariance of " + show(phi) + "·" + show_perm(sigma) + " o" + std::to_string(p + 1) + " " + show(psi);
            });
          }
          for (const auto& tau : perms[b]) {
            std::vector<Permutation> blocks;
            for (std::size_t k = 0; k < a; ++k) blocks.push_back(k == i ? tau : Permutation{0});
            expect(O.compose_at(phi, i, O.act(psi, tau)), O.act(r, block_sum(blocks)), [&] {
              return "equivariance of " + show(phi) + " o" + std::to_string(i + 1) + " " + show(psi) + "·" + show_perm(tau);
            });
          }
          for (std::size_t j = 0; j < b; ++j) {
            for (std::size_t chi_id : index.into(psi.signature.inputs[j])) {
              const Operation& chi = index.op(chi_id);
              if (a + b + chi.signature.arity() - 2 > bound || is_unit(chi)) continue;
              expect(O.compose_at(r, i + j, chi), O.compose_at(phi, i, O.compose_at(psi, j, chi)), [&] {
                return "sequential associativity for " + show(phi) + " o" + std::to_string(i + 1) + " " + show(psi) + " o" +
                       std::to_string(j + 1) + " " + show(chi);
              });
            }
          }
          for (std::size_t j = i + 1; j < a; ++j) {
            for (std::size_t chi_id : index.into(phi.signature.inputs[j])) {
              const Operation& chi = index.op(chi_id);
              const std::size_t c = chi.signature.arity();
              if (a + b + c - 2 > bound || a + c - 1 > bound || is_unit(chi)) continue;
              expect(O.compose_at(r, j + b - 1, chi), O.compose_at(O.compose_at(phi, j, chi), i, psi), [&] {
                return "parallel associativity for " + show(phi) + " at " + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                       " with " + show(psi) + ", " + show(chi);
              });
            }
          }
        }
      }
      // full composition agrees with partial compositions
      if (a >= 2) {
        detail::for_each_inner_tuple(index, phi, bound, [&](const std::vector<Operation>& inner) {
          Operation r = phi;
          for (std::size_t k = a; k-- > 0;)
            if (inner[k].signature.arity() == 0) r = O.compose_at(r, k, inner[k]);
          std::size_t pos = 0;
          std::vector<std::pair<std::size_t, const Operation*>> rest;
          for (const auto& op : inner)
            if (op.signature.arity() != 0) rest.emplace_back(pos++, &op);
          for (std::size_t k = rest.size(); k-- > 0;) r = O.compose_at(r, rest[k].first, *rest[k].second);
          expect(O.compose(phi, inner), r, [&] { return "full composition of " + show(phi) + " disagrees with partial compositions"; });
        });
      }
    }
  } catch (const Stop&) {
  }
  return report;
}

}  // namespace opcat
