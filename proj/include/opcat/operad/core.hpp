#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opcat/error.hpp"

namespace opcat {

using ColorId = std::uint32_t;
using OpIndex = std::uint32_t;

// sigma acts on the right: phi·sigma has inputs (c_sigma(0), ..., c_sigma(n-1)).
using Permutation = std::vector<std::uint32_t>;

struct Signature {
  std::vector<ColorId> inputs;
  ColorId output = 0;

  std::size_t arity() const { return inputs.size(); }
  friend bool operator==(const Signature&, const Signature&) = default;
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

struct Operation {
  Signature signature;
  OpIndex index = 0;

  friend bool operator==(const Operation&, const Operation&) = default;
  friend auto operator<=>(const Operation&, const Operation&) = default;
};

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

// (sigma ∘ tau)(i) = sigma(tau(i)); phi·sigma·tau = phi·(sigma ∘ tau).
inline Permutation compose_permutations(const Permutation& sigma, const Permutation& tau) {
  Permutation p(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) p[i] = sigma[tau[i]];
  return p;
}

inline Permutation inverse_permutation(const Permutation& sigma) {
  Permutation p(sigma.size());
  for (std::uint32_t i = 0; i < sigma.size(); ++i) p[sigma[i]] = i;
  return p;
}

inline bool is_identity_permutation(const Permutation& sigma) {
  for (std::uint32_t i = 0; i < sigma.size(); ++i)
    if (sigma[i] != i) return false;
  return true;
}

inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Permutation> out;
  Permutation p = identity_permutation(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline Signature permute(const Signature& s, const Permutation& sigma) {
  Signature t{std::vector<ColorId>(s.inputs.size()), s.output};
  for (std::size_t i = 0; i < sigma.size(); ++i) t.inputs[i] = s.inputs[sigma[i]];
  return t;
}

inline Signature composed_signature(const Signature& outer, std::span<const Operation> inner) {
  Signature s{{}, outer.output};
  for (const auto& op : inner) s.inputs.insert(s.inputs.end(), op.signature.inputs.begin(), op.signature.inputs.end());
  return s;
}

// sigma<k_0..k_{n-1}>: moves whole blocks. Position p in block b (of the
// permuted order) goes to the start of block sigma(b) in the original order.
inline Permutation block_permutation(const Permutation& sigma, const std::vector<std::size_t>& block_sizes) {
  std::vector<std::size_t> start(block_sizes.size() + 1, 0);
  for (std::size_t b = 0; b < block_sizes.size(); ++b) start[b + 1] = start[b] + block_sizes[b];
  Permutation p;
  for (std::size_t b = 0; b < sigma.size(); ++b)
    for (std::size_t t = 0; t < block_sizes[sigma[b]]; ++t) p.push_back(static_cast<std::uint32_t>(start[sigma[b]] + t));
  return p;
}

// tau_0 ⊕ ... ⊕ tau_{n-1}.
inline Permutation block_sum(const std::vector<Permutation>& taus) {
  Permutation p;
  std::uint32_t offset = 0;
  for (const auto& t : taus) {
    for (auto v : t) p.push_back(offset + v);
    offset += static_cast<std::uint32_t>(t.size());
  }
  return p;
}

// Interface of a finite-color symmetric operad in sets. Operation sets are
// produced per signature on demand, so arity-unbounded operads such as Com
// are representable; enumerating consumers always pass an arity bound.
class OperadData {
 public:
  virtual ~OperadData() = default;

  virtual std::size_t color_count() const = 0;
  virtual std::string color_name(ColorId c) const = 0;
  virtual std::size_t op_count(const Signature& s) const = 0;
  virtual std::string op_name(const Signature& s, OpIndex i) const = 0;
  virtual OpIndex unit(ColorId c) const = 0;
  // Index of phi·sigma in ops(permute(s, sigma)).
  virtual OpIndex act(const Signature& s, OpIndex phi, const Permutation& sigma) const = 0;
  // gamma(phi; inner_0, ..., inner_{n-1}), an index in ops(composed_signature(s, inner)).
  virtual OpIndex compose(const Signature& s, OpIndex phi, std::span<const Operation> inner) const = 0;
  // Largest arity for which operation sets are known; nullopt when unbounded.
  virtual std::optional<std::size_t> max_arity() const { return std::nullopt; }
};

// Value handle to an immutable operad.
class SetOperad {
 public:
  SetOperad() = default;
  SetOperad(std::string name, std::shared_ptr<const OperadData> data) : name_(std::move(name)), data_(std::move(data)) {}

  const std::string& name() const { return name_; }
  const OperadData& data() const { return *data_; }
  const std::shared_ptr<const OperadData>& shared() const { return data_; }

  std::size_t color_count() const { return data_->color_count(); }
  std::string color_name(ColorId c) const { return data_->color_name(c); }
  std::size_t op_count(const Signature& s) const {
    check_arity(s.arity());
    return data_->op_count(s);
  }
  std::string op_name(const Signature& s, OpIndex i) const { return data_->op_name(s, i); }
  Operation unit(ColorId c) const { return {{{c}, c}, data_->unit(c)}; }
  std::optional<std::size_t> max_arity() const { return data_->max_arity(); }

  Operation act(const Operation& phi, const Permutation& sigma) const {
    if (sigma.size() != phi.signature.arity()) throw Error(ErrorKind::arity_mismatch, "permutation size differs from arity");
    if (is_identity_permutation(sigma)) return phi;
    return {permute(phi.signature, sigma), data_->act(phi.signature, phi.index, sigma)};
  }

  Operation compose(const Operation& phi, std::span<const Operation> inner) const {
    if (inner.size() != phi.signature.arity()) throw Error(ErrorKind::arity_mismatch, "wrong number of inner operations");
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i].signature.output != phi.signature.inputs[i]) {
        throw Error(ErrorKind::arity_mismatch, "inner operation " + std::to_string(i) + " has the wrong output color");
      }
    }
    Signature s = composed_signature(phi.signature, inner);
    check_arity(s.arity());
    return {std::move(s), data_->compose(phi.signature, phi.index, inner)};
  }

  // phi ∘_i psi = gamma(phi; 1, ..., psi, ..., 1).
  Operation compose_at(const Operation& phi, std::size_t i, const Operation& psi) const {
    std::vector<Operation> inner;
    inner.reserve(phi.signature.arity());
    for (std::size_t k = 0; k < phi.signature.arity(); ++k) inner.push_back(k == i ? psi : unit(phi.signature.inputs[k]));
    return compose(phi, inner);
  }

  std::vector<Operation> operations(const Signature& s) const {
    std::vector<Operation> out;
    const std::size_t n = op_count(s);
    for (OpIndex i = 0; i < n; ++i) out.push_back({s, i});
    return out;
  }

  std::string describe(const Signature& s) const {
    std::string r = "(";
    for (std::size_t i = 0; i < s.inputs.size(); ++i) r += (i ? "," : "") + color_name(s.inputs[i]);
    return r + ")->" + color_name(s.output);
  }
  std::string describe(const Operation& op) const { return op_name(op.signature, op.index) + ":" + describe(op.signature); }

 private:
  void check_arity(std::size_t n) const {
    if (auto m = data_->max_arity(); m && n > *m) {
      throw Error(ErrorKind::bound_too_small, name_ + " is truncated at arity " + std::to_string(*m) + ", requested " + std::to_string(n));
    }
  }

  std::string name_;
  std::shared_ptr<const OperadData> data_;
};

// All signatures with at most `bound` inputs, in lexicographic order of
// (arity, inputs, output).
inline std::vector<Signature> signatures_up_to(std::size_t colors, std::size_t bound) {
  std::vector<Signature> out;
  for (std::size_t n = 0; n <= bound; ++n) {
    std::vector<ColorId> in(n, 0);
    while (true) {
      for (ColorId c = 0; c < colors; ++c) out.push_back({in, c});
      std::size_t i = n;
      while (i > 0 && in[i - 1] + 1 == colors) in[--i] = 0;
      if (i == 0) break;
      ++in[i - 1];
    }
    if (colors == 0) break;
  }
  return out;
}

// Every operation of an operad up to an arity bound, with dense ids.
class OperadIndex {
 public:
  OperadIndex(const SetOperad& O, std::size_t bound) : bound_(bound) {
    if (auto m = O.max_arity(); m && *m < bound) {
      throw Error(ErrorKind::bound_too_small, O.name() + " is truncated below arity bound " + std::to_string(bound));
    }
    for (auto& s : signatures_up_to(O.color_count(), bound)) {
      const std::size_t n = O.op_count(s);
      if (n == 0) continue;
      first_[s] = ops_.size();
      for (OpIndex i = 0; i < n; ++i) ops_.push_back({s, i});
    }
    for (std::size_t id = 0; id < ops_.size(); ++id) {
      by_output_[ops_[id].signature.output].push_back(id);
    }
  }

  std::size_t bound() const { return bound_; }
  std::size_t size() const { return ops_.size(); }
  const Operation& op(std::size_t id) const { return ops_[id]; }
  const std::vector<Operation>& all() const { return ops_; }

  std::optional<std::size_t> id(const Operation& op) const {
    auto it = first_.find(op.signature);
    if (it == first_.end()) return std::nullopt;
    return it->second + op.index;
  }

  std::size_t count(const Signature& s) const {
    auto it = first_.find(s);
    if (it == first_.end()) return 0;
    std::size_t n = 0;
    while (it->second + n < ops_.size() && ops_[it->second + n].signature == s) ++n;
    return n;
  }

  // Operations with the given output color, by id.
  const std::vector<std::size_t>& into(ColorId c) const {
    static const std::vector<std::size_t> none;
    auto it = by_output_.find(c);
    return it == by_output_.end() ? none : it->second;
  }

  const std::map<Signature, std::size_t>& signatures() const { return first_; }

 private:
  std::size_t bound_;
  std::vector<Operation> ops_;
  std::map<Signature, std::size_t> first_;
  std::map<ColorId, std::vector<std::size_t>> by_output_;
};

}  // namespace opcat
