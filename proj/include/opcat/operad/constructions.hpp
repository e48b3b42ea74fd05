#pragma once

#include <array>
#include <memory>
#include <tuple>
#include <string>
#include <vector>

#include "opcat/fincat.hpp"
#include "opcat/operad/core.hpp"

namespace opcat {

namespace detail {

// Mixed-radix code with the first digit most significant.
inline std::uint64_t encode_digits(std::span<const std::uint32_t> digits, std::span<const std::size_t> radices) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) code = code * radices[i] + digits[i];
  return code;
}

inline std::vector<std::uint32_t> decode_digits(std::uint64_t code, std::span<const std::size_t> radices) {
  std::vector<std::uint32_t> digits(radices.size());
  for (std::size_t i = radices.size(); i-- > 0;) {
    digits[i] = static_cast<std::uint32_t>(code % radices[i]);
    code /= radices[i];
  }
  return digits;
}

inline std::uint64_t checked_product(std::span<const std::size_t> radices) {
  std::uint64_t p = 1;
  for (auto r : radices) {
    p *= r;
    if (p > 0xffffffffull) throw Error(ErrorKind::budget_exceeded, "operation set too large to index");
  }
  return p;
}

// Tuples of arrows x_i -> y of a fixed category, indexed in mixed radix over
// the hom lists.
class ArrowTuples {
 public:
  explicit ArrowTuples(CategoryPtr K) : K_(std::move(K)), position_(K_->arrow_count()) {
    for (ObjectId x = 0; x < K_->object_count(); ++x)
      for (ObjectId y = 0; y < K_->object_count(); ++y) {
        const auto& h = K_->hom(x, y);
        for (std::uint32_t p = 0; p < h.size(); ++p) position_[h[p]] = p;
      }
  }

  const FinCategory& category() const { return *K_; }
  const CategoryPtr& shared() const { return K_; }

  std::vector<std::size_t> radices(std::span<const ObjectId> sources, ObjectId target) const {
    std::vector<std::size_t> r;
    r.reserve(sources.size());
    for (auto x : sources) r.push_back(K_->hom(x, target).size());
    return r;
  }

  std::size_t count(std::span<const ObjectId> sources, ObjectId target) const {
    auto r = radices(sources, target);
    return checked_product(r);
  }

  std::vector<ArrowId> decode(std::span<const ObjectId> sources, ObjectId target, std::uint64_t code) const {
    auto r = radices(sources, target);
    auto d = decode_digits(code, r);
    std::vector<ArrowId> out(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) out[i] = K_->hom(sources[i], target)[d[i]];
    return out;
  }

  std::uint64_t encode(std::span<const ArrowId> arrows) const {
    std::uint64_t code = 0;
    for (auto a : arrows) {
      const auto& h = K_->hom(K_->source(a), K_->target(a));
      code = code * h.size() + position_[a];
    }
    return code;
  }

  std::string name(std::span<const ArrowId> arrows, ObjectId target) const {
    std::string s = "(";
    for (std::size_t i = 0; i < arrows.size(); ++i) s += (i ? "," : "") + K_->arrow_name(arrows[i]);
    s += ")";
    if (arrows.empty()) s += "@" + K_->object_name(target);
    return s;
  }

 private:
  CategoryPtr K_;
  std::vector<std::uint32_t> position_;
};

class ComData final : public OperadData {
 public:
  std::size_t color_count() const override { return 1; }
  std::string color_name(ColorId) const override { return "*"; }
  std::size_t op_count(const Signature&) const override { return 1; }
  std::string op_name(const Signature& s, OpIndex) const override { return "m" + std::to_string(s.arity()); }
  OpIndex unit(ColorId) const override { return 0; }
  OpIndex act(const Signature&, OpIndex, const Permutation&) const override { return 0; }
  OpIndex compose(const Signature&, OpIndex, std::span<const Operation>) const override { return 0; }
};

class TrivialData final : public OperadData {
 public:
  explicit TrivialData(std::vector<std::string> colors) : colors_(std::move(colors)) {}
  std::size_t color_count() const override { return colors_.size(); }
  std::string color_name(ColorId c) const override { return colors_[c]; }
  std::size_t op_count(const Signature& s) const override { return s.arity() == 1 && s.inputs[0] == s.output ? 1 : 0; }
  std::string op_name(const Signature& s, OpIndex) const override { return "id_" + colors_[s.output]; }
  OpIndex unit(ColorId) const override { return 0; }
  OpIndex act(const Signature&, OpIndex, const Permutation&) const override { return 0; }
  OpIndex compose(const Signature&, OpIndex, std::span<const Operation>) const override { return 0; }

 private:
  std::vector<std::string> colors_;
};

class SqcupData final : public OperadData {
 public:
  explicit SqcupData(CategoryPtr K) : tuples_(std::move(K)) {}

  const ArrowTuples& tuples() const { return tuples_; }

  std::size_t color_count() const override { return tuples_.category().object_count(); }
  std::string color_name(ColorId c) const override { return tuples_.category().object_name(c); }
  std::size_t op_count(const Signature& s) const override { return tuples_.count(s.inputs, s.output); }
  std::string op_name(const Signature& s, OpIndex i) const override {
    return tuples_.name(tuples_.decode(s.inputs, s.output, i), s.output);
  }
  OpIndex unit(ColorId c) const override {
    const ArrowId id = tuples_.category().identity(c);
    return static_cast<OpIndex>(tuples_.encode(std::span<const ArrowId>(&id, 1)));
  }
  OpIndex act(const Signature& s, OpIndex phi, const Permutation& sigma) const override {
    auto a = tuples_.decode(s.inputs, s.output, phi);
    std::vector<ArrowId> b(a.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) b[i] = a[sigma[i]];
    return static_cast<OpIndex>(tuples_.encode(b));
  }
  OpIndex compose(const Signature& s, OpIndex phi, std::span<const Operation> inner) const override {
    const auto& K = tuples_.category();
    auto outer = tuples_.decode(s.inputs, s.output, phi);
    std::vector<ArrowId> out;
    for (std::size_t j = 0; j < inner.size(); ++j) {
      for (ArrowId g : tuples_.decode(inner[j].signature.inputs, inner[j].signature.output, inner[j].index)) {
        out.push_back(K.compose(outer[j], g));
      }
    }
    return static_cast<OpIndex>(tuples_.encode(out));
  }

 private:
  ArrowTuples tuples_;
};

// Colors (k, x) are numbered k * |colors(O)| + x. An operation is an
// O-operation together with arrows k_i -> k, indexed op * |arrows| + arrows.
class DiagramData final : public OperadData {
 public:
  DiagramData(CategoryPtr K, SetOperad O) : tuples_(std::move(K)), O_(std::move(O)), width_(O_.color_count()) {}

  std::size_t color_count() const override { return tuples_.category().object_count() * width_; }
  std::string color_name(ColorId c) const override {
    return "(" + tuples_.category().object_name(object_of(c)) + "," + O_.color_name(color_of(c)) + ")";
  }
  std::size_t op_count(const Signature& s) const override {
    auto [ks, k, os] = split(s);
    const std::size_t n = O_.op_count(os);
    if (n == 0) return 0;
    return static_cast<std::size_t>(checked_product(std::array<std::size_t, 2>{n, tuples_.count(ks, k)}));
  }
  std::string op_name(const Signature& s, OpIndex i) const override {
    auto [ks, k, os] = split(s);
    const std::size_t h = tuples_.count(ks, k);
    return "(" + O_.op_name(os, static_cast<OpIndex>(i / h)) + ";" + tuples_.name(tuples_.decode(ks, k, i % h), k) + ")";
  }
  OpIndex unit(ColorId c) const override {
    const ObjectId k = object_of(c);
    const ArrowId id = tuples_.category().identity(k);
    return static_cast<OpIndex>(O_.unit(color_of(c)).index * tuples_.category().hom(k, k).size() +
                                tuples_.encode(std::span<const ArrowId>(&id, 1)));
  }
  OpIndex act(const Signature& s, OpIndex phi, const Permutation& sigma) const override {
    auto [ks, k, os] = split(s);
    const std::size_t h = tuples_.count(ks, k);
    const Operation op = O_.act({os, static_cast<OpIndex>(phi / h)}, sigma);
    auto a = tuples_.decode(ks, k, phi % h);
    std::vector<ArrowId> b(a.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) b[i] = a[sigma[i]];
    return static_cast<OpIndex>(op.index * h + tuples_.encode(b));
  }
  OpIndex compose(const Signature& s, OpIndex phi, std::span<const Operation> inner) const override {
    const auto& K = tuples_.category();
    auto [ks, k, os] = split(s);
    const std::size_t h = tuples_.count(ks, k);
    auto outer_arrows = tuples_.decode(ks, k, phi % h);
    std::vector<Operation> inner_o;
    std::vector<ArrowId> arrows;
    std::vector<ObjectId> all_sources;
    for (std::size_t j = 0; j < inner.size(); ++j) {
      auto [ks_j, k_j, os_j] = split(inner[j].signature);
      const std::size_t h_j = tuples_.count(ks_j, k_j);
      inner_o.push_back({os_j, static_cast<OpIndex>(inner[j].index / h_j)});
      for (ArrowId g : tuples_.decode(ks_j, k_j, inner[j].index % h_j)) arrows.push_back(K.compose(outer_arrows[j], g));
      all_sources.insert(all_sources.end(), ks_j.begin(), ks_j.end());
    }
    const Operation o = O_.compose({os, static_cast<OpIndex>(phi / h)}, inner_o);
    return static_cast<OpIndex>(o.index * tuples_.count(all_sources, k) + tuples_.encode(arrows));
  }
  std::optional<std::size_t> max_arity() const override { return O_.max_arity(); }

 private:
  ObjectId object_of(ColorId c) const { return static_cast<ObjectId>(c / width_); }
  ColorId color_of(ColorId c) const { return static_cast<ColorId>(c % width_); }

  std::tuple<std::vector<ObjectId>, ObjectId, Signature> split(const Signature& s) const {
    std::vector<ObjectId> ks;
    Signature os{{}, color_of(s.output)};
    for (auto c : s.inputs) {
      ks.push_back(object_of(c));
      os.inputs.push_back(color_of(c));
    }
    return {std::move(ks), object_of(s.output), std::move(os)};
  }

  ArrowTuples tuples_;
  SetOperad O_;
  std::size_t width_;
};

// Colors (c1, c2) numbered c1 * |colors(O2)| + c2; operation (i1, i2)
// numbered i1 * |ops2| + i2.
class ProductData final : public OperadData {
 public:
  ProductData(SetOperad A, SetOperad B) : A_(std::move(A)), B_(std::move(B)), width_(B_.color_count()) {}

  std::size_t color_count() const override { return A_.color_count() * width_; }
  std::string color_name(ColorId c) const override {
    return "(" + A_.color_name(static_cast<ColorId>(c / width_)) + "," + B_.color_name(static_cast<ColorId>(c % width_)) + ")";
  }
  std::size_t op_count(const Signature& s) const override {
    auto [a, b] = split(s);
    const std::size_t na = A_.op_count(a);
    if (na == 0) return 0;
    return static_cast<std::size_t>(checked_product(std::array<std::size_t, 2>{na, B_.op_count(b)}));
  }
  std::string op_name(const Signature& s, OpIndex i) const override {
    auto [a, b] = split(s);
    const std::size_t nb = B_.op_count(b);
    return "(" + A_.op_name(a, static_cast<OpIndex>(i / nb)) + "," + B_.op_name(b, static_cast<OpIndex>(i % nb)) + ")";
  }
  OpIndex unit(ColorId c) const override {
    const ColorId ca = static_cast<ColorId>(c / width_), cb = static_cast<ColorId>(c % width_);
    return static_cast<OpIndex>(A_.unit(ca).index * B_.op_count({{cb}, cb}) + B_.unit(cb).index);
  }
  OpIndex act(const Signature& s, OpIndex phi, const Permutation& sigma) const override {
    auto [a, b] = split(s);
    const std::size_t nb = B_.op_count(b);
    const auto ra = A_.act({a, static_cast<OpIndex>(phi / nb)}, sigma);
    const auto rb = B_.act({b, static_cast<OpIndex>(phi % nb)}, sigma);
    return static_cast<OpIndex>(ra.index * B_.op_count(rb.signature) + rb.index);
  }
  OpIndex compose(const Signature& s, OpIndex phi, std::span<const Operation> inner) const override {
    auto [a, b] = split(s);
    const std::size_t nb = B_.op_count(b);
    std::vector<Operation> ia, ib;
    for (const auto& op : inner) {
      auto [aj, bj] = split(op.signature);
      const std::size_t nbj = B_.op_count(bj);
      ia.push_back({std::move(aj), static_cast<OpIndex>(op.index / nbj)});
      ib.push_back({std::move(bj), static_cast<OpIndex>(op.index % nbj)});
    }
    const auto ra = A_.compose({a, static_cast<OpIndex>(phi / nb)}, ia);
    const auto rb = B_.compose({b, static_cast<OpIndex>(phi % nb)}, ib);
    return static_cast<OpIndex>(ra.index * B_.op_count(rb.signature) + rb.index);
  }
  std::optional<std::size_t> max_arity() const override {
    auto x = A_.max_arity(), y = B_.max_arity();
    if (!x) return y;
    if (!y) return x;
    return std::min(*x, *y);
  }

 private:
  std::pair<Signature, Signature> split(const Signature& s) const {
    Signature a{{}, static_cast<ColorId>(s.output / width_)}, b{{}, static_cast<ColorId>(s.output % width_)};
    for (auto c : s.inputs) {
      a.inputs.push_back(static_cast<ColorId>(c / width_));
      b.inputs.push_back(static_cast<ColorId>(c % width_));
    }
    return {std::move(a), std::move(b)};
  }

  SetOperad A_, B_;
  std::size_t width_;
};

// Colors r (0) and m (1). Into r: one operation when every input is r. Into m:
// operations +1 and -1 when exactly one input is m. Composition multiplies
// signs along the m-strand.
class SampleData final : public OperadData {
 public:
  std::size_t color_count() const override { return 2; }
  std::string color_name(ColorId c) const override { return c == 0 ? "r" : "m"; }
  std::size_t op_count(const Signature& s) const override {
    const auto ms = static_cast<std::size_t>(std::count(s.inputs.begin(), s.inputs.end(), ColorId{1}));
    if (s.output == 0) return ms == 0 ? 1 : 0;
    return ms == 1 ? 2 : 0;
  }
  std::string op_name(const Signature& s, OpIndex i) const override {
    if (s.output == 0) return "mul" + std::to_string(s.arity());
    const auto pos = std::find(s.inputs.begin(), s.inputs.end(), ColorId{1}) - s.inputs.begin();
    return std::string(i == 0 ? "pos" : "neg") + std::to_string(s.arity()) + "." + std::to_string(pos + 1);
  }
  OpIndex unit(ColorId) const override { return 0; }
  OpIndex act(const Signature&, OpIndex phi, const Permutation&) const override { return phi; }
  OpIndex compose(const Signature& s, OpIndex phi, std::span<const Operation> inner) const override {
    if (s.output == 0) return 0;
    OpIndex sign = phi;
    for (const auto& op : inner)
      if (op.signature.output == 1) sign ^= op.index;
    return sign;
  }
};

}  // namespace detail

inline SetOperad terminal_com() { return SetOperad("Com", std::make_shared<detail::ComData>()); }

inline SetOperad trivial_operad(std::size_t colors = 1) {
  std::vector<std::string> names;
  if (colors == 1) {
    names.push_back("*");
  } else {
    for (std::size_t c = 0; c < colors; ++c) names.push_back("c" + std::to_string(c));
  }
  return SetOperad(colors == 1 ? "triv" : "triv" + std::to_string(colors), std::make_shared<detail::TrivialData>(std::move(names)));
}

inline SetOperad sqcup(CategoryPtr K) {
  return SetOperad("sqcup", std::make_shared<detail::SqcupData>(std::move(K)));
}
inline SetOperad sqcup(const FinCategory& K) { return sqcup(share(K)); }

inline SetOperad diagram_operad(CategoryPtr K, SetOperad O) {
  std::string name = "diag(" + O.name() + ")";
  return SetOperad(std::move(name), std::make_shared<detail::DiagramData>(std::move(K), std::move(O)));
}
inline SetOperad diagram_operad(const FinCategory& K, SetOperad O) { return diagram_operad(share(K), std::move(O)); }

inline SetOperad product_operad(SetOperad A, SetOperad B) {
  std::string name = "(" + A.name() + "x" + B.name() + ")";
  return SetOperad(std::move(name), std::make_shared<detail::ProductData>(std::move(A), std::move(B)));
}

inline SetOperad sample_operad() { return SetOperad("sample", std::make_shared<detail::SampleData>()); }

}  // namespace opcat
