#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "opcat/error.hpp"
#include "opcat/parallel.hpp"

namespace opcat {

using ObjectId = std::uint32_t;
using ArrowId = std::uint32_t;
inline constexpr ArrowId no_arrow = std::numeric_limits<ArrowId>::max();

struct ArrowInfo {
  std::string name;
  ObjectId source = 0;
  ObjectId target = 0;
};

// One composition-table entry: second ∘ first = result.
struct Composite {
  ArrowId second = no_arrow;
  ArrowId first = no_arrow;
  ArrowId result = no_arrow;
};

// Raw, unchecked tables; the input of validate_category.
struct CategoryTables {
  std::vector<std::string> objects;
  std::vector<ArrowInfo> arrows;
  std::vector<ArrowId> identities;  // indexed by object, no_arrow when undeclared
  std::vector<Composite> composites;
};

class FinCategory;
struct CategoryValidation;
inline CategoryValidation validate_category(const CategoryTables& t, std::size_t limit);
using CategoryPtr = std::shared_ptr<const FinCategory>;

// A finite category stored as explicit tables. Arrow identity is nominal:
// every object and arrow carries a unique name.
//
// The composition table is complete and typed. Constructions in this library
// produce lawful tables; validate_category and check_category_laws decide the
// laws for tables of unknown provenance.
class FinCategory {
 public:
  FinCategory() = default;

  // compose(g, f) is called once for every composable pair and must return g∘f.
  template <class ComposeFn>
  static FinCategory generate(std::vector<std::string> objects, std::vector<ArrowInfo> arrows,
                              std::vector<ArrowId> identities, ComposeFn&& compose) {
    FinCategory c(std::move(objects), std::move(arrows), std::move(identities));
    c.rows_.resize(c.arrows_.size());
    parallel_for(c.arrows_.size(), [&](std::size_t f) {
      const auto outs = c.out(c.arrows_[f].target);
      auto& row = c.rows_[f];
      row.resize(outs.size());
      for (std::size_t k = 0; k < outs.size(); ++k) {
        row[k] = compose(outs[k], static_cast<ArrowId>(f));
      }
    });
    return c;
  }

  std::size_t object_count() const noexcept { return objects_.size(); }
  std::size_t arrow_count() const noexcept { return arrows_.size(); }

  const std::string& object_name(ObjectId x) const { return objects_.at(x); }
  const std::string& arrow_name(ArrowId f) const { return arrows_.at(f).name; }
  const ArrowInfo& arrow(ArrowId f) const { return arrows_.at(f); }
  ObjectId source(ArrowId f) const { return arrows_[f].source; }
  ObjectId target(ArrowId f) const { return arrows_[f].target; }
  ArrowId identity(ObjectId x) const { return identities_[x]; }
  bool is_identity(ArrowId f) const { return identities_[arrows_[f].source] == f; }

  // g∘f. Requires target(f) == source(g).
  ArrowId compose(ArrowId g, ArrowId f) const { return rows_[f][out_pos_[g]]; }

  std::optional<ArrowId> try_compose(ArrowId g, ArrowId f) const {
    if (f >= arrows_.size() || g >= arrows_.size() || target(f) != source(g)) return std::nullopt;
    return compose(g, f);
  }

  std::span<const ArrowId> hom(ObjectId x, ObjectId y) const { return hom_[x * objects_.size() + y]; }
  std::span<const ArrowId> out(ObjectId x) const { return out_[x]; }
  std::span<const ArrowId> in(ObjectId x) const { return in_[x]; }

  std::optional<ObjectId> find_object(std::string_view name) const {
    auto it = object_index_.find(std::string(name));
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<ArrowId> find_arrow(std::string_view name) const {
    auto it = arrow_index_.find(std::string(name));
    if (it == arrow_index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t composable_pair_count() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  CategoryTables tables() const {
    CategoryTables t{objects_, arrows_, identities_, {}};
    t.composites.reserve(composable_pair_count());
    for (ArrowId f = 0; f < arrows_.size(); ++f) {
      const auto outs = out(target(f));
      for (std::size_t k = 0; k < outs.size(); ++k) t.composites.push_back({outs[k], f, rows_[f][k]});
    }
    return t;
  }

  // Copy with the single entry g∘f overwritten. Used to build corrupted
  // inputs for the law and fibrousness checkers.
  FinCategory with_composite(ArrowId g, ArrowId f, ArrowId result) const {
    FinCategory c = *this;
    c.rows_[f][out_pos_[g]] = result;
    return c;
  }

  // Copy with the identity of x reassigned (also a corruption helper).
  FinCategory with_identity(ObjectId x, ArrowId f) const {
    FinCategory c = *this;
    c.identities_[x] = f;
    return c;
  }

 protected:
  FinCategory(std::vector<std::string> objects, std::vector<ArrowInfo> arrows, std::vector<ArrowId> identities)
      : objects_(std::move(objects)), arrows_(std::move(arrows)), identities_(std::move(identities)) {
    const std::size_t n = objects_.size();
    if (identities_.size() != n) throw Error(ErrorKind::missing_identity, "identity table has wrong size");
    hom_.assign(n * n, {});
    out_.assign(n, {});
    in_.assign(n, {});
    out_pos_.assign(arrows_.size(), 0);
    for (ObjectId x = 0; x < n; ++x) {
      if (!object_index_.emplace(objects_[x], x).second) {
        throw Error(ErrorKind::duplicate_name, "object '" + objects_[x] + "'");
      }
    }
    for (ArrowId f = 0; f < arrows_.size(); ++f) {
      const auto& a = arrows_[f];
      if (a.source >= n || a.target >= n) {
        throw Error(ErrorKind::ill_typed_composite, "arrow '" + a.name + "' has an unknown endpoint");
      }
      if (!arrow_index_.emplace(a.name, f).second) throw Error(ErrorKind::duplicate_name, "arrow '" + a.name + "'");
      hom_[a.source * n + a.target].push_back(f);
      out_pos_[f] = static_cast<ArrowId>(out_[a.source].size());
      out_[a.source].push_back(f);
      in_[a.target].push_back(f);
    }
    for (ObjectId x = 0; x < n; ++x) {
      const ArrowId i = identities_[x];
      if (i >= arrows_.size() || arrows_[i].source != x || arrows_[i].target != x) {
        throw Error(ErrorKind::missing_identity, "object '" + objects_[x] + "' has no identity endomorphism");
      }
    }
  }

  friend CategoryValidation validate_category(const CategoryTables&, std::size_t);

  std::vector<std::string> objects_;
  std::vector<ArrowInfo> arrows_;
  std::vector<ArrowId> identities_;
  std::vector<std::vector<ArrowId>> rows_;  // rows_[f][k] = out(target f)[k] ∘ f
  std::vector<std::vector<ArrowId>> hom_;
  std::vector<std::vector<ArrowId>> out_;
  std::vector<std::vector<ArrowId>> in_;
  std::vector<ArrowId> out_pos_;
  std::unordered_map<std::string, ObjectId> object_index_;
  std::unordered_map<std::string, ArrowId> arrow_index_;
};

inline CategoryPtr share(FinCategory c) {
  return std::make_shared<const FinCategory>(std::move(c));
}

struct Violation {
  ErrorKind kind;
  std::string message;
  std::vector<std::string> arrows;  // offending arrows, in the order they appear in the law
};

inline std::string describe(const Violation& v) {
  std::string s(to_string(v.kind));
  s += ": " + v.message;
  if (!v.arrows.empty()) {
    s += " [";
    for (std::size_t i = 0; i < v.arrows.size(); ++i) s += (i ? ", " : "") + v.arrows[i];
    s += "]";
  }
  return s;
}

// Unit and associativity laws of a complete typed table. Returns at most
// `limit` violations, in a deterministic order (by arrow index).
inline std::vector<Violation> check_category_laws(const FinCategory& c, std::size_t limit = 1) {
  std::vector<Violation> out;
  auto full = [&] { return out.size() >= limit; };
  for (ArrowId f = 0; f < c.arrow_count() && !full(); ++f) {
    const ArrowId ls = c.identity(c.target(f));
    const ArrowId rs = c.identity(c.source(f));
    if (c.compose(ls, f) != f || c.compose(f, rs) != f) {
      out.push_back({ErrorKind::missing_identity, "identity is not a unit for arrow",
                     {c.arrow_name(f), c.arrow_name(c.compose(ls, f) != f ? ls : rs)}});
    }
  }
  for (ArrowId f = 0; f < c.arrow_count() && !full(); ++f) {
    for (ArrowId g : c.out(c.target(f))) {
      const ArrowId gf = c.compose(g, f);
      if (c.source(gf) != c.source(f) || c.target(gf) != c.target(g)) {
        out.push_back({ErrorKind::ill_typed_composite, "composite has the wrong endpoints",
                       {c.arrow_name(g), c.arrow_name(f), c.arrow_name(gf)}});
        if (full()) return out;
        continue;
      }
      for (ArrowId h : c.out(c.target(g))) {
        if (c.compose(h, gf) != c.compose(c.compose(h, g), f)) {
          out.push_back({ErrorKind::not_associative, "(h.g).f != h.(g.f)",
                         {c.arrow_name(h), c.arrow_name(g), c.arrow_name(f)}});
          if (full()) return out;
        }
      }
    }
  }
  return out;
}

struct CategoryValidation {
  std::optional<FinCategory> category;
  std::vector<Violation> violations;

  bool ok() const { return category.has_value(); }
};

// Checks raw tables and returns the category, or the violations found.
// Composites involving identities may be omitted; they are filled in.
inline CategoryValidation validate_category(const CategoryTables& t, std::size_t limit = 16) {
  CategoryValidation v;
  auto add = [&](ErrorKind k, std::string msg, std::vector<std::string> arrows) {
    if (v.violations.size() < limit) v.violations.push_back({k, std::move(msg), std::move(arrows)});
  };
  const std::size_t n = t.objects.size();
  {
    std::unordered_map<std::string, int> seen;
    for (const auto& o : t.objects)
      if (seen[o]++) add(ErrorKind::duplicate_name, "duplicate object '" + o + "'", {});
    seen.clear();
    for (const auto& a : t.arrows)
      if (seen[a.name]++) add(ErrorKind::duplicate_name, "duplicate arrow '" + a.name + "'", {a.name});
  }
  for (const auto& a : t.arrows) {
    if (a.source >= n || a.target >= n) add(ErrorKind::ill_typed_composite, "arrow endpoint out of range", {a.name});
  }
  for (ObjectId x = 0; x < n; ++x) {
    const ArrowId i = x < t.identities.size() ? t.identities[x] : no_arrow;
    if (i >= t.arrows.size() || t.arrows[i].source != x || t.arrows[i].target != x) {
      add(ErrorKind::missing_identity, "object '" + t.objects[x] + "' has no identity", {});
    }
  }
  if (!v.violations.empty()) return v;

  FinCategory c(t.objects, t.arrows, t.identities);
  // rows filled with no_arrow, then identities, then declared entries
  c.rows_.resize(t.arrows.size());
  for (ArrowId f = 0; f < t.arrows.size(); ++f) c.rows_[f].assign(c.out(c.target(f)).size(), no_arrow);
  auto name = [&](ArrowId a) { return t.arrows[a].name; };
  for (const auto& e : t.composites) {
    if (e.first >= t.arrows.size() || e.second >= t.arrows.size() || e.result >= t.arrows.size()) {
      add(ErrorKind::ill_typed_composite, "composite refers to an unknown arrow", {});
      continue;
    }
    const auto& f = t.arrows[e.first];
    const auto& g = t.arrows[e.second];
    const auto& h = t.arrows[e.result];
    if (f.target != g.source || h.source != f.source || h.target != g.target) {
      add(ErrorKind::ill_typed_composite, "composite is ill-typed", {g.name, f.name, h.name});
      continue;
    }
    ArrowId& slot = c.rows_[e.first][c.out_pos_[e.second]];
    if (slot != no_arrow && slot != e.result) {
      add(ErrorKind::ill_typed_composite, "composite declared twice with different results",
          {g.name, f.name, h.name, name(slot)});
      continue;
    }
    slot = e.result;
  }
  for (ArrowId f = 0; f < t.arrows.size(); ++f) {
    const ArrowId ls = t.identities[t.arrows[f].target];
    const ArrowId rs = t.identities[t.arrows[f].source];
    ArrowId& left = c.rows_[f][c.out_pos_[ls]];
    if (left == no_arrow) left = f;
    if (left != f) add(ErrorKind::missing_identity, "identity is not a left unit", {name(ls), name(f)});
    ArrowId& right = c.rows_[rs][c.out_pos_[f]];
    if (right == no_arrow) right = f;
    if (right != f) add(ErrorKind::missing_identity, "identity is not a right unit", {name(f), name(rs)});
  }
  for (ArrowId f = 0; f < t.arrows.size(); ++f) {
    const auto outs = c.out(c.target(f));
    for (std::size_t k = 0; k < outs.size(); ++k) {
      if (c.rows_[f][k] == no_arrow) add(ErrorKind::missing_composite, "no composite declared", {name(outs[k]), name(f)});
    }
  }
  if (!v.violations.empty()) return v;
  for (auto& viol : check_category_laws(c, limit)) v.violations.push_back(std::move(viol));
  if (v.violations.empty()) v.category = std::move(c);
  return v;
}

// Throwing form of validate_category.
inline FinCategory make_category(const CategoryTables& t) {
  auto v = validate_category(t);
  if (!v.ok()) throw Error(v.violations.front().kind, describe(v.violations.front()));
  return std::move(*v.category);
}

}  // namespace opcat
