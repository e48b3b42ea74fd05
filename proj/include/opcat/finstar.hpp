#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "opcat/fincat.hpp"

namespace opcat {

// A basepoint-preserving map <n> -> <m> between skeletal pointed sets
// <n> = {*, 1, ..., n}. images[i-1] is the image of i, with 0 standing for *.
struct PointedMap {
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  std::vector<std::uint32_t> images;

  std::uint32_t operator()(std::uint32_t i) const { return i == 0 ? 0 : images[i - 1]; }

  static PointedMap identity(std::uint32_t n) {
    PointedMap f{n, n, {}};
    for (std::uint32_t i = 1; i <= n; ++i) f.images.push_back(i);
    return f;
  }

  // rho^j : <n> -> <1>, keeping j and sending everything else to *.
  static PointedMap projection(std::uint32_t n, std::uint32_t j) {
    PointedMap f{n, 1, std::vector<std::uint32_t>(n, 0)};
    f.images[j - 1] = 1;
    return f;
  }

  // The active map <n> -> <1>.
  static PointedMap fold(std::uint32_t n) { return {n, 1, std::vector<std::uint32_t>(n, 1)}; }

  // Elements of {1..n} sent to j, in increasing order.
  std::vector<std::uint32_t> preimage(std::uint32_t j) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 1; i <= source; ++i)
      if (images[i - 1] == j) out.push_back(i);
    return out;
  }

  bool valid() const {
    if (images.size() != source) return false;
    for (auto a : images)
      if (a > target) return false;
    return true;
  }

  friend bool operator==(const PointedMap&, const PointedMap&) = default;
  friend auto operator<=>(const PointedMap&, const PointedMap&) = default;
};

enum class InertActiveTag { neither, inert, active, both };

constexpr std::string_view to_string(InertActiveTag t) {
  switch (t) {
    case InertActiveTag::neither: return "neither";
    case InertActiveTag::inert: return "inert";
    case InertActiveTag::active: return "active";
    case InertActiveTag::both: return "both";
  }
  return "?";
}

inline bool is_inert(const PointedMap& f) {
  std::vector<int> count(f.target + 1, 0);
  for (auto a : f.images) ++count[a];
  for (std::uint32_t j = 1; j <= f.target; ++j)
    if (count[j] != 1) return false;
  return true;
}

inline bool is_active(const PointedMap& f) {
  for (auto a : f.images)
    if (a == 0) return false;
  return true;
}

inline InertActiveTag classify(const PointedMap& f) {
  const bool i = is_inert(f), a = is_active(f);
  if (i && a) return InertActiveTag::both;
  if (i) return InertActiveTag::inert;
  if (a) return InertActiveTag::active;
  return InertActiveTag::neither;
}

// g ∘ f (f first).
inline PointedMap compose_pointed(const PointedMap& f, const PointedMap& g) {
  if (f.target != g.source) {
    throw Error(ErrorKind::arity_mismatch,
                "cannot compose <" + std::to_string(f.source) + ">-><" + std::to_string(f.target) + "> with <" +
                    std::to_string(g.source) + ">-><" + std::to_string(g.target) + ">");
  }
  PointedMap h{f.source, g.target, {}};
  h.images.reserve(f.source);
  for (auto a : f.images) h.images.push_back(g(a));
  return h;
}

// f = active ∘ inert. The inert part drops exactly the elements f kills and
// keeps the survivors in source order.
inline std::pair<PointedMap, PointedMap> inert_active_factorize(const PointedMap& f) {
  PointedMap inert{f.source, 0, std::vector<std::uint32_t>(f.source, 0)};
  PointedMap active{0, f.target, {}};
  for (std::uint32_t i = 1; i <= f.source; ++i) {
    if (f(i) == 0) continue;
    inert.images[i - 1] = ++inert.target;
    active.images.push_back(f(i));
  }
  active.source = inert.target;
  return {inert, active};
}

inline std::string serialize(const PointedMap& f) {
  std::string s = std::to_string(f.source) + "->" + std::to_string(f.target) + ":[";
  for (std::size_t i = 0; i < f.images.size(); ++i) s += (i ? "," : "") + std::to_string(f.images[i]);
  return s + "]";
}

// Parses `n->m:[a1,...,an]`. Whitespace is not allowed.
inline PointedMap parse_pointed_map(std::string_view text) {
  auto fail = [&](const std::string& why) -> PointedMap {
    throw Error(ErrorKind::parse, "pointed map '" + std::string(text) + "': " + why);
  };
  auto read_number = [&](std::size_t& pos) -> std::uint32_t {
    if (pos >= text.size() || text[pos] < '0' || text[pos] > '9') fail("expected a number at offset " + std::to_string(pos));
    std::uint64_t v = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(text[pos++] - '0');
      if (v > 1'000'000) fail("number too large");
    }
    return static_cast<std::uint32_t>(v);
  };
  auto expect = [&](std::size_t& pos, std::string_view lit) {
    if (text.substr(pos, lit.size()) != lit) fail("expected '" + std::string(lit) + "' at offset " + std::to_string(pos));
    pos += lit.size();
  };
  std::size_t pos = 0;
  PointedMap f;
  f.source = read_number(pos);
  expect(pos, "->");
  f.target = read_number(pos);
  expect(pos, ":[");
  if (pos < text.size() && text[pos] != ']') {
    f.images.push_back(read_number(pos));
    while (pos < text.size() && text[pos] == ',') {
      ++pos;
      f.images.push_back(read_number(pos));
    }
  }
  expect(pos, "]");
  if (pos != text.size()) fail("trailing characters");
  if (f.images.size() != f.source) return fail("expected " + std::to_string(f.source) + " images");
  for (auto a : f.images)
    if (a > f.target) fail("image " + std::to_string(a) + " exceeds target arity");
  return f;
}

// All pointed maps <n> -> <m> in lexicographic order of image lists.
inline std::vector<PointedMap> all_pointed_maps(std::uint32_t n, std::uint32_t m) {
  std::vector<PointedMap> out;
  PointedMap f{n, m, std::vector<std::uint32_t>(n, 0)};
  while (true) {
    out.push_back(f);
    std::size_t i = n;
    while (i > 0 && f.images[i - 1] == m) f.images[--i] = 0;
    if (i == 0) break;
    ++f.images[i - 1];
  }
  return out;
}

// The full subcategory of Fin_* on <0>, ..., <N>, with an index from pointed
// maps to arrow ids.
class FinStar {
 public:
  explicit FinStar(std::uint32_t N) : N_(N) {
    std::vector<std::string> objects;
    for (std::uint32_t n = 0; n <= N; ++n) objects.push_back("<" + std::to_string(n) + ">");
    offset_.assign((N + 1) * (N + 1), 0);
    std::vector<ArrowInfo> arrows;
    for (std::uint32_t n = 0; n <= N; ++n) {
      for (std::uint32_t m = 0; m <= N; ++m) {
        offset_[n * (N + 1) + m] = static_cast<ArrowId>(maps_.size());
        for (auto& f : all_pointed_maps(n, m)) {
          arrows.push_back({serialize(f), n, m});
          maps_.push_back(std::move(f));
        }
      }
    }
    std::vector<ArrowId> ids;
    for (std::uint32_t n = 0; n <= N; ++n) ids.push_back(arrow_id(PointedMap::identity(n)));
    category_ = share(FinCategory::generate(std::move(objects), std::move(arrows), std::move(ids), [&](ArrowId g, ArrowId f) {
      return arrow_id(compose_pointed(maps_[f], maps_[g]));
    }));
  }

  std::uint32_t bound() const { return N_; }
  const CategoryPtr& category() const { return category_; }
  const PointedMap& map(ArrowId a) const { return maps_[a]; }

  ArrowId arrow_id(const PointedMap& f) const {
    if (f.source > N_ || f.target > N_) throw Error(ErrorKind::bound_too_small, serialize(f) + " exceeds truncation " + std::to_string(N_));
    ArrowId code = 0;
    for (auto a : f.images) code = code * (f.target + 1) + a;
    return offset_[f.source * (N_ + 1) + f.target] + code;
  }

 private:
  std::uint32_t N_;
  std::vector<PointedMap> maps_;
  std::vector<ArrowId> offset_;
  CategoryPtr category_;
};

inline FinCategory fin_star_truncated(std::uint32_t N) { return *FinStar(N).category(); }

// Γ* truncated at N: objects (<n>, i) with 1 <= i <= n <= N, arrows the pointed
// maps carrying i to j, and the projection to Fin_*.
struct GammaStar {
  CategoryPtr category;
  CategoryPtr base;
  Functor projection;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> objects;  // (n, i)
};

inline GammaStar gamma_star_truncated(std::uint32_t N) {
  FinStar base(N);
  GammaStar G;
  G.base = base.category();
  std::vector<std::string> names;
  std::vector<ObjectId> first(N + 2, 0);  // first object over <n>
  for (std::uint32_t n = 0; n <= N; ++n) {
    first[n] = static_cast<ObjectId>(G.objects.size());
    for (std::uint32_t i = 1; i <= n; ++i) {
      G.objects.emplace_back(n, i);
      names.push_back("(<" + std::to_string(n) + ">," + std::to_string(i) + ")");
    }
  }
  auto obj = [&](std::uint32_t n, std::uint32_t i) { return first[n] + i - 1; };
  std::vector<ArrowInfo> arrows;
  std::vector<ArrowId> base_arrow;
  std::vector<std::uint32_t> marked_point;
  for (ObjectId x = 0; x < G.objects.size(); ++x) {
    const auto [n, i] = G.objects[x];
    for (std::uint32_t m = 1; m <= N; ++m) {
      for (const auto& f : all_pointed_maps(n, m)) {
        if (f(i) == 0) continue;
        arrows.push_back({serialize(f) + "@" + std::to_string(i), x, obj(m, f(i))});
        base_arrow.push_back(base.arrow_id(f));
        marked_point.push_back(i);
      }
    }
  }
  std::map<std::pair<ArrowId, std::uint32_t>, ArrowId> index;
  for (ArrowId a = 0; a < arrows.size(); ++a) index[{base_arrow[a], marked_point[a]}] = a;
  std::vector<ArrowId> ids;
  for (const auto& [n, i] : G.objects) ids.push_back(index.at({base.arrow_id(PointedMap::identity(n)), i}));
  G.category = share(FinCategory::generate(std::move(names), std::move(arrows), std::move(ids), [&](ArrowId g, ArrowId f) {
    const ArrowId b = G.base->compose(base_arrow[g], base_arrow[f]);
    return index.at({b, marked_point[f]});
  }));
  G.projection = Functor{G.category, G.base, {}, base_arrow};
  for (const auto& [n, i] : G.objects) G.projection.on_objects.push_back(n);
  return G;
}

}  // namespace opcat
