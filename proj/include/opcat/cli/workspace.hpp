#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "opcat/dendroid.hpp"
#include "opcat/fincat.hpp"
#include "opcat/finstar.hpp"
#include "opcat/operad.hpp"

namespace opcat::cli {

struct Position {
  std::size_t line = 0;
  std::size_t column = 0;
};

inline Error located(ErrorKind kind, const Position& p, const std::string& what) {
  return Error(kind, "line " + std::to_string(p.line) + ", column " + std::to_string(p.column) + ": " + what);
}

// The message of an error without its kind prefix.
inline std::string bare_message(const Error& e) {
  const std::string_view w = e.what(), kind = to_string(e.kind());
  return std::string(w.substr(0, kind.size()) == kind && w.size() > kind.size() + 1 ? w.substr(kind.size() + 2) : w);
}

struct Token {
  std::string text;
  Position pos;
  bool quoted = false;
  bool punct = false;
};

inline bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_'*+!?@$%&|~/^").find(c) != std::string_view::npos;
}

inline bool plain_name(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), name_char); }

// Names that are not plain are written in double quotes.
inline std::string quote(const std::string& s) {
  if (plain_name(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Splits one line into names, quoted names and the punctuation : , ( ) [ ] = . ->
inline std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const Position p{line_no, i + 1};
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      std::string text;
      ++i;
      while (true) {
        if (i >= line.size()) throw located(ErrorKind::parse, p, "unterminated quoted name");
        if (line[i] == '"') break;
        if (line[i] == '\\' && i + 1 < line.size()) ++i;
        text += line[i++];
      }
      ++i;
      out.push_back({std::move(text), p, true, false});
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({"->", p, false, true});
      i += 2;
    } else if (std::string_view(":,()[]=.").find(c) != std::string_view::npos) {
      out.push_back({std::string(1, c), p, false, true});
      ++i;
    } else if (name_char(c)) {
      std::size_t j = i;
      while (j < line.size() && name_char(line[j])) ++j;
      out.push_back({std::string(line.substr(i, j - i)), p, false, false});
      i = j;
    } else {
      throw located(ErrorKind::parse, p, std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

// A parsed category together with its marking (`mark` statements).
struct CategoryDef {
  CategoryPtr category;
  std::vector<bool> marked;
};

struct Workspace {
  std::map<std::string, CategoryDef> categories;
  std::map<std::string, SetOperad> operads;
  std::map<std::string, ForestPtr> forests;
  std::map<std::string, LevelForest> simplices;
  std::optional<std::uint32_t> arity;
  std::optional<std::uint64_t> budget;

  bool contains(const std::string& name) const {
    return categories.count(name) || operads.count(name) || forests.count(name) || simplices.count(name);
  }
  bool empty() const { return categories.empty() && operads.empty() && forests.empty() && simplices.empty(); }
};

// Fills in composites not given explicitly: identities, composites into a
// hom-set with one element, and everything associativity forces. Throws
// NotAssociative when two derivations disagree and MissingComposite when a
// composite stays undetermined.
inline CategoryTables close_composites(CategoryTables t) {
  const std::size_t n = t.arrows.size();
  std::map<std::pair<ArrowId, ArrowId>, ArrowId> table;  // (second, first) -> result
  auto name = [&](ArrowId a) { return t.arrows[a].name; };
  auto set = [&](ArrowId g, ArrowId f, ArrowId h) {
    if (t.arrows[h].source != t.arrows[f].source || t.arrows[h].target != t.arrows[g].target) {
      throw Error(ErrorKind::ill_typed_composite, name(g) + "." + name(f) + " = " + name(h) + " is ill-typed");
    }
    auto [it, fresh] = table.emplace(std::make_pair(g, f), h);
    if (!fresh && it->second != h) {
      throw Error(ErrorKind::not_associative, name(g) + "." + name(f) + " determined as both " + name(it->second) + " and " + name(h));
    }
    return fresh;
  };
  for (const auto& c : t.composites) {
    if (t.arrows[c.first].target != t.arrows[c.second].source) {
      throw Error(ErrorKind::ill_typed_composite, name(c.second) + "." + name(c.first) + " is not composable");
    }
    set(c.second, c.first, c.result);
  }
  std::vector<std::vector<ArrowId>> hom(t.objects.size() * t.objects.size()), out(t.objects.size());
  for (ArrowId a = 0; a < n; ++a) {
    hom[t.arrows[a].source * t.objects.size() + t.arrows[a].target].push_back(a);
    out[t.arrows[a].source].push_back(a);
  }
  auto lookup = [&](ArrowId g, ArrowId f) {
    auto it = table.find({g, f});
    return it == table.end() ? no_arrow : it->second;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (ArrowId f = 0; f < n; ++f) {
      const ObjectId x = t.arrows[f].source, y = t.arrows[f].target;
      changed = set(t.identities[y], f, f) || changed;
      changed = set(f, t.identities[x], f) || changed;
      for (ArrowId g : out[y]) {
        const ObjectId z = t.arrows[g].target;
        if (lookup(g, f) == no_arrow && hom[x * t.objects.size() + z].size() == 1) {
          changed = set(g, f, hom[x * t.objects.size() + z].front()) || changed;
        }
        const ArrowId gf = lookup(g, f);
        for (ArrowId h : out[z]) {
          // h.(g.f) = (h.g).f
          const ArrowId hg = lookup(h, g);
          const ArrowId left = gf == no_arrow ? no_arrow : lookup(h, gf);
          const ArrowId right = hg == no_arrow ? no_arrow : lookup(hg, f);
          if (left != no_arrow && hg != no_arrow) changed = set(hg, f, left) || changed;
          if (right != no_arrow && gf != no_arrow) changed = set(h, gf, right) || changed;
        }
      }
    }
  }
  t.composites.clear();
  for (ArrowId f = 0; f < n; ++f) {
    for (ArrowId g : out[t.arrows[f].target]) {
      const ArrowId h = lookup(g, f);
      if (h == no_arrow) throw Error(ErrorKind::missing_composite, name(g) + "." + name(f) + " is undetermined");
      t.composites.push_back({g, f, h});
    }
  }
  return t;
}

namespace detail {

class LineCursor {
 public:
  LineCursor(std::vector<Token> tokens, std::size_t line_no, std::size_t width)
      : tokens_(std::move(tokens)), end_{line_no, width + 1} {}

  bool done() const { return i_ == tokens_.size(); }
  const Token& peek() const {
    if (done()) throw located(ErrorKind::parse, end_, "unexpected end of line");
    return tokens_[i_];
  }
  bool at(std::string_view p) const { return !done() && tokens_[i_].punct && tokens_[i_].text == p; }
  const Token& name() {
    const Token& t = peek();
    if (t.punct) throw located(ErrorKind::parse, t.pos, "expected a name, found '" + t.text + "'");
    ++i_;
    return t;
  }
  void expect(std::string_view p) {
    const Token& t = peek();
    if (!t.punct || t.text != p) throw located(ErrorKind::parse, t.pos, "expected '" + std::string(p) + "', found '" + t.text + "'");
    ++i_;
  }
  std::uint64_t number() {
    const Token& t = name();
    if (t.quoted || t.text.empty() || !std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        t.text.size() > 12) {
      throw located(ErrorKind::parse, t.pos, "expected a number, found '" + t.text + "'");
    }
    return std::stoull(t.text);
  }
  // name list a, b, c between the given brackets
  std::vector<Token> list(std::string_view open, std::string_view close) {
    expect(open);
    std::vector<Token> out;
    if (at(close)) {
      expect(close);
      return out;
    }
    while (true) {
      out.push_back(name());
      if (at(close)) break;
      expect(",");
    }
    expect(close);
    return out;
  }
  void finish() const {
    if (!done()) throw located(ErrorKind::parse, tokens_[i_].pos, "unexpected '" + tokens_[i_].text + "'");
  }

 private:
  std::vector<Token> tokens_;
  std::size_t i_ = 0;
  Position end_;
};

struct Block {
  std::string kind;
  Token name;
  std::vector<std::pair<std::vector<Token>, std::pair<std::size_t, std::string>>> lines;  // tokens, (line, raw text)
};

inline std::map<std::string, std::size_t> index_names(const std::vector<Token>& decls, const std::string& what) {
  std::map<std::string, std::size_t> out;
  for (const auto& t : decls) {
    if (!out.emplace(t.text, out.size()).second) throw located(ErrorKind::duplicate_name, t.pos, "duplicate " + what + " '" + t.text + "'");
  }
  return out;
}

inline std::size_t resolve(const std::map<std::string, std::size_t>& names, const Token& t, const std::string& what) {
  auto it = names.find(t.text);
  if (it == names.end()) throw located(ErrorKind::unresolved_name, t.pos, "unknown " + what + " '" + t.text + "'");
  return it->second;
}

// Rethrows library errors raised while assembling a block at the block header.
template <class Fn>
auto at_block(const Block& b, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (bare_message(e).rfind("line ", 0) == 0) throw;
    throw located(e.kind(), b.name.pos, b.kind + " " + b.name.text + ": " + bare_message(e));
  }
}

inline CategoryDef build_category(const Block& b) {
  std::vector<Token> objects, arrow_names;
  struct Arr {
    Token source, target;
  };
  std::vector<Arr> arrows;
  std::vector<std::pair<Token, Token>> ids;
  std::vector<std::array<Token, 3>> cmps;
  std::vector<Token> marks;
  for (const auto& [tokens, raw] : b.lines) {
    LineCursor c(tokens, raw.first, raw.second.size());
    const Token& kw = c.name();
    if (kw.text == "obj") {
      do objects.push_back(c.name());
      while (!c.done());
    } else if (kw.text == "arr") {
      arrow_names.push_back(c.name());
      c.expect(":");
      Arr a{c.name(), {}};
      c.expect("->");
      a.target = c.name();
      arrows.push_back(a);
    } else if (kw.text == "id") {
      Token x = c.name();
      c.expect("=");
      ids.emplace_back(x, c.name());
    } else if (kw.text == "cmp") {
      Token g = c.name();
      c.expect(".");
      Token f = c.name();
      c.expect("=");
      cmps.push_back({g, f, c.name()});
    } else if (kw.text == "mark") {
      do marks.push_back(c.name());
      while (!c.done());
    } else {
      throw located(ErrorKind::parse, kw.pos, "unknown category statement '" + kw.text + "'");
    }
    c.finish();
  }
  CategoryTables t;
  const auto objs = index_names(objects, "object");
  for (const auto& o : objects) t.objects.push_back(o.text);
  auto arrs = index_names(arrow_names, "arrow");
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    t.arrows.push_back({arrow_names[i].text, static_cast<ObjectId>(resolve(objs, arrows[i].source, "object")),
                        static_cast<ObjectId>(resolve(objs, arrows[i].target, "object"))});
  }
  t.identities.assign(t.objects.size(), no_arrow);
  for (const auto& [x, f] : ids) {
    const auto ox = resolve(objs, x, "object");
    const auto a = resolve(arrs, f, "arrow");
    if (t.arrows[a].source != ox || t.arrows[a].target != ox) throw located(ErrorKind::missing_identity, f.pos, "'" + f.text + "' is not an endomorphism of " + x.text);
    if (t.identities[ox] != no_arrow) throw located(ErrorKind::duplicate_name, x.pos, "identity of " + x.text + " declared twice");
    t.identities[ox] = static_cast<ArrowId>(a);
  }
  for (ObjectId x = 0; x < t.objects.size(); ++x) {
    if (t.identities[x] != no_arrow) continue;
    const std::string id = "id_" + t.objects[x];
    if (auto it = arrs.find(id); it != arrs.end()) {
      if (t.arrows[it->second].source != x || t.arrows[it->second].target != x) {
        throw located(ErrorKind::missing_identity, b.name.pos, "arrow " + id + " is not an endomorphism of " + t.objects[x]);
      }
      t.identities[x] = static_cast<ArrowId>(it->second);
    } else {
      t.identities[x] = static_cast<ArrowId>(t.arrows.size());
      arrs.emplace(id, t.arrows.size());
      t.arrows.push_back({id, x, x});
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> stated;
  for (const auto& [g, f, h] : cmps) {
    const auto [it, fresh] = stated.emplace(std::make_pair(resolve(arrs, g, "arrow"), resolve(arrs, f, "arrow")), resolve(arrs, h, "arrow"));
    if (!fresh && it->second != resolve(arrs, h, "arrow")) {
      throw located(ErrorKind::not_associative, h.pos, g.text + "." + f.text + " is already " + t.arrows[it->second].name);
    }
    t.composites.push_back({static_cast<ArrowId>(resolve(arrs, g, "arrow")), static_cast<ArrowId>(resolve(arrs, f, "arrow")),
                            static_cast<ArrowId>(resolve(arrs, h, "arrow"))});
  }
  CategoryDef def;
  std::vector<std::size_t> marked;
  for (const auto& m : marks) marked.push_back(resolve(arrs, m, "arrow"));
  def.category = at_block(b, [&] { return share(make_category(close_composites(t))); });
  def.marked.assign(def.category->arrow_count(), false);
  for (auto a : marked) def.marked[a] = true;
  return def;
}

inline Permutation parse_permutation(LineCursor& c) {
  c.expect("[");
  Permutation p;
  if (!c.at("]")) {
    while (true) {
      const Position pos = c.peek().pos;
      const auto v = c.number();
      if (v == 0) throw located(ErrorKind::parse, pos, "permutation entries start at 1");
      p.push_back(static_cast<std::uint32_t>(v - 1));
      if (c.at("]")) break;
      c.expect(",");
    }
  }
  c.expect("]");
  auto sorted = p;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != identity_permutation(p.size())) throw Error(ErrorKind::parse, "not a permutation");
  return p;
}

inline SetOperad build_operad(const Block& b) {
  std::vector<Token> colors, op_names;
  struct OpDecl {
    std::vector<Token> inputs;
    Token output;
  };
  std::vector<OpDecl> decls;
  std::vector<std::pair<Token, Token>> units;
  struct SymDecl {
    Token op;
    Permutation perm;
    Token result;
  };
  std::vector<SymDecl> syms;
  struct CmpDecl {
    Token outer;
    std::size_t position;
    Token inner, result;
  };
  std::vector<CmpDecl> cmps;
  std::optional<std::size_t> bound;
  for (const auto& [tokens, raw] : b.lines) {
    LineCursor c(tokens, raw.first, raw.second.size());
    const Token& kw = c.name();
    if (kw.text == "color") {
      do colors.push_back(c.name());
      while (!c.done());
    } else if (kw.text == "op") {
      op_names.push_back(c.name());
      c.expect(":");
      OpDecl d{c.list("(", ")"), {}};
      c.expect("->");
      d.output = c.name();
      decls.push_back(std::move(d));
    } else if (kw.text == "unit") {
      Token x = c.name();
      c.expect("=");
      units.emplace_back(x, c.name());
    } else if (kw.text == "sym") {
      SymDecl d{c.name(), {}, {}};
      const Position at = c.peek().pos;
      try {
        d.perm = parse_permutation(c);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::parse || bare_message(e).rfind("line ", 0) == 0) throw;
        throw located(ErrorKind::parse, at, "not a permutation");
      }
      c.expect("=");
      d.result = c.name();
      syms.push_back(std::move(d));
    } else if (kw.text == "cmp") {
      Token outer = c.name();
      const Token& o = c.name();
      if (o.quoted || o.text.size() < 2 || o.text[0] != 'o' ||
          !std::all_of(o.text.begin() + 1, o.text.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) ||
          o.text.size() > 4 || o.text[1] == '0') {
        throw located(ErrorKind::parse, o.pos, "expected a position o1, o2, ..., found '" + o.text + "'");
      }
      CmpDecl d{outer, std::stoul(o.text.substr(1)) - 1, c.name(), {}};
      c.expect("=");
      d.result = c.name();
      cmps.push_back(std::move(d));
    } else if (kw.text == "bound") {
      bound = c.number();
    } else {
      throw located(ErrorKind::parse, kw.pos, "unknown operad statement '" + kw.text + "'");
    }
    c.finish();
  }
  OperadTable t;
  const auto cols = index_names(colors, "color");
  for (const auto& x : colors) t.colors.push_back(x.text);
  auto ops = index_names(op_names, "operation");
  for (std::size_t i = 0; i < decls.size(); ++i) {
    Signature s{{}, static_cast<ColorId>(resolve(cols, decls[i].output, "color"))};
    for (const auto& x : decls[i].inputs) s.inputs.push_back(static_cast<ColorId>(resolve(cols, x, "color")));
    t.ops.push_back({op_names[i].text, std::move(s)});
  }
  // a color with no unary endomorphism at all gets an implicit unit id_<color>
  for (ColorId c = 0; c < t.colors.size(); ++c) {
    const Signature s{{c}, c};
    if (std::any_of(t.ops.begin(), t.ops.end(), [&](const auto& op) { return op.signature == s; })) continue;
    const std::string id = "id_" + t.colors[c];
    if (ops.count(id)) throw located(ErrorKind::duplicate_name, b.name.pos, "implicit unit " + id + " clashes with an operation");
    ops.emplace(id, t.ops.size());
    t.ops.push_back({id, s});
  }
  t.units.assign(t.colors.size(), std::nullopt);
  for (const auto& [x, u] : units) t.units[resolve(cols, x, "color")] = resolve(ops, u, "operation");
  for (const auto& d : syms) t.symmetries.push_back({resolve(ops, d.op, "operation"), d.perm, resolve(ops, d.result, "operation")});
  for (const auto& d : cmps) {
    t.compositions.push_back({resolve(ops, d.outer, "operation"), d.position, resolve(ops, d.inner, "operation"), resolve(ops, d.result, "operation")});
  }
  t.bound = bound;
  return at_block(b, [&] { return make_explicit_operad(b.name.text, t); });
}

inline ForestPtr build_forest(const Block& b) {
  std::vector<Token> edges;
  std::vector<std::pair<Token, std::pair<std::vector<Token>, Token>>> vertices;
  for (const auto& [tokens, raw] : b.lines) {
    LineCursor c(tokens, raw.first, raw.second.size());
    const Token& kw = c.name();
    if (kw.text == "edge") {
      do edges.push_back(c.name());
      while (!c.done());
    } else if (kw.text == "vertex") {
      Token v = c.name();
      c.expect(":");
      auto inputs = c.list("[", "]");
      c.expect("->");
      vertices.push_back({v, {std::move(inputs), c.name()}});
    } else {
      throw located(ErrorKind::parse, kw.pos, "unknown forest statement '" + kw.text + "'");
    }
    c.finish();
  }
  const auto es = index_names(edges, "edge");
  std::vector<Token> vnames;
  for (const auto& v : vertices) vnames.push_back(v.first);
  index_names(vnames, "vertex");
  std::vector<std::string> names;
  for (const auto& e : edges) names.push_back(e.text);
  std::vector<Vertex> vs;
  for (const auto& [v, io] : vertices) {
    Vertex w{v.text, {}, static_cast<EdgeId>(resolve(es, io.second, "edge"))};
    for (const auto& i : io.first) w.inputs.push_back(static_cast<EdgeId>(resolve(es, i, "edge")));
    vs.push_back(std::move(w));
  }
  return at_block(b, [&] { return share(Forest(std::move(names), std::move(vs))); });
}

inline LevelForest build_simplex(const Block& b) {
  std::optional<std::uint32_t> start;
  std::vector<PointedMap> maps;
  std::optional<Position> first;
  for (const auto& [tokens, raw] : b.lines) {
    LineCursor c(tokens, raw.first, raw.second.size());
    const Token& kw = c.name();
    if (!first) first = kw.pos;
    if (kw.text == "level") {
      start = static_cast<std::uint32_t>(c.number());
      c.finish();
    } else if (kw.text == "map") {
      // the rest of the line is a pointed map n->m:[a1,...,an]
      std::string text = raw.second.substr(kw.pos.column - 1 + kw.text.size());
      if (auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
      const auto lead = text.find_first_not_of(" \t");
      const auto tail = text.find_last_not_of(" \t\r");
      if (lead == std::string::npos) throw located(ErrorKind::parse, kw.pos, "map without a pointed map");
      const Position at{raw.first, kw.pos.column + kw.text.size() + lead};
      try {
        maps.push_back(parse_pointed_map(text.substr(lead, tail - lead + 1)));
      } catch (const Error& e) {
        throw located(e.kind(), at, bare_message(e));
      }
    } else {
      throw located(ErrorKind::parse, kw.pos, "unknown simplex statement '" + kw.text + "'");
    }
  }
  if (!start) {
    if (maps.empty()) throw located(ErrorKind::parse, b.name.pos, "simplex " + b.name.text + " needs a level or a map");
    start = maps.front().source;
  }
  return at_block(b, [&] { return LevelForest(*start, maps); });
}

}  // namespace detail

// Parses the workspace format; see docs/format.md.
inline Workspace parse_workspace(std::string_view text) {
  Workspace ws;
  std::vector<detail::Block> blocks;
  std::set<std::string> names;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string raw(text.substr(pos, end - pos));
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    ++line_no;
    pos = end + 1;
    // report preambles, so that command output can be read back
    if (raw.rfind("command:", 0) == 0 || raw.rfind("settings:", 0) == 0 || raw.rfind("verdict:", 0) == 0 || raw.rfind("timing:", 0) == 0) {
      blocks.push_back({"", {}, {}});
      if (end == text.size()) break;
      continue;
    }
    auto tokens = tokenize(raw, line_no);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const Token& head = tokens.front();
    const bool header = !head.quoted && (head.text == "category" || head.text == "operad" || head.text == "forest" || head.text == "simplex");
    if (header) {
      detail::LineCursor c(tokens, line_no, raw.size());
      c.name();
      detail::Block b{head.text, c.name(), {}};
      c.finish();
      if (!names.insert(b.name.text).second) throw located(ErrorKind::duplicate_name, b.name.pos, "duplicate definition '" + b.name.text + "'");
      blocks.push_back(std::move(b));
    } else if (!head.quoted && head.text == "set") {
      detail::LineCursor c(tokens, line_no, raw.size());
      c.name();
      const Token& key = c.name();
      const auto v = c.number();
      c.finish();
      if (key.text == "arity") {
        ws.arity = static_cast<std::uint32_t>(v);
      } else if (key.text == "budget") {
        ws.budget = v;
      } else {
        throw located(ErrorKind::parse, key.pos, "unknown setting '" + key.text + "'");
      }
      blocks.push_back({"", {}, {}});  // closes the open block
    } else {
      if (blocks.empty() || blocks.back().kind.empty()) throw located(ErrorKind::parse, head.pos, "statement outside a definition");
      blocks.back().lines.push_back({std::move(tokens), {line_no, raw}});
    }
    if (end == text.size()) break;
  }
  for (const auto& b : blocks) {
    if (b.kind == "category") {
      ws.categories.emplace(b.name.text, detail::build_category(b));
    } else if (b.kind == "operad") {
      ws.operads.emplace(b.name.text, detail::build_operad(b));
    } else if (b.kind == "forest") {
      ws.forests.emplace(b.name.text, detail::build_forest(b));
    } else if (b.kind == "simplex") {
      ws.simplices.emplace(b.name.text, detail::build_simplex(b));
    }
  }
  return ws;
}

// Adds the definitions of `more`; names must stay unique.
inline void merge(Workspace& into, Workspace more) {
  auto check = [&](const std::string& name) {
    if (into.contains(name)) throw Error(ErrorKind::duplicate_name, "definition '" + name + "' appears in two inputs");
  };
  for (auto& [k, v] : more.categories) check(k), into.categories.emplace(k, std::move(v));
  for (auto& [k, v] : more.operads) check(k), into.operads.emplace(k, std::move(v));
  for (auto& [k, v] : more.forests) check(k), into.forests.emplace(k, std::move(v));
  for (auto& [k, v] : more.simplices) check(k), into.simplices.emplace(k, std::move(v));
  if (more.arity) into.arity = more.arity;
  if (more.budget) into.budget = more.budget;
}

// Objects and non-identity arrows in lexicographic order; identities not named
// id_<object> are declared with `id`; every composite of two non-identity
// arrows is listed.
inline std::string serialize_category(const std::string& name, const FinCategory& C, const std::vector<bool>& marked = {}) {
  std::string s = "category " + quote(name) + "\n";
  std::vector<ObjectId> objs(C.object_count());
  for (ObjectId x = 0; x < objs.size(); ++x) objs[x] = x;
  std::sort(objs.begin(), objs.end(), [&](ObjectId a, ObjectId b) { return C.object_name(a) < C.object_name(b); });
  if (!objs.empty()) {
    s += "  obj";
    for (auto x : objs) s += " " + quote(C.object_name(x));
    s += "\n";
  }
  std::vector<ArrowId> arrs;
  for (ArrowId a = 0; a < C.arrow_count(); ++a)
    if (!C.is_identity(a) || C.arrow_name(a) != "id_" + C.object_name(C.source(a))) arrs.push_back(a);
  std::sort(arrs.begin(), arrs.end(), [&](ArrowId a, ArrowId b) { return C.arrow_name(a) < C.arrow_name(b); });
  for (auto a : arrs) s += "  arr " + quote(C.arrow_name(a)) + ": " + quote(C.object_name(C.source(a))) + " -> " + quote(C.object_name(C.target(a))) + "\n";
  for (auto x : objs) {
    const ArrowId i = C.identity(x);
    if (C.arrow_name(i) != "id_" + C.object_name(x)) s += "  id " + quote(C.object_name(x)) + " = " + quote(C.arrow_name(i)) + "\n";
  }
  std::vector<ArrowId> proper;
  for (auto a : arrs)
    if (!C.is_identity(a)) proper.push_back(a);
  for (auto g : proper)
    for (auto f : proper)
      if (C.target(f) == C.source(g)) {
        s += "  cmp " + quote(C.arrow_name(g)) + "." + quote(C.arrow_name(f)) + " = " + quote(C.arrow_name(C.compose(g, f))) + "\n";
      }
  std::vector<ArrowId> marks;
  for (ArrowId a = 0; a < marked.size(); ++a)
    if (marked[a]) marks.push_back(a);
  std::sort(marks.begin(), marks.end(), [&](ArrowId a, ArrowId b) { return C.arrow_name(a) < C.arrow_name(b); });
  for (std::size_t i = 0; i < marks.size(); i += 8) {
    s += "  mark";
    for (std::size_t k = i; k < std::min(marks.size(), i + 8); ++k) s += " " + quote(C.arrow_name(marks[k]));
    s += "\n";
  }
  return s;
}

// All operations up to `bound` in index order, units, adjacent
// transpositions and every partial composite not involving a unit; closure
// recovers the rest on reading. Clashing operation names get a #k suffix.
inline std::string serialize_operad(const std::string& name, const SetOperad& O, std::size_t bound) {
  const OperadIndex index(O, bound);
  std::vector<std::string> names(index.size());
  {
    std::map<std::string, std::size_t> seen;
    for (std::size_t id = 0; id < index.size(); ++id) {
      const auto& op = index.op(id);
      std::string n = O.op_name(op.signature, op.index);
      if (seen[n]++) n += "#" + std::to_string(seen[n] - 1);
      names[id] = n;
    }
  }
  auto nm = [&](const Operation& op) { return quote(names[*index.id(op)]); };
  std::string s = "operad " + quote(name) + "\n  bound " + std::to_string(bound) + "\n";
  if (O.color_count() > 0) {
    s += "  color";
    for (ColorId c = 0; c < O.color_count(); ++c) s += " " + quote(O.color_name(c));
    s += "\n";
  }
  for (std::size_t id = 0; id < index.size(); ++id) {
    const auto& sig = index.op(id).signature;
    s += "  op " + quote(names[id]) + ": (";
    for (std::size_t i = 0; i < sig.arity(); ++i) s += (i ? "," : "") + quote(O.color_name(sig.inputs[i]));
    s += ") -> " + quote(O.color_name(sig.output)) + "\n";
  }
  std::vector<bool> unit(index.size(), false);
  for (ColorId c = 0; c < O.color_count(); ++c) {
    unit[*index.id(O.unit(c))] = true;
    s += "  unit " + quote(O.color_name(c)) + " = " + nm(O.unit(c)) + "\n";
  }
  for (std::size_t id = 0; id < index.size(); ++id) {
    const auto& op = index.op(id);
    for (std::size_t i = 0; i + 1 < op.signature.arity(); ++i) {
      Permutation p = identity_permutation(op.signature.arity());
      std::swap(p[i], p[i + 1]);
      s += "  sym " + quote(names[id]) + " [";
      for (std::size_t k = 0; k < p.size(); ++k) s += (k ? "," : "") + std::to_string(p[k] + 1);
      s += "] = " + nm(O.act(op, p)) + "\n";
    }
  }
  for (std::size_t id = 0; id < index.size(); ++id) {
    if (unit[id]) continue;
    const auto& phi = index.op(id);
    for (std::size_t i = 0; i < phi.signature.arity(); ++i) {
      for (std::size_t psi : index.into(phi.signature.inputs[i])) {
        if (unit[psi] || phi.signature.arity() + index.op(psi).signature.arity() - 1 > bound) continue;
        s += "  cmp " + quote(names[id]) + " o" + std::to_string(i + 1) + " " + quote(names[psi]) + " = " +
             nm(O.compose_at(phi, i, index.op(psi))) + "\n";
      }
    }
  }
  return s;
}

inline std::string serialize_forest(const std::string& name, const Forest& F) {
  std::string s = "forest " + quote(name) + "\n";
  std::vector<EdgeId> es(F.edge_count());
  for (EdgeId e = 0; e < es.size(); ++e) es[e] = e;
  std::sort(es.begin(), es.end(), [&](EdgeId a, EdgeId b) { return F.edge_name(a) < F.edge_name(b); });
  if (!es.empty()) {
    s += "  edge";
    for (auto e : es) s += " " + quote(F.edge_name(e));
    s += "\n";
  }
  auto vs = F.vertices();
  std::sort(vs.begin(), vs.end(), [](const Vertex& a, const Vertex& b) { return a.name < b.name; });
  for (const auto& v : vs) {
    s += "  vertex " + quote(v.name) + ": [";
    for (std::size_t i = 0; i < v.inputs.size(); ++i) s += (i ? "," : "") + quote(F.edge_name(v.inputs[i]));
    s += "] -> " + quote(F.edge_name(v.output)) + "\n";
  }
  return s;
}

inline std::string serialize_simplex(const std::string& name, const LevelForest& A) {
  std::string s = "simplex " + quote(name) + "\n  level " + std::to_string(A.arity(0)) + "\n";
  for (std::size_t i = 1; i <= A.dimension(); ++i) s += "  map " + serialize(A.map(i)) + "\n";
  return s;
}

// Settings first, then every definition grouped by kind, each kind in name
// order. `bound` truncates operads that do not carry their own bound.
inline std::string serialize(const Workspace& ws, std::size_t bound = 3) {
  std::string s;
  if (ws.arity) s += "set arity " + std::to_string(*ws.arity) + "\n";
  if (ws.budget) s += "set budget " + std::to_string(*ws.budget) + "\n";
  const std::size_t N = ws.arity.value_or(bound);
  for (const auto& [k, v] : ws.categories) s += (s.empty() ? "" : "\n") + serialize_category(k, *v.category, v.marked);
  for (const auto& [k, v] : ws.operads) s += (s.empty() ? "" : "\n") + serialize_operad(k, v, v.max_arity().value_or(N));
  for (const auto& [k, v] : ws.forests) s += (s.empty() ? "" : "\n") + serialize_forest(k, *v);
  for (const auto& [k, v] : ws.simplices) s += (s.empty() ? "" : "\n") + serialize_simplex(k, v);
  return s;
}

}  // namespace opcat::cli
