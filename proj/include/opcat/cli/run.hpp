#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "opcat/cli/workspace.hpp"
#include "opcat/parallel.hpp"
#include "opcat/verify.hpp"

namespace opcat::cli {

struct Invocation {
  std::string command;
  std::vector<std::pair<std::string, std::string>> args;  // NAME=expr, in command-line order
  std::optional<std::uint32_t> arity;
  std::optional<std::uint64_t> budget;
  bool timing = false;
};

struct Report {
  int exit_code = 0;
  std::string text;  // stdout
  std::string error;  // stderr, set when exit_code == 2
  std::string dot;    // graph export of a constructed category or forest
};

using Value = std::variant<CategoryDef, SetOperad, ForestPtr, LevelForest, OperatorCategory, std::uint64_t>;

inline std::string kind_name(const Value& v) {
  static const char* names[] = {"category", "operad", "forest", "simplex", "operator category", "number"};
  return names[v.index()];
}

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> all{"validate", "sqcup",          "gamma-star", "diagram-operad", "pullback-com", "operator-cat",
                                            "fibrous-check", "iso",     "alg",        "universal-check", "omega",       "phi-hom"};
  return all;
}

struct Context {
  const Workspace& ws;
  std::uint32_t N;
  SearchBudget& budget;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const Context& ctx) : s_(text), ctx_(ctx) {}

  Value parse() {
    Value v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::parse, "in '" + std::string(s_) + "' at column " + std::to_string(i_ + 1) + ": " + what);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  std::pair<std::string, bool> name() {
    skip();
    if (i_ < s_.size() && s_[i_] == '"') {
      std::string out;
      for (++i_; i_ < s_.size() && s_[i_] != '"'; ++i_) {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
        out += s_[i_];
      }
      if (i_ == s_.size()) fail("unterminated quoted name");
      ++i_;
      return {out, true};
    }
    const std::size_t start = i_;
    while (i_ < s_.size() && name_char(s_[i_])) ++i_;
    if (start == i_) fail(i_ < s_.size() ? "expected a name" : "unexpected end of expression");
    return {std::string(s_.substr(start, i_ - start)), false};
  }

  Value expr() {
    const auto [head, quoted] = name();
    if (!quoted && std::all_of(head.begin(), head.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      if (head.size() > 12) fail("number too large");
      return std::uint64_t{std::stoull(head)};
    }
    if (quoted || !eat('(')) return lookup(head);
    if (head == "chain") return chain();
    std::vector<Value> args;
    if (!eat(')')) {
      do args.push_back(expr());
      while (eat(','));
      if (!eat(')')) fail("expected ')'");
    }
    return apply(head, args);
  }

  // chain(<k>) or chain(n->m:[...]; m->l:[...])
  Value chain() {
    const std::size_t close = s_.find(')', i_);
    if (close == std::string_view::npos) fail("expected ')'");
    const std::string body(s_.substr(i_, close - i_));
    i_ = close + 1;
    std::vector<PointedMap> maps;
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t end = std::min(body.find(';', start), body.size());
      std::string part = body.substr(start, end - start);
      part.erase(0, part.find_first_not_of(" \t"));
      part.erase(part.find_last_not_of(" \t") + 1);
      if (!part.empty() && part.find("->") == std::string::npos) {
        if (!maps.empty() || end != body.size()) fail("a chain is one level <k> or a list of maps");
        std::string k = part;
        if (k.size() > 2 && k.front() == '<' && k.back() == '>') k = k.substr(1, k.size() - 2);
        if (k.empty() || k.size() > 6 || !std::all_of(k.begin(), k.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          fail("bad level '" + part + "'");
        }
        return LevelForest(static_cast<std::uint32_t>(std::stoul(k)));
      }
      maps.push_back(parse_pointed_map(part));
      start = end + 1;
    }
    if (maps.empty()) fail("empty chain");
    return LevelForest(maps.front().source, maps);
  }

  Value lookup(const std::string& n) const {
    const Workspace& ws = ctx_.ws;
    if (auto it = ws.categories.find(n); it != ws.categories.end()) return it->second;
    if (auto it = ws.operads.find(n); it != ws.operads.end()) return it->second;
    if (auto it = ws.forests.find(n); it != ws.forests.end()) return it->second;
    if (auto it = ws.simplices.find(n); it != ws.simplices.end()) return it->second;
    auto category = [](FinCategory C) { return CategoryDef{share(std::move(C)), {}}; };
    if (n == "pt") return category(terminal_category());
    if (n == "I1") return category(ordinal_category(1, {"a", "b"}));
    if (n == "I2") return category(ordinal_category(2, {"a", "b", "c"}));
    if (n == "Iso") return category(walking_isomorphism());
    if (n == "Disc2") return category(discrete_category({"a", "b"}));
    if (n == "Com") return terminal_com();
    if (n == "triv") return trivial_operad();
    if (n == "sample") return sample_operad();
    if (n == "eta") return share(unit_tree());
    if (n == "corrupted") {
      auto mutations = fibrous_mutations(operator_category(sample_operad(), ctx_.N));
      return std::move(mutations.front().category);
    }
    throw Error(ErrorKind::unresolved_name, "'" + n + "' is neither defined in the workspace nor built in");
  }

  template <class T>
  const T& as(const std::string& fn, const std::vector<Value>& args, std::size_t i, const char* what) const {
    if (const T* p = std::get_if<T>(&args[i])) return *p;
    throw Error(ErrorKind::parse, fn + ": argument " + std::to_string(i + 1) + " must be " + what + ", got " + kind_name(args[i]));
  }
  std::uint32_t small(const std::string& fn, const std::vector<Value>& args, std::size_t i, std::uint64_t max) const {
    const auto n = as<std::uint64_t>(fn, args, i, "a number");
    if (n > max) throw Error(ErrorKind::parse, fn + ": " + std::to_string(n) + " exceeds " + std::to_string(max));
    return static_cast<std::uint32_t>(n);
  }

  Value apply(const std::string& fn, const std::vector<Value>& args) const {
    auto arity = [&](std::size_t n) {
      if (args.size() != n) throw Error(ErrorKind::parse, fn + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
    };
    const std::uint32_t N = ctx_.N;
    if (fn == "sqcup") {
      arity(1);
      return sqcup(as<CategoryDef>(fn, args, 0, "a category").category);
    }
    if (fn == "diag") {
      arity(2);
      return diagram_operad(as<CategoryDef>(fn, args, 0, "a category").category, as<SetOperad>(fn, args, 1, "an operad"));
    }
    if (fn == "pull") {
      arity(2);
      return product_over_com(as<SetOperad>(fn, args, 0, "an operad"), as<SetOperad>(fn, args, 1, "an operad"), N);
    }
    if (fn == "free") {
      arity(1);
      return free_operad(as<ForestPtr>(fn, args, 0, "a forest"));
    }
    if (fn == "triv") {
      arity(1);
      return trivial_operad(small(fn, args, 0, 64));
    }
    if (fn == "finstar") {
      arity(1);
      return CategoryDef{FinStar(small(fn, args, 0, 6)).category(), {}};
    }
    if (fn == "gammastar") {
      arity(1);
      return CategoryDef{gamma_star_truncated(small(fn, args, 0, 6)).category, {}};
    }
    if (fn == "fiber") {
      arity(2);
      return CategoryDef{share(sqcup_fiber(*as<CategoryDef>(fn, args, 0, "a category").category, small(fn, args, 1, 6))), {}};
    }
    if (fn == "corolla") {
      arity(1);
      return share(corolla(small(fn, args, 0, 64)));
    }
    if (fn == "omega") {
      arity(1);
      return share(omega(as<LevelForest>(fn, args, 0, "a simplex")));
    }
    if (fn == "operators") {
      arity(1);
      return operator_category(as<SetOperad>(fn, args, 0, "an operad"), N);
    }
    if (fn == "mutant") {
      arity(2);
      const auto X = operator_category(as<SetOperad>(fn, args, 0, "an operad"), N);
      auto mutations = fibrous_mutations(X);
      const auto i = as<std::uint64_t>(fn, args, 1, "a number");
      if (i >= mutations.size()) {
        throw Error(ErrorKind::parse, fn + ": only " + std::to_string(mutations.size()) + " mutations (numbered from 0)");
      }
      return std::move(mutations[i].category);
    }
    throw Error(ErrorKind::unresolved_name, "unknown function '" + fn + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
  const Context& ctx_;
};

}  // namespace detail

inline Value evaluate(std::string_view expr, const Context& ctx) { return detail::ExprParser(expr, ctx).parse(); }

namespace detail {

struct Outcome {
  std::string verdict;  // pass, fail or constructed
  std::string body;
  std::string dot;
};

class Args {
 public:
  Args(const Invocation& inv, const Context& ctx, std::vector<std::string> allowed) : inv_(inv), ctx_(ctx) {
    for (const auto& [k, v] : inv.args) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw Error(ErrorKind::parse, inv.command + " does not take an argument " + k);
      }
      if (std::count_if(inv.args.begin(), inv.args.end(), [&](const auto& a) { return a.first == k; }) > 1) {
        throw Error(ErrorKind::duplicate_name, "argument " + k + " given twice");
      }
    }
  }

  const std::string& text(const std::string& key) const {
    for (const auto& [k, v] : inv_.args)
      if (k == key) return v;
    throw Error(ErrorKind::parse, inv_.command + " needs an argument " + key + "=...");
  }
  bool has(const std::string& key) const {
    return std::any_of(inv_.args.begin(), inv_.args.end(), [&](const auto& a) { return a.first == key; });
  }
  Value value(const std::string& key) const { return evaluate(text(key), ctx_); }

  template <class T>
  T get(const std::string& key, const char* what) const {
    Value v = value(key);
    if (T* p = std::get_if<T>(&v)) return std::move(*p);
    throw Error(ErrorKind::parse, key + "=" + text(key) + " is " + kind_name(v) + ", expected " + what);
  }
  CategoryPtr category(const std::string& key) const { return get<CategoryDef>(key, "a category").category; }
  SetOperad operad(const std::string& key) const { return get<SetOperad>(key, "an operad"); }

 private:
  const Invocation& inv_;
  const Context& ctx_;
};

inline std::string count_line(const std::string& label, const FinCategory& C) {
  return label + ": " + std::to_string(C.object_count()) + " objects, " + std::to_string(C.arrow_count()) + " arrows\n";
}

inline Outcome validate(const Invocation& inv, const Context& ctx) {
  Args(inv, ctx, {});
  Outcome out{"pass", "", ""};
  const Workspace& ws = ctx.ws;
  if (ws.empty()) out.body = "empty workspace\n";
  for (const auto& [name, def] : ws.categories) out.body += count_line("category " + quote(name), *def.category);
  for (const auto& [name, O] : ws.operads) {
    const std::size_t bound = O.max_arity() ? std::min<std::size_t>(*O.max_arity(), ctx.N) : ctx.N;
    const OperadIndex index(O, bound);
    const auto laws = check_operad_laws(O, bound);
    out.body += "operad " + quote(name) + ": " + std::to_string(O.color_count()) + " colors, " + std::to_string(index.size()) +
                " operations up to arity " + std::to_string(bound) + ", laws " + (laws.ok() ? "hold" : "fail") + " (" +
                std::to_string(laws.checks) + " checks)\n";
    for (const auto& f : laws.failures) out.body += "witness: " + f + "\n";
    if (!laws.ok()) out.verdict = "fail";
  }
  for (const auto& [name, F] : ws.forests) {
    out.body += "forest " + quote(name) + ": " + std::to_string(F->edge_count()) + " edges, " + std::to_string(F->vertex_count()) +
                " vertices, " + std::to_string(F->roots().size()) + " roots\n";
  }
  for (const auto& [name, A] : ws.simplices) out.body += "simplex " + quote(name) + ": " + serialize(A) + "\n";
  return out;
}

inline std::string operad_name(const Invocation& inv) {
  std::string s = inv.command + "(";
  for (std::size_t i = 0; i < inv.args.size(); ++i) s += (i ? "," : "") + inv.args[i].second;
  return s + ")";
}

inline Outcome constructed(std::string body, std::string dot = {}) { return {"constructed", std::move(body), std::move(dot)}; }

// Cheap invariants that tell two operads apart, for the non-isomorphism witness.
inline std::string operad_difference(const SetOperad& A, const SetOperad& B, std::size_t bound) {
  if (A.color_count() != B.color_count()) {
    return std::to_string(A.color_count()) + " colors against " + std::to_string(B.color_count());
  }
  const OperadIndex a(A, bound), b(B, bound);
  for (std::size_t n = 0; n <= bound; ++n) {
    std::size_t x = 0, y = 0;
    for (const auto& op : a.all()) x += op.signature.arity() == n;
    for (const auto& op : b.all()) y += op.signature.arity() == n;
    if (x != y) return std::to_string(x) + " operations of arity " + std::to_string(n) + " against " + std::to_string(y);
  }
  return "no bijection of colors extends to the operations up to arity " + std::to_string(bound);
}

inline Outcome iso(const Invocation& inv, const Context& ctx) {
  const Args args(inv, ctx, {"A", "B"});
  Value a = args.value("A"), b = args.value("B");
  if (a.index() != b.index()) throw Error(ErrorKind::parse, "iso compares a " + kind_name(a) + " with a " + kind_name(b));
  if (auto* A = std::get_if<SetOperad>(&a)) {
    const SetOperad& B = std::get<SetOperad>(b);
    auto w = operad_iso(*A, B, ctx.N, ctx.budget);
    if (!w) return {"fail", "witness: " + operad_difference(*A, B, ctx.N) + "\n", ""};
    if (auto v = iso_witness_violations(*w); !v.empty()) return {"fail", "witness: " + v.front() + "\n", ""};
    return {"pass", "forward " + to_string(w->forward) + "backward " + to_string(w->backward), ""};
  }
  if (auto* C = std::get_if<CategoryDef>(&a)) {
    const CategoryPtr& D = std::get<CategoryDef>(b).category;
    auto w = category_iso(C->category, D, ctx.budget);
    if (!w) {
      auto size = [](const FinCategory& X) {
        return std::to_string(X.object_count()) + " objects, " + std::to_string(X.arrow_count()) + " arrows";
      };
      if (C->category->object_count() != D->object_count() || C->category->arrow_count() != D->arrow_count()) {
        return {"fail", "witness: " + size(*C->category) + " against " + size(*D) + "\n", ""};
      }
      return {"fail", "witness: no bijection of objects and arrows is a functor\n", ""};
    }
    std::string body = "objects:";
    for (ObjectId x = 0; x < C->category->object_count(); ++x)
      body += " " + quote(C->category->object_name(x)) + "->" + quote(D->object_name(w->first(x)));
    body += "\narrows:";
    for (ArrowId f = 0; f < C->category->arrow_count(); ++f)
      body += " " + quote(C->category->arrow_name(f)) + "->" + quote(D->arrow_name(w->first.map_arrow(f)));
    return {"pass", body + "\n", ""};
  }
  if (auto* F = std::get_if<ForestPtr>(&a)) {
    const ForestPtr& G = std::get<ForestPtr>(b);
    auto w = forest_iso(**F, *G);
    if (!w) return {"fail", "witness: no edge bijection preserves the vertices\n", ""};
    std::string body = "edges:";
    for (EdgeId e = 0; e < w->size(); ++e) body += " " + quote((*F)->edge_name(e)) + "->" + quote(G->edge_name((*w)[e]));
    return {"pass", body + "\n", ""};
  }
  throw Error(ErrorKind::parse, "iso compares operads, categories or forests");
}

inline Outcome dispatch(const Invocation& inv, const Context& ctx) {
  const std::string& c = inv.command;
  const std::string name = operad_name(inv);
  if (c == "validate") return validate(inv, ctx);
  if (c == "iso") return iso(inv, ctx);
  if (c == "sqcup") {
    const Args args(inv, ctx, {"K"});
    return constructed(serialize_operad(name, sqcup(args.category("K")), ctx.N));
  }
  if (c == "diagram-operad") {
    const Args args(inv, ctx, {"K", "O"});
    return constructed(serialize_operad(name, diagram_operad(args.category("K"), args.operad("O")), ctx.N));
  }
  if (c == "pullback-com") {
    const Args args(inv, ctx, {"A", "B"});
    return constructed(serialize_operad(name, product_over_com(args.operad("A"), args.operad("B"), ctx.N), ctx.N));
  }
  if (c == "gamma-star") {
    const Args args(inv, ctx, {});
    const auto G = gamma_star_truncated(ctx.N);
    return constructed(serialize_category("gamma*<=" + std::to_string(ctx.N), *G.category), to_dot(*G.category, "gamma*"));
  }
  if (c == "operator-cat") {
    const Args args(inv, ctx, {"O"});
    const Value v = args.value("O");
    OperatorCategory X;
    if (auto* O = std::get_if<SetOperad>(&v)) {
      X = operator_category(*O, ctx.N);
    } else if (auto* Y = std::get_if<OperatorCategory>(&v)) {
      X = *Y;
    } else {
      throw Error(ErrorKind::parse, "O=" + args.text("O") + " is " + kind_name(v) + ", expected an operad");
    }
    return constructed(serialize_category(name, *X.total, X.marked), to_dot(*X.total, name));
  }
  if (c == "fibrous-check") {
    const Args args(inv, ctx, {"X"});
    const Value v = args.value("X");
    FibrousReport r;
    if (auto* O = std::get_if<SetOperad>(&v)) {
      r = fibrous_check(operator_category(*O, ctx.N));
    } else if (auto* X = std::get_if<OperatorCategory>(&v)) {
      r = fibrous_check(*X);
    } else {
      throw Error(ErrorKind::parse, "X=" + args.text("X") + " is " + kind_name(v) + ", expected an operad or operator category");
    }
    return {r.pass ? "pass" : "fail", to_string(r), ""};
  }
  if (c == "alg") {
    const Args args(inv, ctx, {"O", "C"});
    const auto A = alg_category(args.operad("O"), args.operad("C"), ctx.N, ctx.budget);
    const auto cat = A.category();
    return constructed(serialize_category(name, *cat), to_dot(*cat, name));
  }
  if (c == "universal-check") {
    const Args args(inv, ctx, {"K", "O", "C"});
    const auto r = universal_property_check(args.category("K"), args.operad("O"), args.operad("C"), ctx.N, ctx.budget);
    return {r.pass() ? "pass" : "fail", to_string(r), ""};
  }
  if (c == "omega") {
    const Args args(inv, ctx, {"A"});
    const Forest F = omega(args.get<LevelForest>("A", "a simplex"));
    return constructed(serialize_forest(name, F), to_dot(F, name));
  }
  if (c == "phi-hom") {
    const Args args(inv, ctx, {"F", "G"});
    const auto F = args.get<ForestPtr>("F", "a forest"), G = args.get<ForestPtr>("G", "a forest");
    const auto homs = phi_hom(F, G, ctx.budget);
    std::string body = "morphisms: " + std::to_string(homs.size()) + "\n";
    for (const auto& m : homs) {
      body += " ";
      for (EdgeId e = 0; e < m.on_edges.size(); ++e) body += " " + quote(F->edge_name(e)) + "->" + quote(G->edge_name(m(e)));
      body += "\n";
    }
    return constructed(body);
  }
  throw Error(ErrorKind::parse, "unknown command '" + c + "'");
}

}  // namespace detail

// Runs one command. Exit code 0 for pass or a constructed object, 1 for a
// failed check, 2 for errors.
inline Report run(const Invocation& inv, const Workspace& ws) {
  const std::uint32_t N = inv.arity.value_or(ws.arity.value_or(3));
  const std::uint64_t limit = inv.budget.value_or(ws.budget.value_or(SearchBudget::default_verify_limit));
  std::string echo = "command: " + inv.command;
  for (const auto& [k, v] : inv.args) echo += " " + k + "=" + v;
  echo += "\nsettings: arity=" + std::to_string(N) + " budget=" + std::to_string(limit) + "\n";
  Report report;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (N < 1 || N > 6) throw Error(ErrorKind::parse, "arity bound must lie in 1..6");
    SearchBudget budget(limit);
    const Context ctx{ws, N, budget};
    auto out = detail::dispatch(inv, ctx);
    report.exit_code = out.verdict == "fail" ? 1 : 0;
    report.text = echo + "verdict: " + out.verdict + "\n" + out.body;
    report.dot = std::move(out.dot);
  } catch (const Error& e) {
    report.exit_code = 2;
    report.error = e.what();
    report.text = echo + "verdict: error\n";
  } catch (const std::exception& e) {
    report.exit_code = 2;
    report.error = std::string("error: ") + e.what();
    report.text = echo + "verdict: error\n";
  }
  if (inv.timing) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", dt.count());
    report.text += std::string("timing: ") + buf + " s\n";
  }
  return report;
}

// Splits NAME=expr.
inline std::pair<std::string, std::string> split_argument(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || !plain_name(arg.substr(0, eq))) {
    throw Error(ErrorKind::parse, "argument '" + arg + "' is not of the form NAME=expression");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

}  // namespace opcat::cli
