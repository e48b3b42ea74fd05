// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.
// Criterion numbers given as arguments restrict the run to those.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "opcat/cli.hpp"
#include "support/over_base_corpus.hpp"
#include "support/random_operads.hpp"

using namespace opcat;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string failure;

  void fail(const std::string& why) {
    if (pass) failure = why;
    pass = false;
  }
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::vector<SetOperad> corpus_operads() { return {terminal_com(), trivial_operad(), free_operad(corolla(2)), sample_operad()}; }

Outcome diagram_operad_is_pullback() {
  Outcome out;
  double slowest = 0;
  std::size_t instances = 0;
  for (const auto& [name, K] : corpus::corpus_categories()) {
    for (const auto& O : corpus_operads()) {
      const Stopwatch clock;
      const auto w = operad_iso(diagram_operad(K, O), product_over_com(sqcup(K), O, 3), 3);
      const double t = clock.seconds();
      slowest = std::max(slowest, t);
      ++instances;
      const std::string id = name + " x " + O.name();
      if (!w) {
        out.fail(id + ": no isomorphism found");
      } else if (auto v = iso_witness_violations(*w); !v.empty()) {
        out.fail(id + ": witness invalid: " + v.front());
      }
      if (t >= 10) out.fail(id + ": took " + fixed(t) + " s");
    }
  }
  out.detail = std::to_string(instances) + " instances, slowest " + fixed(slowest) + " s";
  return out;
}

FinCategory power(const FinCategory& K, std::uint32_t n) {
  FinCategory P = terminal_category();
  for (std::uint32_t i = 0; i < n; ++i) P = i == 0 ? K : product(P, K);
  return P;
}

Outcome fiber_law() {
  Outcome out;
  double slowest = 0;
  std::size_t instances = 0;
  for (const auto& [name, K] : corpus::corpus_categories()) {
    for (std::uint32_t n = 0; n <= 3; ++n) {
      const Stopwatch clock;
      SearchBudget budget;
      const bool iso = category_iso(share(sqcup_fiber(*K, n)), share(power(*K, n)), budget).has_value();
      const double t = clock.seconds();
      slowest = std::max(slowest, t);
      ++instances;
      const std::string id = name + " n=" + std::to_string(n);
      if (!iso) out.fail(id + ": fiber is not isomorphic to K^n");
      if (t >= 5) out.fail(id + ": took " + fixed(t) + " s");
    }
  }
  out.detail = std::to_string(instances) + " instances, slowest " + fixed(slowest) + " s";
  return out;
}

Outcome representability() {
  Outcome out;
  std::size_t instances = 0, functors = 0;
  for (const auto& B : corpus::representability_corpus()) {
    if (B.category->object_count() > 6) out.fail(B.name + " has more than 6 objects");
    for (const auto& [name, K] : corpus::corpus_categories()) {
      SearchBudget budget;
      const auto r = sqcup_representability_check(B, K, budget);
      ++instances;
      functors += r.functors_to_sqcup;
      if (!r.ok()) out.fail(name + ": " + to_string(r));
    }
  }
  out.detail = std::to_string(instances) + " instances, " + std::to_string(functors) + " functors matched";
  return out;
}

Outcome fibrousness() {
  Outcome out;
  for (const auto& O : corpus_operads()) {
    const auto r = fibrous_check(operator_category(O, 3));
    if (!r.pass) out.fail(O.name() + ": " + r.condition + ": " + r.witness);
  }
  const auto mutants = fibrous_mutations(operator_category(sample_operad(), 3));
  if (mutants.size() != 10) out.fail("mutation corpus has " + std::to_string(mutants.size()) + " members");
  for (const auto& m : mutants) {
    const auto r = fibrous_check(m.category);
    if (r.pass) out.fail("mutant " + m.name + " passes");
    if (!r.pass && (r.condition.empty() || r.witness.empty())) out.fail("mutant " + m.name + " fails without a witness");
  }
  out.detail = std::to_string(corpus_operads().size()) + " operads pass, " + std::to_string(mutants.size()) + " mutants fail";
  return out;
}

Outcome universal_property() {
  Outcome out;
  double slowest = 0;
  std::size_t instances = 0;
  for (const auto& [name, K] : {corpus::corpus_categories()[0], corpus::corpus_categories()[1]}) {
    for (const auto& O : {trivial_operad(), terminal_com()}) {
      for (const auto& C : {terminal_com(), trivial_operad(), sample_operad()}) {
        const Stopwatch clock;
        const auto r = universal_property_check(K, O, C, 3);
        const double t = clock.seconds();
        slowest = std::max(slowest, t);
        ++instances;
        const std::string id = name + " " + O.name() + " " + C.name();
        if (!r.pass()) out.fail(id + ": " + r.witness);
        if (!r.isomorphism) out.fail(id + ": comparison is not an isomorphism");
        if (t >= 60) out.fail(id + ": took " + fixed(t) + " s");
      }
    }
  }
  out.detail = std::to_string(instances) + " instances, slowest " + fixed(slowest) + " s";
  return out;
}

Outcome omega_functoriality() {
  Outcome out;
  const auto sweep = omega_functoriality_sweep(3, 3);
  if (!sweep.ok()) out.fail(sweep.failures.front());
  if (!forest_iso(omega(LevelForest(1)), unit_tree())) out.fail("omega(<1>) is not the unit tree");
  std::size_t maps = 0;
  for (std::uint32_t n = 0; n <= 3; ++n) {
    for (std::uint32_t m = 0; m <= 3; ++m) {
      for (const auto& f : all_pointed_maps(n, m)) {
        const Forest F = omega(LevelForest(n, {f}));
        ++maps;
        if (F.vertex_count() != m || F.edge_count() != n + m) {
          out.fail("omega(" + serialize(f) + ") has " + std::to_string(F.vertex_count()) + " vertices and " +
                   std::to_string(F.edge_count()) + " edges");
        }
      }
    }
  }
  out.detail = std::to_string(sweep.chains) + " chains, " + std::to_string(sweep.morphisms_checked) + " operators, " +
               std::to_string(sweep.identity_checks) + " identity and " + std::to_string(sweep.composition_checks) +
               " composition checks, " + std::to_string(maps) + " one-simplices";
  return out;
}

Outcome operad_laws() {
  Outcome out;
  std::mt19937 rng(2026);
  std::size_t checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SetOperad O = corpus::random_small_operad(rng);
    const auto r = check_operad_laws(O, 3);
    checks += r.checks;
    if (!r.ok()) out.fail("trial " + std::to_string(trial) + " " + O.name() + ": " + r.failures.front());
  }
  // the text-format closure is a construction too
  for (int trial = 0; trial < 20; ++trial) {
    const SetOperad O = corpus::random_small_operad(rng, 0);
    const SetOperad back = cli::parse_workspace(cli::serialize_operad("O", O, 3)).operads.at("O");
    const auto r = check_operad_laws(back, 3);
    checks += r.checks;
    if (!r.ok()) out.fail("read back " + O.name() + ": " + r.failures.front());
  }
  out.detail = "120 operads, " + std::to_string(checks) + " law instances";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Every golden command plus the criterion-sized reports, run three times
// with one worker thread and once with four.
Outcome determinism() {
  Outcome out;
  const std::string dir = OPCAT_GOLDEN_DIR;
  std::vector<std::pair<cli::Invocation, std::string>> runs;  // invocation, workspace file
  std::istringstream cases(read_file(dir + "/cases.txt"));
  for (std::string line; std::getline(cases, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
      const auto bar = line.find('|', start);
      std::string f = line.substr(start, bar - start);
      f.erase(0, f.find_first_not_of(' '));
      f.erase(f.find_last_not_of(' ') + 1);
      fields.push_back(f);
      start = bar + 1;
    }
    std::istringstream words(line.substr(start));
    std::vector<std::string> argv;
    for (std::string w; words >> w;) argv.push_back(w);
    cli::Invocation inv{argv.front(), {}, std::nullopt, std::nullopt, false};
    try {
      for (std::size_t i = 1; i < argv.size(); ++i) {
        if (argv[i] == "--arity") {
          inv.arity = static_cast<std::uint32_t>(std::stoul(argv[++i]));
        } else if (argv[i] == "--budget") {
          inv.budget = std::stoull(argv[++i]);
        } else {
          inv.args.push_back(cli::split_argument(argv[i]));
        }
      }
    } catch (const Error&) {
      continue;
    }
    runs.emplace_back(inv, fields[2] == "-" ? "" : dir + "/" + fields[2]);
  }
  for (const char* X : {"sample", "triv", "Com"}) {
    runs.push_back({{"universal-check", {{"K", "I1"}, {"O", "triv"}, {"C", X}}, 3, std::nullopt, false}, ""});
  }
  runs.push_back({{"fibrous-check", {{"X", "sample"}}, 3, std::nullopt, false}, ""});
  runs.push_back({{"iso", {{"A", "diag(I2,sample)"}, {"B", "pull(sqcup(I2),sample)"}}, 3, std::nullopt, false}, ""});

  auto once = [&](const cli::Invocation& inv, const std::string& file) -> std::string {
    try {
      const cli::Workspace ws = file.empty() ? cli::Workspace{} : cli::parse_workspace(read_file(file));
      const auto r = cli::run(inv, ws);
      return std::to_string(r.exit_code) + "\n" + r.text + r.error;
    } catch (const Error& e) {
      return std::string("2\n") + e.what();
    }
  };
  std::size_t compared = 0;
  for (const auto& [inv, file] : runs) {
    set_worker_threads(1);
    const std::string first = once(inv, file);
    for (int rep = 0; rep < 2; ++rep)
      if (once(inv, file) != first) out.fail(inv.command + ": repeated runs differ");
    set_worker_threads(4);
    if (once(inv, file) != first) out.fail(inv.command + ": parallel run differs");
    set_worker_threads(1);
    ++compared;
  }
  out.detail = std::to_string(compared) + " reports, 3 serial runs and 1 parallel run each";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"diagram operad is the pullback over Com", diagram_operad_is_pullback},
      {"fiber of K^sqcup at <n> is K^n", fiber_law},
      {"representability of K^sqcup", representability},
      {"fibrousness and mutation corpus", fibrousness},
      {"universal property of the diagram operad", universal_property},
      {"omega functoriality", omega_functoriality},
      {"operad laws of constructions", operad_laws},
      {"determinism", determinism},
  };
  int failed = 0;
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const auto k = std::strtoul(argv[a], nullptr, 10);
    if (k >= 1 && k <= criteria.size()) selected[k - 1] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    const Stopwatch clock;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %zu (%s): %s [%s s]%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(),
                fixed(clock.seconds()).c_str(), o.pass ? "" : " -- ", o.failure.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
