#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "opcat/cli.hpp"
#include "support/random_categories.hpp"
#include "support/random_forests.hpp"
#include "support/random_operads.hpp"

using namespace opcat;
using namespace opcat::cli;

namespace {

const std::string golden_dir = OPCAT_GOLDEN_DIR;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Case {
  std::string name;
  int exit_code = 0;
  std::string workspace;  // empty for none
  std::vector<std::string> argv;
};

void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<Case> golden_cases() {
  std::vector<Case> out;
  std::istringstream in(read_file(golden_dir + "/cases.txt"));
  for (std::string line; std::getline(in, line);) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
      const auto bar = line.find('|', start);
      fields.push_back(trim(line.substr(start, bar - start)));
      start = bar + 1;
    }
    Case c{fields[0], std::stoi(fields[1]), fields[2] == "-" ? "" : fields[2], {}};
    std::istringstream words(line.substr(start));
    for (std::string w; words >> w;) c.argv.push_back(w);
    out.push_back(std::move(c));
  }
  return out;
}

struct Captured {
  int exit_code;
  std::string out, err;
};

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Captured run_binary(const std::vector<std::string>& argv, const std::string& workdir) {
  const std::string err_path = testing::TempDir() + "opcat_stderr.txt";
  std::string cmd = "cd " + shell_quote(workdir) + " && " + shell_quote(OPCAT_BINARY);
  for (const auto& a : argv) cmd += " " + shell_quote(a);
  cmd += " 2>" + shell_quote(err_path);
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, read_file(err_path)};
}

std::vector<std::string> case_argv(const Case& c) {
  auto argv = c.argv;
  if (!c.workspace.empty()) argv.insert(argv.end(), {"-w", c.workspace});
  return argv;
}

std::string transcript(const Captured& r) { return r.out + (r.err.empty() ? "" : "--- stderr\n" + r.err); }

// In-process equivalent of the binary for one golden case.
Report run_case(const Case& c) {
  Workspace ws;
  if (!c.workspace.empty()) ws = parse_workspace(read_file(golden_dir + "/" + c.workspace));
  Invocation inv{c.argv.front(), {}, std::nullopt, std::nullopt, false};
  for (std::size_t i = 1; i < c.argv.size(); ++i) {
    if (c.argv[i] == "--arity") {
      inv.arity = static_cast<std::uint32_t>(std::stoul(c.argv[++i]));
    } else if (c.argv[i] == "--budget") {
      inv.budget = std::stoull(c.argv[++i]);
    } else {
      inv.args.push_back(split_argument(c.argv[i]));
    }
  }
  return run(inv, ws);
}

bool parses(const Case& c) {
  try {
    if (!c.workspace.empty()) parse_workspace(read_file(golden_dir + "/" + c.workspace));
    return true;
  } catch (const Error&) {
    return false;
  }
}

class Golden : public testing::TestWithParam<Case> {};

std::string case_name(const testing::TestParamInfo<Case>& info) { return info.param.name; }

}  // namespace

TEST_P(Golden, MatchesTranscriptAndExitCode) {
  const Case& c = GetParam();
  const auto r = run_binary(case_argv(c), golden_dir);
  EXPECT_EQ(r.exit_code, c.exit_code) << transcript(r);
  EXPECT_EQ(!r.err.empty(), c.exit_code == 2) << transcript(r);
  const std::string path = golden_dir + "/" + c.name + ".out";
  if (std::getenv("OPCAT_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << transcript(r);
    return;
  }
  EXPECT_EQ(transcript(r), read_file(path));
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, testing::ValuesIn(golden_cases()), case_name);

TEST(Cli, InProcessRunAgreesWithBinary) {
  for (const auto& c : golden_cases()) {
    if (!parses(c)) continue;
    const auto r = run_case(c);
    const auto b = run_binary(case_argv(c), golden_dir);
    EXPECT_EQ(r.exit_code, b.exit_code) << c.name;
    EXPECT_EQ(r.text, b.out) << c.name;
  }
}

TEST(Cli, ReportsAreByteStableAcrossRunsAndThreads) {
  for (const auto& c : golden_cases()) {
    if (!parses(c)) continue;
    set_worker_threads(1);
    const auto first = run_case(c);
    for (int rep = 0; rep < 2; ++rep) EXPECT_EQ(run_case(c).text, first.text) << c.name;
    set_worker_threads(4);
    EXPECT_EQ(run_case(c).text, first.text) << c.name;
    set_worker_threads(1);
  }
}

TEST(Cli, TimingOnlyWhenAsked) {
  Invocation inv{"gamma-star", {}, 1, std::nullopt, false};
  EXPECT_EQ(run(inv, {}).text.find("timing:"), std::string::npos);
  inv.timing = true;
  EXPECT_NE(run(inv, {}).text.find("timing:"), std::string::npos);
}

TEST(Cli, OutFlagWritesReport) {
  const std::string path = testing::TempDir() + "opcat_report.txt";
  const auto r = run_binary({"fibrous-check", "X=Com", "--out", path}, golden_dir);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(read_file(path), read_file(golden_dir + "/fibrous_com.out"));
}

TEST(Cli, DotExport) {
  const std::string path = testing::TempDir() + "opcat_graph.dot";
  const auto r = run_binary({"omega", "A=chain(2->1:[1,1])", "--dot", path}, golden_dir);
  EXPECT_EQ(r.exit_code, 0);
  const auto dot = read_file(path);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("e1_1"), std::string::npos);
}

TEST(Workspace, EmptyFileIsEmptyWorkspace) {
  EXPECT_TRUE(parse_workspace("").empty());
  EXPECT_TRUE(parse_workspace("# nothing\n\n   \n").empty());
}

TEST(Workspace, WalkingArrow) {
  const auto ws = parse_workspace(read_file(golden_dir + "/walking_arrow.ws"));
  const auto& A = *ws.categories.at("A").category;
  EXPECT_EQ(A.object_count(), 2u);
  EXPECT_EQ(A.arrow_count(), 3u);
  SearchBudget budget;
  EXPECT_TRUE(category_iso(ws.categories.at("A").category, share(ordinal_category(1)), budget).has_value());
}

TEST(Workspace, ErrorsCarryKindLineAndColumn) {
  auto expect_error = [](const std::string& text, ErrorKind kind, const std::string& where) {
    try {
      parse_workspace(text);
      ADD_FAILURE() << "no error for\n" << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind) << e.what();
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
    }
  };
  expect_error("operad P\n  color x\n  op p: (x,y) -> x\n", ErrorKind::unresolved_name, "line 3, column 12");
  expect_error("category K\n  obj a\n\nforest K\n  edge e\n", ErrorKind::duplicate_name, "line 4, column 8");
  expect_error("category K\n  obj a a\n", ErrorKind::duplicate_name, "line 2, column 9");
  expect_error("category K\n  obj a b\n  arr f a -> b\n", ErrorKind::parse, "line 3, column 9");
  expect_error("  obj a\n", ErrorKind::parse, "line 1, column 3");
  expect_error("category \"K\n", ErrorKind::parse, "line 1, column 10");
  expect_error("set colour 3\n", ErrorKind::parse, "line 1, column 5");
  expect_error("simplex S\n  map 2->1:[1,3]\n", ErrorKind::parse, "line 2, column 7");
  expect_error("simplex S\n  map 2->1:[1,1]\n  map 2->1:[1,1]\n", ErrorKind::arity_mismatch, "line 1, column 9");
  expect_error("operad P\n  color x\n  op p: (x,x) -> x\n  sym p [1,1] = p\n", ErrorKind::parse, "line 4, column 9");
  expect_error("forest F\n  edge a\n  vertex v: [a] -> a\n", ErrorKind::invalid_structure, "line 1, column 8");
}

TEST(Workspace, QuotedNamesAndComments) {
  const auto ws = parse_workspace(
      "category \"two words\"  # trailing comment\n"
      "  obj \"a b\" \"c\\\"d\"\n"
      "  arr \"f.g\": \"a b\" -> \"c\\\"d\"\n");
  const auto& C = *ws.categories.at("two words").category;
  EXPECT_EQ(C.object_name(1), "c\"d");
  EXPECT_EQ(C.arrow_name(0), "f.g");
  EXPECT_EQ(parse_workspace(serialize(ws)).categories.at("two words").category->arrow_name(0), "f.g");
}

TEST(Workspace, ClosureCompletesCyclicGroup) {
  // Z/3 from two entries; associativity forces the rest
  const auto ws = parse_workspace("category Z3\n  obj g\n  arr s: g -> g\n  arr t: g -> g\n  cmp s.s = t\n  cmp s.t = id_g\n");
  SearchBudget budget;
  EXPECT_TRUE(category_iso(ws.categories.at("Z3").category, share(corpus::cyclic_group(3)), budget).has_value());
  EXPECT_THROW(parse_workspace("category Z3\n  obj g\n  arr s: g -> g\n  arr t: g -> g\n  cmp s.s = t\n"), Error);
}

TEST(Workspace, ClosureUsesSingletonHoms) {
  const auto ws = parse_workspace(read_file(golden_dir + "/corpus.ws"));
  const auto& C = *ws.categories.at("Chain").category;
  EXPECT_EQ(C.arrow_name(C.compose(*C.find_arrow("g"), *C.find_arrow("f"))), "h");
}

TEST(Workspace, OperadClosureRecoversCommutativeMonoid) {
  const auto ws = parse_workspace(read_file(golden_dir + "/corpus.ws"));
  const SetOperad& Mon = ws.operads.at("Mon");
  EXPECT_TRUE(check_operad_laws(Mon, 3).ok());
  EXPECT_TRUE(operad_iso(Mon, terminal_com(), 3).has_value());
}

TEST(Workspace, ImplicitUnitsAndIdentities) {
  const auto ws = parse_workspace("operad P\n  color a b\n  op u: (a) -> b\ncategory K\n  obj x\n");
  const SetOperad& P = ws.operads.at("P");
  EXPECT_EQ(P.op_name({{0}, 0}, P.unit(0).index), "id_a");
  EXPECT_EQ(ws.categories.at("K").category->arrow_name(0), "id_x");
}

TEST(Workspace, NamesAreUniqueAcrossFiles) {
  Workspace ws = parse_workspace("category K\n  obj a\n");
  EXPECT_THROW(merge(ws, parse_workspace("operad K\n  color c\n")), Error);
}

TEST(Workspace, ReportOutputReadsBack) {
  Invocation inv{"diagram-operad", {{"K", "I1"}, {"O", "sample"}}, 2, std::nullopt, false};
  const auto r = run(inv, {});
  ASSERT_EQ(r.exit_code, 0);
  const auto ws = parse_workspace(r.text);
  const SetOperad& D = ws.operads.at("diagram-operad(I1,sample)");
  EXPECT_TRUE(operad_iso(D, diagram_operad(share(ordinal_category(1, {"a", "b"})), sample_operad()), 2).has_value());
}

TEST(RoundTrip, RandomCategories) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const auto C = share(corpus::random_small_category(rng));
    const std::string once = serialize_category("C", *C);
    const auto back = parse_workspace(once).categories.at("C").category;
    SearchBudget budget;
    EXPECT_TRUE(category_iso(C, back, budget).has_value()) << once;
    EXPECT_EQ(serialize_category("C", *back), once);
  }
}

TEST(RoundTrip, RandomOperads) {
  std::mt19937 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const SetOperad O = corpus::random_small_operad(rng);
    const std::string once = serialize_operad("O", O, 3);
    const SetOperad back = parse_workspace(once).operads.at("O");
    EXPECT_TRUE(operad_iso(O, back, 3).has_value()) << once;
    EXPECT_EQ(serialize_operad("O", back, 3), once);
  }
}

TEST(RoundTrip, ConstructedOperadsNormalizeOnce) {
  for (const auto& O : {sqcup(walking_isomorphism()), diagram_operad(share(ordinal_category(1)), sample_operad()),
                        product_over_com(sqcup(discrete_category({"a", "b"})), sample_operad(), 2), free_operad(corolla(2))}) {
    Workspace ws;
    ws.operads.emplace("X", O);
    const std::string once = serialize(ws, 2);
    const std::string twice = serialize(parse_workspace(once), 2);
    EXPECT_EQ(serialize(parse_workspace(twice), 2), twice) << O.name();
    EXPECT_TRUE(operad_iso(O, parse_workspace(once).operads.at("X"), 2).has_value()) << O.name();
  }
}

TEST(RoundTrip, RandomForestsAndSimplices) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const auto F = corpus::random_forest(rng, 7);
    const std::string once = serialize_forest("F", F);
    const auto back = parse_workspace(once).forests.at("F");
    EXPECT_TRUE(forest_iso(F, *back).has_value()) << once;
    EXPECT_EQ(serialize_forest("F", *back), once);
  }
  for_each_chain(2, 2, [](const LevelForest& A) {
    const std::string once = serialize_simplex("S", A);
    EXPECT_EQ(parse_workspace(once).simplices.at("S"), A) << once;
  });
}

TEST(RoundTrip, ShuffledWorkspaceGivesSameReports) {
  const std::string text = read_file(golden_dir + "/corpus.ws");
  std::vector<std::string> blocks;
  std::string settings;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("set ", 0) == 0) {
      settings += line + "\n";
    } else if (line.rfind("category", 0) == 0 || line.rfind("operad", 0) == 0 || line.rfind("forest", 0) == 0 ||
               line.rfind("simplex", 0) == 0) {
      blocks.push_back(line + "\n");
    } else if (!blocks.empty()) {
      blocks.back() += line + "\n";
    }
  }
  const Workspace base = parse_workspace(text);
  Invocation validate{"validate", {}, std::nullopt, std::nullopt, false};
  const auto expected = run(validate, base).text;
  std::mt19937 rng(24);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(blocks.begin(), blocks.end(), rng);
    std::string shuffled;
    for (const auto& b : blocks) shuffled += b;
    const Workspace ws = parse_workspace(shuffled + settings);
    EXPECT_EQ(run(validate, ws).text, expected);
    EXPECT_EQ(serialize(ws), serialize(base));
  }
}
