#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int status;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("sigma_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  Invocation run(const std::string& args) {
    const std::string cmd = "cd '" + dir.string() + "' && '" SIGMA_COLOUR_BIN "' " + args + " 2>&1";
    FILE* p = ::popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
    const int st = ::pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
  }

  // First line that is not a comment.
  static std::string value(const std::string& out) {
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);)
      if (!line.empty() && line[0] != '#') return line;
    return {};
  }

  std::string slurp(const std::string& name) {
    std::ifstream in(dir / name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir / name) << text; }

  fs::path dir;
};

}  // namespace

TEST_F(Cli, WegnerSquareClique) {
  ASSERT_EQ(run("gen wegner --k 4 -o w4.graph").status, 0);
  auto r = run("clique --square w4.graph");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(value(r.out), "13");
}

TEST_F(Cli, ShannonFractionalChromaticIndex) {
  ASSERT_EQ(run("gen shannon --mu 2 -o t.mg").status, 0);
  auto r = run("polytope chi-f t.mg");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(value(r.out), "6");
}

TEST_F(Cli, SubdividedCompleteExactColouring) {
  ASSERT_EQ(run("gen subdivided_complete --k 4 -o s4.inst").status, 0);
  auto r = run("colour --mode exact s4.inst -o s4.col");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(value(r.out), "4");
  EXPECT_EQ(run("check s4.inst --colouring s4.col").status, 0);
}

TEST_F(Cli, HeaderRecordsVersionSeedAndFlags) {
  auto r = run("gen random-planar --n 12 --seed 9");
  EXPECT_EQ(r.out.rfind("# sigma_colour ", 0), 0u);
  EXPECT_NE(r.out.find("seed=9"), std::string::npos);
  EXPECT_NE(r.out.find("args: gen random-planar --n 12 --seed 9"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("frobnicate").status, 1);
  EXPECT_EQ(run("gen wegner --k 4 --unknown-flag").status, 1);
  write("bad.graph", "surface_chi 2 cellular 1\nrot 0: 1\n");
  auto bad = run("clique bad.graph");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.out.find("error:"), std::string::npos);
  ASSERT_EQ(run("gen subdivided_complete --k 5 -o s5.inst").status, 0);
  auto fail = run("colour --mode greedy --lists 3 s5.inst");
  EXPECT_EQ(fail.status, 2);
  EXPECT_NE(fail.out.find("greedy colouring failed at vertex"), std::string::npos);
  write("clash.col", "col 0 1\n");
  EXPECT_EQ(run("check s5.inst --colouring clash.col").status, 2);
}

TEST_F(Cli, SeededCommandsAreByteDeterministic) {
  for (int i = 0; i < 2; ++i) {
    const std::string n = std::to_string(i);
    ASSERT_EQ(run("gen random-planar --n 30 --sigma random --seed 5 -o g" + n).status, 0);
  }
  EXPECT_EQ(slurp("g0").substr(slurp("g0").find('\n')), slurp("g1").substr(slurp("g1").find('\n')));
  // Identical argv: identical output, header included.
  auto a = run("colour g0 --mode pipeline --zeta 6 --lists 30 --seed 3");
  auto b = run("colour g0 --mode pipeline --zeta 6 --lists 30 --seed 3");
  EXPECT_EQ(a.status, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  write("mi", "edge 0 1 0\nedge 0 1 1\nedge 1 2 2\nedge 0 2 3\nlist 0: 1 2 3 4 5\nlist 1: 1 2 3 4 5\n"
              "list 2: 1 2 3 4 5\nlist 3: 1 2 3 4 5\n");
  auto k1 = run("kahn run mi --seed 4 --telemetry t1.csv");
  auto k2 = run("kahn run mi --seed 4 --telemetry t1.csv");
  EXPECT_EQ(k1.status, 0) << k1.out;
  EXPECT_EQ(k1.out, k2.out);
  EXPECT_EQ(slurp("t1.csv").rfind("step,colour,matched,remaining\n", 0), 0u);
}

TEST_F(Cli, GeneratorOutputReparses) {
  ASSERT_EQ(run("gen borodin --k 3 -o b3").status, 0);
  auto r = run("clique --cyclic b3");
  EXPECT_EQ(value(r.out), "9");
  EXPECT_EQ(run("check b3").status, 0);
  EXPECT_EQ(run("report b3").status, 0);
  EXPECT_EQ(run("discharge ledger b3 -o b3.csv").status, 0);
  EXPECT_NE(slurp("b3.csv").find("vertex,initial,final,transfers"), std::string::npos);
}
