#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SDKIT_CLI_PATH
#error "SDKIT_CLI_PATH must name the sdkit executable"
#endif

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sdkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args, const std::string& env = "") const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" SDKIT_CLI_PATH "' " + args + " > '" +
                            out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  void export_fixture() const { ASSERT_EQ(run("export-fixture fx").code, 0); }

  fs::path dir_;
};

TEST_F(Cli, ReproduceWritesFiveFilesAndPasses) {
  const Outcome r = run("reproduce out");
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "out")) files += e.is_regular_file() ? 1 : 0;
  EXPECT_EQ(files, 5u);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);
}

TEST_F(Cli, ReproduceIsByteIdentical) {
  ASSERT_EQ(run("reproduce a").code, 0);
  ASSERT_EQ(run("reproduce b").code, 0);
  for (const char* f : {"table2.csv", "table3.csv", "profiles.csv", "figure1.dat", "figure2.dat"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(Cli, ReproduceUnwritableOutdirFails) {
  write("blocker", "x");
  const Outcome r = run("reproduce blocker/out");
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("train").code, 2);
  export_fixture();
  EXPECT_EQ(run("train fx/example_train.csv -o m.sdm --enrich-threshold 0.5 --enrich-best-of 3").code, 2);
  EXPECT_EQ(run("train fx/example_train.csv -o m.sdm --uniformity sometimes").code, 2);
  EXPECT_EQ(run("train fx/example_train.csv -o m.sdm", "SDKIT_SEED=abc").code, 2);
}

TEST_F(Cli, TrainExampleDataset) {
  export_fixture();
  const Outcome r = run("train fx/example_train.csv --enrich-threshold 0.1 --target-size 100 --seed 7 -o a.sdm");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"size\": 100"), std::string::npos);
  EXPECT_NE(r.out.find("\"seed\": 7"), std::string::npos);
  std::istringstream sdm(slurp(dir_ / "a.sdm"));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(sdm, line)) ++lines;
  EXPECT_EQ(lines, 101u);

  ASSERT_EQ(run("train fx/example_train.csv --enrich-threshold 0.1 --target-size 100 --seed 7 -o b.sdm").code, 0);
  EXPECT_EQ(slurp(dir_ / "a.sdm"), slurp(dir_ / "b.sdm"));
}

TEST_F(Cli, SeedFromEnvironment) {
  export_fixture();
  ASSERT_EQ(run("train fx/example_train.csv --target-size 20 --seed 5 -o flag.sdm").code, 0);
  ASSERT_EQ(run("train fx/example_train.csv --target-size 20 -o env.sdm", "SDKIT_SEED=5").code, 0);
  EXPECT_EQ(slurp(dir_ / "flag.sdm"), slurp(dir_ / "env.sdm"));
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  export_fixture();
  write("train.cfg", "seed=3\ntarget-size=15\nuniformity=best-of:4\nkinds=slab,cube\n");
  const Outcome r = run("train fx/example_train.csv -c train.cfg --target-size 12 -o m.sdm");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"size\": 12"), std::string::npos);
  const std::string sdm = slurp(dir_ / "m.sdm");
  EXPECT_NE(sdm.find("\"kinds\":\"slab,cube\""), std::string::npos);
  EXPECT_EQ(sdm.find("l2ball"), std::string::npos);
}

TEST_F(Cli, TrainExhaustionIsPartialSuccess) {
  export_fixture();
  const Outcome r = run("train fx/example_train.csv --enrich-threshold 1.0 --kinds l2ball --max-size 0.1 --min-size 0.05 "
                    "--target-size 3 -o m.sdm");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"partial\": true"), std::string::npos);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(Cli, MissingLabelColumnIsNamed) {
  write("nolabel.csv", "id,x\n0,1\n1,2\n");
  const Outcome r = run("train nolabel.csv -o m.sdm");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("'label'"), std::string::npos);
}

TEST_F(Cli, MalformedRowNamesLine) {
  write("bad.csv", "x,label\n1,1\n2,2\nzz,1\n");
  const Outcome r = run("train bad.csv -o m.sdm");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("bad.csv:4"), std::string::npos) << r.err;
}

TEST_F(Cli, ClassifyTestPointsWithGeometricFixture) {
  export_fixture();
  const Outcome r = run("classify fx/example_geometric.sdm fx/example_test.csv");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "id,y_1_2,decision");
  std::string labels;
  while (std::getline(in, line)) labels += line.substr(line.rfind(',') + 1);
  EXPECT_EQ(labels, "1112222112");
}

TEST_F(Cli, ClassifyEmptyPointsFile) {
  export_fixture();
  write("empty.csv", "");
  const Outcome r = run("classify fx/example_geometric.sdm empty.csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, ClassifyUncoveredPointUnderW) {
  export_fixture();
  ASSERT_EQ(run("train fx/example_train.csv --kinds l2ball --max-size 0.2 --target-size 20 -o balls.sdm").code, 0);
  write("far.csv", "x\n1000\n");
  const Outcome r = run("classify balls.sdm far.csv --method w");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0,,,undecided"), std::string::npos) << r.out;
}

TEST_F(Cli, ClassifyDimensionMismatch) {
  export_fixture();
  ASSERT_EQ(run("train fx/example_train.csv --kinds l2ball --target-size 5 -o balls.sdm").code, 0);
  write("two_d.csv", "x,y\n1,2\n");
  const Outcome r = run("classify balls.sdm two_d.csv");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("dimension"), std::string::npos);
}

TEST_F(Cli, EvaluateAndInspect) {
  export_fixture();
  const Outcome e = run("evaluate fx/example_geometric.sdm fx/example_test.csv");
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("\"undecided\": 0"), std::string::npos);
  EXPECT_NE(e.out.find("\"accuracy\": 1.0"), std::string::npos);
  EXPECT_NE(e.out.find("\"balanced\": true"), std::string::npos);
  const Outcome i = run("inspect fx/example_subsets.sdm");
  ASSERT_EQ(i.code, 0) << i.err;
  EXPECT_NE(i.out.find("\"size\": 252"), std::string::npos);
  EXPECT_EQ(run("inspect missing.sdm").code, 3);
}

}  // namespace
