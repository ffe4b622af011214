#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sdkit/worked_example.hpp"

namespace sdkit::example {
namespace {

std::vector<PointId> ids(const WeakModel& m) { return m.as_subset().ids; }

std::string permutation_with(std::size_t index, const std::string& replacement) {
  std::istringstream in{std::string(permutation_text())};
  std::string line, out;
  for (std::size_t i = 0; std::getline(in, line); ++i) out += (i == index ? replacement : line) + "\n";
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST(Permutation, SpotEntries) {
  const auto models = load_permutation();
  ASSERT_EQ(models.size(), 252u);
  EXPECT_EQ(ids(models[0]), (std::vector<PointId>{3, 5, 6, 8, 9}));
  EXPECT_EQ(ids(models[126]), (std::vector<PointId>{0, 1, 4, 6, 9}));
  EXPECT_EQ(ids(models[251]), (std::vector<PointId>{0, 2, 3, 7, 8}));
  EXPECT_EQ(models[126].id(), 127);
}

TEST(Permutation, EveryPointInHalfTheModels) {
  std::array<int, 10> hits{};
  for (const WeakModel& m : load_permutation()) {
    for (PointId id : ids(m)) ++hits[id];
  }
  for (int h : hits) EXPECT_EQ(h, 126);
}

TEST(Permutation, IntegrityErrors) {
  EXPECT_THROW(parse_permutation(permutation_with(5, "35689")), IntegrityError);  // duplicate of entry 1
  EXPECT_THROW(parse_permutation(permutation_with(5, "3568")), IntegrityError);
  EXPECT_THROW(parse_permutation(permutation_with(5, "3568a")), IntegrityError);
  EXPECT_THROW(parse_permutation(permutation_with(5, "33689")), IntegrityError);
  const std::string text(permutation_text());
  EXPECT_THROW(parse_permutation(text.substr(0, text.size() / 2)), IntegrityError);
  EXPECT_NO_THROW(parse_permutation(text));
}

TEST(Hundredths, PrintfRounding) {
  EXPECT_EQ(hundredths(-1.0 / 3.0), "-0.33");
  EXPECT_EQ(hundredths(4.0 / 3.0), "1.33");
  EXPECT_EQ(hundredths(-0.001), "0.00");
  EXPECT_EQ(hundredths(0.5), "0.50");
}

TEST(Table2, Rows) {
  const auto rows = emit_table2();
  ASSERT_EQ(rows.size(), 252u);
  EXPECT_EQ(rows[0].n, (std::array<std::size_t, 10>{0, 0, 0, 1, 0, 1, 1, 0, 1, 1}));
  const std::array<std::string, 10> y10 = {"0.50", "0.50", "0.50", "0.50", "0.40",
                                           "0.50", "0.40", "0.50", "0.60", "0.60"};
  for (std::size_t q = 0; q < 10; ++q) {
    EXPECT_EQ(hundredths(to_double(rows[9].y[q])), y10[q]);
    EXPECT_EQ(rows[251].y[q], Rational(1, 2));
  }
}

TEST(Table2, CountsMatchPrintedTable) {
  // Independent route: parse the printed table here and compare integer counts.
  std::istringstream in{std::string(golden_table2_text())};
  std::string line;
  std::getline(in, line);
  const auto rows = emit_table2();
  for (const Table2Row& row : rows) {
    ASSERT_TRUE(std::getline(in, line));
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    ASSERT_EQ(std::stoul(cell), row.t);
    for (std::size_t q = 0; q < 10; ++q) {
      std::getline(cells, cell, ',');
      ASSERT_EQ(std::stoul(cell), row.n[q]) << "t=" << row.t << " q=" << q;
    }
  }
}

TEST(Table3, Rows) {
  const auto rows = emit_table3();
  ASSERT_EQ(rows.size(), 252u);
  EXPECT_EQ(hundredths(to_double(rows[0].r1)), "0.20");
  EXPECT_EQ(hundredths(to_double(rows[0].r2)), "0.80");
  EXPECT_EQ(hundredths(to_double(rows[0].d)), "-0.60");
  EXPECT_EQ(hundredths(to_double(rows[0].x_in)), "-0.33");
  EXPECT_EQ(hundredths(to_double(rows[0].x_out)), "1.33");
  const std::array<const char*, 10> last = {"1.00", "1.00", "1.00", "0.00", "0.00",
                                            "0.00", "0.00", "1.00", "1.00", "0.00"};
  for (std::size_t q = 0; q < 10; ++q) EXPECT_EQ(hundredths(rows[250].y_replayed[q]), last[q]);
  EXPECT_EQ(rows[206].r1, 1);
  EXPECT_EQ(rows[206].r2, 0);
  EXPECT_EQ(rows[206].x_in, 1);
  EXPECT_EQ(rows[206].x_out, 0);
}

TEST(Profiles, ShapeAndSlices) {
  const auto rows = emit_profiles();
  EXPECT_EQ(rows.size(), 252u * 10u * 2u * 6u);
  for (const ProfileRow& r : rows) {
    if (r.t == 10 && r.q == 0 && r.cls == 2) {
      const std::array<Rational, 6> f = {0, 1, Rational(3, 4), 0, 0, 0};
      EXPECT_EQ(r.stratum.ratio_exact, f[r.stratum.captured]);
    }
    if (r.t == 252 && r.cls == 1 && (r.q <= 2 || r.q == 7 || r.q == 8) && r.stratum.captured == 3) {
      EXPECT_EQ(r.stratum.ratio_exact, Rational(3, 5));
    }
  }
}

TEST(Projectability, TestPointsMatchTrainingPoints) {
  const ProjectabilityReport r = projectability_check();
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.test_labels[0], Decision(1));
  EXPECT_EQ(r.test_labels[9], Decision(2));
  const auto geo = load_geometric_permutation();
  EXPECT_TRUE(membership(geo[0], test_set().points()[3]));
}

TEST(Verify, AllChecksPass) {
  const GoldenReport r = verify();
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.unexplained(), 0u);
  for (const GoldenCheck& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  for (const CellDiff& d : r.diffs) {
    EXPECT_EQ(d.table, "table3");
    EXPECT_TRUE(d.explained);
  }
}

TEST(Artifacts, FiveDeterministicFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "sdkit_artifacts_test";
  std::filesystem::remove_all(dir);
  const auto first = write_artifacts(dir / "a");
  const auto second = write_artifacts(dir / "b");
  ASSERT_EQ(first.size(), 5u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].filename(), second[i].filename());
    EXPECT_EQ(slurp(first[i]), slurp(second[i]));
  }
  const std::string t2 = slurp(dir / "a" / "table2.csv");
  EXPECT_EQ(t2.substr(0, t2.find('\n')), std::string(golden_table2_text()).substr(0, t2.find('\n')));
  std::filesystem::remove_all(dir);
}

TEST(Oracle, ThreeChooseTwo) {
  const OracleResult o = brute_force_oracle(3, 2, {1, 1, 2});
  EXPECT_EQ(o.models, 3u);
  for (const Rational& c : o.coverage) EXPECT_EQ(c, Rational(2, 3));
}

TEST(Oracle, RefusesLargeSets) {
  EXPECT_THROW(brute_force_oracle(10, 5, std::vector<ClassLabel>(10, 1)), SizeError);
  EXPECT_THROW(brute_force_oracle(4, 2, {1, 1, 1, 1}), ContractError);
  EXPECT_THROW(brute_force_oracle(4, 2, {1, 2, 3, 1}), ContractError);
}

TEST(Oracle, FourChooseTwoPoles) {
  // Of the six 2-subsets of {0,1 | 2,3}, only {0,1} and {2,3} are enriched.
  const OracleResult o = brute_force_oracle(4, 2, {1, 1, 2, 2});
  EXPECT_EQ(o.enriched, 2u);
  EXPECT_EQ(o.y12[0], Rational(1, 3));
  EXPECT_EQ(o.y12[1], Rational(1, 3));
  EXPECT_EQ(o.y12[2], 0);
  EXPECT_EQ(o.y12[3], 0);
  for (bool d : o.diagonal) EXPECT_TRUE(d);
}

}  // namespace
}  // namespace sdkit::example
