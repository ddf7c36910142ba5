#include "cavitybec/config.hpp"
#include "cavitybec/output.hpp"
#include "cavitybec/scenarios.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace cavitybec;

namespace {

std::string value_of(const Table& t, const std::string& key) {
  for (const auto& [k, v] : t.metadata)
    if (k == key) return v;
  return {};
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  throw std::out_of_range(name);
}

double num(const Cell& c) { return std::get<double>(c); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CAVITYBEC_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, ParsesKeyValueLines) {
  const KeyValues kv = parse_config_text("# comment\n L1 = 2 \n\nQ=100 # trailing\nbc = dirichlet\n");
  EXPECT_EQ(kv.at("L1"), "2");
  EXPECT_EQ(kv.at("Q"), "100");
  EXPECT_EQ(kv.at("bc"), "dirichlet");
  EXPECT_THROW(parse_config_text("L1 2\n"), ValidationError);
  EXPECT_THROW(parse_config_text("L1 =\n"), ValidationError);
}

TEST(Config, PrecedenceFlagsOverFileOverPreset) {
  const RunConfig c = resolve_config("fig4", "fig4d", {{"Q", "5000"}, {"m", "0.7"}}, {{"m", "0.9"}});
  EXPECT_DOUBLE_EQ(c.L[2], 600.0);  // preset
  EXPECT_DOUBLE_EQ(c.Q, 5000.0);    // file over preset
  EXPECT_DOUBLE_EQ(c.m, 0.9);       // flag over file
  bool echoed = false;
  for (const auto& [k, v] : c.resolved)
    if (k == "m") echoed = v == "0.9 [flag]";
  EXPECT_TRUE(echoed);
}

TEST(Config, PresetFromFile) {
  const RunConfig c = resolve_config("tc", "", {{"preset", "fig4a"}}, {});
  EXPECT_EQ(c.preset, "fig4a");
  EXPECT_DOUBLE_EQ(c.m, 2.0);
}

TEST(Config, PresetsMatchReferenceSets) {
  auto geo = [](const std::string& p) {
    const RunConfig c = resolve_config("fig4", p, {}, {});
    return std::array<double, 5>{c.L[0], c.L[1], c.L[2], c.Q, c.m};
  };
  EXPECT_EQ(geo("fig2"), (std::array<double, 5>{1, 10, 100, 1e4, 0.1}));
  EXPECT_EQ(geo("fig4a"), (std::array<double, 5>{3, 3, 3, 100, 2}));
  EXPECT_EQ(geo("fig4b"), (std::array<double, 5>{2, 2, 300, 2000, 1}));
  EXPECT_EQ(geo("fig4c"), (std::array<double, 5>{2, 200, 200, 8000, 0.5}));
  EXPECT_EQ(geo("fig4d"), (std::array<double, 5>{2, 100, 600, 4000, 0.5}));
  EXPECT_EQ(resolve_config("fig1", "fig1a", {}, {}).a, (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(resolve_config("fig1", "fig1b", {}, {}).a, (std::vector<std::int64_t>{10, 3}));
  EXPECT_EQ(resolve_config("fig4", "fig4e", {}, {}).scale, SweepScale::Log);
}

TEST(Config, Validation) {
  EXPECT_THROW(resolve_config("tc", "nope", {}, {}), ValidationError);
  EXPECT_THROW(resolve_config("tc", "", {}, {{"m", "-1"}}), ValidationError);
  EXPECT_THROW(resolve_config("tc", "", {}, {{"L1", "abc"}}), ValidationError);
  EXPECT_THROW(resolve_config("tc", "", {}, {{"engine", "fast"}}), ValidationError);
  EXPECT_THROW(resolve_config("tc", "", {{"colour", "red"}}, {}), ValidationError);
  EXPECT_THROW(resolve_config("fig4", "", {}, {{"tmin", "2"}, {"tmax", "1"}}), ValidationError);
  EXPECT_THROW(resolve_config("count", "", {}, {{"a", "1,0"}}), ValidationError);
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Output, CsvAndJsonCarryTheSameTable) {
  Table t;
  t.meta("engine", "exact");
  t.columns = {"x", "label"};
  t.rows = {{1.0 / 3.0, std::string("a,b")}, {2.0, std::string("c")}};
  std::ostringstream csv, js;
  write_csv(csv, t);
  write_json(js, t);
  EXPECT_EQ(csv.str(), "# engine = exact\nx,label\n0.333333333333,\"a,b\"\n2,c\n");
  const auto doc = nlohmann::json::parse(js.str());
  EXPECT_EQ(doc["metadata"]["engine"], "exact");
  EXPECT_EQ(doc["columns"][1], "label");
  EXPECT_DOUBLE_EQ(doc["rows"][0][0].get<double>(), 0.333333333333);
  EXPECT_EQ(doc["rows"][0][1], "a,b");
}

TEST(Scenarios, InferScenario) {
  EXPECT_EQ(infer_scenario(CavityGeometry(3, 3, 3)), Scenario::Isotropic);
  EXPECT_EQ(infer_scenario(CavityGeometry(2, 2, 300)), Scenario::OneD);
  EXPECT_EQ(infer_scenario(CavityGeometry(2, 200, 200)), Scenario::TwoD);
  EXPECT_EQ(infer_scenario(CavityGeometry(2, 100, 600)), Scenario::ThreeStep);
  EXPECT_THROW(infer_scenario(CavityGeometry(5, 2, 3)), ValidationError);
}

TEST(Scenarios, ParallelMapKeepsOrderAndPropagatesErrors) {
  const auto v = parallel_map(100, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_map(10, [](std::size_t i) -> int {
                 if (i == 7) throw std::runtime_error("x");
                 return 0;
               }, 3),
               std::runtime_error);
}

TEST(Scenarios, Fig1RowCountAndMetadata) {
  const Table t = run_fig1(resolve_config("fig1", "fig1a", {}, {{"epsilon-max", "100"}}));
  EXPECT_EQ(t.rows.size(), 100u);
  EXPECT_EQ(t.columns.size(), 6u);
  EXPECT_EQ(value_of(t, "preset"), "fig1a");
}

TEST(Scenarios, Fig1PresetExponent) {
  for (const char* p : {"fig1a", "fig1b"}) {
    const double g = std::stod(value_of(run_fig1(resolve_config("fig1", p, {}, {})), "gamma"));
    EXPECT_GE(g, 0.5);
    EXPECT_LE(g, 0.7);
  }
}

TEST(Scenarios, Fig2LowTemperatureAndColumns) {
  const Table t = run_fig2(resolve_config("fig2", "fig2", {}, {{"points", "5"}, {"tmin", "0.01"}, {"tmax", "0.9"}}));
  ASSERT_EQ(t.rows.size(), 5u);
  const auto& first = t.rows.front();
  EXPECT_NEAR(num(first[column(t, "bulk_fraction")]), 1.0, 1e-3);
  EXPECT_NEAR(num(first[column(t, "corrected_fraction")]), 1.0, 1e-2);
  EXPECT_NEAR(num(first[column(t, "exact_fraction")]), 1.0, 0.02);
  for (const auto& r : t.rows) EXPECT_LT(num(r[column(t, "mu_residual")]), 1e-10);
}

TEST(Scenarios, Fig3RegionsAndMonotoneTransitions) {
  const Table t = run_fig3(resolve_config("fig3", "fig3", {}, {}));
  const std::size_t n = 31;
  ASSERT_EQ(t.rows.size(), n * n);
  const std::size_t lc = column(t, "label");
  auto label = [&](std::size_t i, std::size_t j) { return std::get<std::string>(t.rows[i * n + j][lc]); };
  EXPECT_EQ(label(0, 0), "one-step");
  std::size_t three = 0;
  for (std::size_t k = 0; k < n * n; ++k) three += label(k / n, k % n) == "three-step";
  EXPECT_GT(three, 0u);
  EXPECT_LT(three, n * n);
  // Along every grid line each label occupies one contiguous run.
  auto contiguous = [&](auto at) {
    std::vector<std::string> seen;
    for (std::size_t k = 0; k < n; ++k) {
      const std::string l = at(k);
      if (!seen.empty() && seen.back() == l) continue;
      if (std::find(seen.begin(), seen.end(), l) != seen.end()) return false;
      seen.push_back(l);
    }
    return true;
  };
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_TRUE(contiguous([&](std::size_t k) { return label(i, k); })) << "row " << i;
    EXPECT_TRUE(contiguous([&](std::size_t k) { return label(k, i); })) << "column " << i;
  }
}

TEST(Scenarios, Fig4aGroundFractionCrossesHalfBelowTc) {
  const Table t = run_fig4(resolve_config("fig4", "fig4a", {}, {}));
  const std::size_t T = column(t, "T"), q0 = column(t, "Q0/Q");
  double crossing = 0.0;
  for (const auto& r : t.rows) {
    if (num(r[q0]) < 0.5) {
      crossing = num(r[T]);
      break;
    }
  }
  EXPECT_GT(crossing, 0.0);
  EXPECT_LT(crossing, 1.97);
}

TEST(Scenarios, Fig4dRowsSumToOneAndMuMonotone) {
  const Table t = run_fig4(resolve_config("fig4", "fig4d", {}, {{"points", "40"}, {"engine", "both"}}));
  const std::size_t mu = column(t, "mu"), q0 = column(t, "Q0/Q"), a0 = column(t, "asym_Q0/Q");
  double prev = 1.0;
  for (const auto& r : t.rows) {
    EXPECT_NEAR(num(r[q0]) + num(r[q0 + 1]) + num(r[q0 + 2]) + num(r[q0 + 3]), 1.0, 1e-8);
    EXPECT_NEAR(num(r[a0]) + num(r[a0 + 1]) + num(r[a0 + 2]) + num(r[a0 + 3]), 1.0, 1e-12);
    EXPECT_LE(num(r[mu]), prev);
    prev = num(r[mu]);
  }
  EXPECT_FALSE(value_of(t, "reference_deviation").empty());
  EXPECT_FALSE(value_of(t, "T2D").empty());
}

TEST(Scenarios, SolverReports) {
  const Table tc = run_tc(resolve_config("tc", "fig4a", {}, {}));
  EXPECT_NEAR(num(tc.rows[1][1]), 1.97, 0.01);
  const Table count = run_count(resolve_config("count", "", {}, {{"a", "1,1,1"}, {"epsilon", "1"}}));
  EXPECT_EQ(num(count.rows[0][1]), 7.0);
  const Table cl = run_classify(resolve_config("classify", "fig4d", {}, {}));
  EXPECT_EQ(value_of(cl, "label"), "three-step");
}

TEST(Executable, ExitCodes) {
  EXPECT_EQ(run_cli("count --a 1,1,1 --epsilon 1"), 0);
  EXPECT_EQ(run_cli("tc --preset fig4a --m -1"), 2);
  EXPECT_EQ(run_cli("tc --preset nope"), 2);
  EXPECT_EQ(run_cli("bogus"), 2);
  EXPECT_EQ(run_cli("tc --L1 5 --L2 2 --L3 3"), 2);
  // A tiny enumeration budget makes the count fail at run time.
  EXPECT_EQ(run_cli("count --a 1,1,1 --epsilon 1e6 --budget 10"), 3);
}

TEST(Executable, DeterministicFiles) {
  const std::string a = ::testing::TempDir() + "cbec_a.csv";
  const std::string args = "fig4 --preset fig4b --points 30 --out " + a;
  ASSERT_EQ(run_cli(args), 0);
  const std::string x = slurp(a);
  ASSERT_EQ(run_cli(args), 0);
  EXPECT_FALSE(x.empty());
  EXPECT_EQ(x, slurp(a));
  EXPECT_NE(x.find("# config.L3 = 300 [preset]"), std::string::npos);
  ASSERT_EQ(run_cli("fig1 --preset fig1a --epsilon-max 100 --format json --out " + a), 0);
  const auto doc = nlohmann::json::parse(slurp(a));
  EXPECT_EQ(doc["rows"].size(), 100u);
}
