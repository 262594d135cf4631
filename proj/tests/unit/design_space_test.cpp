#include <doctest.h>

#include <set>
#include <string>

#include "radar/design_space.hpp"
#include "radar/generator.hpp"

using namespace radar;

namespace {

std::vector<std::vector<int8_t>> all_assignments(const SemanticModel& m) {
  SolutionCursor cursor(m);
  std::vector<std::vector<int8_t>> rows;
  std::vector<int8_t> row;
  while (cursor.next(row)) rows.push_back(row);
  return rows;
}

// activity recomputed from first principles: active iff no incoming edge or
// some activating edge is satisfied by the assignment
bool active_by_edges(const SemanticModel& m, const std::vector<int8_t>& row, int d) {
  bool has_edge = false, satisfied = false;
  for (const auto& e : m.dependency_edges()) {
    if (e.inner != d) continue;
    has_edge = true;
    if (row[static_cast<size_t>(e.outer)] == e.outer_option) satisfied = true;
  }
  return !has_edge || satisfied;
}

}  // namespace

TEST_CASE("no decisions means a single empty solution") {
  SemanticModel m = analyze_source("Model M;\nX = 1;\nObjective Max O = EV(X);\n");
  DesignSpace ds = enumerate_design_space(m);
  CHECK(ds.size() == 1);
  CHECK(ds.num_decisions() == 0);
  CHECK(ds.assignment(0).empty());
  CHECK(size_without_enumeration(m).as_u64() == 1);

  SolutionCursor cursor(m);
  std::vector<int8_t> row{99};
  CHECK(cursor.next(row));
  CHECK(row.empty());
  CHECK_FALSE(cursor.next(row));
}

TEST_CASE("independent decisions enumerate lexicographically") {
  SemanticModel m = analyze_source(
      "Model M;\n"
      "A = decision(\"D1\") {\n  \"a\": 1;\n  \"b\": 2;\n};\n"
      "B = decision(\"D2\") {\n  \"x\": 1;\n  \"y\": 2;\n  \"z\": 3;\n};\n"
      "NB = A + B;\n");
  DesignSpace ds = enumerate_design_space(m);
  REQUIRE(ds.size() == 6);
  REQUIRE(ds.num_decisions() == 2);
  CHECK(ds.decisions()[0].name == "D1");

  const char* expected[6][2] = {{"a", "x"}, {"a", "y"}, {"a", "z"},
                                {"b", "x"}, {"b", "y"}, {"b", "z"}};
  for (size_t s = 0; s < 6; ++s) {
    CHECK(ds.binding(s, 0) == expected[s][0]);
    CHECK(ds.binding(s, 1) == expected[s][1]);
  }
  CHECK(size_without_enumeration(m).as_u64() == 6);
}

TEST_CASE("dependent decision is bound exactly when active") {
  SemanticModel m = analyze_source(
      "Model M;\n"
      "DV2 = decision(\"D2\") {\n  \"x\": 1;\n  \"y\": 2;\n};\n"
      "DV1 = decision(\"D1\") {\n  \"a\": DV2;\n  \"b\": 3;\n};\n"
      "NB = DV1;\n");
  DesignSpace ds = enumerate_design_space(m);
  REQUIRE(ds.size() == 3);
  // decision order is DFS source order: D2 first
  int d2 = *m.decision_index("D2");
  int d1 = *m.decision_index("D1");

  // {D1:a, D2:x}, {D1:a, D2:y}, {D1:b, D2 unbound}
  CHECK(ds.binding(0, static_cast<size_t>(d1)) == "a");
  CHECK(ds.binding(0, static_cast<size_t>(d2)) == "x");
  CHECK(ds.binding(1, static_cast<size_t>(d1)) == "a");
  CHECK(ds.binding(1, static_cast<size_t>(d2)) == "y");
  CHECK(ds.binding(2, static_cast<size_t>(d1)) == "b");
  CHECK(ds.binding(2, static_cast<size_t>(d2)) == "");
  CHECK(ds.assignment(2)[static_cast<size_t>(d2)] == -1);
  CHECK(size_without_enumeration(m).as_u64() == 3);
}

TEST_CASE("multi-parent activation falls back to exact counting") {
  // D3 activates under D1=a or D2=c; 3 of the 4 parent combinations
  SemanticModel m = analyze_source(
      "Model M;\n"
      "DV3 = decision(\"D3\") {\n  \"x\": 1;\n  \"y\": 2;\n};\n"
      "DV1 = decision(\"D1\") {\n  \"a\": DV3;\n  \"b\": 0;\n};\n"
      "DV2 = decision(\"D2\") {\n  \"c\": DV3;\n  \"d\": 0;\n};\n"
      "NB = DV1 + DV2;\n");
  REQUIRE(m.dependency_edges().size() == 2);
  DesignSpace ds = enumerate_design_space(m);
  CHECK(ds.size() == 7);  // 3 * 2 + 1
  CHECK(size_without_enumeration(m).as_u64() == 7);

  // assignments are unique and activity matches binding everywhere
  std::set<std::string> seen;
  for (size_t s = 0; s < ds.size(); ++s) {
    auto a = ds.assignment(s);
    std::vector<int8_t> row(a.begin(), a.end());
    seen.insert(std::string(row.begin(), row.end()));
    for (int d = 0; d < static_cast<int>(ds.num_decisions()); ++d) {
      CHECK((row[static_cast<size_t>(d)] >= 0) == active_by_edges(m, row, d));
    }
  }
  CHECK(seen.size() == ds.size());
}

TEST_CASE("closed-form size matches enumeration on generated forests") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig config;
    config.objectives = 2;
    config.decisions = 5;
    config.options_per_decision = 3;
    config.with_dependencies = true;
    config.seed = seed;
    SemanticModel m = analyze(generate(config));
    CAPTURE(seed);

    DesignSpace ds = enumerate_design_space(m);
    DesignSpaceSize size = size_without_enumeration(m);
    REQUIRE(size.fits_u64());
    CHECK(size.as_u64() == ds.size());

    auto rows = all_assignments(m);
    REQUIRE(rows.size() == ds.size());
    std::set<std::vector<int8_t>> unique(rows.begin(), rows.end());
    CHECK(unique.size() == rows.size());
    for (size_t s = 0; s < rows.size(); ++s) {
      auto a = ds.assignment(s);
      CHECK(std::equal(a.begin(), a.end(), rows[s].begin(), rows[s].end()));
      for (int d = 0; d < static_cast<int>(ds.num_decisions()); ++d) {
        CHECK((rows[s][static_cast<size_t>(d)] >= 0) ==
              active_by_edges(m, rows[s], d));
      }
    }
  }
}

TEST_CASE("large spaces are sized without enumeration") {
  auto build = [](int decisions, int options) {
    std::string src = "Model Big;\n";
    std::string nb = "NB = 0";
    for (int d = 0; d < decisions; ++d) {
      src += "DV" + std::to_string(d) + " = decision(\"D" + std::to_string(d) + "\") {\n";
      for (int o = 0; o < options; ++o) {
        src += "  \"o" + std::to_string(o) + "\": " + std::to_string(o + 1) + ";\n";
      }
      src += "};\n";
      nb += " + DV" + std::to_string(d);
    }
    src += nb + ";\nObjective Max O = EV(NB);\n";
    return analyze_source(src);
  };

  SUBCASE("7^11 fits in 64 bits") {
    SemanticModel m = build(11, 7);
    DesignSpaceSize size = size_without_enumeration(m);
    CHECK(size.fits_u64());
    CHECK(size.as_u64() == 1977326743ull);
    CHECK(size.str() == "1977326743");
    CHECK(size.as_double() == doctest::Approx(1.977326743e9));
    CHECK_FALSE(size.saturated);
    CHECK_THROWS_AS(enumerate_design_space(m), DesignSpaceOverflowError);
    try {
      enumerate_design_space(m, 1000);
      FAIL("expected overflow");
    } catch (const DesignSpaceOverflowError& e) {
      CHECK(e.kind() == "DesignSpaceOverflow");
    }
  }

  SUBCASE("4^35 exceeds 64 bits but stays exact") {
    SemanticModel m = build(35, 4);
    DesignSpaceSize size = size_without_enumeration(m);
    CHECK_FALSE(size.fits_u64());
    CHECK(size.as_u64() == UINT64_MAX);  // saturating accessor
    CHECK(size.str() == "1180591620717411303424");
    CHECK_FALSE(size.saturated);
  }

  SUBCASE("2^200 saturates the 128-bit carrier") {
    SemanticModel m = build(200, 2);
    DesignSpaceSize size = size_without_enumeration(m);
    CHECK(size.saturated);
    CHECK_FALSE(size.fits_u64());
    CHECK(size.as_u64() == UINT64_MAX);
    CHECK(size.str() == "overflow");
  }
}

TEST_CASE("enumeration cap is inclusive") {
  SemanticModel m = analyze_source(
      "Model M;\n"
      "A = decision(\"D1\") {\n  \"a\": 1;\n  \"b\": 2;\n  \"c\": 3;\n};\n"
      "B = decision(\"D2\") {\n  \"x\": 1;\n  \"y\": 2;\n  \"z\": 3;\n};\n"
      "NB = A + B;\n");
  CHECK(enumerate_design_space(m, 9).size() == 9);
  CHECK_THROWS_AS(enumerate_design_space(m, 8), DesignSpaceOverflowError);
}
