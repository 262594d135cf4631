#include <doctest.h>

#include <cmath>
#include <set>

#include "radar/analysis.hpp"
#include "radar/generator.hpp"
#include "radar/parser.hpp"

using namespace radar;

namespace {

GeneratorConfig cfg(int obj, int dec, int opts, int min_vars, bool deps, uint64_t seed) {
  GeneratorConfig c;
  c.objectives = obj;
  c.decisions = dec;
  c.options_per_decision = opts;
  c.min_variables = min_vars;
  c.with_dependencies = deps;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("generated counts are exact") {
  for (int obj : {1, 2, 4}) {
    for (int dec : {0, 1, 3, 7}) {
      for (int opts : {1, 2, 5}) {
        ModelAst ast = generate(cfg(obj, dec, opts, 0, false, 17));
        SemanticModel m = analyze(std::move(ast));
        CHECK(m.objectives().size() == static_cast<size_t>(obj));
        CHECK(m.decisions().size() == static_cast<size_t>(dec));
        for (const auto& d : m.decisions()) {
          CHECK(d.options.size() == static_cast<size_t>(opts));
        }
      }
    }
  }
}

TEST_CASE("min_variables pads the variable count") {
  // the same seed without padding gives the natural size; padding may only
  // raise it to the requested floor
  SemanticModel base = analyze(generate(cfg(2, 4, 3, 0, false, 5)));
  size_t natural = base.num_vars();
  for (int floor_vars : {0, 10, 60, 200}) {
    SemanticModel padded = analyze(generate(cfg(2, 4, 3, floor_vars, false, 5)));
    CHECK(padded.num_vars() == std::max(natural, static_cast<size_t>(floor_vars)));
  }
}

TEST_CASE("generation is deterministic in config and seed") {
  std::string a = pretty_print(generate(cfg(3, 5, 3, 25, true, 99)));
  std::string b = pretty_print(generate(cfg(3, 5, 3, 25, true, 99)));
  CHECK(a == b);
  std::string c = pretty_print(generate(cfg(3, 5, 3, 25, true, 100)));
  CHECK(a != c);
}

TEST_CASE("dependency switch controls the edge set") {
  SemanticModel flat = analyze(generate(cfg(2, 5, 3, 0, false, 21)));
  CHECK(flat.dependency_edges().empty());
  DesignSpace ds = enumerate_design_space(flat);
  CHECK(ds.size() == 243);  // 3^5, all decisions independent

  bool saw_edges = false;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    SemanticModel nested = analyze(generate(cfg(2, 5, 3, 0, true, seed)));
    std::set<int> inner;
    for (const auto& e : nested.dependency_edges()) {
      CHECK(e.outer != e.inner);
      // at most one incoming edge per decision keeps the space a forest
      CHECK(inner.insert(e.inner).second);
    }
    saw_edges |= !nested.dependency_edges().empty();
    // a nested space never exceeds the independent one
    CHECK(enumerate_design_space(nested).size() <= 243);
  }
  CHECK(saw_edges);
}

TEST_CASE("edge shapes") {
  SemanticModel none = analyze(generate(cfg(1, 0, 1, 0, false, 3)));
  CHECK(none.decisions().empty());
  CHECK(enumerate_design_space(none).size() == 1);

  SemanticModel single = analyze(generate(cfg(1, 4, 1, 0, true, 3)));
  CHECK(enumerate_design_space(single).size() == 1);  // one option each
}

TEST_CASE("bounds are enforced") {
  CHECK_THROWS_AS(generate(cfg(0, 1, 2, 0, false, 1)), ConfigError);
  CHECK_THROWS_AS(generate(cfg(17, 1, 2, 0, false, 1)), ConfigError);
  CHECK_THROWS_AS(generate(cfg(1, -1, 2, 0, false, 1)), ConfigError);
  CHECK_THROWS_AS(generate(cfg(1, 33, 2, 0, false, 1)), ConfigError);
  CHECK_THROWS_AS(generate(cfg(1, 1, 0, 0, false, 1)), ConfigError);
  CHECK_THROWS_AS(generate(cfg(1, 1, 17, 0, false, 1)), ConfigError);
  CHECK_THROWS_AS(generate(cfg(1, 1, 2, -1, false, 1)), ConfigError);
  CHECK_THROWS_AS(generate(cfg(1, 1, 2, 1'000'001, false, 1)), ConfigError);
  CHECK_NOTHROW(generate(cfg(1, 0, 0, 0, false, 1)));  // options unused without decisions
}

TEST_CASE("generated models simulate cleanly") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    SemanticModel m = analyze(generate(cfg(2, 3, 2, 15, seed % 2 == 0, seed)));
    AnalysisConfig ac;
    ac.plan = {seed, 10};
    AnalysisResult r = run_analysis(m, ac);
    CHECK(r.timings.completed_steps == 4);
    for (double v : r.sim.means) CHECK(std::isfinite(v));
  }
}

TEST_CASE("generated source survives a print-parse round trip") {
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    ModelAst ast = generate(cfg(1 + seed % 4, static_cast<int>(seed % 6), 2, 10,
                                seed % 3 == 0, seed));
    std::string printed = pretty_print(ast);
    ModelAst reparsed = parse_model(printed);
    CHECK(equal(ast, reparsed));
    CHECK(pretty_print(reparsed) == printed);
  }
}

TEST_CASE("generate_suite carries sizes without enumerating") {
  std::vector<GeneratorConfig> plan = {
      cfg(2, 2, 3, 0, false, 1),
      cfg(2, 12, 4, 0, false, 2),  // 4^12 = 16'777'216, over the default cap
      cfg(1, 0, 1, 0, false, 3),
  };
  auto suite = generate_suite(plan);
  REQUIRE(suite.size() == 3);
  CHECK(suite[0].size.as_u64() == 9);
  CHECK(suite[1].size.as_u64() == 16'777'216);
  CHECK(suite[2].size.as_u64() == 1);
  for (size_t i = 0; i < plan.size(); ++i) {
    CHECK(suite[i].config.seed == plan[i].seed);
    CHECK(equal(suite[i].model, generate(plan[i])));
  }
}
