#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "curvlab/errors.hpp"
#include "curvlab/report.hpp"
#include "curvlab/verify.hpp"
#include "fixtures.hpp"

using namespace curvlab;

TEST(GraphIo, RoundTripBitExact) {
  for (const auto& s : {make_random_birth_death(7, 99, false), make_counterexample(1e-7), make_erdos_renyi(9, 0.3, 5),
                        make_lazify(make_hypercube(3))}) {
    const std::string text = to_json(s);
    const GraphSpec back = spec_from_json(text);
    EXPECT_EQ(to_json(back), text);
    const auto a = fx::chain(s), b = fx::chain(back);
    EXPECT_EQ(a.kernel(), b.kernel());
    EXPECT_EQ(a.measure(), b.measure());
    EXPECT_EQ(back.provenance.family, s.provenance.family);
  }
}

TEST(GraphIo, LabelEndpoints) {
  const auto s = spec_from_json(R"({"mode":"weights","vertices":["x","y"],"edges":[{"u":"x","v":"y","w":2}]})");
  const auto c = fx::chain(s);
  EXPECT_EQ(c.size(), 2);
  EXPECT_TRUE(c.adjacent(0, 1));
}

TEST(Generators, Families) {
  const auto q3 = fx::chain(make_hypercube(3));
  EXPECT_EQ(q3.size(), 8);
  EXPECT_EQ(q3.edges().size(), 12u);
  for (int x = 0; x < 8; ++x) {
    EXPECT_NEAR(q3.mass(x), 0.125, 1e-15);
    for (const auto& nb : q3.neighbors(x)) EXPECT_NEAR(nb.rate, 1.0 / 3.0, 1e-15);
  }
  const auto c4 = fx::chain(generate("cycle", {{"n", "4"}, {"p", "0.5"}}, 0));
  EXPECT_EQ(c4.kernel(), fx::c4().kernel());
  const auto g = fx::chain(generate("counterexample", {{"eps", "0.1"}}, 0));
  EXPECT_NEAR(g.rate(0, 1), 1.0, 1e-12);
  EXPECT_THROW(generate("nope", {}, 0), PreconditionError);
  EXPECT_EQ(to_json(make_random_birth_death(6, 4, true)), to_json(make_random_birth_death(6, 4, true)));
  EXPECT_TRUE(fx::lazy(make_cycle(5, 0.5)).is_lazy());
  const auto prod = fx::chain(make_product(make_path(2), make_path(3)));
  EXPECT_EQ(prod.size(), 6);
}

TEST(Generators, CombinatorialCounterexample) {
  const auto c = fx::chain(make_counterexample_combinatorial(2));
  EXPECT_TRUE(c.has_combinatorial_distance());
  EXPECT_EQ(c.size(), 16 + 2);
}

TEST(Report, EmptyResults) {
  ReportMeta meta;
  const std::string jl = render_report({}, ReportFormat::json_lines, meta);
  std::istringstream in(jl);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  const auto header = nlohmann::json::parse(line);
  EXPECT_EQ(header.at("results").get<int>(), 0);
  EXPECT_FALSE(std::getline(in, line) && !line.empty());
  const std::string csv = render_report({}, ReportFormat::csv, meta);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "theorem,instance,status,lhs,rhs,margin,runtime,hypothesis,detail");
}

TEST(Report, Deterministic) {
  Instance inst{"c4", make_cycle(4)};
  VerifyConfig cfg;
  cfg.opt.restarts = 4;
  const auto a = verify(inst, {"T2", "T3", "T5"}, cfg);
  const auto b = verify(inst, {"T2", "T3", "T5"}, cfg);
  ReportMeta meta;
  meta.instances = {{inst.id, inst.spec.provenance}};
  meta.cfg = cfg;
  EXPECT_EQ(render_report(a, ReportFormat::json_lines, meta), render_report(b, ReportFormat::json_lines, meta));
  EXPECT_FALSE(any_failure(a));
  for (const auto& r : a) {
    if (r.theorem == "T2") {
      EXPECT_EQ(r.status, CheckStatus::pass);
      EXPECT_NEAR(r.lhs, 0.5 / 64, 1e-15);
      EXPECT_GE(r.margin, 0.0);
    }
  }
}

TEST(Verify, HypothesisGating) {
  Instance geps{"geps", make_counterexample(1e-4)};
  const auto r = verify(geps, {"T1"});
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.front().status, CheckStatus::skip);
  EXPECT_NE(r.front().hypothesis.find("sectional curvature negative"), std::string::npos);
}
