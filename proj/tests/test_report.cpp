#include "infoact/problems.hpp"
#include "infoact/report.hpp"

#include <gtest/gtest.h>

using namespace infoact;

TEST(Analyze, TigerIsUnsuitable) {
    auto r = analyze(build_tiger(), {});
    EXPECT_EQ(r.verdict, Verdict::unsuitable);
    EXPECT_EQ(r.qualifying_actions(), std::vector<std::string>{"listen"});
    ASSERT_FALSE(r.bounds.empty());
    EXPECT_DOUBLE_EQ(r.bounds.front().bound, 49.0);
    EXPECT_DOUBLE_EQ(r.bounds.front().realized_gap, 49.0);
    EXPECT_DOUBLE_EQ(*r.v_star, 99.0);
    EXPECT_DOUBLE_EQ(*r.mdp_pomdp_value, 50.0);
    EXPECT_DOUBLE_EQ(r.qmdp_bound, 99.0);
    EXPECT_DOUBLE_EQ(r.hindsight_bound, 100.0);
    EXPECT_TRUE(r.exact_solver_invoked);
}

TEST(Analyze, WorthlessListenIsSuitable) {
    TigerParams p;
    p.listen_accuracy = 0.5;
    auto r = analyze(build_tiger(p), {});
    EXPECT_TRUE(r.qualifying_actions().empty());
    EXPECT_EQ(r.verdict, Verdict::suitable);
}

TEST(Analyze, UavIsUnsuitable) {
    auto r = analyze(build_uav_grid(), {});
    EXPECT_EQ(r.verdict, Verdict::unsuitable);
    EXPECT_EQ(r.qualifying_actions(), std::vector<std::string>{"up"});
    EXPECT_NEAR(*r.mdp_pomdp_value, 1595.0 / 24.0, 1e-9);
    EXPECT_GT(r.bound_nodes_checked, 1u);
}

TEST(Lint, NeverBuildsTheOptimalCache) {
    auto before = OptimalCache::constructed_count();
    auto tiger = lint(build_tiger());
    auto uav_rep = lint(build_uav_grid());
    EXPECT_EQ(OptimalCache::constructed_count(), before);
    EXPECT_FALSE(tiger.exact_solver_invoked);
    EXPECT_EQ(tiger.verdict, Verdict::inconclusive);
    EXPECT_EQ(tiger.qualifying_actions(), std::vector<std::string>{"listen"});
    EXPECT_EQ(uav_rep.qualifying_actions(), std::vector<std::string>{"up"});
    EXPECT_FALSE(tiger.v_star);
    EXPECT_TRUE(tiger.bounds.empty());
}

TEST(Lint, NoInformativeActionMeansSuitable) {
    auto r = lint(random_pomdp(3, 3, 2, 2, 2));
    EXPECT_TRUE(r.qualifying_actions().empty());
    EXPECT_EQ(r.verdict, Verdict::suitable);
}

TEST(Report, MachineRecordIsSelfContained) {
    AnalysisOptions opt;
    opt.problem_name = "tiger";
    auto j = to_json(analyze(build_tiger(), opt));
    auto back = nlohmann::json::parse(j.dump());
    EXPECT_EQ(back["record"], "analysis");
    EXPECT_EQ(back["verdict"], "unsuitable");
    EXPECT_EQ(back["model"]["states"], 2);
    EXPECT_DOUBLE_EQ(back["v_star"].get<double>(), 99.0);
    EXPECT_DOUBLE_EQ(back["suboptimality_bounds"][0]["bound"].get<double>(), 49.0);
    EXPECT_EQ(back["informative_actions"][2]["qualifies"], true);
    EXPECT_FALSE(back["notes"].empty());
}

TEST(Report, Deterministic) {
    auto a = to_json(analyze(build_uav_grid(), {})).dump();
    auto b = to_json(analyze(build_uav_grid(), {})).dump();
    EXPECT_EQ(a, b);
}

TEST(Report, TextUsesNineDecimals) {
    auto text = to_text(analyze(build_tiger(), {}));
    EXPECT_NE(text.find("V*(b0):                   99.000000000"), std::string::npos);
    EXPECT_NE(text.find("verdict: unsuitable"), std::string::npos);
    EXPECT_NE(text.find("note: tie rule: uniform"), std::string::npos);
    EXPECT_EQ(fixed9(1.0 / 3.0), "0.333333333");
}
