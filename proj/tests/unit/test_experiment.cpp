#include <cmath>

#include <doctest.h>
#include <flexdesign/flexdesign.hpp>

using namespace flexdesign;

namespace {

ExperimentPlan small_plan(InstanceSource source, std::vector<Method> methods) {
  ExperimentPlan plan;
  plan.source = std::move(source);
  plan.methods = std::move(methods);
  plan.gamma_grid = {2, 6};
  plan.n_graphs = 4;
  plan.n_scenarios = 25;
  plan.master_seed = 17;
  return plan;
}

}  // namespace

TEST_CASE("full flexibility rows are exactly one") {
  auto plan = small_plan(ParetoFamily{30, 30, 0.5, 50, 2}, {Method::FULL, Method::TPC});
  auto table = run_ratio_experiment(plan, {1});
  REQUIRE(table.rows.size() == 4);
  for (const auto& r : table.rows) {
    if (r.method != Method::FULL) continue;
    CHECK(r.mean_ratio == 1.0);
    CHECK(r.std_ratio == 0.0);
    CHECK(r.optimality_freq == 1.0);
    CHECK(r.mean_edges == 900.0);
  }
}

TEST_CASE("rows cover every method and gamma") {
  auto plan = small_plan(TwoLevelFamily{20, 0.2}, {Method::TPC, Method::WPC, Method::UPC});
  auto table = run_ratio_experiment(plan, {1});
  CHECK(table.rows.size() == 6);
  for (auto method : plan.methods)
    for (double gamma : plan.gamma_grid) {
      const auto* row = table.find(method, gamma);
      REQUIRE(row != nullptr);
      CHECK(row->n_samples == 100);
      CHECK(row->mean_ratio >= 0.0);
      CHECK(row->mean_ratio <= 1.0);
      // relative optimality at eps implies ratio >= (1 - eps) on that fraction
      CHECK(row->mean_ratio >= row->optimality_freq * (1 - plan.epsilon) - 1e-12);
    }
  CHECK(table.find(Method::FULL, 2) == nullptr);
}

TEST_CASE("results do not depend on the number of workers") {
  auto plan = small_plan(UniformFamily{25, 20, 5}, {Method::TPC, Method::WPC});
  const auto one = format_table(run_ratio_experiment(plan, {1}), TableFormat::csv);
  const auto two = format_table(run_ratio_experiment(plan, {2}), TableFormat::csv);
  const auto three = format_table(run_ratio_experiment(plan, {3}), TableFormat::csv);
  CHECK(one == two);
  CHECK(one == three);
}

TEST_CASE("methods share scenarios and graph seeds") {
  // on a symmetric instance TPC and WPC coincide pair by pair
  auto sys = make_instance_from_means(std::vector<double>(20, 1.0), std::vector<double>(20, 1.0));
  auto plan = small_plan(FixedInstance{sys}, {Method::TPC, Method::WPC});
  auto table = run_ratio_experiment(plan, {1});
  for (double gamma : plan.gamma_grid) {
    CHECK(table.find(Method::TPC, gamma)->mean_ratio == table.find(Method::WPC, gamma)->mean_ratio);
    CHECK(table.find(Method::TPC, gamma)->mean_edges == table.find(Method::WPC, gamma)->mean_edges);
  }
}

TEST_CASE("invalid plans are rejected") {
  ExperimentPlan plan;
  plan.gamma_grid.clear();
  CHECK_THROWS_AS(run_ratio_experiment(plan), InvalidInput);
  plan = ExperimentPlan{};
  plan.n_scenarios = 0;
  CHECK_THROWS_AS(plan.validate(), InvalidInput);
  plan = ExperimentPlan{};
  plan.gamma_grid = {-1.0};
  CHECK_THROWS_AS(plan.validate(), InvalidInput);
  CHECK(ExperimentPlan::full_scale(TwoLevelFamily{}).n_scenarios == 1000);
  CHECK(ExperimentPlan::desk_scale(TwoLevelFamily{}).n_graphs == 20);
}

TEST_CASE("csv output") {
  ExperimentTable empty;
  CHECK(format_table(empty, TableFormat::csv) == std::string(kCsvHeader) + "\n");
  CHECK(parse_results_csv(format_table(empty, TableFormat::csv)).rows.empty());

  ExperimentTable table;
  table.rows.push_back({Method::TPC, 10.0, 0.99512345678, 0.0123, 1021.5, 0.75, 4000});
  table.rows.push_back({Method::WPC, 5.0, 0.9, 0.0, 500.0, 0.0, 4000});
  auto csv = format_table(table, TableFormat::csv);
  CHECK(csv.find("TPC,10.000000,0.995123,0.012300,1021.500000,0.750000,4000") != std::string::npos);
  auto back = parse_results_csv(csv);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].method == Method::TPC);
  CHECK(std::abs(back.rows[0].mean_ratio - 0.99512345678) <= 5e-7);
  CHECK(back.rows[1].n_samples == 4000);

  CHECK_THROWS_AS(parse_results_csv("nonsense\n"), InvalidInput);
  CHECK_THROWS_AS(parse_results_csv(std::string(kCsvHeader) + "\nTPC,1,2\n"), InvalidInput);
  CHECK(parse_table_format("json") == TableFormat::json);
  CHECK_THROWS_AS(parse_table_format("xml"), InvalidInput);
}

TEST_CASE("writing results to a bad path raises IoError") {
  CHECK_THROWS_AS(emit_results({}, "/nonexistent-dir/x/results.csv", TableFormat::csv), IoError);
}

TEST_CASE("weighted construction isolates small suppliers at low gamma") {
  for (double alpha : {0.1, 0.2}) {
    auto low = run_isolation_experiment(100, alpha, 1.0 / (8 * alpha), 200, 3);
    CHECK(low.freq_many_isolated >= 0.45);
    auto high = run_isolation_experiment(100, alpha, 1000.0, 50, 3);
    CHECK(high.mean_isolated_U2 < 0.5);
    CHECK(high.freq_many_isolated == 0.0);
  }
}

TEST_CASE("small-half edge count follows gamma alpha n / 2") {
  const double gamma = 10.0, alpha = 0.2;
  const std::size_t graphs = 400;
  auto res = run_isolation_experiment(100, alpha, gamma, graphs, 9);
  CHECK(res.expected_U2_edges == doctest::Approx(100.0));
  // 5000 independent pairs at r = gamma*alpha/100
  const double r = gamma * alpha / 100;
  const double sigma = std::sqrt(5000 * r * (1 - r) / graphs);
  CHECK(std::abs(res.mean_U2_edges - res.expected_U2_edges) <= 3 * sigma);
}

TEST_CASE("full design meets the absolute target on a well-spread instance") {
  auto sys = make_instance_from_means(std::vector<double>(700, 1.0), std::vector<double>(700, 1.0));
  REQUIRE(check_assumptions(sys, 0.3).all_ok());
  ExperimentPlan plan;
  plan.source = FixedInstance{sys};
  plan.methods = {Method::FULL};
  plan.gamma_grid = {1};
  plan.n_graphs = 1;
  plan.n_scenarios = 400;
  plan.epsilon = 0.1;
  auto rows = run_optimality_experiment(plan, {1});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].pooled_freq >= 0.99);
  CHECK(rows[0].n_samples == 400);
}

TEST_CASE("optimality frequency grows with gamma") {
  auto plan = small_plan(TwoLevelFamily{60, 0.2}, {Method::TPC});
  plan.gamma_grid = {0.5, 3, 12};
  plan.n_graphs = 8;
  plan.n_scenarios = 60;
  plan.epsilon = 0.1;
  auto rows = run_optimality_experiment(plan, {1});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].per_graph_freq.size() == 8);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double p = rows[i].pooled_freq;
    const double sigma = std::sqrt(std::max(p * (1 - p), 0.01) / rows[i].n_samples);
    CHECK(rows[i].pooled_freq >= rows[i - 1].pooled_freq - 2 * sigma);
  }
  CHECK(rows[0].pooled_freq < 0.5);
}

TEST_CASE("dense random designs match full flexibility") {
  auto plan = small_plan(UniformFamily{50, 50, 8}, {Method::TPC});
  plan.gamma_grid = {50};
  auto table = run_ratio_experiment(plan, {1});
  CHECK(table.rows[0].mean_ratio >= 0.999);
}

TEST_CASE("design snapshot") {
  auto snap = design_snapshot(DesignGraph::full(4, 4), two_level_classes(4));
  CHECK(snap.supply_degree == std::vector<std::size_t>(4, 4));
  CHECK(snap.demand_degree == std::vector<std::size_t>(4, 4));
  CHECK(snap.supply_degree_histogram.at(4) == 4);
  CHECK(snap.class_edge_share.at("U1") == 0.5);
  CHECK(snap.class_edge_share.at("U2") == 0.5);
  CHECK(design_snapshot(DesignGraph::full(4, 4)).class_edge_share.empty());
  CHECK_THROWS_AS(design_snapshot(DesignGraph::full(4, 4), two_level_classes(3)), InvalidInput);
}

TEST_CASE("thresholding shifts edges toward small suppliers") {
  // U2 share is 0.25 / 1.15 under TPC with c = 0.5 and alpha / 2 under WPC
  auto sys = make_two_level_instance(100, 0.2);
  const auto labels = two_level_classes(100);
  double tpc = 0.0, wpc = 0.0;
  const int graphs = 20;
  for (int g = 0; g < graphs; ++g) {
    ConstructionConfig cfg{DirectGamma{5.0}, 0.5, derive_seed(4, g)};
    tpc += design_snapshot(build_design(sys, cfg, Method::TPC), labels).class_edge_share.at("U2");
    wpc += design_snapshot(build_design(sys, cfg, Method::WPC), labels).class_edge_share.at("U2");
  }
  CHECK(std::abs(tpc / graphs - 0.25 / 1.15) <= 0.02);
  CHECK(std::abs(wpc / graphs - 0.1) <= 0.02);
}
