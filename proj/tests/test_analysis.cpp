#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "scrid/analysis.hpp"
#include "scrid/error.hpp"

using namespace scrid;

namespace {

ChainOutput chain_of_N(const std::vector<int>& Ns) {
  ChainOutput c;
  std::size_t t = 0;
  for (int n : Ns) c.samples.push_back({++t, 0.2, 0.5, 0.4, n, -10.0});
  return c;
}

}  // namespace

TEST_CASE("quantiles interpolate linearly between order statistics") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  CHECK_THROWS_AS(quantile_sorted(v, 1.5), Error);
}

TEST_CASE("summaries of simple chains") {
  const auto constant = summarize(chain_of_N({7, 7, 7, 7}));
  CHECK(constant.N.mean == 7.0);
  CHECK(constant.N.sd == 0.0);
  CHECK(constant.N.q025 == 7.0);
  CHECK(constant.N.q975 == 7.0);
  CHECK(constant.lambda0.mean == doctest::Approx(0.2));

  const auto s = summarize(chain_of_N({1, 1, 2}));
  CHECK(s.N_mode == 1);
  CHECK(s.N.mean == doctest::Approx(4.0 / 3.0));
  CHECK(s.N.sd == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(s.draws == 3);
  CHECK_THROWS_AS(summarize(chain_of_N({1})), Error);
}

TEST_CASE("mode picks the smallest value on ties; summaries ignore sample order") {
  CHECK(posterior_mode(std::vector<int>{5, 3, 5, 3, 9}) == 3);
  const auto a = summarize(chain_of_N({4, 9, 1, 6, 6, 2}));
  const auto b = summarize(chain_of_N({6, 2, 9, 6, 1, 4}));
  CHECK(a.N.mean == b.N.mean);
  CHECK(a.N.sd == b.N.sd);
  CHECK(a.N.q25 == b.N.q25);
}

TEST_CASE("id match tables") {
  AugmentedDataset d;
  d.left = fixtures::from_rows({{1, 0}, {0, 1}, {0, 0}, {0, 0}}, 1);
  d.right = fixtures::from_rows({{1, 0}, {0, 0}, {0, 0}, {0, 0}}, 1);
  d.M = 4;
  d.J = 2;
  d.K = 1;
  d.n_left = 2;
  d.n_right = 1;
  ChainOutput c;
  SUBCASE("single draw") {
    c.id_samples = {{1, 0, 1}};
    const auto t = id_match_table(c, 0, d);
    REQUIRE(t.entries.size() == 1);
    CHECK(*t.entries[0].left_index == 1);
    CHECK(t.total == 1);
  }
  SUBCASE("uncaptured left rows pool as NEW") {
    c.id_samples = {{1, 0, 2}, {2, 0, 3}, {3, 0, 2}};
    const auto t = id_match_table(c, 0, d);
    REQUIRE(t.entries.size() == 1);
    CHECK_FALSE(t.entries[0].left_index);
    CHECK(t.entries[0].count == 3);
  }
  SUBCASE("ordering and totals") {
    c.id_samples = {{1, 0, 0}, {2, 0, 1}, {3, 0, 1}, {4, 0, 3}, {5, 0, 0}, {6, 0, 1}};
    const auto t = id_match_table(c, 0, d);
    REQUIRE(t.entries.size() == 3);
    CHECK(*t.entries[0].left_index == 1);
    CHECK(*t.entries[1].left_index == 0);
    CHECK_FALSE(t.entries[2].left_index);
    std::size_t sum = 0;
    for (const auto& e : t.entries) sum += e.count;
    CHECK(sum == t.total);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(id_match_table(c, 0, d), Error);
    c.id_samples = {{1, 0, 1}};
    CHECK_THROWS_AS(id_match_table(c, 1, d), Error);
  }
}

TEST_CASE("id recovery scoring") {
  AugmentedDataset d;
  d.left = fixtures::from_rows({{1, 0}, {0, 1}, {0, 0}, {0, 0}}, 1);
  d.right = fixtures::from_rows({{1, 0}, {0, 1}, {0, 0}, {0, 0}}, 1);
  d.M = 4;
  d.J = 2;
  d.K = 1;
  d.n_left = 2;
  d.n_right = 2;
  const IdAssignment key({0, 3, 1, 2});  // right row 1 is a new individual
  ChainOutput clamped;
  for (std::size_t t = 1; t <= 10; ++t) {
    clamped.id_samples.push_back({t, 0, 0});
    clamped.id_samples.push_back({t, 1, t % 2 ? 2u : 3u});  // NEW either way
  }
  const auto r = score_id_recovery(clamped, d, key);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].prob_true == 1.0);
  CHECK_FALSE(r.rows[1].true_left);
  CHECK(r.rows[1].prob_true == 1.0);
  CHECK(r.frac_modal_correct == 1.0);
  CHECK(r.rows[0].n_candidates == 3);
  CHECK_THROWS_AS(score_id_recovery(clamped, d, IdAssignment::identity(3)), Error);
}

TEST_CASE("estimator labels") {
  for (const auto& e : standard_estimators()) CHECK(parse_estimator(e.label()).label() == e.label());
  CHECK(parse_estimator("nID=25").n_known == 25);
  CHECK_THROWS_AS(parse_estimator("nID=x"), Error);
  CHECK(factorial_grid(10, 250).size() == 8);
  CHECK(factorial_grid(10, 250)[0].name == "N120_sigma0.7_lambda0.2");
}

TEST_CASE("study harness with a clamped fitter") {
  auto scenarios = factorial_grid(10, 250);
  scenarios.resize(1);
  const std::vector<Estimator> estimators = {{EstimatorKind::Full, 0},
                                             {EstimatorKind::Known, 10},
                                             {EstimatorKind::AllKnown, 0}};
  StudyOptions opt;
  opt.R = 2;
  opt.master_seed = 5;
  opt.fitter = [](const FitRequest& req) {
    ChainOutput c;
    for (std::size_t t = 1; t <= 4; ++t) c.samples.push_back({t, 0.2, 0.7, 0.5, req.scenario->N, 0.0});
    return c;
  };
  const StudyResult res = run_study(scenarios, estimators, opt);
  REQUIRE(res.metrics.size() == 3);
  for (const auto& m : res.metrics) {
    CHECK(m.coverage == 1.0);
    CHECK(m.sd_of_means == 0.0);
    CHECK(m.mean_of_modes == 120.0);
    CHECK(m.pooled_mode == 120);
    CHECK(m.R == 2);
  }
  CHECK(res.metrics[1].estimator_label == "nID=10");
  CHECK(res.warnings.empty());
}

TEST_CASE("study results do not depend on the worker count; failures are excluded") {
  auto scenarios = factorial_grid(10, 250);
  scenarios.resize(2);
  const auto estimators = standard_estimators();
  StudyOptions opt;
  opt.R = 3;
  opt.master_seed = 11;
  opt.fitter = [](const FitRequest& req) {
    if (req.estimator->kind == EstimatorKind::Heuristic && req.config.seed % 3 == 0)
      throw Error(ErrorKind::Internal, "synthetic failure");
    ChainOutput c;
    const int n = int(req.data->data.n_left + req.config.seed % 7);
    for (std::size_t t = 1; t <= 5; ++t) c.samples.push_back({t, 0.2, 0.7, 0.5, n + int(t), 0.0});
    return c;
  };
  const StudyResult one = run_study(scenarios, estimators, opt);
  opt.workers = 4;
  const StudyResult four = run_study(scenarios, estimators, opt);
  REQUIRE(one.metrics.size() == four.metrics.size());
  for (std::size_t i = 0; i < one.metrics.size(); ++i) {
    CHECK(one.metrics[i].mean_of_means == four.metrics[i].mean_of_means);
    CHECK(one.metrics[i].R == four.metrics[i].R);
  }
  CHECK(one.warnings == four.warnings);
  std::size_t failed = 0;
  for (const auto& r : one.replicates) failed += !r.ok;
  CHECK(failed == one.warnings.size());
  opt.R = 1;
  CHECK_THROWS_AS(run_study(scenarios, estimators, opt), Error);
}
