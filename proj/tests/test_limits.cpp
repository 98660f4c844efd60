#include <algorithm>
#include <cmath>
#include <numbers>

#include "anglelab/errors.hpp"
#include "anglelab/geometry.hpp"
#include "anglelab/limits.hpp"
#include "anglelab/serialization.hpp"
#include "doctest.h"

using namespace anglelab;
using std::numbers::pi;

namespace {

BodyPtr square() { return make_body(box_spec({1.0, 1.0})); }

ElongationEstimate exact_lambda(double v) {
  ElongationEstimate e;
  e.value = v;
  e.log_value = std::log(v);
  return e;
}

std::vector<double> exp1_sample(RandomStream& s, std::size_t m) {
  std::vector<double> y(m);
  for (double& v : y) v = s.exponential();
  return y;
}

}  // namespace

TEST_SUITE("trials") {
  TEST_CASE("Y statistic") {
    CHECK(y_statistic(std::log(1.0 / 3.0), 200, 0.0, 2) == 0.0);
    const double want = (1.0 / 3.0) * (200.0 * 200.0 * 200.0 / 6.0) * 1e-5;
    CHECK(y_statistic(std::log(1.0 / 3.0), 200, 1e-5, 2) == doctest::Approx(want).epsilon(1e-14));
    // d = 100: the gap power alone underflows
    const double y = y_statistic(-90.0, 1000, 1e-4, 100);
    CHECK(y == doctest::Approx(std::exp(-90.0 + 3 * std::log(1000.0) - std::log(6.0) +
                                        99 * std::log(1e-4)))
                   .epsilon(1e-13));
  }

  TEST_CASE("trial seeds") {
    CHECK(trial_seed(1729, 0, 0) == substream_seed(1729, 0));
    CHECK(trial_seed(1729, 5, 0) == substream_seed(1729, 5));
    CHECK(trial_seed(1729, 5, 2) == substream_seed(substream_seed(1729, 5), 2));
    CHECK(trial_seed(1729, 5, 1) != trial_seed(1729, 6, 0));
  }

  TEST_CASE("three points, one trial, rebuilt by hand") {
    const auto body = square();
    const auto e = run_trials(*body, 3, 1, exact_lambda(1.0 / 3.0), 99);
    RandomStream s(trial_seed(99, 0, 0));
    const auto c = sample(*body, s, 3);
    double g = INFINITY;
    for (int k = 0; k < 3; ++k)
      g = std::min(g, apex_gap(c.point((k + 1) % 3), c.point(k), c.point((k + 2) % 3)));
    REQUIRE(e.y_values.size() == 1);
    CHECK(e.gaps[0] == doctest::Approx(g).epsilon(1e-14));
    CHECK(e.y_values[0] == doctest::Approx((1.0 / 3.0) * (27.0 / 6.0) * g).epsilon(1e-13));
  }

  TEST_CASE("ensemble bookkeeping and worker independence") {
    const auto body = make_body(ball_spec(3));
    const auto lam = ball_elongation(3);
    const auto a = run_trials(*body, 120, 201, lam, 7, 1);
    const auto b = run_trials(*body, 120, 201, lam, 7, 4);
    CHECK(a.y_values == b.y_values);
    CHECK(a.gaps == b.gaps);
    CHECK(a.cross_checked == 3);  // trials 0, 100, 200
    CHECK(a.resampled == 0);
    CHECK(a.d == 3);
    CHECK(a.spec == to_string(body->spec()));
    for (std::size_t i = 0; i < a.trials; ++i) {
      CHECK(a.y_values[i] >= 0.0);
      const double y = y_statistic(lam.log_value, a.n, a.gaps[i], 3);
      CHECK(std::abs(y - a.y_values[i]) <= 1e-12 * a.y_values[i]);
    }
    CHECK(run_trials(*body, 120, 5, lam, 8).y_values != std::vector<double>(a.y_values.begin(),
                                                                            a.y_values.begin() + 5));
  }

  TEST_CASE("argument checks") {
    const auto body = square();
    CHECK_THROWS_AS(run_trials(*body, 2, 10, exact_lambda(1.0 / 3.0), 1), ValidationError);
    CHECK_THROWS_AS(run_trials(*body, 10, 0, exact_lambda(1.0 / 3.0), 1), ValidationError);
    ElongationEstimate zero;
    CHECK_THROWS_AS(run_trials(*body, 10, 10, zero, 1), ValidationError);
  }
}

TEST_SUITE("goodness of fit") {
  TEST_CASE("KS distance examples") {
    const std::vector<double> zeros(50, 0.0);
    CHECK(ks_distance_exp1(zeros) == doctest::Approx(1.0));
    const std::vector<double> med{std::log(2.0), std::log(2.0)};
    CHECK(ks_distance_exp1(med) == doctest::Approx(0.5).epsilon(1e-15));
    // one point at y: max(F(y), 1 - F(y))
    const std::vector<double> one{1.0};
    CHECK(ks_distance_exp1(one) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(ks_distance_exp1(std::vector<double>{}), ValidationError);
  }

  TEST_CASE("synthetic Exp(1) control") {
    RandomStream s(61);
    const std::size_t m = 100'000;
    const auto y = exp1_sample(s, m);
    CHECK(ks_distance_exp1(y) < 1.36 / std::sqrt(double(m)) * 1.5);
  }

  TEST_CASE("KS null scale over 200 repetitions") {
    RandomStream s(62);
    const std::size_t m = 1000;
    int inside = 0;
    for (int rep = 0; rep < 200; ++rep) {
      const auto y = exp1_sample(s, m);
      inside += ks_distance_exp1(y) * std::sqrt(double(m)) <= 2.5;
    }
    CHECK(inside >= 198);
  }

  TEST_CASE("gap grid") {
    std::vector<double> gaps;
    for (int i = 1; i <= 1000; ++i) gaps.push_back(1e-3 * i);
    gaps.push_back(0.0);
    const auto g = gap_grid(gaps);
    REQUIRE(g.size() == 20);
    CHECK(g.front() == doctest::Approx(0.01).epsilon(2e-3));
    CHECK(g.back() == doctest::Approx(0.99).epsilon(2e-3));
    for (std::size_t i = 1; i < g.size(); ++i)
      CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]).epsilon(1e-12));
  }

  TEST_CASE("report on a small ensemble") {
    const auto body = square();
    const auto e = run_trials(*body, 40, 300, exact_lambda(1.0 / 3.0), 63);
    const auto r = gof_report(e);
    CHECK(r.ks_distance >= 0.0);
    CHECK(r.ks_distance <= 1.0);
    CHECK(r.ks_distance == ks_distance_exp1(e.y_values));
    REQUIRE(r.tail.size() == 20);
    for (const auto& row : r.tail) {
      CHECK(row.c > 0.0);
      CHECK(row.c < pi);
      CHECK(row.empirical >= 0.0);
      CHECK(row.empirical <= 1.0);
      const double want = 1 - std::exp(-(1.0 / 3.0) * (pi - row.c) * 40.0 * 40 * 40 / 6);
      CHECK(row.theoretical == doctest::Approx(want).epsilon(1e-9));
    }
    for (std::size_t i = 1; i < r.ecdf.size(); ++i) {
      CHECK(r.ecdf[i].first > r.ecdf[i - 1].first);
      CHECK(r.ecdf[i].second > r.ecdf[i - 1].second);
    }
    CHECK(r.ecdf.back().second == 1.0);
    auto small = e;
    small.y_values.resize(99);
    CHECK_THROWS_AS(gof_report(small), ValidationError);
  }
}

TEST_SUITE("tail ratio") {
  TEST_CASE("square: ratio trend and the disjointness identity") {
    RandomStream s(71);
    const std::vector<double> eps{0.2, 0.1, 0.05};
    const auto rows = tail_ratio(*square(), exact_lambda(1.0 / 3.0), eps, 4'000'000, s);
    REQUIRE(rows.size() == 3);
    double prev = INFINITY;
    for (const auto& r : rows) {
      MESSAGE("eps " << r.epsilon << " ratio " << r.ratio << " +- " << r.std_error);
      CHECK(r.triples == 4'000'000);
      CHECK(std::abs(r.ratio - 1.0) < prev);
      prev = std::abs(r.ratio - 1.0);
      CHECK(std::abs(r.probability - r.fixed_apex_times3) < 4 * r.identity_std_error);
      CHECK(r.identity_mean == doctest::Approx(r.probability - r.fixed_apex_times3));
      CHECK(r.ratio == doctest::Approx(r.probability / (r.epsilon / 3.0)).epsilon(1e-12));
    }
    CHECK(prev < 0.1);
  }

  TEST_CASE("identity holds far from the small-eps regime") {
    RandomStream s(72);
    const std::vector<double> eps{pi / 3, 1.5};
    const auto rows = tail_ratio(*make_body(ball_spec(3)), ball_elongation(3), eps, 500'000, s);
    for (const auto& r : rows)
      CHECK(std::abs(r.probability - r.fixed_apex_times3) < 4 * r.identity_std_error);
  }

  TEST_CASE("worker count does not change the rows") {
    RandomStream a(73), b(73);
    const std::vector<double> eps{0.3};
    const auto r1 = tail_ratio(*square(), exact_lambda(1.0 / 3.0), eps, 200'000, a, 1);
    const auto r8 = tail_ratio(*square(), exact_lambda(1.0 / 3.0), eps, 200'000, b, 8);
    CHECK(r1[0].probability == r8[0].probability);
    CHECK(r1[0].fixed_apex_times3 == r8[0].fixed_apex_times3);
  }

  TEST_CASE("eps range") {
    RandomStream s(74);
    for (double bad : {0.0, -0.1, pi / 2, 2.0}) {
      const std::vector<double> eps{bad};
      CHECK_THROWS_AS(tail_ratio(*square(), exact_lambda(1.0 / 3.0), eps, 1000, s),
                      ValidationError);
    }
  }
}

TEST_SUITE("conjecture probe") {
  TEST_CASE("Wilson intervals") {
    // reference values from the textbook formula evaluated in Python
    auto w = wilson_interval(5, 10);
    CHECK(w.estimate == 0.5);
    CHECK(w.lo == doctest::Approx(0.23658959361548731).epsilon(1e-14));
    CHECK(w.hi == doctest::Approx(0.7634104063845126).epsilon(1e-14));
    w = wilson_interval(0, 10);
    CHECK(std::abs(w.lo) < 1e-15);
    CHECK(w.hi == doctest::Approx(0.2775401687666166).epsilon(1e-14));
    w = wilson_interval(37, 1000);
    CHECK(w.lo == doctest::Approx(0.02696102468045289).epsilon(1e-13));
    CHECK(w.hi == doctest::Approx(0.05058268341054474).epsilon(1e-13));
    CHECK_THROWS_AS(wilson_interval(0, 0), ValidationError);
  }

  TEST_CASE("ball: symmetrization changes nothing") {
    const auto body = make_body(ball_spec(2));
    const Point u{0.0, 1.0};
    const auto r = conjecture_probe(body, u, 30, 400, {}, 81);
    CHECK(r.rows.size() == 20);
    CHECK(r.original.trials == 400);
    CHECK(r.symmetrized.trials == 400);
    std::size_t flagged = 0;
    for (const auto& row : r.rows) flagged += row.flagged;
    CHECK(flagged == r.flagged);
    CHECK(r.flagged <= 1);
    for (const auto& row : r.rows) {
      CHECK(row.original.lo <= row.original.estimate);
      CHECK(row.original.estimate <= row.original.hi);
    }
  }

  TEST_CASE("4x1 box along its long axis") {
    const auto body = make_body(box_spec({4.0, 1.0}));
    const Point u{1.0, 0.0};
    const auto r = conjecture_probe(body, u, 50, 2000, {}, 82);
    MESSAGE("flagged " << r.flagged << " of " << r.rows.size());
    CHECK(r.flagged == 0);
  }

  TEST_CASE("argument checks") {
    const auto body = square();
    const Point u{1.0, 0.0};
    CHECK_THROWS_AS(conjecture_probe(body, u, 20, 0, {}, 1), ValidationError);
    CHECK_THROWS_AS(conjecture_probe(body, u, 2, 10, {}, 1), ValidationError);
  }
}

TEST_SUITE("serialization") {
  TEST_CASE("round trip and tamper checks") {
    const auto body = square();
    const auto e = run_trials(*body, 30, 150, exact_lambda(1.0 / 3.0), 91);
    const auto j = ensemble_to_json(e);
    CHECK(j["trials"] == 150);
    CHECK(j["lambda"]["method"] == "analytic");
    CHECK(j["tail"].size() == 20);
    const auto back = ensemble_from_json(j);
    CHECK(back.y_values == e.y_values);
    CHECK(back.gaps == e.gaps);
    CHECK(back.lambda.value == e.lambda.value);
    CHECK(ensemble_to_json(back).dump() == j.dump());

    auto bad = j;
    bad["y_values"][3] = bad["y_values"][3].get<double>() * (1 + 1e-9);
    CHECK_THROWS_AS(ensemble_from_json(bad), ValidationError);
    bad = j;
    bad["y_values"][0] = -1.0;
    CHECK_THROWS_AS(ensemble_from_json(bad), ValidationError);
    bad = j;
    bad.erase("seed");
    CHECK_THROWS_AS(ensemble_from_json(bad), ValidationError);
    bad = j;
    bad["trials"] = 151;
    CHECK_THROWS_AS(ensemble_from_json(bad), ValidationError);

    const auto csv = ecdf_csv(gof_report(e));
    CHECK(csv.rfind("y,ecdf\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(gof_report(e).ecdf.size()));
  }

  TEST_CASE("small ensembles carry no tail table") {
    const auto e = run_trials(*square(), 10, 20, exact_lambda(1.0 / 3.0), 92);
    const auto j = ensemble_to_json(e);
    CHECK(j["tail"].empty());
    CHECK(ensemble_from_json(j).trials == 20);
  }
}
