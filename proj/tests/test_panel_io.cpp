#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hmjp/io.hpp"
#include "hmjp/simulate.hpp"
#include "oracle.hpp"

using namespace hmjp;

TEST_CASE("panel CSV parsing") {
  SUBCASE("two rows, one subject") {
    std::istringstream in("subject,time,state\na,0,0\na,2.5,1\n");
    const PanelDataset panel = parse_panel_csv(in);
    REQUIRE(panel.subjects.size() == 1);
    CHECK(panel.subjects[0].times == std::vector<double>{0.0, 2.5});
    CHECK(panel.subjects[0].states == std::vector<int>{0, 1});
  }
  SUBCASE("rows in any order are grouped and sorted") {
    std::istringstream in(
        "subject,time,state\nb,1,1\na,3,0\nb,0,0\na,1,1\n");
    const PanelDataset panel = parse_panel_csv(in);
    REQUIRE(panel.subjects.size() == 2);
    CHECK(panel.subjects[0].id == "b");
    CHECK(panel.subjects[0].times == std::vector<double>{0.0, 1.0});
    CHECK(panel.subjects[1].times == std::vector<double>{1.0, 3.0});
  }
  SUBCASE("bad state names the line") {
    std::istringstream in("subject,time,state\na,0,0\na,1,2\n");
    try {
      parse_panel_csv(in);
      FAIL("expected PanelFormatError");
    } catch (const PanelFormatError &e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate time rejected") {
    std::istringstream in("subject,time,state\na,1,0\na,1,1\n");
    CHECK_THROWS_AS(parse_panel_csv(in), PanelFormatError);
  }
  SUBCASE("malformed rows rejected") {
    std::istringstream in1("subject,time,state\na,xyz,0\n");
    CHECK_THROWS_AS(parse_panel_csv(in1), PanelFormatError);
    std::istringstream in2("subject,time,state\na,-1,0\n");
    CHECK_THROWS_AS(parse_panel_csv(in2), PanelFormatError);
    std::istringstream in3("subject,time,state\na,1\n");
    CHECK_THROWS_AS(parse_panel_csv(in3), PanelFormatError);
    std::istringstream in4("time,subject\n");
    CHECK_THROWS_AS(parse_panel_csv(in4), PanelFormatError);
  }
  SUBCASE("grid files may omit the state column") {
    std::istringstream in("subject,time\na,0\na,4\n");
    const PanelDataset grid = parse_grid_csv(in);
    CHECK(grid.subjects[0].times == std::vector<double>{0.0, 4.0});
    std::istringstream strict("subject,time\na,0\n");
    CHECK_THROWS_AS(parse_panel_csv(strict), PanelFormatError);
  }
}

TEST_CASE("write/parse round trip is the identity") {
  const PanelDataset panel = simulate_panel_regular(
      oracle::table1_channels(), 25, 13, 60.0, make_initial_distribution(0.5), 123);
  std::ostringstream out;
  write_panel_csv(panel, out, "tool=hmjp test\nseed=123");
  std::istringstream in(out.str());
  const PanelDataset back = parse_panel_csv(in);
  REQUIRE(back.subjects.size() == panel.subjects.size());
  for (std::size_t j = 0; j < panel.subjects.size(); ++j) {
    CHECK(back.subjects[j].id == panel.subjects[j].id);
    CHECK(back.subjects[j].times == panel.subjects[j].times);
    CHECK(back.subjects[j].states == panel.subjects[j].states);
  }
}

TEST_CASE("validation report") {
  SUBCASE("valid panel has no violations") {
    PanelDataset panel;
    panel.subjects.push_back({"a", {0.0, 1.0, 3.0}, {0, 1, 0}});
    const ValidationReport rep = validate_panel(panel);
    CHECK(rep.valid());
    CHECK(rep.intervals_from0 == 1);
    CHECK(rep.intervals_from1 == 1);
    CHECK(rep.exposure_from0 == doctest::Approx(1.0));
    CHECK(rep.exposure_from1 == doctest::Approx(2.0));
  }
  SUBCASE("single-observation subject warns") {
    PanelDataset panel;
    panel.subjects.push_back({"a", {0.0}, {0}});
    const ValidationReport rep = validate_panel(panel);
    CHECK(rep.valid());
    CHECK(rep.warnings.size() == 1);
  }
  SUBCASE("violations are reported, not thrown") {
    PanelDataset panel;
    panel.subjects.push_back({"a", {0.0, 0.0}, {0, 2}});
    panel.subjects.push_back({"a", {1.0}, {0}});
    const ValidationReport rep = validate_panel(panel);
    CHECK_FALSE(rep.valid());
    CHECK(rep.violations.size() >= 3); // nonincreasing time, bad state, dup id
  }
  SUBCASE("regular simulated panel counts") {
    const PanelDataset panel = simulate_panel_regular(
        oracle::table3_channels(), 100, 50, 100.0, make_initial_distribution(0.5), 7);
    const ValidationReport rep = validate_panel(panel);
    CHECK(rep.valid());
    CHECK(rep.intervals_from0 + rep.intervals_from1 == 4900);
    CHECK(rep.exposure_from0 + rep.exposure_from1 ==
          doctest::Approx(100.0 * 100.0).epsilon(1e-12));
  }
}

TEST_CASE("visit summary") {
  SUBCASE("constant visit count") {
    PanelDataset panel;
    for (int j = 0; j < 5; ++j)
      panel.subjects.push_back({"s" + std::to_string(j), {0.0, 1.0, 2.0}, {0, 0, 0}});
    const VisitSummary vs = visit_summary(panel);
    CHECK(vs.min_visits == 3);
    CHECK(vs.max_visits == 3);
    CHECK(vs.sd == 0.0);
  }
  SUBCASE("three subjects") {
    PanelDataset panel;
    const int counts[3] = {9, 29, 48};
    for (int c : counts) {
      PanelDataset::Subject s;
      s.id = "v" + std::to_string(c);
      for (int i = 0; i < c; ++i) {
        s.times.push_back(i);
        s.states.push_back(0);
      }
      panel.subjects.push_back(std::move(s));
    }
    const VisitSummary vs = visit_summary(panel);
    CHECK(vs.min_visits == 9);
    CHECK(vs.max_visits == 48);
    CHECK(vs.median == 29.0);
  }
  SUBCASE("engineered real-life-grid statistics") {
    PanelDataset panel;
    int j = 0;
    for (int c : oracle::engineered_visit_counts()) {
      PanelDataset::Subject s;
      s.id = "p" + std::to_string(++j);
      for (int i = 0; i < c; ++i) {
        s.times.push_back(i);
        s.states.push_back(i % 2);
      }
      panel.subjects.push_back(std::move(s));
    }
    const VisitSummary vs = visit_summary(panel);
    CHECK(vs.subjects == 93);
    CHECK(vs.min_visits == 9);
    CHECK(vs.max_visits == 48);
    CHECK(vs.median == 29.0);
    CHECK(vs.q1 == 17.0);
    CHECK(vs.q3 == 39.0);
    CHECK(vs.mean == doctest::Approx(29.0).epsilon(1e-12));
    CHECK(std::lround(vs.sd) == 12);
  }
  SUBCASE("empty panel throws") {
    CHECK_THROWS_AS(visit_summary(PanelDataset{}), std::invalid_argument);
  }
}

TEST_CASE("chain CSV round trip") {
  ChainOutput chain;
  chain.family = RateFamily::weibull;
  chain.seed = 99;
  chain.iterations = 3;
  for (int i = 1; i <= 3; ++i) {
    ChainRecord rec;
    rec.iteration = i;
    rec.theta = {1.0 + 0.1 * i, 0.006 * i, 0.8 / i, 0.023};
    rec.accept0 = i % 2;
    rec.accept1 = 1;
    rec.trunc0 = 0.25 * i;
    rec.trunc1 = 1.0 / (3.0 * i);
    chain.draws.push_back(rec);
  }
  std::ostringstream out;
  write_chain_csv(chain, out, "model=weibull\nseed=99\niterations=3");
  std::istringstream in(out.str());
  const ChainOutput back = read_chain_csv(in);
  CHECK(back.family == RateFamily::weibull);
  CHECK(back.seed == 99);
  REQUIRE(back.draws.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.draws[i].theta.shape0 == chain.draws[i].theta.shape0);
    CHECK(back.draws[i].theta.rate0 == chain.draws[i].theta.rate0);
    CHECK(back.draws[i].theta.shape1 == chain.draws[i].theta.shape1);
    CHECK(back.draws[i].theta.rate1 == chain.draws[i].theta.rate1);
    CHECK(back.draws[i].trunc0 == chain.draws[i].trunc0);
    CHECK(back.draws[i].trunc1 == chain.draws[i].trunc1);
  }
}

TEST_CASE("density grid integrates to one") {
  ChainOutput chain;
  Rng rng(13);
  for (int i = 0; i < 4000; ++i) {
    ChainRecord rec;
    rec.iteration = i + 1;
    rec.theta = {std::exp(0.2 * rng.normal()), rng.gamma(3.0, 2.0),
                 std::exp(0.3 * rng.normal()), rng.gamma(2.0, 5.0)};
    chain.draws.push_back(rec);
  }
  std::ostringstream out;
  write_density_csv(chain, 512, out, "");
  // trapezoid integral per parameter
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line); // header
  std::string cur_param;
  std::vector<double> xs, ys;
  auto flush = [&]() {
    if (xs.size() < 2) return;
    double integral = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i)
      integral += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
    xs.clear();
    ys.clear();
  };
  int params_seen = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(','), c2 = line.rfind(',');
    const std::string param = line.substr(0, c1);
    if (param != cur_param) {
      flush();
      cur_param = param;
      ++params_seen;
    }
    xs.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    ys.push_back(std::stod(line.substr(c2 + 1)));
  }
  flush();
  CHECK(params_seen == 4);
}

TEST_CASE("degenerate chain density is flagged, summary still works") {
  ChainOutput chain;
  for (int i = 0; i < 100; ++i) {
    ChainRecord rec;
    rec.iteration = i + 1;
    rec.theta = {1.0, 0.5, 1.0, 0.25}; // identical draws
    chain.draws.push_back(rec);
  }
  std::vector<std::string> degenerate;
  std::ostringstream out;
  write_density_csv(chain, 128, out, "", &degenerate);
  CHECK(degenerate.size() == 4);
  CHECK(out.str().find("# degenerate=gamma0") != std::string::npos);
  const auto summary = posterior_summary(chain);
  CHECK(summary[1].median == 0.5);
  CHECK(summary[1].lo95 == 0.5);
  CHECK(summary[1].hi95 == 0.5);
}
