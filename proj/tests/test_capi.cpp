#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <unistd.h>

#include "hmjp/hmjp.h"

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("hmjp_capi_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char *name) const { return (path / name).string(); }
};

hmjp_model_spec table3_spec() {
  hmjp_model_spec m;
  m.channel0 = {HMJP_CONSTANT, 1.0, 0.047};
  m.channel1 = {HMJP_CONSTANT, 1.0, 0.051};
  m.init_prob_state1 = 0.5;
  return m;
}

} // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::string(hmjp_version()) == HMJP_VERSION_STRING);
  hmjp_panel *panel = nullptr;
  CHECK(hmjp_panel_read_csv("/nonexistent/nowhere.csv", &panel) != HMJP_OK);
  CHECK(std::string(hmjp_last_error()).size() > 0);
  CHECK(hmjp_panel_read_csv(nullptr, &panel) == HMJP_ERR_USAGE);
}

TEST_CASE("simulate, write, read, validate through the C surface") {
  TempDir dir;
  const hmjp_model_spec spec = table3_spec();
  hmjp_panel *panel = nullptr;
  REQUIRE(hmjp_simulate_regular(&spec, 30, 10, 50.0, 7, &panel) == HMJP_OK);
  CHECK(hmjp_panel_num_subjects(panel) == 30);
  CHECK(hmjp_panel_num_observations(panel) == 300);
  CHECK(hmjp_panel_num_intervals(panel) == 270);

  const std::string path = dir.file("panel.csv");
  REQUIRE(hmjp_panel_write_csv(panel, path.c_str(), "seed=7\nmodel=constant") == HMJP_OK);

  hmjp_panel *back = nullptr;
  REQUIRE(hmjp_panel_read_csv(path.c_str(), &back) == HMJP_OK);
  CHECK(hmjp_panel_num_observations(back) == 300);

  char *report = nullptr;
  int violations = -1;
  REQUIRE(hmjp_panel_validate(back, &report, &violations) == HMJP_OK);
  CHECK(violations == 0);
  CHECK(std::string(report).find("violations: 0") != std::string::npos);
  hmjp_string_free(report);
  hmjp_panel_free(back);
  hmjp_panel_free(panel);
}

TEST_CASE("determinism of simulation through the C surface") {
  const hmjp_model_spec spec = table3_spec();
  hmjp_panel *a = nullptr, *b = nullptr;
  REQUIRE(hmjp_simulate_regular(&spec, 10, 8, 40.0, 123, &a) == HMJP_OK);
  REQUIRE(hmjp_simulate_regular(&spec, 10, 8, 40.0, 123, &b) == HMJP_OK);
  TempDir dir;
  const std::string pa = dir.file("a.csv"), pb = dir.file("b.csv");
  REQUIRE(hmjp_panel_write_csv(a, pa.c_str(), "") == HMJP_OK);
  REQUIRE(hmjp_panel_write_csv(b, pb.c_str(), "") == HMJP_OK);
  std::ifstream fa(pa), fb(pb);
  const std::string ca((std::istreambuf_iterator<char>(fa)), {});
  const std::string cb((std::istreambuf_iterator<char>(fb)), {});
  CHECK(ca == cb);
  hmjp_panel_free(a);
  hmjp_panel_free(b);
}

TEST_CASE("tpm through the C surface") {
  double closed[4], quad[4];
  REQUIRE(hmjp_tpm_closed_form(0.047, 0.051, 0.0, 10.0, closed) == HMJP_OK);
  CHECK(closed[1] == doctest::Approx(0.29959569748963492).epsilon(1e-13));
  const hmjp_model_spec spec = table3_spec();
  REQUIRE(hmjp_tpm_quadrature(&spec, 0.0, 10.0, 1e-10, quad) == HMJP_OK);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(quad[i] - closed[i]) < 1e-10);
  CHECK(hmjp_tpm_closed_form(0.1, 0.1, 5.0, 1.0, closed) == HMJP_ERR_USAGE);
}

TEST_CASE("fit, chain io, summary and densities through the C surface") {
  TempDir dir;
  const hmjp_model_spec spec = table3_spec();
  hmjp_panel *panel = nullptr;
  REQUIRE(hmjp_simulate_regular(&spec, 40, 20, 100.0, 5, &panel) == HMJP_OK);

  hmjp_fit_options opt;
  hmjp_fit_options_init(&opt);
  opt.family = HMJP_CONSTANT;
  opt.iterations = 300;
  opt.burn_in = 100;
  opt.seed = 9;

  hmjp_chain *chain = nullptr;
  REQUIRE(hmjp_fit(panel, &opt, &chain) == HMJP_OK);
  CHECK(hmjp_chain_num_draws(chain) == 200);

  double median[4], lo[4], hi[4];
  REQUIRE(hmjp_chain_summary(chain, median, lo, hi) == HMJP_OK);
  CHECK(median[0] == 1.0); // constant model pins the shapes
  CHECK(median[1] > 0.0);
  CHECK(lo[1] < median[1]);
  CHECK(hi[1] > median[1]);

  double trunc[2];
  REQUIRE(hmjp_chain_truncation(chain, trunc) == HMJP_OK);
  CHECK(trunc[0] > 0.0);
  CHECK(trunc[0] < 1.0);

  const std::string chain_path = dir.file("chain.csv");
  REQUIRE(hmjp_chain_write_csv(chain, chain_path.c_str(),
                               "model=constant\nseed=9") == HMJP_OK);
  hmjp_chain *loaded = nullptr;
  REQUIRE(hmjp_chain_read_csv(chain_path.c_str(), &loaded) == HMJP_OK);
  CHECK(hmjp_chain_num_draws(loaded) == 200);
  double median2[4], lo2[4], hi2[4];
  REQUIRE(hmjp_chain_summary(loaded, median2, lo2, hi2) == HMJP_OK);
  for (int i = 0; i < 4; ++i) CHECK(median2[i] == median[i]); // full round trip

  int degenerate = -1;
  REQUIRE(hmjp_chain_density_write_csv(loaded, 128, dir.file("density.csv").c_str(),
                                       "", &degenerate) == HMJP_OK);
  CHECK(degenerate == 2); // pinned shapes have zero variance

  // invalid configurations surface as usage errors
  opt.burn_in = 5000;
  hmjp_chain *bad = nullptr;
  CHECK(hmjp_fit(panel, &opt, &bad) == HMJP_ERR_USAGE);

  hmjp_chain_free(loaded);
  hmjp_chain_free(chain);
  hmjp_panel_free(panel);
}

TEST_CASE("exact fit through the C surface") {
  const hmjp_model_spec spec = table3_spec();
  hmjp_panel *panel = nullptr;
  REQUIRE(hmjp_simulate_regular(&spec, 100, 50, 100.0, 5150, &panel) == HMJP_OK);
  double est[2], lo[2], hi[2];
  int boundary[2];
  REQUIRE(hmjp_exact_fit_constant(panel, 0.5, est, lo, hi, boundary) == HMJP_OK);
  CHECK(boundary[0] == 0);
  CHECK(boundary[1] == 0);
  CHECK(est[0] > 0.02);
  CHECK(est[0] < 0.09);
  CHECK(lo[0] < est[0]);
  CHECK(hi[0] > est[0]);
  hmjp_panel_free(panel);
}

TEST_CASE("grid reuse through the C surface") {
  TempDir dir;
  const std::string grid_path = dir.file("grid.csv");
  {
    std::ofstream out(grid_path);
    out << "subject,time\nx,0\nx,5\nx,9\ny,1\ny,4\n";
  }
  hmjp_panel *grid = nullptr;
  REQUIRE(hmjp_grid_read_csv(grid_path.c_str(), &grid) == HMJP_OK);
  const hmjp_model_spec spec = table3_spec();
  hmjp_panel *panel = nullptr;
  REQUIRE(hmjp_simulate_on_grid(&spec, grid, 3, &panel) == HMJP_OK);
  CHECK(hmjp_panel_num_subjects(panel) == 2);
  CHECK(hmjp_panel_num_observations(panel) == 5);
  hmjp_panel_free(panel);
  hmjp_panel_free(grid);
}
