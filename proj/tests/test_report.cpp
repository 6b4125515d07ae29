#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "cfb/report.hpp"

using namespace cfb;
using runner::ReportDocument;
using runner::ScenarioConfig;

TEST_CASE("tolerance overrides reject unknown names") {
  runner::Tolerances tol;
  tol.set("pf", 1e-6);
  CHECK(tol.pf == 1e-6);
  CHECK_THROWS_AS(tol.set("bogus", 1.0), ConfigError);
}

TEST_CASE("config file parsing") {
  const std::string path = "cfb_test_config.tmp";
  {
    std::ofstream out(path);
    out << "# comment\n"
        << "scenario = std_contact\n"
        << "seed = 7\n"
        << "samples = 50\n"
        << "threads = 2\n"
        << "out = r.json\n"
        << "[tolerances]\n"
        << "pf = 1e-7\n"
        << "fat = 1e-5\n";
  }
  const ScenarioConfig config = runner::parse_config_file(path);
  CHECK(config.scenario == "std_contact");
  CHECK(config.seed == 7);
  CHECK(config.samples == 50);
  CHECK(config.threads == 2);
  CHECK(config.out_path == "r.json");
  CHECK(config.tol.pf == 1e-7);
  CHECK(config.tol.fat == 1e-5);
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "scenari = typo\n";
  }
  CHECK_THROWS_AS(runner::parse_config_file(path), ConfigError);
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "[unknown]\n";
  }
  CHECK_THROWS_AS(runner::parse_config_file(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("report schema round-trips") {
  ReportDocument doc;
  doc.scenario = "demo";
  doc.config_echo = {{"seed", 42}};
  doc.wall_ms = 12.5;
  doc.checks.push_back({"floor_check", true, "floor", 8.0, "", std::nullopt});
  Vec w(2);
  w << 0.25, -1.5;
  doc.checks.push_back({"fail_check", false, "residual", 3.25e-4, "witness attached", w});

  const auto j = doc.to_json();
  const ReportDocument back = ReportDocument::from_json(j);
  CHECK(back.to_json().dump() == j.dump());
  CHECK(back.checks.size() == 2);
  CHECK_FALSE(back.all_pass());
  CHECK(back.checks[1].witness.has_value());
  CHECK((*back.checks[1].witness - w).norm() == 0.0);
}

TEST_CASE("scenario registry") {
  const auto names = runner::scenario_names();
  CHECK(names.size() == 10);
  ScenarioConfig config;
  config.scenario = "not_a_scenario";
  CHECK_THROWS_AS(runner::run(config), ConfigError);
}

TEST_CASE("run determinism across repeats and thread counts") {
  ScenarioConfig config;
  config.scenario = "hopf_fatness";
  config.seed = 42;
  config.samples = 20;

  config.threads = 1;
  auto a = runner::run(config);
  auto b = runner::run(config);
  config.threads = 8;
  auto c = runner::run(config);

  auto ja = a.to_json(), jb = b.to_json(), jc = c.to_json();
  ja.erase("wall_ms");
  jb.erase("wall_ms");
  jc.erase("wall_ms");
  CHECK(ja.dump() == jb.dump());
  CHECK(ja.dump() == jc.dump());
  CHECK(a.all_pass());
}

TEST_CASE("summary prints one line per check") {
  ScenarioConfig config;
  config.scenario = "hopf_fatness";
  config.samples = 10;
  const auto doc = runner::run(config);
  const std::string s = doc.summary();
  size_t lines = 0;
  for (char ch : s)
    if (ch == '\n') ++lines;
  CHECK(lines == doc.checks.size() + 1);
  CHECK(s.find("[PASS]") != std::string::npos);
}
