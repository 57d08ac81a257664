#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "izone/error.hpp"
#include "izone/network_model.hpp"
#include "support/test_cases.hpp"

using namespace izone;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

const char* kSmallCase = R"({
  "schema_version": 1,
  "nominal_freq_hz": 50.0,
  "buses": [
    {"id": 1, "kind": "generator", "v_mag_pu": 1.0, "v_ang_rad": 0.0},
    {"id": 2, "kind": "generator", "v_mag_pu": 1.0, "v_ang_rad": 0.0},
    {"id": 3, "kind": "load", "v_mag_pu": 1.0, "v_ang_rad": 0.0, "load_mw": 80.0}
  ],
  "branches": [
    {"from": 1, "to": 3, "b_pu": 5.0},
    {"from": 2, "to": 3, "b_pu": 5.0}
  ],
  "generators": [
    {"bus": 1, "h_s": 5.0, "rating_mva": 100.0, "tech": "synchronous"},
    {"bus": 2, "h_s": 5.0, "rating_mva": 100.0}
  ]
})";

}  // namespace

TEST_CASE("load_case parses a well-formed document") {
  const auto p = write_temp("izone_small_case.json", kSmallCase);
  const NetworkCase c = load_case(p);
  CHECK(c.nominal_freq == 50.0);
  CHECK(c.buses.size() == 3);
  CHECK(c.branches.size() == 2);
  CHECK(c.generators.size() == 2);
  CHECK(c.find_bus(3)->kind == BusKind::load);
  CHECK(c.find_bus(3)->load_mw == 80.0);
  CHECK(c.find_generator(2)->tech == GenTech::synchronous);  // default
  CHECK(c.total_load_mw() == 80.0);
  fs::remove(p);
}

TEST_CASE("load_case rejects schema violations with named fields") {
  const auto check_throws = [](const std::string& name, std::string body,
                               const std::string& needle) {
    const auto p = write_temp(name, body);
    try {
      load_case(p);
      FAIL_CHECK("expected Error for " << name);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
    fs::remove(p);
  };

  std::string s(kSmallCase);
  check_throws("izone_bad_version.json",
               [&] { auto t = s; return t.replace(t.find(": 1"), 3, ": 7"); }(),
               "schema_version");
  check_throws("izone_bad_h.json",
               [&] { auto t = s; return t.replace(t.find("\"h_s\": 5.0"), 10,
                                                  "\"h_s\": 0.0"); }(),
               "h_s must be positive");
  check_throws("izone_dup_bus.json",
               [&] { auto t = s; return t.replace(t.find("\"id\": 2"), 7,
                                                  "\"id\": 1"); }(),
               "duplicate bus id 1");
  check_throws("izone_not_json.json", "{ nope", "parse failure");
}

TEST_CASE("validate names unreachable buses") {
  NetworkCase c = testcases::chain_case();
  c.buses.push_back({9, BusKind::load, 1.0, 0.0, 0.0});
  try {
    validate(c);
    FAIL_CHECK("expected disconnected-graph Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("unreachable buses: 9") !=
          std::string::npos);
  }
}

TEST_CASE("bundled 39-bus case") {
  const NetworkCase c = load_case(testcases::fixture("ieee39_base.json"));
  CHECK(c.buses.size() == 39);
  CHECK(c.generators.size() == 10);
  CHECK(c.nominal_freq == 60.0);
  CHECK(c.total_load_mw() == doctest::Approx(6097.1).epsilon(1e-6));
  int gen_buses = 0;
  for (const auto& b : c.buses)
    if (b.kind == BusKind::generator) ++gen_buses;
  CHECK(gen_buses == 10);
}

TEST_CASE("sync_coefficient at a flat operating point") {
  const NetworkCase c = testcases::chain_case();
  CHECK(sync_coefficient(c, 1, 3) == doctest::Approx(-5.0));
  CHECK(sync_coefficient(c, 1, 2) == 0.0);  // no direct branch
  CHECK(sync_coefficient(c, 3, 3) == doctest::Approx(10.0));
}

TEST_CASE("sync_coefficient uses the recorded angles and magnitudes") {
  NetworkCase c = testcases::chain_case();
  c.buses[0].v_ang = 1.0471975511965976;  // 60 deg across branch 1-3
  CHECK(sync_coefficient(c, 1, 3) == doctest::Approx(-2.5));
  c.buses[0].v_mag = 2.0;
  CHECK(sync_coefficient(c, 1, 3) == doctest::Approx(-5.0));
}

TEST_CASE("build_laplacian reproduces the chain matrix") {
  const PartitionedLaplacian pl = build_laplacian(testcases::chain_case());
  REQUIRE(pl.n_gen() == 2);
  REQUIRE(pl.n_load() == 1);
  CHECK(pl.gen_order == std::vector<int>{1, 2});
  CHECK(pl.load_order == std::vector<int>{3});

  Eigen::MatrixXd expected(3, 3);
  expected << 5, 0, -5, 0, 5, -5, -5, -5, 10;
  CHECK((pl.full() - expected).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("parallel branches merge into one coupling") {
  NetworkCase c = testcases::chain_case();
  c.branches.push_back({3, 1, 2.0});  // reversed orientation on purpose
  CHECK(sync_coefficient(c, 1, 3) == doctest::Approx(-7.0));
  const PartitionedLaplacian pl = build_laplacian(c);
  CHECK(pl.p_gk(0, 0) == doctest::Approx(-7.0));
  CHECK(pl.p_gg(0, 0) == doctest::Approx(7.0));
}

TEST_CASE("Laplacian structure on random cases") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const NetworkCase c = testcases::random_case(rng);
    validate(c);
    const PartitionedLaplacian pl = build_laplacian(c);
    const Eigen::MatrixXd l = pl.full();

    CHECK((l - l.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((l.rowwise().sum()).lpNorm<Eigen::Infinity>() < 1e-10);

    // entries agree with the pairwise coefficient
    const auto order = pl.bus_order();
    std::uniform_int_distribution<size_t> pick(0, order.size() - 1);
    for (int s = 0; s < 10; ++s) {
      const size_t i = pick(rng), j = pick(rng);
      CHECK(l(Eigen::Index(i), Eigen::Index(j)) ==
            doctest::Approx(sync_coefficient(c, order[i], order[j]))
                .epsilon(1e-12));
    }

    // positive semidefinite with a single rigid mode
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l).eigenvalues();
    CHECK(ev(0) > -1e-8 * std::max(1.0, ev(ev.size() - 1)));
    CHECK(ev(1) > 1e-8 * ev(ev.size() - 1));  // connected => simple zero
  }
}

TEST_CASE("apply_scenario leaves the base untouched") {
  const NetworkCase base = load_case(testcases::fixture("ieee39_base.json"));
  const ScenarioSpec spec = load_scenario(testcases::fixture("scenario2.json"));
  const double h30 = base.find_generator(30)->inertia_h;

  const NetworkCase out = apply_scenario(base, spec);
  CHECK(base.find_generator(30)->inertia_h == h30);
  CHECK(out.find_generator(30)->inertia_h == 5.6);
  CHECK(out.find_generator(30)->tech == GenTech::dfig_wtg);
  CHECK(out.find_generator(33)->inertia_h == 5.6);
  CHECK(out.generators.size() == base.generators.size());
  CHECK(out.buses.size() == base.buses.size());
}

TEST_CASE("empty scenario is the identity") {
  const NetworkCase base = testcases::chain_case();
  const NetworkCase out = apply_scenario(base, ScenarioSpec{});
  CHECK(out.buses.size() == base.buses.size());
  CHECK(out.find_generator(1)->inertia_h == base.find_generator(1)->inertia_h);
  CHECK(out.total_load_mw() == base.total_load_mw());
}

TEST_CASE("additions create a generator bus and redistribute load") {
  const NetworkCase base = load_case(testcases::fixture("ieee39_base.json"));
  const ScenarioSpec spec = load_scenario(testcases::fixture("scenario3.json"));
  const NetworkCase out = apply_scenario(base, spec);

  CHECK(out.generators.size() == 11);
  CHECK(out.find_bus(28)->kind == BusKind::generator);
  CHECK(out.find_generator(28)->inertia_h == 5.6);
  // uniform redistribution keeps the net balance: total load drops by the
  // added rating
  CHECK(out.total_load_mw() ==
        doctest::Approx(base.total_load_mw() - 255.0).epsilon(1e-9));
}

TEST_CASE("scenario errors name the offending bus") {
  const NetworkCase base = testcases::chain_case();
  ScenarioSpec bad;
  bad.replacements.push_back({3, 4.0, GenTech::dfig_wtg});
  CHECK_THROWS_WITH_AS(apply_scenario(base, bad),
                       "replacement at bus 3: no generator there", Error);

  ScenarioSpec dup;
  dup.additions.push_back({1, 50.0, 4.0, GenTech::dfig_wtg});
  CHECK_THROWS_AS(apply_scenario(base, dup), Error);
}
