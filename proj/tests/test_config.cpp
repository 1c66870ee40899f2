#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "pirt/config.hpp"
#include "pirt/report.hpp"

using namespace pirt;

namespace {

const char* kSample =
    "# two-iteration sample\n"
    "[memory]\n"
    "n = 16\n"
    "word_bits = 1\n"
    "read_ports = 1\n"
    "fill = 0\n"
    "\n"
    "[iteration]\n"
    "p = 3\n"
    "q_coeffs = 1,1\n"
    "seed = 1,0\n"
    "trajectory = down\n"
    "scheme = ring\n"
    "misr_poly = 0b10011\n"
    "\n"
    "[iteration]\n"
    "p = 3\n"
    "q_coeffs = 1,0,0,1\n"
    "seed = 1,0,0,0\n"
    "trajectory = pseudorandom\n"
    "addr_poly = 37\n"
    "addr_seed = 5\n"
    "inversion = input_output\n"
    "scheme = scan\n"
    "steps = 32\n"
    "refill = 0\n";

RunConfig sample() {
  std::istringstream in(kSample);
  return parse_run_config(in);
}

}  // namespace

TEST_CASE("parse_run_config reads sections and keys") {
  const RunConfig rc = sample();
  CHECK(rc.memory.spec.n_cells == 16);
  CHECK(rc.memory.spec.word_bits == 1);
  CHECK(rc.memory.fill == 0);
  REQUIRE(rc.schedule.iterations.size() == 2);

  const IterationConfig& first = rc.schedule.iterations[0];
  CHECK(first.feedback.k() == 2);
  CHECK(first.seed == std::vector<Word>({1, 0}));
  CHECK(first.trajectory.kind == TrajectoryKind::Down);
  CHECK(first.scheme == Scheme::Ring);
  REQUIRE(first.misr_poly.has_value());
  CHECK(first.misr_poly->bits == 19);
  CHECK_FALSE(first.steps.has_value());

  const IterationConfig& second = rc.schedule.iterations[1];
  CHECK(second.feedback.k() == 4);
  CHECK(second.trajectory.kind == TrajectoryKind::Pseudorandom);
  CHECK(second.trajectory.addr_poly.bits == 37);
  CHECK(second.trajectory.addr_seed == 5);
  CHECK(second.inversion == InversionMode::InputOutput);
  CHECK(second.scheme == Scheme::Scan);
  CHECK(second.steps == 32u);
  CHECK(second.refill == Word{0});

  CHECK(rc.config_hash.size() == 16);
}

TEST_CASE("config errors carry line numbers") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in);
  };
  CHECK_THROWS_WITH_AS(parse("[memory]\nn = 16\nwhat\n"), doctest::Contains("line 3"),
                       ParseError);
  CHECK_THROWS_AS(parse("[memory]\nn = 16\n[iteration]\nq_coeffs = 1\nseed = 1\n"), ParseError);
  CHECK_THROWS_AS(parse("[memory]\nn = 16\n[iteration]\np = 3\nq_coeffs = 1\nseed = 1\nbogus = 1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("[nonsense]\n"), ParseError);
  CHECK_THROWS_AS(parse("n = 16\n"), ParseError);
  CHECK_THROWS_AS(parse("[memory]\nn = 16\nn = 8\n"), ParseError);
  // addr keys outside pseudorandom trajectories
  CHECK_THROWS_AS(
      parse("[memory]\nn = 16\n[iteration]\np = 3\nq_coeffs = 1,1\nseed = 1,0\naddr_poly = 11\n"),
      ParseError);
  // missing memory section
  CHECK_THROWS_AS(parse("[iteration]\np = 3\nq_coeffs = 1,1\nseed = 1,0\n"), ConfigError);
}

TEST_CASE("integer literals accept decimal, binary and hex") {
  CHECK(parse_int_literal("19") == 19);
  CHECK(parse_int_literal("0b10011") == 19);
  CHECK(parse_int_literal("0x13") == 19);
  CHECK_THROWS_AS(parse_int_literal("12x"), ConfigError);
  CHECK_THROWS_AS(parse_int_literal(""), ConfigError);
}

TEST_CASE("coverage rows follow instance enumeration and stay deterministic") {
  const RunConfig rc = sample();
  const auto instances =
      enumerate_instances(default_catalog(), rc.memory.spec, PlacementMode::AdjacentPairs);
  const CoverageReport a = run_coverage(rc, instances, 4);
  const CoverageReport b = run_coverage(rc, instances, 1);
  REQUIRE(a.rows.size() == instances.size());

  std::ostringstream csv_a, csv_b;
  write_coverage_csv(a, csv_a);
  write_coverage_csv(b, csv_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(coverage_summary(a) == coverage_summary(b));

  // single-cell count: 12 primitives * 16 cells
  CHECK(a.single.total == 192);
  CHECK(a.two_cell.total == 32 * 30);
}

TEST_CASE("coverage with an empty fault list emits NA ratios") {
  const RunConfig rc = sample();
  const CoverageReport empty = run_coverage(rc, {}, 1);
  CHECK(empty.rows.empty());
  const std::string summary = coverage_summary(empty);
  CHECK(summary.find("R_single = NA") != std::string::npos);
  CHECK(summary.find("R_two    = NA") != std::string::npos);
  std::ostringstream csv;
  write_coverage_csv(empty, csv);
  CHECK(csv.str().find("fault_id,primitive,victim,aggressor,iter_flags,detected\n") !=
        std::string::npos);
}

TEST_CASE("csv layout is stable") {
  const RunConfig rc = sample();
  std::vector<FaultInstance> one{
      enumerate_instances({default_catalog()[0]}, rc.memory.spec, PlacementMode::Single)[3]};
  const CoverageReport rep = run_coverage(rc, one, 1);
  std::ostringstream csv;
  write_coverage_csv(rep, csv);
  const std::string text = csv.str();
  CHECK(text.find("SF0:v3.0,<1/0/->,3.0,,") != std::string::npos);
}
