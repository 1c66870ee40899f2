#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pirt/config.hpp"
#include "pirt/faults.hpp"

namespace pirt {

struct CoverageRow {
  FaultInstance instance;
  std::vector<bool> iter_detected;
  bool detected = false;
};

struct CoverageTally {
  std::size_t total = 0;
  std::size_t detected = 0;
  double ratio() const { return total == 0 ? 0.0 : static_cast<double>(detected) / total; }
};

struct CoverageReport {
  std::vector<CoverageRow> rows;
  CoverageTally single;
  CoverageTally two_cell;
  std::map<std::string, CoverageTally> per_primitive;  // catalog entry name
  std::map<std::string, CoverageTally> per_family;     // SF, TF, ..., CFtr (split by arity)
  std::string config_hash;
  std::size_t schedule_r = 0;
  Address n_cells = 0;
  int word_bits = 1;
  std::string scheme;
};

/// Runs the schedule once per instance on a fresh memory with exactly that
/// instance injected. A fault-free pre-run that reports detection aborts with
/// ConsistencyError. Simulations fan out across `jobs` workers (0 = auto);
/// rows keep instance order regardless.
CoverageReport run_coverage(const RunConfig& config, const std::vector<FaultInstance>& instances,
                            int jobs = 0);

/// CSV: '#' metadata lines, a header, then
/// fault_id,primitive,victim,aggressor,iter_flags,detected
void write_coverage_csv(const CoverageReport& report, std::ostream& out);

/// Human-readable summary (deterministic text).
std::string coverage_summary(const CoverageReport& report);

}  // namespace pirt
