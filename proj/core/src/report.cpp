#include "pirt/report.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "pirt/engine.hpp"

namespace pirt {

namespace {

CoverageRow simulate_one(const RunConfig& rc, const FaultInstance& fi) {
  MemoryState mem(rc.memory.spec, rc.memory.fill);
  FaultyMemory fm(mem, {fi});
  const std::vector<IterationOutcome> outcomes = run_schedule(fm, rc.schedule);
  CoverageRow row;
  row.instance = fi;
  row.iter_detected.reserve(outcomes.size());
  for (const IterationOutcome& o : outcomes) row.iter_detected.push_back(o.detected);
  row.detected = overall_detected(outcomes);
  return row;
}

std::string format_ratio(const CoverageTally& t) {
  if (t.total == 0) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", t.ratio());
  return buf;
}

}  // namespace

CoverageReport run_coverage(const RunConfig& rc, const std::vector<FaultInstance>& instances,
                            int jobs) {
  // Fault-free sanity pre-run: the golden model must agree with a clean memory.
  {
    MemoryState mem(rc.memory.spec, rc.memory.fill);
    FaultyMemory fm(mem);
    if (overall_detected(run_schedule(fm, rc.schedule))) {
      throw ConsistencyError("fault-free schedule run reported a detection");
    }
  }

  CoverageReport report;
  report.rows.resize(instances.size());
  report.config_hash = rc.config_hash;
  report.schedule_r = rc.schedule.iterations.size();
  report.n_cells = rc.memory.spec.n_cells;
  report.word_bits = rc.memory.spec.word_bits;
  for (std::size_t i = 0; i < rc.schedule.iterations.size(); ++i) {
    if (i) report.scheme += "+";
    report.scheme += rc.schedule.iterations[i].scheme == Scheme::Ring ? "ring" : "scan";
  }

  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, 16);
  workers = std::min<std::size_t>(workers, std::max<std::size_t>(instances.size(), 1));

  if (workers <= 1 || instances.size() < 2) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      report.rows[i] = simulate_one(rc, instances[i]);
    }
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < instances.size(); i += workers) {
            report.rows[i] = simulate_one(rc, instances[i]);
          }
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  for (const CoverageRow& row : report.rows) {
    const bool two = row.instance.primitive.two_cell();
    CoverageTally& arity = two ? report.two_cell : report.single;
    ++arity.total;
    CoverageTally& prim = report.per_primitive[row.instance.name];
    ++prim.total;
    CoverageTally& fam = report.per_family[family_name(row.instance.name)];
    ++fam.total;
    if (row.detected) {
      ++arity.detected;
      ++prim.detected;
      ++fam.detected;
    }
  }
  return report;
}

void write_coverage_csv(const CoverageReport& report, std::ostream& out) {
  out << "# pirt coverage report\n";
  out << "# config_hash=" << report.config_hash << " r=" << report.schedule_r
      << " n=" << report.n_cells << " word_bits=" << report.word_bits
      << " scheme=" << report.scheme << " instances=" << report.rows.size() << "\n";
  out << "fault_id,primitive,victim,aggressor,iter_flags,detected\n";
  for (const CoverageRow& row : report.rows) {
    const FaultInstance& fi = row.instance;
    out << fi.id << ',' << unparse_fp(fi.primitive) << ',' << fi.victim_cell << '.'
        << fi.victim_bit << ',';
    if (fi.aggressor_cell) out << *fi.aggressor_cell << '.' << *fi.aggressor_bit;
    out << ',';
    for (bool d : row.iter_detected) out << (d ? '1' : '0');
    out << ',' << (row.detected ? 1 : 0) << '\n';
  }
}

std::string coverage_summary(const CoverageReport& report) {
  std::ostringstream out;
  out << "instances: " << report.rows.size() << " (single " << report.single.total
      << ", two-cell " << report.two_cell.total << ")\n";
  out << "R_single = " << format_ratio(report.single) << " (" << report.single.detected << "/"
      << report.single.total << ")\n";
  out << "R_two    = " << format_ratio(report.two_cell) << " (" << report.two_cell.detected
      << "/" << report.two_cell.total << ")\n";
  if (!report.per_family.empty()) {
    out << "per-family coverage:\n";
    for (const auto& [name, tally] : report.per_family) {
      out << "  " << name << " = " << format_ratio(tally) << " (" << tally.detected << "/"
          << tally.total << ")\n";
    }
  }
  return out.str();
}

}  // namespace pirt
