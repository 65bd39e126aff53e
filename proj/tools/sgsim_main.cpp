// sgsim command-line front end: simulate / validate / batch.
//
// Exit codes: 0 success, 1 validation failure, 2 internal invariant
// failure, 3 I/O error.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sgsim/engine.hpp"
#include "sgsim/errors.hpp"
#include "sgsim/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInternal = 2;
constexpr int kExitIo = 3;

sgsim::Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return sgsim::load_scenario(in);
}

void print_summary(const std::string& path, const sgsim::RunReport& report) {
  std::cout << path << ": " << report.ticks << " ticks, bill total " << report.bill.total
            << " (peak " << report.bill.charge_peak << ", off-peak " << report.bill.charge_offpeak
            << ", sell-back credit " << report.bill.credit_sellback << "), peak grid import "
            << report.peak_grid_import_w << " W\n";
  if (!report.event_counts.empty()) {
    std::cout << "  events:";
    for (const auto& [name, count] : report.event_counts) {
      std::cout << ' ' << name << "=" << count;
    }
    std::cout << '\n';
  }
}

int run_simulate(const std::string& scenario_path, const std::string& trace_path,
                 const std::string& report_path, bool quiet) {
  const sgsim::Scenario scenario = load_scenario_file(scenario_path);

  std::ofstream trace_file;
  std::unique_ptr<sgsim::TraceCsvWriter> writer;
  if (!trace_path.empty()) {
    trace_file.open(trace_path, std::ios::binary);
    if (!trace_file) throw std::ios_base::failure("cannot open " + trace_path);
    writer = std::make_unique<sgsim::TraceCsvWriter>(trace_file);
  }

  const sgsim::RunReport report = sgsim::run_simulation(
      scenario, writer ? sgsim::TickObserver([&](const sgsim::TickSample& s) {
        writer->write(s.record);
      })
                       : sgsim::TickObserver());

  if (writer) {
    trace_file.flush();
    if (!trace_file) throw std::ios_base::failure("writing " + trace_path + " failed");
  }
  if (!report_path.empty()) {
    std::ofstream report_file(report_path, std::ios::binary);
    if (!report_file) throw std::ios_base::failure("cannot open " + report_path);
    sgsim::emit_report(report, report_file);
  }
  if (!quiet) print_summary(scenario_path, report);
  return kExitOk;
}

int run_validate(const std::string& scenario_path) {
  load_scenario_file(scenario_path);
  std::cout << scenario_path << ": valid\n";
  return kExitOk;
}

struct BatchEntry {
  fs::path path;
  int exit_code = kExitOk;
  std::string line;
};

int run_batch(const std::string& dir, unsigned jobs) {
  std::vector<BatchEntry> entries;
  {
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec) throw std::ios_base::failure("cannot read directory " + dir);
    for (; it != fs::directory_iterator(); ++it) {
      if (it->is_regular_file() && it->path().extension() == ".json") {
        BatchEntry entry;
        entry.path = it->path();
        entries.push_back(std::move(entry));
      }
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const BatchEntry& a, const BatchEntry& b) { return a.path < b.path; });
  if (entries.empty()) {
    std::cout << "no scenario files in " << dir << '\n';
    return kExitOk;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      BatchEntry& entry = entries[i];
      std::ostringstream line;
      try {
        const sgsim::Scenario scenario = load_scenario_file(entry.path.string());
        const sgsim::RunReport report = sgsim::run_simulation(scenario, {});
        line << entry.path.filename().string() << ": ok, " << report.ticks
             << " ticks, bill total " << report.bill.total;
      } catch (const sgsim::ValidationError& e) {
        entry.exit_code = kExitValidation;
        line << entry.path.filename().string() << ": invalid (" << e.what() << ")";
      } catch (const sgsim::ParseError& e) {
        entry.exit_code = kExitValidation;
        line << entry.path.filename().string() << ": parse error (" << e.what() << ")";
      } catch (const sgsim::InternalInvariantError& e) {
        entry.exit_code = kExitInternal;
        line << entry.path.filename().string() << ": internal invariant failure (" << e.what()
             << ")";
      } catch (const std::ios_base::failure& e) {
        entry.exit_code = kExitIo;
        line << entry.path.filename().string() << ": i/o error (" << e.what() << ")";
      }
      entry.line = line.str();
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(jobs, entries.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  int exit_code = kExitOk;
  for (const auto& entry : entries) {
    std::cout << entry.line << '\n';
    exit_code = std::max(exit_code, entry.exit_code);
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic smart-grid plant and tariff controller simulator"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path, report_path, batch_dir;
  bool quiet = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* sim = app.add_subcommand("simulate", "run one scenario");
  sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
  sim->add_option("--trace", trace_path, "write per-tick trace CSV here");
  sim->add_option("--report", report_path, "write run report JSON here");
  sim->add_flag("--quiet", quiet, "suppress the summary line");

  auto* val = app.add_subcommand("validate", "validate a scenario file");
  val->add_option("scenario", scenario_path, "scenario JSON file")->required();

  auto* batch = app.add_subcommand("batch", "simulate every *.json scenario in a directory");
  batch->add_option("dir", batch_dir, "directory of scenario files")->required();
  batch->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(scenario_path, trace_path, report_path, quiet);
    if (val->parsed()) return run_validate(scenario_path);
    return run_batch(batch_dir, jobs);
  } catch (const sgsim::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const sgsim::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const sgsim::InternalInvariantError& e) {
    std::cerr << "internal invariant failure: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
}
