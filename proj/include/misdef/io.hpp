#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "misdef/model.hpp"
#include "misdef/oracles.hpp"

namespace misdef {

/// Attacker output: set mixture from the perturbed-leader solvers, marginal
/// mixture from the gradient solvers.
using AttackerStrategy = std::variant<MixedStrategy, MarginalMixture>;

struct SolveReport {
  std::string solver;                 // "ftpl", "ftpl-asymmetric", "og", ...
  std::vector<std::pair<std::string, std::string>> params;  // echo of the run configuration
  MixedStrategy defense;
  std::optional<AttackerStrategy> attack;
  std::vector<double> iteration_values;
  std::optional<GapCertificate> certificate;
};

// JSON documents ("misdef-instance-v1", "misdef-strategy-v1",
// "misdef-report-v1"). Serialization is canonical: fixed key order via ordered
// JSON, edges in (channel, voter) order, shortest round-trip doubles; equal
// inputs produce byte-identical files.

std::string instance_to_json(const GameInstance& inst,
                             const std::optional<PreferenceModel>& prefs);
std::pair<GameInstance, std::optional<PreferenceModel>> instance_from_json(
    const std::string& text);

void save_instance(const GameInstance& inst, const std::optional<PreferenceModel>& prefs,
                   const std::string& path);
std::pair<GameInstance, std::optional<PreferenceModel>> load_instance(const std::string& path);

std::string strategy_to_json(const AttackerStrategy& strategy);
AttackerStrategy strategy_from_json(const std::string& text);
void save_strategy(const AttackerStrategy& strategy, const std::string& path);
AttackerStrategy strategy_from_file(const std::string& path);

std::string report_to_json(const SolveReport& report);
SolveReport report_from_json(const std::string& text);
void save_report(const SolveReport& report, const std::string& path);
SolveReport report_from_file(const std::string& path);

/// CSV with one '#'-prefixed metadata preamble line, then a header row.
/// Numeric cells use shortest round-trip formatting.
class CsvWriter {
 public:
  CsvWriter(std::string metadata, std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const;

 private:
  std::string text_;
  std::size_t columns_;
};

std::string format_double(double value);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace misdef
