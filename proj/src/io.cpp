#include "misdef/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "misdef/error.hpp"

namespace misdef {

namespace {

using ordered = nlohmann::ordered_json;

constexpr const char* kInstanceFormat = "misdef-instance-v1";
constexpr const char* kStrategyFormat = "misdef-strategy-v1";
constexpr const char* kReportFormat = "misdef-report-v1";

template <class Fn>
auto json_guard(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::io, std::string(what) + ": " + e.what());
  }
}

ordered preferences_to_json(const PreferenceModel& prefs) {
  ordered j;
  if (const auto* known = std::get_if<KnownPreferences>(&prefs)) {
    j["kind"] = "known";
    j["theta"] = std::vector<int>(known->theta.begin(), known->theta.end());
  } else if (const auto* marg = std::get_if<MarginalPreferences>(&prefs)) {
    j["kind"] = "marginals";
    j["probs"] = marg->probs;
  } else if (const auto* sampled = std::get_if<SampledPreferences>(&prefs)) {
    j["kind"] = "samples";
    ordered rows = ordered::array();
    for (const auto& s : sampled->samples) {
      rows.push_back(std::vector<int>(s.begin(), s.end()));
    }
    j["samples"] = std::move(rows);
  } else {
    const auto& adv = std::get<AdversarialPreferences>(prefs);
    j["kind"] = "adversarial";
    j["nominal"] = std::vector<int>(adv.nominal.begin(), adv.nominal.end());
    j["radius"] = adv.radius;
  }
  return j;
}

std::vector<std::uint8_t> bits_from_json(const ordered& j) {
  std::vector<std::uint8_t> bits;
  bits.reserve(j.size());
  for (const auto& x : j) {
    const int b = x.get<int>();
    if (b != 0 && b != 1) throw Error(ErrorCode::io, "preference bits must be 0 or 1");
    bits.push_back(static_cast<std::uint8_t>(b));
  }
  return bits;
}

PreferenceModel preferences_from_json(const ordered& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "known") {
    return KnownPreferences{bits_from_json(j.at("theta"))};
  }
  if (kind == "marginals") {
    return MarginalPreferences{j.at("probs").get<std::vector<double>>()};
  }
  if (kind == "samples") {
    SampledPreferences sampled;
    for (const auto& row : j.at("samples")) sampled.samples.push_back(bits_from_json(row));
    return sampled;
  }
  if (kind == "adversarial") {
    return AdversarialPreferences{bits_from_json(j.at("nominal")), j.at("radius").get<int>()};
  }
  throw Error(ErrorCode::io, "unknown preference kind '" + kind + "'");
}

void check_format(const ordered& j, const char* expected) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != expected) {
    throw Error(ErrorCode::io, std::string("expected a '") + expected + "' document");
  }
}

ordered mixed_to_json(const MixedStrategy& s) {
  ordered j;
  j["kind"] = "sets";
  ordered support = ordered::array();
  for (const auto& set : s.support()) support.push_back(set.channels());
  j["support"] = std::move(support);
  j["weights"] = s.weights();
  return j;
}

ordered marginals_to_json(const MarginalMixture& s) {
  ordered j;
  j["kind"] = "marginals";
  j["vectors"] = s.vectors;
  j["weights"] = s.weights;
  j["budget"] = s.budget;
  return j;
}

ordered attacker_to_json(const AttackerStrategy& s) {
  if (const auto* mixed = std::get_if<MixedStrategy>(&s)) return mixed_to_json(*mixed);
  return marginals_to_json(std::get<MarginalMixture>(s));
}

MixedStrategy mixed_from_json(const ordered& j) {
  std::vector<PureStrategy> support;
  for (const auto& set : j.at("support")) {
    support.emplace_back(set.get<std::vector<int>>());
  }
  return MixedStrategy(std::move(support), j.at("weights").get<std::vector<double>>());
}

AttackerStrategy attacker_from_json(const ordered& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sets") return mixed_from_json(j);
  if (kind == "marginals") {
    MarginalMixture mix;
    mix.vectors = j.at("vectors").get<std::vector<std::vector<double>>>();
    mix.weights = j.at("weights").get<std::vector<double>>();
    mix.budget = j.at("budget").get<double>();
    return mix;
  }
  throw Error(ErrorCode::io, "unknown strategy kind '" + kind + "'");
}

}  // namespace

std::string instance_to_json(const GameInstance& inst,
                             const std::optional<PreferenceModel>& prefs) {
  ordered j;
  j["format"] = kInstanceFormat;
  j["channels"] = inst.num_channels();
  j["voters"] = inst.num_voters();
  j["attacker_budget"] = inst.attacker_budget();
  j["defender_budget"] = inst.defender_budget();
  ordered edges = ordered::array();
  for (const Edge& e : inst.edges()) {
    edges.push_back(ordered::array({e.channel, e.voter, e.p, e.q}));
  }
  j["edges"] = std::move(edges);
  if (prefs) j["preferences"] = preferences_to_json(*prefs);
  return j.dump(2) + "\n";
}

std::pair<GameInstance, std::optional<PreferenceModel>> instance_from_json(
    const std::string& text) {
  return json_guard("instance document", [&] {
    const ordered j = ordered::parse(text);
    check_format(j, kInstanceFormat);
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 4) {
        throw Error(ErrorCode::io, "each edge must be [channel, voter, p, q]");
      }
      edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>(),
                       e[3].get<double>()});
    }
    GameInstance inst(j.at("channels").get<int>(), j.at("voters").get<int>(),
                      j.at("attacker_budget").get<int>(), j.at("defender_budget").get<int>(),
                      std::move(edges));
    std::optional<PreferenceModel> prefs;
    if (j.contains("preferences")) prefs = preferences_from_json(j.at("preferences"));
    return std::pair<GameInstance, std::optional<PreferenceModel>>(std::move(inst),
                                                                   std::move(prefs));
  });
}

void save_instance(const GameInstance& inst, const std::optional<PreferenceModel>& prefs,
                   const std::string& path) {
  write_file(path, instance_to_json(inst, prefs));
}

std::pair<GameInstance, std::optional<PreferenceModel>> load_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

std::string strategy_to_json(const AttackerStrategy& strategy) {
  ordered j = attacker_to_json(strategy);
  ordered doc;
  doc["format"] = kStrategyFormat;
  for (auto& [key, value] : j.items()) doc[key] = std::move(value);
  return doc.dump(2) + "\n";
}

AttackerStrategy strategy_from_json(const std::string& text) {
  return json_guard("strategy document", [&] {
    const ordered j = ordered::parse(text);
    check_format(j, kStrategyFormat);
    return attacker_from_json(j);
  });
}

void save_strategy(const AttackerStrategy& strategy, const std::string& path) {
  write_file(path, strategy_to_json(strategy));
}

AttackerStrategy strategy_from_file(const std::string& path) {
  return strategy_from_json(read_file(path));
}

std::string report_to_json(const SolveReport& report) {
  ordered j;
  j["format"] = kReportFormat;
  j["solver"] = report.solver;
  ordered params = ordered::object();
  for (const auto& [key, value] : report.params) params[key] = value;
  j["params"] = std::move(params);
  j["defense"] = mixed_to_json(report.defense);
  j["attack"] = report.attack ? attacker_to_json(*report.attack) : ordered(nullptr);
  j["iteration_values"] = report.iteration_values;
  if (report.certificate) {
    ordered cert;
    cert["upper"] = report.certificate->upper;
    cert["lower"] = report.certificate->lower;
    cert["gap"] = report.certificate->gap_defined ? ordered(report.certificate->gap)
                                                  : ordered(nullptr);
    cert["gap_defined"] = report.certificate->gap_defined;
    j["certificate"] = std::move(cert);
  } else {
    j["certificate"] = nullptr;
  }
  return j.dump(2) + "\n";
}

SolveReport report_from_json(const std::string& text) {
  return json_guard("report document", [&] {
    const ordered j = ordered::parse(text);
    check_format(j, kReportFormat);
    SolveReport report{.solver = j.at("solver").get<std::string>(),
                       .params = {},
                       .defense = mixed_from_json(j.at("defense")),
                       .attack = {},
                       .iteration_values = {},
                       .certificate = {}};
    for (const auto& [key, value] : j.at("params").items()) {
      report.params.emplace_back(key, value.get<std::string>());
    }
    if (!j.at("attack").is_null()) report.attack = attacker_from_json(j.at("attack"));
    report.iteration_values = j.at("iteration_values").get<std::vector<double>>();
    if (!j.at("certificate").is_null()) {
      const auto& cert = j.at("certificate");
      GapCertificate c;
      c.upper = cert.at("upper").get<double>();
      c.lower = cert.at("lower").get<double>();
      c.gap_defined = cert.at("gap_defined").get<bool>();
      c.gap = cert.at("gap").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                       : cert.at("gap").get<double>();
      report.certificate = c;
    }
    return report;
  });
}

void save_report(const SolveReport& report, const std::string& path) {
  write_file(path, report_to_json(report));
}

SolveReport report_from_file(const std::string& path) {
  return report_from_json(read_file(path));
}

namespace {

std::string join_cells(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string& cell = cells[i];
    if (cell.find(',') != std::string::npos || cell.find('\n') != std::string::npos) {
      throw Error(ErrorCode::invalid_argument, "CSV cells must not contain ',' or newlines");
    }
    if (i) line += ',';
    line += cell;
  }
  line += '\n';
  return line;
}

}  // namespace

CsvWriter::CsvWriter(std::string metadata, std::vector<std::string> header)
    : columns_(header.size()) {
  if (header.empty()) throw Error(ErrorCode::invalid_argument, "CSV header must be nonempty");
  if (metadata.find('\n') != std::string::npos) {
    throw Error(ErrorCode::invalid_argument, "CSV metadata must be a single line");
  }
  text_ = "# " + metadata + "\n" + join_cells(header);
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw Error(ErrorCode::invalid_argument, "CSV row width does not match the header");
  }
  text_ += join_cells(cells);
}

void CsvWriter::write(const std::string& path) const { write_file(path, text_); }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return ordered(value).dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "failed while reading '" + path + "'");
  return std::move(buffer).str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::io, "failed while writing '" + path + "'");
}

}  // namespace misdef
