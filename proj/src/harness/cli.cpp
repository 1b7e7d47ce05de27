#include "smqs/harness/cli.hpp"

#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "smqs/harness/report.hpp"

namespace smqs::harness {

namespace {

std::vector<int> parse_digits(const std::string& group) {
  std::vector<int> digits;
  std::stringstream ss(group);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw protocol::InvalidConfig("bad secret digit '" + item + "'");
    }
    if (used != item.size()) throw protocol::InvalidConfig("bad secret digit '" + item + "'");
    digits.push_back(value);
  }
  return digits;
}

void print_summary(const ReportDocument& doc, const std::string& path, std::ostream& out) {
  out << "scenario " << to_string(doc.config.scenario) << ", " << doc.trials.size() << " trials, "
      << std::fixed << std::setprecision(3) << doc.wall_clock_seconds << " s\n";
  for (const auto& [name, rate] : doc.aggregates) {
    out << "  " << std::left << std::setw(24) << name << std::setprecision(6) << rate.value << "  [" << rate.low
        << ", " << rate.high << "]";
    if (const auto it = doc.oracle_predictions.find(name); it != doc.oracle_predictions.end())
      out << "  expected " << it->second.expected << (it->second.within_4sigma ? "" : "  OUTSIDE 4 sigma");
    out << "\n";
  }
  out << "report written to " << path << "\n";
}

}  // namespace

std::vector<protocol::SecretString> parse_secrets(const std::string& text, int n, int m) {
  std::vector<std::string> groups;
  std::string current;
  for (char ch : text) {
    if (ch == ';' || ch == '/') {
      groups.push_back(current);
      current.clear();
    } else if (ch != ' ') {
      current += ch;
    }
  }
  groups.push_back(current);

  std::vector<protocol::SecretString> secrets;
  if (groups.size() == 1 && m == 1) {
    for (int digit : parse_digits(groups.front())) secrets.push_back({{digit}});
  } else {
    for (const auto& g : groups) secrets.push_back({parse_digits(g)});
  }
  if (static_cast<int>(secrets.size()) != n)
    throw protocol::InvalidConfig("--secrets lists " + std::to_string(secrets.size()) +
                                  " participants, expected " + std::to_string(n));
  return secrets;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secure multi-party quantum summation: protocol, attack and checking scenarios"};
  app.set_version_flag("--version", kToolVersion);
  bool list = false;
  app.add_flag("--list-scenarios", list, "Print scenario tags and exit");

  auto* run = app.add_subcommand("run", "Run a scenario and write a JSON report");
  std::string tag;
  ScenarioConfig cfg;
  std::string secrets_text;
  int fake_r = -1;
  cfg.protocol.d = 10;
  cfg.protocol.n = 3;
  cfg.protocol.m = 1;
  cfg.trials = 1000;
  run->add_option("--scenario", tag, "Scenario tag (see --list-scenarios)")->required();
  run->add_option("--d", cfg.protocol.d, "Qudit level")->capture_default_str();
  run->add_option("--n", cfg.protocol.n, "Participants")->capture_default_str();
  run->add_option("--m", cfg.protocol.m, "Secret length")->capture_default_str();
  run->add_option("--eta", cfg.eta, "Checking states (modified protocol)")->capture_default_str();
  run->add_option("--decoys", cfg.protocol.decoy_count, "Decoys per transmitted sequence")->capture_default_str();
  run->add_option("--threshold", cfg.protocol.error_threshold, "Decoy error rate that aborts")->capture_default_str();
  run->add_option("--trials", cfg.trials, "Trial count")->capture_default_str();
  run->add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
  run->add_option("--secrets", secrets_text, "Fixed secrets, e.g. 4,5,6 or 1,2;3,4");
  run->add_option("--fake-r", fake_r, "Fixed fabrication value for attack scenarios");
  run->add_option("--out", cfg.output_path, "Report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  if (list) {
    for (const auto& info : scenario_catalog()) out << std::left << std::setw(18) << info.tag << info.description << "\n";
    return kExitOk;
  }
  if (!*run) {
    err << app.help();
    return kExitInvalidConfig;
  }

  try {
    cfg.scenario = scenario_from_string(tag);
    cfg.protocol.seed = cfg.master_seed;
    if (!secrets_text.empty()) cfg.secrets = parse_secrets(secrets_text, cfg.protocol.n, cfg.protocol.m);
    if (fake_r >= 0 || run->count("--fake-r") > 0) cfg.fake_r = fake_r;
    const auto doc = run_scenario(cfg);
    write_report(doc, cfg.output_path);
    print_summary(doc, cfg.output_path, out);
    return kExitOk;
  } catch (const qudit::DimensionCapExceeded& e) {
    err << "invalid configuration: " << e.what() << " (d=" << e.level() << ", n=" << e.qudits() << ")\n";
    return kExitInvalidConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace smqs::harness
