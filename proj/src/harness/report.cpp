#include "smqs/harness/report.hpp"

#include <fstream>
#include <system_error>

namespace smqs::harness {

using nlohmann::json;

namespace {

json rate_json(const RateEstimate& r) {
  return {{"value", r.value}, {"wilson_low", r.low}, {"wilson_high", r.high}, {"successes", r.successes},
          {"total", r.total}};
}

RateEstimate rate_from_json(const json& j) {
  RateEstimate r;
  r.value = j.at("value").get<double>();
  r.low = j.at("wilson_low").get<double>();
  r.high = j.at("wilson_high").get<double>();
  r.successes = j.at("successes").get<std::size_t>();
  r.total = j.at("total").get<std::size_t>();
  return r;
}

json check_json(const verification::CheckOutcome& c) {
  return {{"chooser", c.assignment.chooser},
          {"position", c.assignment.position},
          {"basis", qudit::to_string(c.assignment.basis)},
          {"announced", c.announced},
          {"passed", c.passed}};
}

verification::CheckOutcome check_from_json(const json& j) {
  verification::CheckOutcome c;
  c.assignment.chooser = j.at("chooser").get<int>();
  c.assignment.position = j.at("position").get<std::size_t>();
  c.assignment.basis = qudit::basis_from_string(j.at("basis").get<std::string>());
  c.announced = j.at("announced").get<std::vector<int>>();
  c.passed = j.at("passed").get<bool>();
  return c;
}

json trial_json(const TrialRecord& t) {
  json checks = json::array();
  for (const auto& c : t.checks) checks.push_back(check_json(c));
  return {{"index", t.index},
          {"secrets", t.secrets},
          {"expected_sum", t.expected_sum},
          {"sum", t.sum ? json(*t.sum) : json(nullptr)},
          {"announced", t.announced},
          {"recovered", t.recovered},
          {"fake_r", t.fake_r},
          {"decoy_errors", t.decoy_errors},
          {"decoys_checked", t.decoys_checked},
          {"aborted", t.aborted},
          {"detected", t.detected},
          {"checks", checks},
          {"sum_correct", t.sum_correct},
          {"recovery_success", t.recovery_success}};
}

TrialRecord trial_from_json(const json& j) {
  TrialRecord t;
  t.index = j.at("index").get<std::uint64_t>();
  t.secrets = j.at("secrets").get<std::vector<std::vector<int>>>();
  t.expected_sum = j.at("expected_sum").get<std::vector<int>>();
  if (!j.at("sum").is_null()) t.sum = j.at("sum").get<std::vector<int>>();
  t.announced = j.at("announced").get<std::vector<std::vector<int>>>();
  t.recovered = j.at("recovered").get<std::vector<std::vector<int>>>();
  t.fake_r = j.at("fake_r").get<std::vector<int>>();
  t.decoy_errors = j.at("decoy_errors").get<std::size_t>();
  t.decoys_checked = j.at("decoys_checked").get<std::size_t>();
  t.aborted = j.at("aborted").get<bool>();
  t.detected = j.at("detected").get<bool>();
  for (const auto& c : j.at("checks")) t.checks.push_back(check_from_json(c));
  t.sum_correct = j.at("sum_correct").get<bool>();
  t.recovery_success = j.at("recovery_success").get<bool>();
  return t;
}

}  // namespace

json per_trial_json(const ReportDocument& doc) {
  json out = json::array();
  for (const auto& t : doc.trials) out.push_back(trial_json(t));
  return out;
}

json to_json(const ReportDocument& doc) {
  const auto& c = doc.config;
  json secrets = nullptr;
  if (c.secrets) {
    secrets = json::array();
    for (const auto& s : *c.secrets) secrets.push_back(s.digits);
  }
  json params = {{"d", c.protocol.d},
                 {"n", c.protocol.n},
                 {"m", c.protocol.m},
                 {"eta", c.eta},
                 {"decoys", c.protocol.decoy_count},
                 {"error_threshold", c.protocol.error_threshold},
                 {"trials", c.trials},
                 {"seed", c.master_seed},
                 {"secrets", secrets},
                 {"fake_r", c.fake_r ? json(*c.fake_r) : json(nullptr)},
                 {"out", c.output_path}};
  json aggregates = json::object();
  for (const auto& [name, rate] : doc.aggregates) aggregates[name] = rate_json(rate);
  json predictions = json::object();
  for (const auto& [name, p] : doc.oracle_predictions)
    predictions[name] = {{"expected", p.expected}, {"sigma", p.sigma}, {"observed", p.observed},
                         {"within_4sigma", p.within_4sigma}};
  return {{"scenario", to_string(c.scenario)},
          {"params", params},
          {"per_trial", per_trial_json(doc)},
          {"aggregates", aggregates},
          {"oracle_predictions", predictions},
          {"schema_version", doc.schema_version},
          {"tool_version", doc.tool_version},
          {"wall_clock_seconds", doc.wall_clock_seconds}};
}

ReportDocument report_from_json(const json& j) {
  ReportDocument doc;
  doc.schema_version = j.at("schema_version").get<int>();
  if (doc.schema_version != kSchemaVersion)
    throw std::invalid_argument("unsupported report schema version " + std::to_string(doc.schema_version));
  auto& c = doc.config;
  c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
  const auto& p = j.at("params");
  c.protocol.d = p.at("d").get<int>();
  c.protocol.n = p.at("n").get<int>();
  c.protocol.m = p.at("m").get<int>();
  c.eta = p.at("eta").get<int>();
  c.protocol.decoy_count = p.at("decoys").get<int>();
  c.protocol.error_threshold = p.at("error_threshold").get<double>();
  c.trials = p.at("trials").get<int>();
  c.master_seed = p.at("seed").get<std::uint64_t>();
  c.protocol.seed = c.master_seed;
  if (!p.at("secrets").is_null()) {
    std::vector<protocol::SecretString> secrets;
    for (const auto& s : p.at("secrets")) secrets.push_back({s.get<std::vector<int>>()});
    c.secrets = std::move(secrets);
  }
  if (!p.at("fake_r").is_null()) c.fake_r = p.at("fake_r").get<int>();
  c.output_path = p.at("out").get<std::string>();

  for (const auto& t : j.at("per_trial")) doc.trials.push_back(trial_from_json(t));
  for (const auto& [name, rate] : j.at("aggregates").items()) doc.aggregates[name] = rate_from_json(rate);
  for (const auto& [name, pj] : j.at("oracle_predictions").items()) {
    OraclePrediction pred;
    pred.expected = pj.at("expected").get<double>();
    pred.sigma = pj.at("sigma").get<double>();
    pred.observed = pj.at("observed").get<double>();
    pred.within_4sigma = pj.at("within_4sigma").get<bool>();
    doc.oracle_predictions[name] = pred;
  }
  doc.tool_version = j.at("tool_version").get<std::string>();
  doc.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  return doc;
}

void write_report(const ReportDocument& doc, const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  const auto parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(parent, ec)) throw IoError("output directory does not exist: " + parent.string());

  const std::string text = to_json(doc).dump(2) + "\n";
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move report into place at " + path.string());
  }
}

ReportDocument read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw IoError("malformed report " + path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

}  // namespace smqs::harness
