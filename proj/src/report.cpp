#include "cfb/report.hpp"

#include <fstream>
#include <sstream>

namespace cfb::runner {

void Tolerances::set(const std::string& name, double value) {
  if (name == "constraint") constraint = value;
  else if (name == "rank") rank = value;
  else if (name == "pf") pf = value;
  else if (name == "fat") fat = value;
  else if (name == "invariance") invariance = value;
  else if (name == "basic") basic = value;
  else throw ConfigError("unknown tolerance '" + name + "'");
}

std::map<std::string, double> Tolerances::as_map() const {
  return {{"constraint", constraint}, {"rank", rank},           {"pf", pf},
          {"fat", fat},               {"invariance", invariance}, {"basic", basic}};
}

bool ReportDocument::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json config_to_json(const ScenarioConfig& config) {
  // threads are an execution detail: reports must not depend on them
  nlohmann::json j;
  j["scenario"] = config.scenario;
  j["seed"] = config.seed;
  j["samples"] = config.samples;
  j["tolerances"] = config.tol.as_map();
  return j;
}

nlohmann::json ReportDocument::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["config"] = config_echo;
  j["version"] = version;
  j["wall_ms"] = wall_ms;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["status"] = c.pass ? "PASS" : "FAIL";
    jc["kind"] = c.kind;
    jc["value"] = c.value;
    if (!c.note.empty()) jc["note"] = c.note;
    if (c.witness) jc["witness"] = std::vector<double>(c.witness->data(),
                                                       c.witness->data() + c.witness->size());
    j["checks"].push_back(std::move(jc));
  }
  return j;
}

ReportDocument ReportDocument::from_json(const nlohmann::json& j) {
  ReportDocument doc;
  doc.scenario = j.at("scenario").get<std::string>();
  doc.config_echo = j.at("config");
  doc.version = j.at("version").get<std::string>();
  doc.wall_ms = j.at("wall_ms").get<double>();
  for (const auto& jc : j.at("checks")) {
    CheckRecord c;
    c.name = jc.at("name").get<std::string>();
    c.pass = jc.at("status").get<std::string>() == "PASS";
    c.kind = jc.at("kind").get<std::string>();
    c.value = jc.at("value").get<double>();
    if (jc.contains("note")) c.note = jc.at("note").get<std::string>();
    if (jc.contains("witness")) {
      const auto w = jc.at("witness").get<std::vector<double>>();
      c.witness = Eigen::Map<const Vec>(w.data(), static_cast<Eigen::Index>(w.size()));
    }
    doc.checks.push_back(std::move(c));
  }
  return doc;
}

std::string ReportDocument::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << scenario << "." << c.name << " (" << c.kind
       << " = " << c.value << ")";
    if (!c.note.empty()) os << "  " << c.note;
    os << "\n";
  }
  os << (all_pass() ? "PASS" : "FAIL") << " " << scenario << ": " << checks.size()
     << " checks\n";
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ScenarioConfig config;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section != "tolerances")
        throw ConfigError("unknown section '" + section + "' at line " + std::to_string(lineno));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "tolerances") {
      config.tol.set(key, std::stod(value));
    } else if (key == "scenario") {
      config.scenario = value;
    } else if (key == "seed") {
      config.seed = std::stoull(value);
    } else if (key == "samples") {
      config.samples = std::stoi(value);
    } else if (key == "threads") {
      config.threads = std::stoi(value);
    } else if (key == "out") {
      config.out_path = value;
    } else {
      throw ConfigError("unknown key '" + key + "' at line " + std::to_string(lineno));
    }
  }
  return config;
}

}  // namespace cfb::runner
