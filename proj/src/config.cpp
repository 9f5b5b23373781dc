#include "config.hpp"

#include <array>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace stocksel {

namespace {

struct SchemaEntry {
  const char* key;
  const char* default_value;
};

// Render order follows this table.
constexpr std::array kSchema = {
    SchemaEntry{"run.seed", "42"},
    SchemaEntry{"run.out", "out"},
    SchemaEntry{"paths.bars", "{out}/bars.csv"},
    SchemaEntry{"paths.truth", "{out}/truth.csv"},
    SchemaEntry{"paths.universe", "{out}/universe.txt"},
    SchemaEntry{"paths.labels", "{out}/labels.txt"},
    SchemaEntry{"synth.instruments", "12"},
    SchemaEntry{"synth.days", "60"},
    SchemaEntry{"synth.signal", "0.8"},
    SchemaEntry{"synth.volatility", "0.015"},
    SchemaEntry{"synth.price_scale", "25"},
    SchemaEntry{"synth.start_date", "2021-01-04"},
    SchemaEntry{"split.train_fraction", "0.8"},
    SchemaEntry{"split.train_begin", ""},
    SchemaEntry{"split.train_end", ""},
    SchemaEntry{"split.test_begin", ""},
    SchemaEntry{"split.test_end", ""},
    SchemaEntry{"model.strategy", "lstm"},
    SchemaEntry{"model.hidden_size", "64"},
    SchemaEntry{"model.keep_prob", "0.8"},
    SchemaEntry{"model.kernels", "40"},
    SchemaEntry{"model.dense_sizes", "250,100"},
    SchemaEntry{"model.spatial_dropout", "3"},
    SchemaEntry{"model.cnn_window", "CNN5D"},
    SchemaEntry{"train.batch_size", "30"},
    SchemaEntry{"train.epochs", "50"},
    SchemaEntry{"train.learning_rate", "0.001"},
    SchemaEntry{"train.optimizer", "adam"},
    SchemaEntry{"train.checkpoint_epoch", "20"},
    SchemaEntry{"train.l2_lambda", "0"},
    SchemaEntry{"backtest.begin", ""},
    SchemaEntry{"backtest.end", ""},
    SchemaEntry{"backtest.max_positions", "20"},
    SchemaEntry{"backtest.min_expected_return", "0.0014"},
    SchemaEntry{"backtest.fee_per_side", "0.001"},
};

bool known_key(const std::string& key) {
  for (const auto& e : kSchema) {
    if (key == e.key) return true;
  }
  return false;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return s.substr(a, b - a);
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  for (const auto& e : kSchema) cfg.values_[e.key] = e.default_value;
  return cfg;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg = defaults();
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorKind::InvalidConfig,
                    "line " + std::to_string(line_no) + ": unterminated section");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidConfig,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw Error(ErrorKind::InvalidConfig,
                  "line " + std::to_string(line_no) + ": key outside any [section]");
    }
    cfg.set(section + "." + key, value);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidConfig, "config file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
  if (!known_key(dotted_key)) {
    throw Error(ErrorKind::InvalidConfig, "unknown config key " + dotted_key);
  }
  values_[dotted_key] = value;
}

const std::string& RunConfig::get(const std::string& dotted_key) const {
  const auto it = values_.find(dotted_key);
  if (it == values_.end()) {
    throw Error(ErrorKind::InvalidConfig, "unknown config key " + dotted_key);
  }
  return it->second;
}

std::string RunConfig::render() const {
  std::string out;
  std::string section;
  for (const auto& e : kSchema) {
    const std::string key = e.key;
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += '\n';
      out += '[' + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + values_.at(key) + '\n';
  }
  return out;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string& v = get(key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw Error(ErrorKind::InvalidConfig, key + ": bad unsigned integer '" + v + "'");
  }
  return x;
}

int RunConfig::get_int(const std::string& key) const {
  const std::string& v = get(key);
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw Error(ErrorKind::InvalidConfig, key + ": bad integer '" + v + "'");
  }
  return static_cast<int>(x);
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& v = get(key);
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw Error(ErrorKind::InvalidConfig, key + ": bad number '" + v + "'");
  }
  return x;
}

std::optional<Date> RunConfig::get_date(const std::string& key) const {
  const std::string& v = get(key);
  if (v.empty()) return std::nullopt;
  const auto d = Date::parse(v);
  if (!d) throw Error(ErrorKind::InvalidConfig, key + ": bad date '" + v + "'");
  return d;
}

std::filesystem::path RunConfig::path(const std::string& key) const {
  std::string v = get(key);
  const std::string placeholder = "{out}";
  const auto pos = v.find(placeholder);
  if (pos != std::string::npos) {
    v = v.substr(0, pos) + get("run.out") + v.substr(pos + placeholder.size());
  }
  return v;
}

}  // namespace stocksel
