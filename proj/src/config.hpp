#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "dates.hpp"
#include "error.hpp"

namespace stocksel {

/// Sectioned key-value run configuration. Every key has an embedded default
/// so an effective config is always printable and diffable; unknown keys are
/// config errors. Paths may reference the output directory as "{out}".
class RunConfig {
 public:
  static RunConfig defaults();
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);

  /// dotted_key is "section.key", e.g. "train.epochs".
  void set(const std::string& dotted_key, const std::string& value);
  const std::string& get(const std::string& dotted_key) const;

  std::string render() const;

  // typed accessors; all raise InvalidConfig with the offending key
  std::uint64_t get_u64(const std::string& key) const;
  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::optional<Date> get_date(const std::string& key) const;  // empty value -> nullopt

  std::uint64_t seed() const { return get_u64("run.seed"); }
  std::filesystem::path out_dir() const { return get("run.out"); }
  /// Resolves "{out}" in a path-valued key.
  std::filesystem::path path(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace stocksel
