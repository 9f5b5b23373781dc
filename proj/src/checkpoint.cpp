#include "checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace stocksel::nn {

namespace {
constexpr const char* kMagic = "stocksel-checkpoint 1";
}

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  std::string out = kMagic;
  out += "\narch ";
  out += ckpt.arch;
  out += "\nseed ";
  out += std::to_string(ckpt.seed);
  out += "\ntensors ";
  out += std::to_string(ckpt.tensors.size());
  out += '\n';
  char buf[24];
  for (const auto& [name, t] : ckpt.tensors) {
    out += "tensor ";
    out += name;
    out += ' ';
    out += std::to_string(t.rows());
    out += ' ';
    out += std::to_string(t.cols());
    out += '\n';
    std::size_t on_line = 0;
    for (double v : t.values()) {
      std::snprintf(buf, sizeof buf, "%016llx",
                    static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
      out += buf;
      if (++on_line == 8) {
        out += '\n';
        on_line = 0;
      } else {
        out += ' ';
      }
    }
    if (on_line != 0) {
      out.back() = '\n';
    }
  }
  out += "end\n";
  return out;
}

Checkpoint parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto bad = [](const std::string& why) -> Error {
    return Error(ErrorKind::InvalidConfig, "checkpoint: " + why);
  };
  if (!std::getline(in, line) || line != kMagic) throw bad("bad magic");

  Checkpoint ckpt;
  if (!std::getline(in, line) || line.rfind("arch ", 0) != 0) throw bad("missing arch");
  ckpt.arch = line.substr(5);
  if (!std::getline(in, line) || line.rfind("seed ", 0) != 0) throw bad("missing seed");
  ckpt.seed = std::strtoull(line.c_str() + 5, nullptr, 10);
  if (!std::getline(in, line) || line.rfind("tensors ", 0) != 0) throw bad("missing tensor count");
  const std::size_t count = std::strtoull(line.c_str() + 8, nullptr, 10);

  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line) || line.rfind("tensor ", 0) != 0) throw bad("missing tensor header");
    std::istringstream hs(line.substr(7));
    std::string name;
    std::size_t rows = 0, cols = 0;
    if (!(hs >> name >> rows >> cols)) throw bad("bad tensor header");
    Tensor t(rows, cols);
    std::size_t have = 0;
    while (have < t.size()) {
      std::string word;
      if (!(in >> word)) throw bad("truncated tensor " + name);
      if (word.size() != 16) throw bad("bad value width in " + name);
      const std::uint64_t bits = std::strtoull(word.c_str(), nullptr, 16);
      t.values()[have++] = std::bit_cast<double>(bits);
    }
    if (t.size() > 0) std::getline(in, line);  // finish the last value line
    ckpt.tensors.emplace_back(std::move(name), std::move(t));
  }
  if (!std::getline(in, line) || line != "end") throw bad("missing end marker");
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << serialize_checkpoint(ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace stocksel::nn
