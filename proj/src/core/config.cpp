#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "error.hpp"
#include "fsutil.hpp"

namespace bseg {
namespace {

const std::map<std::string, std::string, std::less<>>& defaults() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"schedule.n_steps", "50"},
      {"schedule.beta_max", "0.3"},
      {"schedule.beta_min", "1e-4"},
      {"train.lr", "5e-5"},
      {"train.iters", "5000"},
      {"train.batch", "8"},
      {"train.seed", "0"},
      {"train.ema_decay", "0.999"},
      {"train.adam_beta1", "0.9"},
      {"train.adam_beta2", "0.999"},
      {"train.adam_eps", "1e-8"},
      {"train.task", "multi"},
      {"train.checkpoint_every", "1000"},
      {"data.dir", ""},
      {"model.width", "32"},
      {"model.depth", "3"},
      {"infer.dump_every", "0"},
      {"infer.use_ema", "true"},
      {"eval.radius", "12"},
      {"eval.iou", "0.5"},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig::RunConfig() : entries_(defaults()) {}

void RunConfig::set(std::string_view key, std::string_view value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(std::string(key), "unknown key");
  it->second = std::string(trim(value));
}

void RunConfig::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(trim(assignment)), "expected key=value");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::parse(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line.find('=') == std::string_view::npos) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no),
                        "expected key=value");
    }
    set_assignment(line);
  }
}

void RunConfig::load(const std::filesystem::path& path) {
  parse(read_file(path), path.string());
}

bool RunConfig::has(std::string_view key) const { return entries_.contains(key); }

const std::string& RunConfig::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(std::string(key), "unknown key");
  return it->second;
}

double RunConfig::get_double(std::string_view key) const {
  const std::string& s = get(key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key), "expected a finite number, got '" + s + "'");
  }
  return v;
}

std::int64_t RunConfig::get_int(std::string_view key) const {
  const std::string& s = get(key);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t RunConfig::get_uint(std::string_view key) const {
  const std::string& s = get(key);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(std::string(key), "expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool RunConfig::get_bool(std::string_view key) const {
  const std::string& s = get(key);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + s + "'");
}

void RunConfig::require(std::string_view key) const {
  if (get(key).empty()) throw ConfigError(std::string(key), "required but not set");
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace bseg
