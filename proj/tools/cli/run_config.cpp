#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace eqp::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, const std::string& key) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key, "expected a real number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
  return v;
}

std::size_t parse_count(std::string_view text, const std::string& key) {
  text = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_real_list(std::string_view text, const std::string& key) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_real(item, key + "[" + std::to_string(out.size()) + "]"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

enum class Section { top, strip, profile, derived };

struct Line {
  std::size_t number;
  std::string key;
  std::string value;
};

struct Block {
  Section kind;
  std::size_t index;
  std::vector<Line> lines;
};

std::vector<Block> split_blocks(std::string_view text) {
  std::vector<Block> blocks{{Section::top, 0, {}}};
  std::size_t strips = 0;
  std::size_t profiles = 0;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(number);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where, "malformed section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name == "strip") {
        blocks.push_back({Section::strip, strips++, {}});
      } else if (name == "profile") {
        blocks.push_back({Section::profile, profiles++, {}});
      } else if (name == "derived") {
        blocks.push_back({Section::derived, 0, {}});
      } else {
        throw ConfigError(where, "unknown section [" + std::string(name) + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where, "empty key");
    blocks.back().lines.push_back({number, std::string(key), std::string(trim(line.substr(eq + 1)))});
  }
  return blocks;
}

std::string prefix_of(const Block& block) {
  switch (block.kind) {
    case Section::strip: return "strip[" + std::to_string(block.index) + "].";
    case Section::profile: return "profile[" + std::to_string(block.index) + "].";
    case Section::derived: return "derived.";
    case Section::top: break;
  }
  return "";
}

std::map<std::string, std::string> keyed(const Block& block) {
  std::map<std::string, std::string> out;
  for (const auto& line : block.lines) {
    if (!out.emplace(line.key, line.value).second) {
      throw ConfigError(prefix_of(block) + line.key, "duplicate key");
    }
  }
  return out;
}

double require_real(std::map<std::string, std::string>& kv, const std::string& key, const std::string& prefix) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError(prefix + key, "missing");
  const double v = parse_real(it->second, prefix + key);
  kv.erase(it);
  return v;
}

void reject_leftovers(const std::map<std::string, std::string>& kv, const std::string& prefix) {
  if (!kv.empty()) throw ConfigError(prefix + kv.begin()->first, "unknown key");
}

void parse_into(const std::vector<Block>& blocks, RunConfig& config, DerivedInfo* derived) {
  for (const auto& block : blocks) {
    auto kv = keyed(block);
    const std::string prefix = prefix_of(block);
    switch (block.kind) {
      case Section::top: {
        for (auto it = kv.begin(); it != kv.end();) {
          const auto& [key, value] = *it;
          if (key == "grid") {
            config.grid = parse_count(value, key);
          } else if (key == "dt") {
            config.dt = parse_real(value, key);
          } else if (key == "t_end") {
            config.t_end = parse_real(value, key);
          } else if (key == "snapshot_stride") {
            config.snapshot_stride = parse_count(value, key);
          } else if (key == "cfl_cap") {
            config.cfl_cap = parse_real(value, key);
          } else if (key == "output_dir") {
            config.output_dir = value;
          } else if (key == "gap_amplitudes") {
            config.gap_amplitudes = parse_real_list(value, key);
          } else {
            ++it;
            continue;
          }
          it = kv.erase(it);
        }
        reject_leftovers(kv, prefix);
        break;
      }
      case Section::strip: {
        StripConfig s;
        s.a = require_real(kv, "a", prefix);
        s.b = require_real(kv, "b", prefix);
        reject_leftovers(kv, prefix);
        config.strips.push_back(s);
        break;
      }
      case Section::profile: {
        ProfileConfig p;
        p.x = require_real(kv, "x", prefix);
        p.y = require_real(kv, "y", prefix);
        p.r_max = require_real(kv, "r_max", prefix);
        p.amplitude = require_real(kv, "amplitude", prefix);
        reject_leftovers(kv, prefix);
        config.profiles.push_back(p);
        break;
      }
      case Section::derived: {
        if (!derived) break;
        for (const auto& [key, value] : kv) {
          if (key == "velocities") {
            derived->velocities = parse_real_list(value, prefix + key);
          } else if (key == "effective_gap_amplitudes") {
            derived->effective_gap_amplitudes = parse_real_list(value, prefix + key);
          } else if (key == "workers") {
            derived->workers = static_cast<unsigned>(parse_count(value, prefix + key));
          } else if (key == "commensurate_pairs") {
            std::istringstream is(value);
            std::string pair;
            while (is >> pair) {
              const auto dash = pair.find('-');
              if (dash == std::string::npos) throw ConfigError(prefix + key, "expected j-k pairs");
              derived->commensurate_pairs.emplace_back(parse_count(pair.substr(0, dash), prefix + key),
                                                       parse_count(pair.substr(dash + 1), prefix + key));
            }
          }
        }
        break;
      }
    }
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

RunConfig default_config() {
  constexpr double pi = std::numbers::pi;
  RunConfig c;
  c.grid = 256;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.snapshot_stride = 100;
  c.strips = {{pi / 2 - 1, pi / 2 + 1}, {3 * pi / 2 - 1, 3 * pi / 2 + 1}};
  c.gap_amplitudes = {38.0, -38.0};
  c.profiles = {{pi / 2, 1.0, 0.48, 0.4}, {3 * pi / 2, 4.0, 0.48, 0.4}};
  return c;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  parse_into(split_blocks(text), config, nullptr);
  return config;
}

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  parse_into(split_blocks(text), m.config, &m.derived);
  return m;
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

Manifest load_manifest(const std::filesystem::path& path) { return parse_manifest(read_text(path)); }

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "grid = " << c.grid << '\n';
  os << "dt = " << format_double(c.dt) << '\n';
  os << "t_end = " << format_double(c.t_end) << '\n';
  os << "snapshot_stride = " << c.snapshot_stride << '\n';
  os << "cfl_cap = " << format_double(c.cfl_cap) << '\n';
  if (!c.output_dir.empty()) os << "output_dir = " << c.output_dir << '\n';
  os << "gap_amplitudes = " << format_list(c.gap_amplitudes) << '\n';
  for (const auto& s : c.strips) {
    os << "\n[strip]\na = " << format_double(s.a) << "\nb = " << format_double(s.b) << '\n';
  }
  for (const auto& p : c.profiles) {
    os << "\n[profile]\nx = " << format_double(p.x) << "\ny = " << format_double(p.y)
       << "\nr_max = " << format_double(p.r_max) << "\namplitude = " << format_double(p.amplitude) << '\n';
  }
  return os.str();
}

std::string serialize_manifest(const Manifest& m) {
  std::ostringstream os;
  os << serialize_config(m.config);
  os << "\n[derived]\n";
  os << "velocities = " << format_list(m.derived.velocities) << '\n';
  os << "effective_gap_amplitudes = " << format_list(m.derived.effective_gap_amplitudes) << '\n';
  os << "commensurate_pairs =";
  for (const auto& [j, k] : m.derived.commensurate_pairs) os << ' ' << j << '-' << k;
  os << '\n';
  os << "workers = " << m.derived.workers << '\n';
  return os.str();
}

ShearFlow build_flow(const RunConfig& config) {
  std::vector<StripSpec> strips;
  for (const auto& s : config.strips) strips.push_back({s.a, s.b});
  try {
    return ShearFlow::build(std::move(strips), config.gap_amplitudes);
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    const bool about_amplitudes = what.find("amplitude") != std::string::npos;
    throw ConfigError(about_amplitudes ? "gap_amplitudes" : "strips", what);
  }
}

std::vector<RadialProfile> build_profiles(const RunConfig& config) {
  std::vector<RadialProfile> out;
  for (std::size_t k = 0; k < config.profiles.size(); ++k) {
    const auto& p = config.profiles[k];
    try {
      out.push_back(make_default_profile({p.x, p.y}, p.r_max, p.amplitude));
    } catch (const ValidationError& e) {
      throw ConfigError("profile[" + std::to_string(k) + "]", e.what());
    }
  }
  return out;
}

QuasiPeriodicSolution build_solution(const RunConfig& config) {
  auto flow = build_flow(config);
  auto profiles = build_profiles(config);
  if (!profiles.empty() && profiles.size() != flow.strips().size()) {
    throw ConfigError("profile", "expected 0 or " + std::to_string(flow.strips().size()) + " profiles, got " +
                                     std::to_string(profiles.size()));
  }
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const auto& strip = flow.strips()[k];
    const std::string key = "profile[" + std::to_string(k) + "]";
    if (!strip.contains(profiles[k].center().x)) throw ConfigError(key + ".x", "center lies outside strip " + std::to_string(k));
    if (!check_support_fits(profiles[k], strip)) {
      throw ConfigError(key + ".r_max", "support leaves strip " + std::to_string(k));
    }
  }
  try {
    return QuasiPeriodicSolution::assemble(std::move(flow), std::move(profiles));
  } catch (const ValidationError& e) {
    throw ConfigError("profile", e.what());
  }
}

DerivedInfo derive_info(const QuasiPeriodicSolution& solution, unsigned workers) {
  DerivedInfo d;
  const auto freq = solution.frequencies();
  d.velocities = solution.velocities();
  d.effective_gap_amplitudes = solution.flow().effective_amplitudes();
  d.commensurate_pairs = freq.commensurate_pairs;
  d.workers = workers;
  return d;
}

}  // namespace eqp::cli
