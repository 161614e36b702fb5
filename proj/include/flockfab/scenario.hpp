#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "flockfab/core.hpp"

namespace flockfab {

/// Problem in a scenario file. `line()` is 1-based, 0 when not tied to a line.
class ScenarioError : public ConfigError {
 public:
  ScenarioError(std::size_t line, const std::string& message)
      : ConfigError(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Non-negative exact fraction, used for hour values in scenario files.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational normalized() const {
    const std::int64_t g = std::gcd(num, den);
    return g ? Rational{num / g, den / g} : *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
};

/// Parses plain decimals like "0.2", "15", "1.50". No signs or exponents.
inline std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty() || text.size() > 18) return std::nullopt;
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_point = false;
  bool seen_digit = false;
  for (const char c : text) {
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
      seen_digit = true;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  return Rational{num, den}.normalized();
}

/// Exact decimal rendering; the denominator must divide a power of ten.
inline std::string format_decimal(Rational value) {
  value = value.normalized();
  int places = 0;
  std::int64_t scale = 1;
  while (scale % value.den != 0) {
    scale *= 10;
    ++places;
    if (places > 17) throw ConfigError("value has no finite decimal representation");
  }
  const std::int64_t scaled = value.num * (scale / value.den);
  std::string digits = std::to_string(scaled);
  if (places == 0) return digits;
  if (digits.size() <= static_cast<std::size_t>(places)) {
    digits.insert(0, static_cast<std::size_t>(places) - digits.size() + 1, '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  while (digits.back() == '0') digits.pop_back();
  if (digits.back() == '.') digits.pop_back();
  return digits;
}

struct LotTypeSpec {
  LotType id = 0;
  int count = 0;
  Recipe recipe;

  friend bool operator==(const LotTypeSpec&, const LotTypeSpec&) = default;
};

struct Scenario {
  std::string name = "unnamed";
  Rational tick_hours{1, 10};
  std::vector<MachineType> machine_types;  // index == id
  std::vector<LotTypeSpec> lot_types;

  std::size_t total_lots() const {
    std::size_t n = 0;
    for (const auto& lt : lot_types) n += static_cast<std::size_t>(lt.count);
    return n;
  }

  std::size_t total_machines() const {
    std::size_t n = 0;
    for (const auto& mt : machine_types) n += static_cast<std::size_t>(mt.machine_count);
    return n;
  }

  RecipeTable recipes() const {
    RecipeTable table;
    for (const auto& lt : lot_types) table.emplace(lt.id, lt.recipe);
    return table;
  }

  Tick recipe_ticks(const Recipe& recipe) const {
    Tick total = 0;
    for (const auto step : recipe.steps) total += machine_types.at(step).raw_process_ticks;
    return total;
  }

  /// Throws ConfigError if machine types or recipes are inconsistent.
  void validate() const {
    for (std::size_t i = 0; i < machine_types.size(); ++i) {
      if (machine_types[i].id != i) throw ConfigError("machine type ids must be 0..N-1 in order");
      machine_types[i].validate();
    }
    std::set<LotType> seen;
    for (const auto& lt : lot_types) {
      const std::string where = "lot type " + std::to_string(lt.id) + ": ";
      if (!seen.insert(lt.id).second) throw ConfigError(where + "duplicate id");
      if (lt.count < 0) throw ConfigError(where + "negative lot count");
      if (lt.recipe.steps.empty()) throw ConfigError(where + "empty recipe");
      for (const auto step : lt.recipe.steps) {
        if (step >= machine_types.size()) {
          throw ConfigError(where + "recipe references unknown machine type " + std::to_string(step));
        }
      }
    }
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

inline long long parse_int(std::string_view word, std::size_t line, std::string_view what) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size()) {
    throw ScenarioError(line, "invalid " + std::string(what) + " '" + std::string(word) + "'");
  }
  return value;
}

inline Rational parse_hours(std::string_view word, std::size_t line, std::string_view what) {
  const auto value = parse_decimal(word);
  if (!value) throw ScenarioError(line, "invalid " + std::string(what) + " '" + std::string(word) + "'");
  return *value;
}

inline Tick hours_to_ticks(Rational hours, Rational tick_hours, std::size_t line, std::string_view what) {
  // hours / tick_hours = (h.num * t.den) / (h.den * t.num)
  const std::int64_t num = hours.num * tick_hours.den;
  const std::int64_t den = hours.den * tick_hours.num;
  if (num % den != 0) {
    throw ScenarioError(line, std::string(what) + " " + format_decimal(hours) +
                                  " h is not a whole number of ticks at tick_hours " + format_decimal(tick_hours));
  }
  return num / den;
}

struct RawMachineType {
  std::size_t line = 0;
  long long id = 0;
  MachineKind kind = MachineKind::SingleStep;
  long long count = 0;
  std::optional<Rational> rpt_hours;
  std::optional<long long> batch_size;
  std::optional<Rational> wt_hours;
};

}  // namespace detail

/// Parses the line-based scenario format:
///
///     scenario <name>
///     tick_hours 0.1
///     machinetype <m> kind {single|batch} count <n> rpt_hours <x> [bs <k> wt_hours <y>]
///     lottype <t> count <n> recipe <m1> <m2> ... <mk>
///
/// `#` starts a comment. Hours are converted to whole ticks.
inline Scenario parse_scenario(std::string_view text) {
  Scenario scenario;
  std::vector<detail::RawMachineType> raw_machines;
  std::vector<std::pair<std::size_t, LotTypeSpec>> raw_lots;
  std::vector<std::pair<std::size_t, std::vector<long long>>> raw_recipes;
  bool have_name = false;
  bool have_tick = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto words = detail::split_words(line);
    if (words.empty()) continue;

    const std::string_view directive = words[0];
    if (directive == "scenario") {
      if (words.size() != 2) throw ScenarioError(line_no, "expected 'scenario <name>'");
      if (have_name) throw ScenarioError(line_no, "duplicate scenario name");
      scenario.name = std::string(words[1]);
      have_name = true;
    } else if (directive == "tick_hours") {
      if (words.size() != 2) throw ScenarioError(line_no, "expected 'tick_hours <x>'");
      if (have_tick) throw ScenarioError(line_no, "duplicate tick_hours");
      scenario.tick_hours = detail::parse_hours(words[1], line_no, "tick_hours");
      if (scenario.tick_hours.num <= 0) throw ScenarioError(line_no, "tick_hours must be positive");
      have_tick = true;
    } else if (directive == "machinetype") {
      if (words.size() < 2 || words.size() % 2 != 0) {
        throw ScenarioError(line_no, "expected 'machinetype <m>' followed by key/value pairs");
      }
      detail::RawMachineType raw;
      raw.line = line_no;
      raw.id = detail::parse_int(words[1], line_no, "machine type id");
      bool have_kind = false;
      bool have_count = false;
      std::set<std::string_view> keys;
      for (std::size_t i = 2; i + 1 < words.size(); i += 2) {
        const auto key = words[i];
        const auto value = words[i + 1];
        if (!keys.insert(key).second) throw ScenarioError(line_no, "duplicate key '" + std::string(key) + "'");
        if (key == "kind") {
          if (value == "single") {
            raw.kind = MachineKind::SingleStep;
          } else if (value == "batch") {
            raw.kind = MachineKind::Batch;
          } else {
            throw ScenarioError(line_no, "kind must be 'single' or 'batch', got '" + std::string(value) + "'");
          }
          have_kind = true;
        } else if (key == "count") {
          raw.count = detail::parse_int(value, line_no, "machine count");
          have_count = true;
        } else if (key == "rpt_hours") {
          raw.rpt_hours = detail::parse_hours(value, line_no, "rpt_hours");
        } else if (key == "bs") {
          raw.batch_size = detail::parse_int(value, line_no, "batch size");
        } else if (key == "wt_hours") {
          raw.wt_hours = detail::parse_hours(value, line_no, "wt_hours");
        } else {
          throw ScenarioError(line_no, "unknown machinetype key '" + std::string(key) + "'");
        }
      }
      if (!have_kind) throw ScenarioError(line_no, "machinetype needs 'kind'");
      if (!have_count) throw ScenarioError(line_no, "machinetype needs 'count'");
      if (!raw.rpt_hours) throw ScenarioError(line_no, "machinetype needs 'rpt_hours'");
      raw_machines.push_back(raw);
    } else if (directive == "lottype") {
      if (words.size() < 6 || words[2] != "count" || words[4] != "recipe") {
        throw ScenarioError(line_no, "expected 'lottype <t> count <n> recipe <m1> ...'");
      }
      LotTypeSpec spec;
      spec.id = static_cast<LotType>(detail::parse_int(words[1], line_no, "lot type id"));
      const auto count = detail::parse_int(words[3], line_no, "lot count");
      if (count < 0) throw ScenarioError(line_no, "lot count must be >= 0");
      spec.count = static_cast<int>(count);
      std::vector<long long> steps;
      for (std::size_t i = 5; i < words.size(); ++i) {
        steps.push_back(detail::parse_int(words[i], line_no, "recipe step"));
      }
      raw_lots.emplace_back(line_no, spec);
      raw_recipes.emplace_back(line_no, std::move(steps));
    } else {
      throw ScenarioError(line_no, "unknown directive '" + std::string(directive) + "'");
    }
  }

  std::map<long long, std::size_t> machine_index;
  for (const auto& raw : raw_machines) {
    if (raw.id < 0) throw ScenarioError(raw.line, "machine type id must be >= 0");
    if (!machine_index.emplace(raw.id, raw.line).second) {
      throw ScenarioError(raw.line, "duplicate machine type id " + std::to_string(raw.id));
    }
  }
  {
    long long expected = 0;
    for (const auto& [id, line] : machine_index) {
      if (id != expected) throw ScenarioError(line, "machine type ids must be numbered 0..N-1 without gaps");
      ++expected;
    }
  }

  scenario.machine_types.resize(raw_machines.size());
  for (const auto& raw : raw_machines) {
    MachineType mt;
    mt.id = static_cast<MachineTypeId>(raw.id);
    mt.kind = raw.kind;
    if (raw.count < 1) throw ScenarioError(raw.line, "machine count must be >= 1");
    mt.machine_count = static_cast<int>(raw.count);
    mt.raw_process_ticks = detail::hours_to_ticks(*raw.rpt_hours, scenario.tick_hours, raw.line, "rpt_hours");
    if (mt.raw_process_ticks < 1) throw ScenarioError(raw.line, "rpt_hours must be at least one tick");
    const Tick wt =
        raw.wt_hours ? detail::hours_to_ticks(*raw.wt_hours, scenario.tick_hours, raw.line, "wt_hours") : 0;
    if (raw.kind == MachineKind::SingleStep) {
      if (raw.batch_size && *raw.batch_size != 1) {
        throw ScenarioError(raw.line, "single-step machine types must have bs 1");
      }
      if (wt != 0) throw ScenarioError(raw.line, "single-step machine types take no wt_hours");
      mt.batch_size = 1;
      mt.wt_ticks = 0;
    } else {
      if (!raw.batch_size) throw ScenarioError(raw.line, "batch machine types need 'bs'");
      if (*raw.batch_size < 2) {
        throw ScenarioError(raw.line, wt > 0 ? "bs must be >= 2 when wt_hours > 0" : "batch machines need bs >= 2");
      }
      mt.batch_size = static_cast<int>(*raw.batch_size);
      mt.wt_ticks = wt;
    }
    scenario.machine_types[mt.id] = mt;
  }

  std::set<LotType> lot_ids;
  for (std::size_t i = 0; i < raw_lots.size(); ++i) {
    auto [line, spec] = raw_lots[i];
    if (spec.id < 0) throw ScenarioError(line, "lot type id must be >= 0");
    if (!lot_ids.insert(spec.id).second) {
      throw ScenarioError(line, "duplicate lot type id " + std::to_string(spec.id));
    }
    for (const long long step : raw_recipes[i].second) {
      if (step < 0 || !machine_index.contains(step)) {
        throw ScenarioError(line, "recipe references unknown machine type " + std::to_string(step));
      }
      spec.recipe.steps.push_back(static_cast<MachineTypeId>(step));
    }
    scenario.lot_types.push_back(std::move(spec));
  }

  scenario.validate();
  return scenario;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(0, "cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

/// Writes a scenario back in the file format accepted by parse_scenario.
inline std::string serialize_scenario(const Scenario& scenario) {
  std::ostringstream out;
  const auto hours = [&](Tick ticks) {
    return format_decimal(Rational{ticks * scenario.tick_hours.num, scenario.tick_hours.den});
  };
  out << "scenario " << scenario.name << '\n';
  out << "tick_hours " << format_decimal(scenario.tick_hours) << '\n';
  for (const auto& mt : scenario.machine_types) {
    out << "machinetype " << mt.id << " kind " << (mt.is_batch() ? "batch" : "single") << " count "
        << mt.machine_count << " rpt_hours " << hours(mt.raw_process_ticks);
    if (mt.is_batch()) out << " bs " << mt.batch_size << " wt_hours " << hours(mt.wt_ticks);
    out << '\n';
  }
  for (const auto& lt : scenario.lot_types) {
    out << "lottype " << lt.id << " count " << lt.count << " recipe";
    for (const auto step : lt.recipe.steps) out << ' ' << step;
    out << '\n';
  }
  return out.str();
}

/// Workcenter a lot of type `t` visits at the end of layer `layer`.
using DivergenceFn = std::function<MachineTypeId(LotType t, int layer)>;

/// Alternates WC 3 and WC 4 by the parity of type + layer.
inline MachineTypeId parity_divergence(LotType t, int layer) {
  return static_cast<MachineTypeId>(3 + ((t + layer) % 2));
}

/// Per layer: WC 0, WC 1, WC 2 (batch), then WC 3 or WC 4.
inline Recipe generate_recipe(LotType t, int layers = 4, const DivergenceFn& divergence = parity_divergence) {
  Recipe recipe;
  for (int layer = 0; layer < layers; ++layer) {
    recipe.steps.insert(recipe.steps.end(), {0, 1, 2});
    recipe.steps.push_back(divergence(t, layer));
  }
  return recipe;
}

/// The five-workcenter scenario with one batch workcenter and 105 lots.
inline Scenario build_small_fab(const DivergenceFn& divergence = parity_divergence) {
  Scenario s;
  s.name = "smallfab";
  s.tick_hours = Rational{1, 10};
  const int counts[] = {5, 4, 6, 2, 2};
  for (MachineTypeId m = 0; m < 5; ++m) {
    MachineType mt;
    mt.id = m;
    mt.machine_count = counts[m];
    if (m == 2) {
      mt.kind = MachineKind::Batch;
      mt.raw_process_ticks = 15;  // 1.5 h
      mt.batch_size = 4;
      mt.wt_ticks = 3;  // 0.3 h
    } else {
      mt.kind = MachineKind::SingleStep;
      mt.raw_process_ticks = 2;  // 0.2 h
    }
    s.machine_types.push_back(mt);
  }
  for (LotType t = 0; t < 10; ++t) {
    s.lot_types.push_back(LotTypeSpec{t, 6 + t, generate_recipe(t, 4, divergence)});
  }
  return s;
}

}  // namespace flockfab
