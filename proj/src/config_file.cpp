#include "pevgame/config_file.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "pevgame/errors.hpp"

namespace pevgame {

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, std::string_view source, int line)
      : text_(text), source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw InputError(std::string(source_) + ":" + std::to_string(line_) + ": " + message);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string key() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  ConfigValue value() {
    skip_space();
    if (pos_ >= text_.size()) fail("missing value");
    ConfigValue v;
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      v.kind = ConfigValue::Kind::List;
      if (consume(']')) return v;
      do {
        v.list.push_back(value());
      } while (consume(','));
      expect(']');
      return v;
    }
    if (c == '{') {
      ++pos_;
      v.kind = ConfigValue::Kind::Table;
      if (consume('}')) return v;
      do {
        std::string k = key();
        expect('=');
        v.table.emplace_back(std::move(k), value());
      } while (consume(','));
      expect('}');
      return v;
    }
    if (c == '"') {
      const std::size_t close = text_.find('"', pos_ + 1);
      if (close == std::string_view::npos) fail("unterminated string");
      v.kind = ConfigValue::Kind::Word;
      v.word = std::string(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return v;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           text_[pos_] != '}' && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    const std::string_view token = text_.substr(start, pos_ - start);
    if (token.empty()) fail("missing value");
    double number = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), number);
    if (ec == std::errc() && ptr == token.data() + token.size()) {
      v.kind = ConfigValue::Kind::Number;
      v.number = number;
    } else if (std::isdigit(static_cast<unsigned char>(token[0])) || token[0] == '-' ||
               token[0] == '+' || token[0] == '.') {
      fail("malformed number '" + std::string(token) + "'");
    } else {
      v.kind = ConfigValue::Kind::Word;
      v.word = std::string(token);
    }
    return v;
  }

 private:
  std::string_view text_;
  std::string_view source_;
  int line_;
  std::size_t pos_ = 0;
};

// Typed access with line-tagged errors.
struct Ctx {
  std::string_view source;
  int line;

  [[noreturn]] void fail(const std::string& message) const {
    throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + message);
  }

  double number(const ConfigValue& v, std::string_view field) const {
    if (v.kind != ConfigValue::Kind::Number) fail(std::string(field) + " must be a number");
    return v.number;
  }

  long integer(const ConfigValue& v, std::string_view field) const {
    const double d = number(v, field);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) {
      fail(std::string(field) + " must be an integer");
    }
    return static_cast<long>(d);
  }

  std::uint64_t seed(const ConfigValue& v) const {
    const long s = integer(v, "seed");
    if (s < 0) fail("seed must be >= 0");
    return static_cast<std::uint64_t>(s);
  }

  std::string word(const ConfigValue& v, std::string_view field) const {
    if (v.kind != ConfigValue::Kind::Word) fail(std::string(field) + " must be a word");
    return v.word;
  }

  std::vector<double> numbers(const ConfigValue& v, std::string_view field) const {
    if (v.kind != ConfigValue::Kind::List) fail(std::string(field) + " must be a list");
    std::vector<double> out;
    for (const auto& item : v.list) out.push_back(number(item, field));
    return out;
  }

  std::pair<double, double> range(const ConfigValue& v, std::string_view field) const {
    const auto r = numbers(v, field);
    if (r.size() != 2) fail(std::string(field) + " must be [lo, hi]");
    if (!(r[0] <= r[1])) fail(std::string(field) + " needs lo <= hi");
    return {r[0], r[1]};
  }

  const std::vector<std::pair<std::string, ConfigValue>>& table(const ConfigValue& v,
                                                                 std::string_view field) const {
    if (v.kind != ConfigValue::Kind::Table) fail(std::string(field) + " must be a { ... } table");
    return v.table;
  }

  // Runs a validator and prefixes its message with the location.
  template <typename F>
  void check(F&& validate) const {
    try {
      validate();
    } catch (const InputError& e) {
      fail(e.what());
    }
  }
};

PevgParams parse_pevg(const Ctx& ctx, const ConfigValue& v) {
  PevgParams g;
  bool has_b = false;
  bool has_s = false;
  for (const auto& [k, item] : ctx.table(v, "pevg")) {
    if (k == "b") {
      g.b = ctx.number(item, "pevg.b");
      has_b = true;
    } else if (k == "s") {
      g.s = ctx.number(item, "pevg.s");
      has_s = true;
    } else if (k == "x_ini") {
      g.x_ini = ctx.number(item, "pevg.x_ini");
    } else {
      ctx.fail("unknown key 'pevg." + k + "'");
    }
  }
  if (!has_b) ctx.fail("pevg.b is required");
  if (!has_s) ctx.fail("pevg.s is required");
  ctx.check([&] { g.validate(); });
  return g;
}

SlotState parse_slot(const Ctx& ctx, const ConfigValue& v) {
  SlotState slot;
  std::vector<double> b, s, x_ini;
  bool has_capacity = false;
  for (const auto& [k, item] : ctx.table(v, "slot")) {
    if (k == "capacity") {
      slot.capacity = ctx.number(item, "slot.capacity");
      has_capacity = true;
    } else if (k == "b") {
      b = ctx.numbers(item, "slot.b");
    } else if (k == "s") {
      s = ctx.numbers(item, "slot.s");
    } else if (k == "x_ini") {
      x_ini = ctx.numbers(item, "slot.x_ini");
    } else {
      ctx.fail("unknown key 'slot." + k + "'");
    }
  }
  if (!has_capacity) ctx.fail("slot.capacity is required");
  if (!(slot.capacity > 0.0)) ctx.fail("slot.capacity must be > 0");
  if (b.empty() || b.size() != s.size()) ctx.fail("slot.b and slot.s must be non-empty lists of equal length");
  if (!x_ini.empty() && x_ini.size() != b.size()) ctx.fail("slot.x_ini must match slot.b in length");
  for (std::size_t n = 0; n < b.size(); ++n) {
    PevgParams g{b[n], s[n], x_ini.empty() ? 0.0 : x_ini[n]};
    ctx.check([&] { g.validate(); });
    slot.pevgs.push_back(g);
  }
  return slot;
}

void parse_transition(const Ctx& ctx, const ConfigValue& v, ExperimentSpec& spec) {
  auto& tc = spec.transition;
  for (const auto& [k, item] : ctx.table(v, "transition")) {
    if (k == "mode") {
      const auto mode = ctx.word(item, "transition.mode");
      if (mode == "iid-uniform") {
        tc.mode = TransitionMode::IidUniform;
      } else if (mode == "schedule") {
        tc.mode = TransitionMode::Schedule;
      } else {
        ctx.fail("transition.mode must be iid-uniform or schedule");
      }
    } else if (k == "mean_capacity") {
      tc.mean_capacity = ctx.number(item, "transition.mean_capacity");
    } else if (k == "mean_battery") {
      tc.mean_battery = ctx.number(item, "transition.mean_battery");
    } else if (k == "range") {
      std::tie(tc.range_lo, tc.range_hi) = ctx.range(item, "transition.range");
    } else if (k == "bounds") {
      std::tie(tc.battery_floor, tc.battery_ceiling) = ctx.range(item, "transition.bounds");
    } else if (k == "slots") {
      spec.horizon = static_cast<int>(ctx.integer(item, "transition.slots"));
      if (spec.horizon < 1) ctx.fail("transition.slots must be >= 1");
    } else {
      ctx.fail("unknown key 'transition." + k + "'");
    }
  }
}

std::vector<ConfigEntry> read_entries(std::string_view text, std::string_view source) {
  return parse_config(text, source);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::string_view text, std::string_view source) {
  std::vector<ConfigEntry> entries;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    LineParser p(line, source, line_no);
    if (p.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    ConfigEntry entry;
    entry.line = line_no;
    entry.key = p.key();
    p.expect('=');
    entry.value = p.value();
    if (!p.at_end()) p.fail("unexpected trailing text");
    entries.push_back(std::move(entry));
    if (end == text.size()) break;
  }
  return entries;
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
  Scenario sc;
  bool has_capacity = false;
  std::set<std::string> seen;
  for (const auto& e : read_entries(text, source)) {
    const Ctx ctx{source, e.line};
    if (e.key != "pevg" && !seen.insert(e.key).second) ctx.fail("duplicate key '" + e.key + "'");
    if (e.key == "capacity") {
      sc.grid.capacity = ctx.number(e.value, "capacity");
      has_capacity = true;
      ctx.check([&] {
        if (!(sc.grid.capacity > 0.0)) throw InputError("capacity must be > 0");
      });
    } else if (e.key == "initial_price") {
      sc.grid.initial_price = ctx.number(e.value, "initial_price");
      ctx.check([&] {
        if (!(sc.grid.initial_price >= 0.0)) throw InputError("initial_price must be >= 0");
      });
    } else if (e.key == "seed") {
      sc.seed = ctx.seed(e.value);
    } else if (e.key == "pevg") {
      sc.pevgs.push_back(parse_pevg(ctx, e.value));
    } else {
      ctx.fail("unknown key '" + e.key + "'");
    }
  }
  if (!has_capacity) throw InputError(std::string(source) + ": capacity is required");
  if (sc.pevgs.empty()) throw InputError(std::string(source) + ": at least one pevg is required");
  sc.validate();
  return sc;
}

ExperimentSpec parse_experiment(std::string_view text, std::string_view source) {
  ExperimentSpec spec;
  Scenario sc;
  bool has_kind = false;
  bool has_capacity = false;
  bool has_initial_price = false;
  std::set<std::string> seen;
  for (const auto& e : read_entries(text, source)) {
    const Ctx ctx{source, e.line};
    if (e.key != "pevg" && e.key != "slot" && !seen.insert(e.key).second) {
      ctx.fail("duplicate key '" + e.key + "'");
    }
    if (e.key == "kind") {
      const auto kind = parse_kind(ctx.word(e.value, "kind"));
      if (!kind) ctx.fail("kind must be one of solve, sweep-n, sweep-capacity, compare, dynamic");
      spec.kind = *kind;
      has_kind = true;
    } else if (e.key == "runs") {
      spec.runs = static_cast<int>(ctx.integer(e.value, "runs"));
      if (spec.runs < 1) ctx.fail("runs must be >= 1");
    } else if (e.key == "n_values") {
      for (double v : ctx.numbers(e.value, "n_values")) {
        if (v < 1 || v != std::floor(v)) ctx.fail("n_values entries must be integers >= 1");
        spec.n_values.push_back(static_cast<std::size_t>(v));
      }
      if (spec.n_values.empty()) ctx.fail("n_values must not be empty");
    } else if (e.key == "capacities") {
      spec.capacities = ctx.numbers(e.value, "capacities");
      if (spec.capacities.empty()) ctx.fail("capacities must not be empty");
      for (double c : spec.capacities) {
        if (!(c > 0.0)) ctx.fail("capacities entries must be > 0");
      }
    } else if (e.key == "seed") {
      spec.seed = ctx.seed(e.value);
      sc.seed = spec.seed;
    } else if (e.key == "output") {
      spec.output_path = ctx.word(e.value, "output");
    } else if (e.key == "initial_price") {
      spec.initial_price = ctx.number(e.value, "initial_price");
      if (!(spec.initial_price >= 0.0)) ctx.fail("initial_price must be >= 0");
      sc.grid.initial_price = spec.initial_price;
      spec.transition.initial_price = spec.initial_price;
      has_initial_price = true;
    } else if (e.key == "capacity") {
      sc.grid.capacity = ctx.number(e.value, "capacity");
      if (!(sc.grid.capacity > 0.0)) ctx.fail("capacity must be > 0");
      has_capacity = true;
    } else if (e.key == "pevg") {
      sc.pevgs.push_back(parse_pevg(ctx, e.value));
    } else if (e.key == "b_range") {
      std::tie(spec.b_lo, spec.b_hi) = ctx.range(e.value, "b_range");
      if (!(spec.b_lo > 0.0)) ctx.fail("b_range must be positive");
    } else if (e.key == "s_range") {
      std::tie(spec.s_lo, spec.s_hi) = ctx.range(e.value, "s_range");
      if (!(spec.s_lo > 0.0)) ctx.fail("s_range must be positive");
    } else if (e.key == "tol") {
      spec.solver.tol = ctx.number(e.value, "tol");
    } else if (e.key == "max_iter") {
      spec.solver.max_iter = static_cast<int>(ctx.integer(e.value, "max_iter"));
    } else if (e.key == "particles") {
      spec.pso.particles = static_cast<int>(ctx.integer(e.value, "particles"));
    } else if (e.key == "pso_iterations") {
      spec.pso.iterations = static_cast<int>(ctx.integer(e.value, "pso_iterations"));
    } else if (e.key == "redistribute_ed") {
      const auto w = ctx.word(e.value, "redistribute_ed");
      if (w != "true" && w != "false") ctx.fail("redistribute_ed must be true or false");
      spec.redistribute_ed = w == "true";
    } else if (e.key == "groups") {
      const long g = ctx.integer(e.value, "groups");
      if (g < 1) ctx.fail("groups must be >= 1");
      spec.transition.groups = static_cast<std::size_t>(g);
    } else if (e.key == "transition") {
      parse_transition(ctx, e.value, spec);
    } else if (e.key == "slot") {
      spec.transition.schedule.push_back(parse_slot(ctx, e.value));
    } else {
      ctx.fail("unknown key '" + e.key + "'");
    }
  }
  if (!has_kind) throw InputError(std::string(source) + ": kind is required");
  spec.transition.seed = spec.seed;
  if (spec.kind == ExperimentKind::Solve) {
    if (!has_capacity || sc.pevgs.empty()) {
      throw InputError(std::string(source) + ": kind = solve needs capacity and pevg entries");
    }
    if (!has_initial_price) sc.grid.initial_price = spec.initial_price;
    sc.validate();
    spec.scenario = sc;
  } else if (has_capacity || !sc.pevgs.empty()) {
    throw InputError(std::string(source) + ": capacity/pevg entries are only valid for kind = solve");
  }
  spec.apply_defaults();
  try {
    spec.validate();
  } catch (const InputError& e) {
    throw InputError(std::string(source) + ": " + e.what());
  }
  return spec;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.string());
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_file(path), path.string());
}

std::variant<Scenario, ExperimentSpec> load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  for (const auto& e : parse_config(text, path.string())) {
    if (e.key == "kind") return parse_experiment(text, path.string());
  }
  return parse_scenario(text, path.string());
}

}  // namespace pevgame
