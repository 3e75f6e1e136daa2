/*
 * Copyright 2026 The exbsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "exb/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace exb {

namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::vector<Entry> entries;
  /// Raw lines, used by [events].
  std::vector<Entry> lines;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> split_list(std::string_view s) {
  std::string t(s);
  std::replace(t.begin(), t.end(), ',', ' ');
  return split_ws(t);
}

std::optional<std::uint64_t> parse_uint(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
  if (s.empty() || s[0] == '-') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 0);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<double> parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<bool> parse_bool(const std::string& s) {
  const std::string v = lower(s);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  return std::nullopt;
}

class Reader {
 public:
  std::vector<std::string> diags;

  std::string where(const Entry& e, std::string_view section) const {
    std::string w = e.line ? "line " + std::to_string(e.line) : std::string("override");
    return w + ": [" + std::string(section) + "] " + e.key;
  }

  template <class T>
  bool uint(const Entry& e, std::string_view section, T& out, std::uint64_t max = UINT64_MAX) {
    auto v = parse_uint(e.value);
    if (!v || *v > max) {
      diags.push_back(where(e, section) + ": expected an unsigned number, got '" + e.value + "'");
      return false;
    }
    out = static_cast<T>(*v);
    return true;
  }

  bool words(const Entry& e, std::string_view section, const std::vector<std::string>& toks, Burst& out) {
    for (const auto& t : toks) {
      auto v = parse_uint(t);
      if (!v || *v > 0xFFFFFFFFull) {
        diags.push_back(where(e, section) + ": bad data word '" + t + "'");
        return false;
      }
      out.push_back(static_cast<Word>(*v));
    }
    return true;
  }
};

std::vector<Burst> chunk(const Burst& words) {
  std::vector<Burst> out;
  for (std::size_t i = 0; i < words.size(); i += kBurstWords)
    out.emplace_back(words.begin() + static_cast<std::ptrdiff_t>(i),
                     words.begin() + static_cast<std::ptrdiff_t>(std::min(words.size(), i + kBurstWords)));
  return out;
}

std::optional<ModuleSpec> parse_module(const std::vector<std::string>& toks, std::string& err) {
  if (toks.empty()) {
    err = "missing module kind";
    return std::nullopt;
  }
  auto kind = parse_module_kind(lower(toks[0]));
  if (!kind) {
    err = "unknown module kind '" + toks[0] + "'";
    return std::nullopt;
  }
  ModuleSpec spec{*kind};
  for (std::size_t i = 1; i < toks.size(); ++i) {
    std::string key = "constant", val = toks[i];
    if (auto eq = toks[i].find('='); eq != std::string::npos) {
      key = lower(toks[i].substr(0, eq));
      val = toks[i].substr(eq + 1);
    }
    auto v = parse_uint(val);
    if (!v) {
      err = "bad module parameter '" + toks[i] + "'";
      return std::nullopt;
    }
    if (key == "constant" || key == "c") {
      spec.constant = static_cast<Word>(*v);
    } else if (key == "cycles" || key == "latency") {
      spec.compute_cycles = *v;
    } else {
      err = "unknown module parameter '" + key + "'";
      return std::nullopt;
    }
  }
  return spec;
}

std::optional<std::vector<ModuleSpec>> parse_chain(const std::string& value, std::string& err) {
  std::vector<ModuleSpec> chain;
  // Stages are comma separated; each stage may carry parameters (`mul constant=5`).
  std::string stage;
  std::istringstream is(value);
  while (std::getline(is, stage, ',')) {
    const auto toks = split_ws(stage);
    if (toks.empty()) continue;
    auto spec = parse_module(toks, err);
    if (!spec) return std::nullopt;
    chain.push_back(*spec);
  }
  return chain;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "invalid scenario";
        for (const auto& d : diagnostics) msg += "\n  " + d;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::vector<Burst> generate_bursts(unsigned app_id, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + app_id);
  std::vector<Burst> out(count, Burst(kBurstWords));
  for (auto& b : out) {
    b[0] = app_id;
    for (std::size_t i = 1; i < kBurstWords; ++i) b[i] = static_cast<Word>(rng() & 0xFFFFFFu);
  }
  return out;
}

Burst apply_chain(const std::vector<ModuleSpec>& chain, std::size_t from, Burst burst) {
  for (std::size_t i = from; i < chain.size(); ++i) burst = process(chain[i], burst);
  return burst;
}

Cycle host_cost(const Scenario& sc, const std::vector<ModuleSpec>& chain, std::size_t from) {
  Cycle total = 0;
  for (std::size_t i = from; i < chain.size(); ++i) {
    auto it = sc.host_costs.find(chain[i].kind);
    if (it != sc.host_costs.end()) total += it->second;
  }
  return total;
}

std::vector<std::string> check_scenario(const Scenario& sc) {
  std::vector<std::string> d;
  const std::size_t n = sc.port_count;
  if (n < 2 || n > kMaxPorts) {
    d.push_back("[ports] count: must be between 2 and " + std::to_string(kMaxPorts));
    return d;
  }
  if (sc.clock_hz <= 0) d.push_back("[sim] clock_hz: must be positive");
  if (sc.bridge.fifo_depth == 0) d.push_back("[sim] fifo_depth: must be positive");
  if (sc.timeouts.grant_timeout == 0 || sc.timeouts.ack_timeout == 0) d.push_back("[sim] timeouts must be positive");
  for (const auto& [port, spec] : sc.modules) {
    if (port == kHostPort || port >= n)
      d.push_back("[modules] " + std::to_string(port) + ": module ports are 1.." + std::to_string(n - 1));
  }
  for (PortIndex p : sc.static_regions) {
    if (p == kHostPort || p >= n) d.push_back("[ports] static: region " + std::to_string(p) + " out of range");
    if (sc.modules.count(p)) d.push_back("[ports] static: region " + std::to_string(p) + " already holds a module");
  }
  RegisterFile probe(n);
  for (const auto& [addr, value] : sc.regs) {
    if (addr % 4 != 0 || addr >= probe.end_addr())
      d.push_back("[regs] " + std::to_string(addr) + ": address out of range");
    else if (probe.is_status(addr))
      d.push_back("[regs] " + std::to_string(addr) + ": status registers are not host-writable");
  }
  std::set<unsigned> ids;
  for (const auto& app : sc.apps) {
    const std::string tag = "[apps] " + std::to_string(app.app_id) + ": ";
    if (app.app_id >= regmap::kAppCount) d.push_back(tag + "application IDs are 0..3");
    if (!ids.insert(app.app_id).second) d.push_back(tag + "duplicate application ID");
    if (app.channel >= kHostChannels) d.push_back(tag + "channel must be 0..2");
    if (app.quota == 0 || app.quota > 255) d.push_back(tag + "quota must be 1..255");
    if (app.data.empty()) d.push_back(tag + "no input data");
    for (const auto& b : app.data) {
      if (b.empty()) d.push_back(tag + "empty burst");
      else if ((b[0] & 3u) != app.app_id) d.push_back(tag + "word 0 of every burst must carry the application ID");
    }
    if (!app.expected.empty() && app.expected.size() != app.data.size())
      d.push_back(tag + "expected output has " + std::to_string(app.expected.size()) + " bursts, input has " +
                  std::to_string(app.data.size()));
  }
  for (const auto& ev : sc.events) {
    const std::string tag = (ev.line ? "line " + std::to_string(ev.line) : std::string("event")) + ": ";
    switch (ev.kind) {
      case EventKind::Poke:
        if (ev.addr % 4 != 0 || ev.addr >= probe.end_addr()) d.push_back(tag + "poke address out of range");
        else if (probe.is_status(ev.addr)) d.push_back(tag + "status registers are not host-writable");
        break;
      case EventKind::Submit:
        if (ev.channel >= kHostChannels) d.push_back(tag + "channel must be 0..2");
        if (ev.words.empty()) d.push_back(tag + "submit needs at least one word");
        break;
      case EventKind::Fire:
        if (!sc.modules.count(ev.port)) d.push_back(tag + "fire: no module at port " + std::to_string(ev.port));
        if (ev.words.empty()) d.push_back(tag + "fire needs at least one word");
        break;
      case EventKind::Free:
        if (ev.port == kHostPort || ev.port >= n) d.push_back(tag + "free: region out of range");
        break;
    }
  }
  return d;
}

void validate_scenario(const Scenario& sc) {
  auto d = check_scenario(sc);
  if (!d.empty()) throw ScenarioError(std::move(d));
}

Scenario parse_scenario(std::string_view text, const std::vector<std::string>& overrides) {
  static const std::set<std::string> kSections = {"sim",    "ports",      "modules", "regs",
                                                  "apps",   "chains",     "host_costs", "events"};
  std::map<std::string, Section> sections;
  Reader rd;

  std::string current;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        rd.diags.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      current = lower(trim(line.substr(1, line.size() - 2)));
      if (!kSections.count(current)) rd.diags.push_back("line " + std::to_string(lineno) + ": unknown section [" + current + "]");
      sections[current];
      continue;
    }
    if (current.empty()) {
      rd.diags.push_back("line " + std::to_string(lineno) + ": entry outside any section");
      continue;
    }
    if (current == "events") {
      sections[current].lines.push_back({"", line, lineno});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      rd.diags.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    sections[current].entries.push_back({lower(trim(line.substr(0, eq))), trim(line.substr(eq + 1)), lineno});
  }

  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    const auto dot = ov.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      rd.diags.push_back("override '" + ov + "': expected section.key=value");
      continue;
    }
    const std::string sec = lower(trim(ov.substr(0, dot)));
    if (!kSections.count(sec) || sec == "events") {
      rd.diags.push_back("override '" + ov + "': cannot override section [" + sec + "]");
      continue;
    }
    Entry e{lower(trim(ov.substr(dot + 1, eq - dot - 1))), trim(ov.substr(eq + 1)), 0};
    auto& entries = sections[sec].entries;
    auto it = std::find_if(entries.rbegin(), entries.rend(), [&](const Entry& x) { return x.key == e.key; });
    if (it != entries.rend())
      *it = e;
    else
      entries.push_back(e);
  }

  Scenario sc;
  auto sec = [&](const char* name) -> const Section& { return sections[name]; };

  for (const auto& e : sec("sim").entries) {
    const std::string_view s = "sim";
    if (e.key == "name") {
      sc.name = e.value;
    } else if (e.key == "clock_hz") {
      if (auto v = parse_double(e.value); v && *v > 0) sc.clock_hz = *v;
      else rd.diags.push_back(rd.where(e, s) + ": expected a positive frequency");
    } else if (e.key == "max_cycles") {
      rd.uint(e, s, sc.max_cycles);
    } else if (e.key == "grant_timeout") {
      rd.uint(e, s, sc.timeouts.grant_timeout);
    } else if (e.key == "ack_timeout") {
      rd.uint(e, s, sc.timeouts.ack_timeout);
    } else if (e.key == "trigger") {
      const std::string v = lower(e.value);
      if (v == "half_full" || v == "half") sc.bridge.trigger = TriggerMode::HalfFull;
      else if (v == "full") sc.bridge.trigger = TriggerMode::Full;
      else rd.diags.push_back(rd.where(e, s) + ": expected half_full or full");
    } else if (e.key == "fifo_depth") {
      rd.uint(e, s, sc.bridge.fifo_depth);
    } else if (e.key == "seed") {
      rd.uint(e, s, sc.seed);
    } else if (e.key == "reconfig_cycles") {
      rd.uint(e, s, sc.reconfig_cycles);
    } else if (e.key == "host_transfer_cycles") {
      rd.uint(e, s, sc.host_transfer_cycles);
    } else if (e.key == "trace" || e.key == "auto_release") {
      auto b = parse_bool(e.value);
      if (!b) rd.diags.push_back(rd.where(e, s) + ": expected true or false");
      else (e.key == "trace" ? sc.record_trace : sc.auto_release) = *b;
    } else {
      rd.diags.push_back(rd.where(e, s) + ": unknown key");
    }
  }

  for (const auto& e : sec("ports").entries) {
    if (e.key == "count") {
      rd.uint(e, "ports", sc.port_count, kMaxPorts);
    } else if (e.key == "static") {
      for (const auto& t : split_list(e.value)) {
        if (auto v = parse_uint(t)) sc.static_regions.push_back(*v);
        else rd.diags.push_back(rd.where(e, "ports") + ": bad region '" + t + "'");
      }
    } else {
      rd.diags.push_back(rd.where(e, "ports") + ": unknown key");
    }
  }

  for (const auto& e : sec("modules").entries) {
    auto port = parse_uint(e.key);
    std::string err;
    auto spec = parse_module(split_ws(e.value), err);
    if (!port) rd.diags.push_back(rd.where(e, "modules") + ": key must be a port number");
    else if (!spec) rd.diags.push_back(rd.where(e, "modules") + ": " + err);
    else sc.modules[*port] = *spec;
  }

  for (const auto& e : sec("regs").entries) {
    auto addr = parse_uint(e.key);
    auto value = parse_uint(e.value);
    if (!addr || *addr > 0xFFFFFFFFull) rd.diags.push_back(rd.where(e, "regs") + ": bad address");
    else if (!value || *value > 0xFFFFFFFFull) rd.diags.push_back(rd.where(e, "regs") + ": bad value");
    else sc.regs.emplace_back(static_cast<RegAddr>(*addr), static_cast<Word>(*value));
  }

  for (const auto& e : sec("host_costs").entries) {
    if (e.key == "transfer" || e.key == "host_transfer_cycles") {
      rd.uint(e, "host_costs", sc.host_transfer_cycles);
    } else if (auto kind = parse_module_kind(e.key)) {
      Cycle c = 0;
      if (rd.uint(e, "host_costs", c)) sc.host_costs[*kind] = c;
    } else {
      rd.diags.push_back(rd.where(e, "host_costs") + ": unknown module kind");
    }
  }

  struct AppBuild {
    AppDescriptor app;
    std::optional<std::size_t> generate;
    Burst words;
    Burst expected;
    std::string file;
    bool has_chain = false;
  };
  std::map<unsigned, AppBuild> apps;

  for (const auto& e : sec("chains").entries) {
    auto id = parse_uint(e.key);
    std::string err;
    auto chain = parse_chain(e.value, err);
    if (!id || *id >= regmap::kAppCount) rd.diags.push_back(rd.where(e, "chains") + ": key must be an application ID 0..3");
    else if (!chain) rd.diags.push_back(rd.where(e, "chains") + ": " + err);
    else {
      apps[*id].app.chain = *chain;
      apps[*id].has_chain = true;
    }
  }

  for (const auto& e : sec("apps").entries) {
    const auto dot = e.key.find('.');
    auto id = parse_uint(e.key.substr(0, dot));
    if (dot == std::string::npos || !id || *id >= regmap::kAppCount) {
      rd.diags.push_back(rd.where(e, "apps") + ": keys are <app id>.<field>");
      continue;
    }
    AppBuild& b = apps[*id];
    const std::string field = e.key.substr(dot + 1);
    if (field == "chain") {
      std::string err;
      if (auto chain = parse_chain(e.value, err)) {
        b.app.chain = *chain;
        b.has_chain = true;
      } else {
        rd.diags.push_back(rd.where(e, "apps") + ": " + err);
      }
    } else if (field == "channel") {
      rd.uint(e, "apps", b.app.channel);
    } else if (field == "gap") {
      rd.uint(e, "apps", b.app.gap);
    } else if (field == "quota") {
      rd.uint(e, "apps", b.app.quota, 255);
    } else if (field == "arrive") {
      rd.uint(e, "apps", b.app.arrive);
    } else if (field == "bursts") {
      std::size_t n = 0;
      if (rd.uint(e, "apps", n)) b.generate = n;
    } else if (field == "bytes") {
      std::size_t n = 0;
      if (rd.uint(e, "apps", n)) b.generate = (n + kBurstWords * 4 - 1) / (kBurstWords * 4);
    } else if (field == "data") {
      rd.words(e, "apps", split_list(e.value), b.words);
    } else if (field == "expected") {
      rd.words(e, "apps", split_list(e.value), b.expected);
    } else if (field == "file") {
      b.file = e.value;
    } else {
      rd.diags.push_back(rd.where(e, "apps") + ": unknown field '" + field + "'");
    }
  }

  for (auto& [id, b] : apps) {
    b.app.app_id = id;
    if (!b.file.empty()) {
      std::ifstream f(b.file, std::ios::binary);
      if (!f) {
        rd.diags.push_back("[apps] " + std::to_string(id) + ".file: cannot read '" + b.file + "'");
      } else {
        for (std::uint8_t bytes[4]; f.read(reinterpret_cast<char*>(bytes), 4);)
          b.words.push_back(Word(bytes[0]) | Word(bytes[1]) << 8 | Word(bytes[2]) << 16 | Word(bytes[3]) << 24);
      }
    }
    if (!b.words.empty()) b.app.data = chunk(b.words);
    else if (b.generate) b.app.data = generate_bursts(id, *b.generate, sc.seed);
    if (!b.expected.empty()) b.app.expected = chunk(b.expected);
    if (!b.has_chain) rd.diags.push_back("[apps] " + std::to_string(id) + ": missing chain");
    sc.apps.push_back(std::move(b.app));
  }

  for (const auto& e : sec("events").lines) {
    const auto toks = split_ws(e.value);
    const std::string tag = "line " + std::to_string(e.line) + ": ";
    ScenarioEvent ev;
    ev.line = e.line;
    auto cycle = toks.empty() ? std::nullopt : parse_uint(toks[0]);
    if (toks.size() < 2 || !cycle) {
      rd.diags.push_back(tag + "events are '<cycle> <verb> <args...>'");
      continue;
    }
    ev.cycle = *cycle;
    const std::string verb = lower(toks[1]);
    std::vector<std::string> args(toks.begin() + 2, toks.end());
    auto need = [&](std::size_t n) {
      if (args.size() >= n) return true;
      rd.diags.push_back(tag + verb + ": expected at least " + std::to_string(n) + " arguments");
      return false;
    };
    auto num = [&](const std::string& t, std::uint64_t& out) {
      auto v = parse_uint(t);
      if (!v) {
        rd.diags.push_back(tag + verb + ": bad number '" + t + "'");
        return false;
      }
      out = *v;
      return true;
    };
    std::uint64_t a = 0, b = 0;
    if (verb == "poke") {
      if (!need(2) || !num(args[0], a) || !num(args[1], b)) continue;
      if (a > 0xFFFFFFFFull || b > 0xFFFFFFFFull) {
        rd.diags.push_back(tag + "poke: value exceeds 32 bits");
        continue;
      }
      ev.kind = EventKind::Poke;
      ev.addr = static_cast<RegAddr>(a);
      ev.value = static_cast<Word>(b);
    } else if (verb == "submit" || verb == "fire") {
      if (!need(2) || !num(args[0], a)) continue;
      ev.kind = verb == "submit" ? EventKind::Submit : EventKind::Fire;
      (verb == "submit" ? ev.channel : ev.port) = a;
      std::vector<std::string> data;
      for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i].rfind("gap=", 0) == 0) {
          std::uint64_t g = 0;
          if (num(args[i].substr(4), g)) ev.gap = g;
        } else {
          data.push_back(args[i]);
        }
      }
      Entry fake{verb, "", e.line};
      if (!rd.words(fake, "events", data, ev.words)) continue;
    } else if (verb == "free") {
      if (!need(1) || !num(args[0], a)) continue;
      ev.kind = EventKind::Free;
      ev.port = a;
    } else if (verb == "arrive") {
      if (!need(1) || !num(args[0], a)) continue;
      auto it = std::find_if(sc.apps.begin(), sc.apps.end(), [&](const AppDescriptor& x) { return x.app_id == a; });
      if (it == sc.apps.end()) rd.diags.push_back(tag + "arrive: unknown application " + std::to_string(a));
      else it->arrive = ev.cycle;
      continue;
    } else {
      rd.diags.push_back(tag + "unknown event '" + verb + "'");
      continue;
    }
    sc.events.push_back(std::move(ev));
  }
  std::stable_sort(sc.events.begin(), sc.events.end(),
                   [](const ScenarioEvent& x, const ScenarioEvent& y) { return x.cycle < y.cycle; });

  if (rd.diags.empty()) rd.diags = check_scenario(sc);
  if (!rd.diags.empty()) throw ScenarioError(std::move(rd.diags));
  return sc;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream f(path);
  if (!f) throw ScenarioError({"cannot read scenario file '" + path + "'"});
  std::stringstream ss;
  ss << f.rdbuf();
  Scenario sc = parse_scenario(ss.str(), overrides);
  if (sc.name == "scenario") {
    auto slash = path.find_last_of('/');
    std::string base = path.substr(slash == std::string::npos ? 0 : slash + 1);
    if (auto dot = base.rfind('.'); dot != std::string::npos) base.erase(dot);
    sc.name = base;
  }
  return sc;
}

}  // namespace exb
