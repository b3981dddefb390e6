#include "botdet/events.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace botdet {

using nlohmann::json;

uint32_t IdTable::intern(const std::string& id) {
  auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  uint32_t idx = static_cast<uint32_t>(names_.size());
  names_.push_back(id);
  index_.emplace(names_.back(), idx);
  return idx;
}

const uint32_t* IdTable::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &it->second;
}

void EventLog::sort_events() {
  static const std::string kEmpty;
  std::sort(events.begin(), events.end(), [this](const GameEvent& a, const GameEvent& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    const std::string& an = players.name(a.actor);
    const std::string& bn = players.name(b.actor);
    if (an != bn) return an < bn;
    if (a.action != b.action) return a.action < b.action;
    const std::string& at = a.has_target() ? players.name(a.target) : kEmpty;
    const std::string& bt = b.has_target() ? players.name(b.target) : kEmpty;
    if (at != bt) return at < bt;
    return a.amount < b.amount;
  });
}

namespace {

[[noreturn]] void fail_line(const std::string& path, size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

IngestResult ingest_events(const std::string& path, const TimeWindow& window) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open event file: " + path);

  IngestResult result;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ++result.stats.lines_read;

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail_line(path, lineno, "malformed event record");

    GameEvent ev;
    try {
      ev.timestamp = j.at("timestamp").get<int64_t>();
      const auto& actor_str = j.at("actor_id").get_ref<const std::string&>();
      ev.actor = result.log.players.intern(actor_str);
      const auto& action_name_str = j.at("action").get_ref<const std::string&>();
      auto kind = parse_action(action_name_str);
      if (!kind) fail_line(path, lineno, "unknown action: " + action_name_str);
      ev.action = *kind;
      if (j.contains("target_id") && !j["target_id"].is_null()) {
        ev.target = result.log.players.intern(j["target_id"].get_ref<const std::string&>());
      }
      int64_t amount = j.value("amount", int64_t{0});
      if (amount < 0) fail_line(path, lineno, "negative amount");
      ev.amount = static_cast<uint32_t>(amount);
      ev.session = result.log.sessions.intern(j.value("session_id", std::string()));
      ev.ip = result.log.ips.intern(j.value("ip_id", std::string()));
    } catch (const json::exception& e) {
      fail_line(path, lineno, std::string("malformed event record: ") + e.what());
    }

    if (is_dyadic(ev.action) != ev.has_target()) {
      fail_line(path, lineno,
                ev.has_target() ? "target_id on a non-dyadic action" : "missing target_id on a dyadic action");
    }

    if (!window.contains(ev.timestamp)) {
      ++result.stats.dropped_outside_window;
      continue;
    }
    result.log.events.push_back(ev);
  }
  result.stats.kept = result.log.events.size();
  result.log.sort_events();
  return result;
}

void write_events(const EventLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  std::string buf;
  buf.reserve(1 << 20);
  char num[24];
  auto append_int = [&](int64_t v) {
    auto [p, ec] = std::to_chars(num, num + sizeof(num), v);
    (void)ec;
    buf.append(num, p);
  };

  for (const auto& ev : log.events) {
    buf += "{\"timestamp\":";
    append_int(ev.timestamp);
    buf += ",\"actor_id\":\"";
    buf += log.players.name(ev.actor);
    buf += "\",\"action\":\"";
    buf += action_name(ev.action);
    buf += '"';
    if (ev.has_target()) {
      buf += ",\"target_id\":\"";
      buf += log.players.name(ev.target);
      buf += '"';
    }
    buf += ",\"amount\":";
    append_int(ev.amount);
    buf += ",\"session_id\":\"";
    buf += log.sessions.name(ev.session);
    buf += "\",\"ip_id\":\"";
    buf += log.ips.name(ev.ip);
    buf += "\"}\n";
    if (buf.size() > (1 << 20) - 1024) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string_view label_name(Label label) { return label == Label::kBot ? "bot" : "human"; }

void LabelMap::insert(const std::string& player_id, Label label) {
  auto [it, inserted] = map_.emplace(player_id, label);
  if (!inserted) throw std::runtime_error("duplicate player_id in labels: " + player_id);
}

const Label* LabelMap::find(const std::string& player_id) const {
  auto it = map_.find(player_id);
  return it == map_.end() ? nullptr : &it->second;
}

LabelMap ingest_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);

  std::string line;
  size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty label file (header required)");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "player_id,label") fail_line(path, lineno, "expected header 'player_id,label'");

  LabelMap labels;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) fail_line(path, lineno, "expected 'player_id,label'");
    std::string id = line.substr(0, comma);
    std::string label_str = line.substr(comma + 1);
    if (id.empty()) fail_line(path, lineno, "empty player_id");
    Label label;
    if (label_str == "bot") {
      label = Label::kBot;
    } else if (label_str == "human") {
      label = Label::kHuman;
    } else {
      fail_line(path, lineno, "label must be 'bot' or 'human', got '" + label_str + "'");
    }
    try {
      labels.insert(id, label);
    } catch (const std::runtime_error& e) {
      fail_line(path, lineno, e.what());
    }
  }
  return labels;
}

void write_labels(const LabelMap& labels, const std::string& path) {
  std::vector<std::pair<std::string, Label>> rows(labels.map().begin(), labels.map().end());
  std::sort(rows.begin(), rows.end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "player_id,label\n";
  for (const auto& [id, label] : rows) out << id << ',' << label_name(label) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace botdet
