#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "botdet/actions.hpp"

namespace botdet {

inline constexpr uint32_t kNoTarget = std::numeric_limits<uint32_t>::max();

// Half-open observation window [start, end) in seconds since epoch.
struct TimeWindow {
  int64_t start = 0;
  int64_t end = 0;

  bool contains(int64_t ts) const { return ts >= start && ts < end; }
  int64_t length() const { return end - start; }
};

// One log record. Player, session and IP identifiers are interned; the
// owning EventLog maps indices back to the opaque string identifiers.
struct GameEvent {
  int64_t timestamp = 0;
  uint32_t actor = 0;
  uint32_t target = kNoTarget;  // kNoTarget unless the action is dyadic
  uint32_t amount = 0;
  uint32_t session = 0;
  uint32_t ip = 0;
  ActionKind action = ActionKind::kLogin;

  bool has_target() const { return target != kNoTarget; }
};

// Interning table for opaque string identifiers.
class IdTable {
 public:
  uint32_t intern(const std::string& id);
  const std::string& name(uint32_t index) const { return names_[index]; }
  const uint32_t* find(const std::string& id) const;
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> index_;
};

// Event sequence plus the identifier tables it was interned against.
struct EventLog {
  std::vector<GameEvent> events;
  IdTable players;
  IdTable sessions;
  IdTable ips;

  size_t player_count() const { return players.size(); }

  // Sorts by (timestamp, actor name, action, target name, amount) so that the
  // order is a pure function of event content.
  void sort_events();
};

struct IngestStats {
  size_t lines_read = 0;
  size_t kept = 0;
  size_t dropped_outside_window = 0;
};

struct IngestResult {
  EventLog log;
  IngestStats stats;
};

// Reads a JSON-Lines event file. Events outside the window are dropped and
// counted; the result is sorted. Malformed lines, unknown actions, and
// target/dyadic mismatches throw std::runtime_error naming the line number.
IngestResult ingest_events(const std::string& path, const TimeWindow& window);

// Writes JSON-Lines with the canonical field order:
// timestamp, actor_id, action, target_id, amount, session_id, ip_id.
void write_events(const EventLog& log, const std::string& path);

enum class Label : uint8_t { kBot, kHuman };

std::string_view label_name(Label label);

// Ground-truth map keyed by player identifier string.
class LabelMap {
 public:
  void insert(const std::string& player_id, Label label);
  const Label* find(const std::string& player_id) const;
  size_t size() const { return map_.size(); }
  const std::unordered_map<std::string, Label>& map() const { return map_; }

 private:
  std::unordered_map<std::string, Label> map_;
};

// CSV with required header "player_id,label". Duplicate ids and labels other
// than bot/human throw std::runtime_error naming the line number.
LabelMap ingest_labels(const std::string& path);

void write_labels(const LabelMap& labels, const std::string& path);

}  // namespace botdet
