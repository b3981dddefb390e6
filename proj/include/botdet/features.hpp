#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "botdet/events.hpp"

namespace botdet {

// Per-player behavioral profile: player information, action counts and
// ratios, group activity, and social interaction diversity.
struct PlayerProfile {
  uint32_t player = 0;
  int64_t login_frequency = 0;   // number of sessions
  int64_t play_time = 0;         // total seconds in session
  int64_t game_money = 0;        // sum of earn_money amounts
  int64_t ip_count = 0;          // distinct ip_id values
  std::array<int64_t, 10> action_counts{};  // kPlayerActions order
  std::array<double, 10> action_ratios{};   // sum exactly 1 when any action occurred
  int64_t harvest_max_per_day = 0;          // UTC calendar-day buckets
  double party_avg_duration = 0.0;          // seconds, mean over merged episodes
  int64_t party_episode_count = 0;
  int64_t guild_activity_count = 0;         // events where player is actor or target
  std::array<int64_t, kInteractionTypeCount> interaction_counts{};
  double interaction_entropy = 0.0;         // nats, in [0, ln 7]
};

struct ExtractionWarnings {
  size_t logout_without_login = 0;
  size_t login_while_in_session = 0;
  size_t party_end_without_start = 0;
};

struct ProfileSet {
  std::vector<PlayerProfile> profiles;  // indexed by player id in log.players
  ExtractionWarnings warnings;
};

// Shannon diversity entropy in nats over interaction-type counts.
// Zero-count types contribute nothing (0 ln 0 = 0); an all-zero vector has
// entropy 0. Terms are accumulated in sorted order so the value is exactly
// invariant under permutation of the input.
double shannon_diversity(std::span<const int64_t> counts);

struct Interval {
  int64_t start = 0;
  int64_t end = 0;
};

// Per-player merged party intervals. Dyadic party_start/party_end pairs are
// matched per (player, partner) in time order; overlapping intervals from
// concurrent dyads merge into one episode. Unterminated intervals close at
// the window end; a party_end without a matching start is dropped and
// counted.
std::vector<std::vector<Interval>> party_episodes(const EventLog& log, const TimeWindow& window,
                                                  ExtractionWarnings* warnings = nullptr);

// One profile per distinct player in the log. Events must be sorted by
// timestamp (as ingest_events guarantees). Per-player work runs in parallel;
// the result is identical to the single-threaded computation.
ProfileSet extract_profiles(const EventLog& log, const TimeWindow& window);

// CSV export, one row per player ordered by player identifier. The column
// order matches the personal-feature block of the feature matrix.
void write_profiles_csv(const ProfileSet& set, const EventLog& log, const std::string& path);

}  // namespace botdet
