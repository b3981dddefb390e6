#include "botdet/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <omp.h>

namespace botdet {

double shannon_diversity(std::span<const int64_t> counts) {
  std::vector<int64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  int64_t total = 0;
  for (int64_t c : sorted) {
    if (c < 0) throw std::runtime_error("shannon_diversity: negative count");
    total += c;
  }
  if (total == 0) return 0.0;
  double h = 0.0;
  for (int64_t c : sorted) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h < 0.0 ? 0.0 : h;
}

namespace {

uint64_t dyad_key(uint32_t a, uint32_t b) {
  uint32_t lo = std::min(a, b);
  uint32_t hi = std::max(a, b);
  return (static_cast<uint64_t>(lo) << 32) | hi;
}

int64_t utc_day(int64_t ts) {
  // Floor division; timestamps may in principle precede the epoch.
  int64_t d = ts / 86400;
  if (ts % 86400 < 0) --d;
  return d;
}

}  // namespace

std::vector<std::vector<Interval>> party_episodes(const EventLog& log, const TimeWindow& window,
                                                  ExtractionWarnings* warnings) {
  const size_t n_players = log.player_count();
  // Open party_start timestamps per unordered dyad, FIFO-matched with ends.
  std::unordered_map<uint64_t, std::vector<int64_t>> open_starts;
  std::vector<std::vector<Interval>> raw(n_players);
  size_t unmatched_ends = 0;

  auto emit = [&](uint32_t a, uint32_t b, int64_t start, int64_t end) {
    if (end < start) std::swap(start, end);
    raw[a].push_back({start, end});
    raw[b].push_back({start, end});
  };

  for (const auto& ev : log.events) {
    if (ev.action == ActionKind::kPartyStart) {
      open_starts[dyad_key(ev.actor, ev.target)].push_back(ev.timestamp);
    } else if (ev.action == ActionKind::kPartyEnd) {
      auto it = open_starts.find(dyad_key(ev.actor, ev.target));
      if (it == open_starts.end() || it->second.empty()) {
        ++unmatched_ends;
        continue;
      }
      int64_t start = it->second.front();
      it->second.erase(it->second.begin());
      emit(ev.actor, ev.target, start, ev.timestamp);
    }
  }
  // Unterminated dyads close at the window end.
  for (const auto& [key, starts] : open_starts) {
    uint32_t a = static_cast<uint32_t>(key >> 32);
    uint32_t b = static_cast<uint32_t>(key & 0xffffffffu);
    for (int64_t start : starts) emit(a, b, start, window.end);
  }
  if (warnings) warnings->party_end_without_start += unmatched_ends;

  // Merge overlapping dyadic intervals into per-player episodes.
  std::vector<std::vector<Interval>> episodes(n_players);
#pragma omp parallel for schedule(dynamic, 64)
  for (size_t p = 0; p < n_players; ++p) {
    auto& intervals = raw[p];
    if (intervals.empty()) continue;
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& x, const Interval& y) {
                return x.start != y.start ? x.start < y.start : x.end < y.end;
              });
    auto& merged = episodes[p];
    merged.push_back(intervals.front());
    for (size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].start <= merged.back().end) {
        merged.back().end = std::max(merged.back().end, intervals[i].end);
      } else {
        merged.push_back(intervals[i]);
      }
    }
  }
  return episodes;
}

ProfileSet extract_profiles(const EventLog& log, const TimeWindow& window) {
  const size_t n_players = log.player_count();
  ProfileSet set;
  set.profiles.resize(n_players);

  // Index events per player. Dyadic events are indexed on both sides so that
  // participation counts see them once per participant.
  std::vector<uint32_t> own_count(n_players, 0), part_count(n_players, 0);
  for (const auto& ev : log.events) {
    ++own_count[ev.actor];
    if (ev.has_target() && ev.target != ev.actor) ++part_count[ev.target];
  }
  std::vector<std::vector<uint32_t>> own(n_players), participation(n_players);
  for (size_t p = 0; p < n_players; ++p) {
    own[p].reserve(own_count[p]);
    participation[p].reserve(part_count[p]);
  }
  for (size_t i = 0; i < log.events.size(); ++i) {
    const auto& ev = log.events[i];
    own[ev.actor].push_back(static_cast<uint32_t>(i));
    if (ev.has_target() && ev.target != ev.actor) participation[ev.target].push_back(static_cast<uint32_t>(i));
  }

  auto episodes = party_episodes(log, window, &set.warnings);

  std::vector<ExtractionWarnings> local_warnings(n_players);

#pragma omp parallel for schedule(dynamic, 32)
  for (size_t p = 0; p < n_players; ++p) {
    PlayerProfile& prof = set.profiles[p];
    prof.player = static_cast<uint32_t>(p);

    std::unordered_set<uint32_t> ips;
    std::unordered_map<int64_t, int64_t> harvest_by_day;
    bool in_session = false;
    int64_t session_start = 0;

    for (uint32_t idx : own[p]) {
      const auto& ev = log.events[idx];
      ips.insert(ev.ip);

      switch (ev.action) {
        case ActionKind::kLogin:
          if (in_session) {
            ++local_warnings[p].login_while_in_session;
          } else {
            in_session = true;
            session_start = ev.timestamp;
          }
          break;
        case ActionKind::kLogout:
          if (in_session) {
            in_session = false;
            prof.play_time += ev.timestamp - session_start;
            ++prof.login_frequency;
          } else {
            ++local_warnings[p].logout_without_login;
            ++prof.login_frequency;  // tolerated: session of length 0
          }
          break;
        case ActionKind::kEarnMoney:
          prof.game_money += ev.amount;
          break;
        default:
          break;
      }
      if (ev.action == ActionKind::kHarvest) {
        int64_t day = utc_day(ev.timestamp);
        prof.harvest_max_per_day = std::max(prof.harvest_max_per_day, ++harvest_by_day[day]);
      }
      for (size_t a = 0; a < kPlayerActions.size(); ++a) {
        if (kPlayerActions[a] == ev.action) {
          ++prof.action_counts[a];
          break;
        }
      }
      if (auto type = interaction_type(ev.action)) {
        ++prof.interaction_counts[static_cast<size_t>(*type)];
        if (*type == InteractionType::kGuild) ++prof.guild_activity_count;
      }
    }
    if (in_session) {
      prof.play_time += window.end - session_start;
      ++prof.login_frequency;
    }

    // Dyadic participation from the target side.
    for (uint32_t idx : participation[p]) {
      const auto& ev = log.events[idx];
      ips.insert(ev.ip);
      if (auto type = interaction_type(ev.action)) {
        ++prof.interaction_counts[static_cast<size_t>(*type)];
        if (*type == InteractionType::kGuild) ++prof.guild_activity_count;
      }
    }

    prof.ip_count = static_cast<int64_t>(ips.size());

    int64_t total_actions = 0;
    for (int64_t c : prof.action_counts) total_actions += c;
    if (total_actions > 0) {
      size_t largest = 0;
      for (size_t a = 0; a < prof.action_counts.size(); ++a) {
        prof.action_ratios[a] =
            static_cast<double>(prof.action_counts[a]) / static_cast<double>(total_actions);
        if (prof.action_counts[a] > prof.action_counts[largest]) largest = a;
      }
      // The largest ratio absorbs rounding so the ten ratios sum to exactly 1.
      double rest = 0.0;
      for (size_t a = 0; a < prof.action_ratios.size(); ++a) {
        if (a != largest) rest += prof.action_ratios[a];
      }
      prof.action_ratios[largest] = 1.0 - rest;
    }

    const auto& eps = episodes[p];
    prof.party_episode_count = static_cast<int64_t>(eps.size());
    if (!eps.empty()) {
      int64_t total = 0;
      for (const auto& e : eps) total += e.end - e.start;
      prof.party_avg_duration = static_cast<double>(total) / static_cast<double>(eps.size());
    }

    prof.interaction_entropy = shannon_diversity(prof.interaction_counts);
  }

  for (const auto& w : local_warnings) {
    set.warnings.logout_without_login += w.logout_without_login;
    set.warnings.login_while_in_session += w.login_while_in_session;
  }
  return set;
}

void write_profiles_csv(const ProfileSet& set, const EventLog& log, const std::string& path) {
  std::vector<uint32_t> order(set.profiles.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<uint32_t>(i);
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return log.players.name(a) < log.players.name(b); });

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "player_id,login_frequency,play_time,game_money,ip_count";
  for (auto action : kPlayerActions) out << ',' << action_name(action) << "_count";
  for (auto action : kPlayerActions) out << ',' << action_name(action) << "_ratio";
  out << ",harvest_max_per_day,party_avg_duration,guild_activity_count,interaction_entropy\n";
  out.precision(17);
  for (uint32_t p : order) {
    const auto& prof = set.profiles[p];
    out << log.players.name(p) << ',' << prof.login_frequency << ',' << prof.play_time << ','
        << prof.game_money << ',' << prof.ip_count;
    for (int64_t c : prof.action_counts) out << ',' << c;
    for (double r : prof.action_ratios) out << ',' << r;
    out << ',' << prof.harvest_max_per_day << ',' << prof.party_avg_duration << ','
        << prof.guild_activity_count << ',' << prof.interaction_entropy << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace botdet
