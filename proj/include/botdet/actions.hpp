#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace botdet {

// Closed action vocabulary of the event log. Unknown action strings are an
// ingestion error.
enum class ActionKind : uint8_t {
  kLogin,
  kLogout,
  kSit,
  kEarnExp,
  kObtainItem,
  kEarnMoney,
  kEarnPkPoint,
  kHarvest,
  kResurrect,
  kRestoreExp,
  kKilledByNpcPc,
  kUsePortal,
  kPartyStart,
  kPartyEnd,
  kFriendAdd,
  kTrade,
  kWhisper,
  kMail,
  kShopSale,
  kGuildActivity,
};

inline constexpr size_t kActionCount = 20;

// The ten per-player action features (counts and ratios), in canonical order.
inline constexpr std::array<ActionKind, 10> kPlayerActions = {
    ActionKind::kSit,          ActionKind::kEarnExp,    ActionKind::kObtainItem,
    ActionKind::kEarnMoney,    ActionKind::kEarnPkPoint, ActionKind::kHarvest,
    ActionKind::kResurrect,    ActionKind::kRestoreExp, ActionKind::kKilledByNpcPc,
    ActionKind::kUsePortal,
};

// The seven social interaction types used for the diversity entropy, in
// canonical order: party, friendship, trade, whisper, mail, shop, guild.
enum class InteractionType : uint8_t {
  kParty,
  kFriendship,
  kTrade,
  kWhisper,
  kMail,
  kShop,
  kGuild,
};

inline constexpr size_t kInteractionTypeCount = 7;

std::string_view action_name(ActionKind kind);
std::optional<ActionKind> parse_action(std::string_view name);

// Dyadic actions carry a target_id; all others must not.
bool is_dyadic(ActionKind kind);

// Maps dyadic actions (and guild activity) to the entropy interaction type.
// party_end does not count as a fresh interaction; it returns nullopt.
std::optional<InteractionType> interaction_type(ActionKind kind);

std::string_view interaction_type_name(InteractionType type);

}  // namespace botdet
