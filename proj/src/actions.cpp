#include "botdet/actions.hpp"

namespace botdet {

namespace {

constexpr std::array<std::string_view, kActionCount> kNames = {
    "login",        "logout",     "sit",        "earn_exp",       "obtain_item",
    "earn_money",   "earn_pk_point", "harvest", "resurrect",      "restore_exp",
    "killed_by_npc_pc", "use_portal", "party_start", "party_end", "friend_add",
    "trade",        "whisper",    "mail",       "shop_sale",      "guild_activity",
};

}  // namespace

std::string_view action_name(ActionKind kind) {
  return kNames[static_cast<size_t>(kind)];
}

std::optional<ActionKind> parse_action(std::string_view name) {
  for (size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<ActionKind>(i);
  }
  return std::nullopt;
}

bool is_dyadic(ActionKind kind) {
  switch (kind) {
    case ActionKind::kPartyStart:
    case ActionKind::kPartyEnd:
    case ActionKind::kFriendAdd:
    case ActionKind::kTrade:
    case ActionKind::kWhisper:
    case ActionKind::kMail:
    case ActionKind::kShopSale:
    case ActionKind::kGuildActivity:
      return true;
    default:
      return false;
  }
}

std::optional<InteractionType> interaction_type(ActionKind kind) {
  switch (kind) {
    case ActionKind::kPartyStart:
      return InteractionType::kParty;
    case ActionKind::kFriendAdd:
      return InteractionType::kFriendship;
    case ActionKind::kTrade:
      return InteractionType::kTrade;
    case ActionKind::kWhisper:
      return InteractionType::kWhisper;
    case ActionKind::kMail:
      return InteractionType::kMail;
    case ActionKind::kShopSale:
      return InteractionType::kShop;
    case ActionKind::kGuildActivity:
      return InteractionType::kGuild;
    default:
      return std::nullopt;
  }
}

std::string_view interaction_type_name(InteractionType type) {
  constexpr std::array<std::string_view, kInteractionTypeCount> names = {
      "party", "friendship", "trade", "whisper", "mail", "shop", "guild"};
  return names[static_cast<size_t>(type)];
}

}  // namespace botdet
