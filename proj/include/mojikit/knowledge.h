// Reference cards and co-created interaction patterns, loaded from the
// datasets bundled into the library, with filtering and summary counts.

#ifndef MOJIKIT_KNOWLEDGE_H_
#define MOJIKIT_KNOWLEDGE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mojikit {

enum class CardModule : std::uint8_t { kHumanCentric, kEnvironmental, kAnimalCentric };
enum class Species : std::uint8_t { kCat, kDog };

enum class IntentCategory : std::uint8_t {
  kGreetingReunion,
  kAffectionComfort,
  kPlayTeasing,
  kAttentionSeeking,
  kTrainingInstruction,
  kBoundaryDiscipline,
  kAvoidRefuse,
  kOther,
};

enum class TriggerType : std::uint8_t {
  kHumanAction,
  kEnvironmentalCue,
  kTemporalRoutine,
  kProactiveRobot,
};

enum class BehaviorPrimitive : std::uint8_t {
  kHeadTurnNod,
  kApproach,
  kTailWag,
  kPawTapContact,
  kVocalization,
  kLieCurlRoll,
  kRetreatAvoid,
  kOtherComplex,
};

enum class AffectCategory : std::uint8_t {
  kPositiveSeeking,
  kPositiveComforting,
  kNegativeAvoiding,
  kDisciplinaryCorrective,
  kAmbiguousMixed,
};

inline constexpr std::array<IntentCategory, 8> kAllIntents = {
    IntentCategory::kGreetingReunion,     IntentCategory::kAffectionComfort,
    IntentCategory::kPlayTeasing,         IntentCategory::kAttentionSeeking,
    IntentCategory::kTrainingInstruction, IntentCategory::kBoundaryDiscipline,
    IntentCategory::kAvoidRefuse,         IntentCategory::kOther,
};
inline constexpr std::array<TriggerType, 4> kAllTriggers = {
    TriggerType::kHumanAction, TriggerType::kEnvironmentalCue,
    TriggerType::kTemporalRoutine, TriggerType::kProactiveRobot,
};
inline constexpr std::array<BehaviorPrimitive, 8> kAllBehaviors = {
    BehaviorPrimitive::kHeadTurnNod,   BehaviorPrimitive::kApproach,
    BehaviorPrimitive::kTailWag,       BehaviorPrimitive::kPawTapContact,
    BehaviorPrimitive::kVocalization,  BehaviorPrimitive::kLieCurlRoll,
    BehaviorPrimitive::kRetreatAvoid,  BehaviorPrimitive::kOtherComplex,
};
inline constexpr std::array<AffectCategory, 5> kAllAffects = {
    AffectCategory::kPositiveSeeking,        AffectCategory::kPositiveComforting,
    AffectCategory::kNegativeAvoiding,       AffectCategory::kDisciplinaryCorrective,
    AffectCategory::kAmbiguousMixed,
};

std::string_view to_string(CardModule m);
std::string_view to_string(Species s);
std::string_view to_string(IntentCategory c);
std::string_view to_string(TriggerType t);
std::string_view to_string(BehaviorPrimitive b);
std::string_view to_string(AffectCategory a);

std::optional<CardModule> parse_card_module(std::string_view s);
std::optional<Species> parse_species(std::string_view s);
std::optional<IntentCategory> parse_intent(std::string_view s);
std::optional<TriggerType> parse_trigger(std::string_view s);
std::optional<BehaviorPrimitive> parse_behavior(std::string_view s);
std::optional<AffectCategory> parse_affect(std::string_view s);

struct CardSection {
  std::string heading;
  std::vector<std::string> items;
};

struct Card {
  std::string id;
  CardModule module;
  std::optional<Species> species;
  std::string title;
  std::vector<CardSection> sections;
};

struct PatternSummary {
  std::string human_intent;
  std::string robot_behavior;
  std::string affective_meaning;
};

struct InteractionPattern {
  std::string id;
  IntentCategory intent;
  TriggerType trigger;
  // Primary primitive first; only the primary one is counted and filtered on.
  std::vector<BehaviorPrimitive> behaviors;
  AffectCategory affect;
  PatternSummary summary;
  std::string note;

  BehaviorPrimitive primary_behavior() const { return behaviors.front(); }
};

// Unset fields match everything; set fields must all match.
struct PatternFilter {
  std::optional<IntentCategory> intent;
  std::optional<TriggerType> trigger;
  std::optional<BehaviorPrimitive> behavior;
  std::optional<AffectCategory> affect;

  bool matches(const InteractionPattern& p) const;
};

struct StatRow {
  std::string category;
  int count;
  // Percentage of all patterns in tenths, rounded half up (200 == 20.0%).
  int percent_tenths;
};

struct PatternStats {
  int total;
  std::vector<StatRow> intent;
  std::vector<StatRow> trigger;
  std::vector<StatRow> behavior;
  std::vector<StatRow> affect;
  // Positive-seeking plus positive-comforting.
  StatRow positive_affect;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class KnowledgeBase {
 public:
  // Parses and validates both datasets. Throws DatasetError on malformed JSON,
  // unknown keys or categories, duplicate ids, or wrong card/pattern counts.
  static KnowledgeBase from_json(std::string_view cards_json, std::string_view patterns_json);
  // The datasets compiled into the library, loaded once.
  static const KnowledgeBase& bundled();

  const std::vector<Card>& cards() const { return cards_; }
  // Sorted by group number, then pattern number, then suffix.
  const std::vector<InteractionPattern>& patterns() const { return patterns_; }

  std::vector<const InteractionPattern*> query_patterns(const PatternFilter& filter = {}) const;
  // Case-insensitive id match; a bare id of a split pattern ("G5-1") resolves
  // to its first variant. nullptr when absent.
  const InteractionPattern* find_pattern(std::string_view id) const;
  PatternStats compute_stats() const;

  // Throws NotFoundError for unknown ids.
  const Card& lookup_card(std::string_view id) const;
  std::vector<const Card*> list_cards(std::optional<CardModule> module = std::nullopt) const;

 private:
  std::vector<Card> cards_;
  std::vector<InteractionPattern> patterns_;
};

// "20.0" style rendering of StatRow::percent_tenths.
std::string format_percent_tenths(int tenths);

}  // namespace mojikit

#endif  // MOJIKIT_KNOWLEDGE_H_
