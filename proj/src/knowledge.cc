#include "mojikit/knowledge.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <tuple>

#include <json.hpp>

namespace mojikit::bundled {
extern const std::string_view kCardsJson;
extern const std::string_view kPatternsJson;
}  // namespace mojikit::bundled

namespace mojikit {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 3> kModuleNames = {"human_centric", "environmental",
                                                          "animal_centric"};
constexpr std::array<std::string_view, 2> kSpeciesNames = {"cat", "dog"};
constexpr std::array<std::string_view, 8> kIntentNames = {
    "greeting_reunion",     "affection_comfort",   "play_teasing", "attention_seeking",
    "training_instruction", "boundary_discipline", "avoid_refuse", "other"};
constexpr std::array<std::string_view, 4> kTriggerNames = {
    "human_action", "environmental_cue", "temporal_routine", "proactive_robot"};
constexpr std::array<std::string_view, 8> kBehaviorNames = {
    "head_turn_nod", "approach",      "tail_wag",      "paw_tap_contact",
    "vocalization",  "lie_curl_roll", "retreat_avoid", "other_complex"};
constexpr std::array<std::string_view, 5> kAffectNames = {
    "positive_seeking", "positive_comforting", "negative_avoiding", "disciplinary_corrective",
    "ambiguous_mixed"};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::string_view, N>& names, E e) {
  const auto i = static_cast<std::size_t>(e);
  return i < N ? names[i] : "unknown";
}

template <typename E, std::size_t N>
std::optional<E> parse_name(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DatasetError(where + ": " + what);
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional = {}) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (std::string_view k : required) {
    if (!obj.contains(std::string(k))) fail(where, "missing key '" + std::string(k) + "'");
  }
  for (const auto& [key, value] : obj.items()) {
    const auto known = [&](std::initializer_list<std::string_view> l) {
      return std::find(l.begin(), l.end(), key) != l.end();
    };
    if (!known(required) && !known(optional)) fail(where, "unknown key '" + key + "'");
  }
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
  std::string s = v.get<std::string>();
  if (s.empty()) fail(where, std::string("'") + key + "' must not be empty");
  return s;
}

template <typename E>
E get_enum(const json& obj, const char* key, const std::string& where,
           std::optional<E> (*parse)(std::string_view)) {
  const std::string s = get_string(obj, key, where);
  const auto e = parse(s);
  if (!e) fail(where, std::string("unknown ") + key + " '" + s + "'");
  return *e;
}

json parse_document(std::string_view text, const char* schema, const char* list_key) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DatasetError(std::string(schema) + ": " + e.what());
  }
  require_keys(doc, schema, {"schema", list_key}, {"about"});
  if (doc.at("schema") != schema) fail(schema, "unexpected schema tag");
  if (!doc.at(list_key).is_array()) fail(schema, std::string("'") + list_key + "' must be an array");
  return doc;
}

Card parse_card(const json& j, std::size_t index) {
  const std::string where = "card[" + std::to_string(index) + "]";
  require_keys(j, where, {"id", "module", "title", "sections"}, {"species"});
  Card c;
  c.id = get_string(j, "id", where);
  c.module = get_enum<CardModule>(j, "module", where, parse_card_module);
  c.title = get_string(j, "title", where);
  if (j.contains("species")) {
    c.species = get_enum<Species>(j, "species", where, parse_species);
  }
  if ((c.module == CardModule::kAnimalCentric) != c.species.has_value()) {
    fail(where, "species is required for animal-centric cards and only for them");
  }
  const json& sections = j.at("sections");
  if (!sections.is_array() || sections.empty()) fail(where, "sections must be a non-empty array");
  for (const json& s : sections) {
    require_keys(s, where + " section", {"heading", "items"});
    CardSection section{get_string(s, "heading", where), {}};
    const json& items = s.at("items");
    if (!items.is_array() || items.empty()) fail(where, "items must be a non-empty array");
    for (const json& item : items) {
      if (!item.is_string() || item.get<std::string>().empty()) {
        fail(where, "items must be non-empty strings");
      }
      section.items.push_back(item.get<std::string>());
    }
    c.sections.push_back(std::move(section));
  }
  return c;
}

// Natural ordering key of "G<group>-<n>[suffix]".
std::tuple<int, int, std::string> pattern_key(const std::string& id) {
  static const std::regex kId(R"(G([1-9][0-9]*)-([1-9][0-9]*)([a-z]?))");
  std::smatch m;
  if (!std::regex_match(id, m, kId)) fail("pattern " + id, "id must look like G<n>-<n>[a-z]");
  return {std::stoi(m[1]), std::stoi(m[2]), m[3]};
}

InteractionPattern parse_pattern(const json& j, std::size_t index) {
  const std::string where = "pattern[" + std::to_string(index) + "]";
  require_keys(j, where, {"id", "intent", "trigger", "behaviors", "affect", "summary"}, {"note"});
  InteractionPattern p;
  p.id = get_string(j, "id", where);
  pattern_key(p.id);
  p.intent = get_enum<IntentCategory>(j, "intent", where, parse_intent);
  p.trigger = get_enum<TriggerType>(j, "trigger", where, parse_trigger);
  p.affect = get_enum<AffectCategory>(j, "affect", where, parse_affect);
  const json& behaviors = j.at("behaviors");
  if (!behaviors.is_array() || behaviors.empty()) fail(where, "behaviors must be a non-empty array");
  for (const json& b : behaviors) {
    const auto parsed = b.is_string() ? parse_behavior(b.get<std::string>()) : std::nullopt;
    if (!parsed) fail(where, "unknown behavior " + b.dump());
    if (std::find(p.behaviors.begin(), p.behaviors.end(), *parsed) != p.behaviors.end()) {
      fail(where, "duplicate behavior " + b.dump());
    }
    p.behaviors.push_back(*parsed);
  }
  const json& summary = j.at("summary");
  require_keys(summary, where + " summary", {"human_intent", "robot_behavior", "affective_meaning"});
  p.summary = {get_string(summary, "human_intent", where),
               get_string(summary, "robot_behavior", where),
               get_string(summary, "affective_meaning", where)};
  if (j.contains("note")) p.note = get_string(j, "note", where);
  return p;
}

// Half-up rounding of 1000 * n / total in integers.
int percent_tenths(int n, int total) { return total == 0 ? 0 : (n * 2000 + total) / (2 * total); }

template <typename E, std::size_t N, typename Get>
std::vector<StatRow> count_rows(const std::array<E, N>& all,
                                const std::vector<InteractionPattern>& patterns, Get get) {
  const int total = static_cast<int>(patterns.size());
  std::vector<StatRow> rows;
  for (E e : all) {
    const int n = static_cast<int>(
        std::count_if(patterns.begin(), patterns.end(), [&](const auto& p) { return get(p) == e; }));
    rows.push_back({std::string(to_string(e)), n, percent_tenths(n, total)});
  }
  return rows;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(CardModule m) { return name_of(kModuleNames, m); }
std::string_view to_string(Species s) { return name_of(kSpeciesNames, s); }
std::string_view to_string(IntentCategory c) { return name_of(kIntentNames, c); }
std::string_view to_string(TriggerType t) { return name_of(kTriggerNames, t); }
std::string_view to_string(BehaviorPrimitive b) { return name_of(kBehaviorNames, b); }
std::string_view to_string(AffectCategory a) { return name_of(kAffectNames, a); }

std::optional<CardModule> parse_card_module(std::string_view s) {
  return parse_name<CardModule>(kModuleNames, s);
}
std::optional<Species> parse_species(std::string_view s) {
  return parse_name<Species>(kSpeciesNames, s);
}
std::optional<IntentCategory> parse_intent(std::string_view s) {
  return parse_name<IntentCategory>(kIntentNames, s);
}
std::optional<TriggerType> parse_trigger(std::string_view s) {
  return parse_name<TriggerType>(kTriggerNames, s);
}
std::optional<BehaviorPrimitive> parse_behavior(std::string_view s) {
  return parse_name<BehaviorPrimitive>(kBehaviorNames, s);
}
std::optional<AffectCategory> parse_affect(std::string_view s) {
  return parse_name<AffectCategory>(kAffectNames, s);
}

bool PatternFilter::matches(const InteractionPattern& p) const {
  return (!intent || p.intent == *intent) && (!trigger || p.trigger == *trigger) &&
         (!behavior || p.primary_behavior() == *behavior) && (!affect || p.affect == *affect);
}

KnowledgeBase KnowledgeBase::from_json(std::string_view cards_json,
                                       std::string_view patterns_json) {
  KnowledgeBase kb;

  const json cards = parse_document(cards_json, "mojikit.cards/1", "cards");
  std::set<std::string> card_ids;
  for (std::size_t i = 0; i < cards.at("cards").size(); ++i) {
    Card c = parse_card(cards.at("cards")[i], i);
    if (!card_ids.insert(c.id).second) fail("cards", "duplicate id '" + c.id + "'");
    kb.cards_.push_back(std::move(c));
  }
  const auto count_cards = [&](CardModule m, std::optional<Species> s = std::nullopt) {
    return std::count_if(kb.cards_.begin(), kb.cards_.end(), [&](const Card& c) {
      return c.module == m && (!s || c.species == s);
    });
  };
  if (kb.cards_.size() != 8 || count_cards(CardModule::kHumanCentric) != 3 ||
      count_cards(CardModule::kEnvironmental) != 1 ||
      count_cards(CardModule::kAnimalCentric, Species::kCat) != 2 ||
      count_cards(CardModule::kAnimalCentric, Species::kDog) != 2) {
    fail("cards", "expected 3 human-centric, 1 environmental, 2 cat and 2 dog cards");
  }

  const json patterns = parse_document(patterns_json, "mojikit.patterns/1", "patterns");
  std::set<std::string> pattern_ids;
  for (std::size_t i = 0; i < patterns.at("patterns").size(); ++i) {
    InteractionPattern p = parse_pattern(patterns.at("patterns")[i], i);
    if (!pattern_ids.insert(lower(p.id)).second) fail("patterns", "duplicate id '" + p.id + "'");
    kb.patterns_.push_back(std::move(p));
  }
  if (kb.patterns_.size() != 35) {
    fail("patterns", "expected 35 patterns, found " + std::to_string(kb.patterns_.size()));
  }
  std::stable_sort(kb.patterns_.begin(), kb.patterns_.end(),
                   [](const InteractionPattern& a, const InteractionPattern& b) {
                     return pattern_key(a.id) < pattern_key(b.id);
                   });
  return kb;
}

const KnowledgeBase& KnowledgeBase::bundled() {
  static const KnowledgeBase kb = from_json(bundled::kCardsJson, bundled::kPatternsJson);
  return kb;
}

std::vector<const InteractionPattern*> KnowledgeBase::query_patterns(
    const PatternFilter& filter) const {
  std::vector<const InteractionPattern*> out;
  for (const InteractionPattern& p : patterns_) {
    if (filter.matches(p)) out.push_back(&p);
  }
  return out;
}

const InteractionPattern* KnowledgeBase::find_pattern(std::string_view id) const {
  const std::string want = lower(id);
  for (const InteractionPattern& p : patterns_) {
    if (lower(p.id) == want) return &p;
  }
  // Split patterns keep the bare id resolvable through their first variant.
  const std::string first_variant = want + "a";
  for (const InteractionPattern& p : patterns_) {
    if (lower(p.id) == first_variant) return &p;
  }
  return nullptr;
}

PatternStats KnowledgeBase::compute_stats() const {
  PatternStats s;
  s.total = static_cast<int>(patterns_.size());
  s.intent = count_rows(kAllIntents, patterns_, [](const auto& p) { return p.intent; });
  s.trigger = count_rows(kAllTriggers, patterns_, [](const auto& p) { return p.trigger; });
  s.behavior =
      count_rows(kAllBehaviors, patterns_, [](const auto& p) { return p.primary_behavior(); });
  s.affect = count_rows(kAllAffects, patterns_, [](const auto& p) { return p.affect; });
  const int positive = s.affect[0].count + s.affect[1].count;
  s.positive_affect = {"positive", positive, percent_tenths(positive, s.total)};
  return s;
}

const Card& KnowledgeBase::lookup_card(std::string_view id) const {
  for (const Card& c : cards_) {
    if (c.id == id) return c;
  }
  throw NotFoundError("no card with id '" + std::string(id) + "'");
}

std::vector<const Card*> KnowledgeBase::list_cards(std::optional<CardModule> module) const {
  std::vector<const Card*> out;
  for (const Card& c : cards_) {
    if (!module || c.module == *module) out.push_back(&c);
  }
  return out;
}

std::string format_percent_tenths(int tenths) {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

}  // namespace mojikit
