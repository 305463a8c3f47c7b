#include "mojikit/knowledge.h"

#include <map>
#include <set>

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_support.h"

namespace mojikit {
namespace {

using nlohmann::json;

const std::string kCards = testing::read_text(MOJIKIT_SOURCE_DIR "/data/cards.json");
const std::string kPatterns = testing::read_text(MOJIKIT_SOURCE_DIR "/data/patterns.json");

std::map<std::string, std::pair<int, int>> rows_by_name(const std::vector<StatRow>& rows) {
  std::map<std::string, std::pair<int, int>> out;
  for (const StatRow& r : rows) out[r.category] = {r.count, r.percent_tenths};
  return out;
}

// Published summary table: counts and one-decimal percentages.
TEST(KnowledgeStatsTest, ReproducesPublishedTable) {
  const PatternStats s = KnowledgeBase::bundled().compute_stats();
  EXPECT_EQ(s.total, 35);
  const auto intent = rows_by_name(s.intent);
  EXPECT_EQ(intent.at("greeting_reunion"), std::make_pair(7, 200));
  EXPECT_EQ(intent.at("affection_comfort"), std::make_pair(7, 200));
  EXPECT_EQ(intent.at("play_teasing"), std::make_pair(6, 171));
  EXPECT_EQ(intent.at("attention_seeking"), std::make_pair(5, 143));
  EXPECT_EQ(intent.at("training_instruction"), std::make_pair(3, 86));
  EXPECT_EQ(intent.at("boundary_discipline"), std::make_pair(3, 86));
  EXPECT_EQ(intent.at("avoid_refuse"), std::make_pair(2, 57));
  EXPECT_EQ(intent.at("other"), std::make_pair(2, 57));

  const auto trigger = rows_by_name(s.trigger);
  EXPECT_EQ(trigger.at("human_action"), std::make_pair(21, 600));
  EXPECT_EQ(trigger.at("environmental_cue"), std::make_pair(5, 143));
  EXPECT_EQ(trigger.at("temporal_routine"), std::make_pair(5, 143));
  EXPECT_EQ(trigger.at("proactive_robot"), std::make_pair(4, 114));

  const auto behavior = rows_by_name(s.behavior);
  EXPECT_EQ(behavior.at("head_turn_nod"), std::make_pair(7, 200));
  EXPECT_EQ(behavior.at("approach"), std::make_pair(6, 171));
  EXPECT_EQ(behavior.at("tail_wag"), std::make_pair(5, 143));
  EXPECT_EQ(behavior.at("paw_tap_contact"), std::make_pair(4, 114));
  EXPECT_EQ(behavior.at("vocalization"), std::make_pair(3, 86));
  EXPECT_EQ(behavior.at("lie_curl_roll"), std::make_pair(3, 86));
  EXPECT_EQ(behavior.at("retreat_avoid"), std::make_pair(3, 86));
  EXPECT_EQ(behavior.at("other_complex"), std::make_pair(4, 114));

  const auto affect = rows_by_name(s.affect);
  EXPECT_EQ(affect.at("positive_seeking"), std::make_pair(20, 571));
  EXPECT_EQ(affect.at("positive_comforting"), std::make_pair(5, 143));
  EXPECT_EQ(affect.at("negative_avoiding"), std::make_pair(3, 86));
  EXPECT_EQ(affect.at("disciplinary_corrective"), std::make_pair(2, 57));
  EXPECT_EQ(affect.at("ambiguous_mixed"), std::make_pair(5, 143));

  EXPECT_EQ(s.positive_affect.count, 25);
  EXPECT_EQ(s.positive_affect.percent_tenths, 714);
}

// Independent recount straight from the JSON text.
TEST(KnowledgeStatsTest, MatchesRecountOfRawDataset) {
  const json doc = json::parse(kPatterns);
  std::map<std::string, int> intent, trigger, behavior, affect;
  for (const json& p : doc.at("patterns")) {
    ++intent[p.at("intent").get<std::string>()];
    ++trigger[p.at("trigger").get<std::string>()];
    ++behavior[p.at("behaviors").at(0).get<std::string>()];
    ++affect[p.at("affect").get<std::string>()];
  }
  const PatternStats s = KnowledgeBase::bundled().compute_stats();
  auto check = [](const std::vector<StatRow>& rows, std::map<std::string, int>& want) {
    int sum = 0;
    for (const StatRow& r : rows) {
      EXPECT_EQ(r.count, want[r.category]) << r.category;
      // Oracle: nearest tenth of a percent, computed in floating point.
      const double pct = 100.0 * r.count / 35.0;
      EXPECT_NEAR(r.percent_tenths / 10.0, pct, 0.05 + 1e-9) << r.category;
      sum += r.count;
    }
    EXPECT_EQ(sum, 35);
  };
  check(s.intent, intent);
  check(s.trigger, trigger);
  check(s.behavior, behavior);
  check(s.affect, affect);
}

TEST(KnowledgeStatsTest, PercentFormatting) {
  EXPECT_EQ(format_percent_tenths(200), "20.0");
  EXPECT_EQ(format_percent_tenths(57), "5.7");
  EXPECT_EQ(format_percent_tenths(0), "0.0");
  EXPECT_EQ(format_percent_tenths(1000), "100.0");
}

TEST(KnowledgeQueryTest, FilterMatchesBruteForce) {
  const KnowledgeBase& kb = KnowledgeBase::bundled();
  int combos = 0;
  for (int i = -1; i < static_cast<int>(kAllIntents.size()); ++i) {
    for (int t = -1; t < static_cast<int>(kAllTriggers.size()); ++t) {
      for (int b = -1; b < static_cast<int>(kAllBehaviors.size()); ++b) {
        for (int a = -1; a < static_cast<int>(kAllAffects.size()); ++a) {
          PatternFilter f;
          if (i >= 0) f.intent = kAllIntents[i];
          if (t >= 0) f.trigger = kAllTriggers[t];
          if (b >= 0) f.behavior = kAllBehaviors[b];
          if (a >= 0) f.affect = kAllAffects[a];
          std::vector<std::string> want;
          for (const InteractionPattern& p : kb.patterns()) {
            if ((i < 0 || p.intent == kAllIntents[i]) && (t < 0 || p.trigger == kAllTriggers[t]) &&
                (b < 0 || p.behaviors.front() == kAllBehaviors[b]) &&
                (a < 0 || p.affect == kAllAffects[a])) {
              want.push_back(p.id);
            }
          }
          std::vector<std::string> got;
          for (const InteractionPattern* p : kb.query_patterns(f)) got.push_back(p->id);
          ASSERT_EQ(got, want);
          ++combos;
        }
      }
    }
  }
  EXPECT_EQ(combos, 9 * 5 * 9 * 6);
}

TEST(KnowledgeQueryTest, OrderIsNaturalAndStable) {
  const KnowledgeBase& kb = KnowledgeBase::bundled();
  const auto all = kb.query_patterns();
  ASSERT_EQ(all.size(), 35u);
  EXPECT_EQ(all.front()->id, "G1-1");
  EXPECT_EQ(all.back()->id, "G9-5");
  std::vector<std::string> ids;
  for (const auto* p : all) ids.push_back(p->id);
  const std::vector<std::string> g5 = {"G5-1a", "G5-1b", "G5-2a", "G5-2b"};
  const auto it = std::find(ids.begin(), ids.end(), "G5-1a");
  ASSERT_NE(it, ids.end());
  EXPECT_TRUE(std::equal(g5.begin(), g5.end(), it));
  EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), 35u);
  const auto again = kb.query_patterns();
  EXPECT_EQ(all, again);
}

TEST(KnowledgeQueryTest, IdsCitedInProseResolve) {
  const KnowledgeBase& kb = KnowledgeBase::bundled();
  for (const char* id : {"G1-1", "G2-7", "G4-3", "G5-1B", "g5-1b", "G5-1", "G5-2", "G9-5"}) {
    EXPECT_NE(kb.find_pattern(id), nullptr) << id;
  }
  EXPECT_EQ(kb.find_pattern("G5-1B")->id, "G5-1b");
  EXPECT_EQ(kb.find_pattern("G5-1")->id, "G5-1a");
  EXPECT_EQ(kb.find_pattern("G10-1"), nullptr);
  EXPECT_EQ(kb.find_pattern(""), nullptr);
}

TEST(KnowledgeQueryTest, EveryPatternIsComplete) {
  for (const InteractionPattern& p : KnowledgeBase::bundled().patterns()) {
    EXPECT_FALSE(p.behaviors.empty()) << p.id;
    EXPECT_FALSE(p.summary.human_intent.empty()) << p.id;
    EXPECT_FALSE(p.summary.robot_behavior.empty()) << p.id;
    EXPECT_FALSE(p.summary.affective_meaning.empty()) << p.id;
  }
  const InteractionPattern* placeholder = KnowledgeBase::bundled().find_pattern("G2-5");
  ASSERT_NE(placeholder, nullptr);
  EXPECT_FALSE(placeholder->note.empty());
}

TEST(CategoryNamesTest, RoundTrip) {
  for (auto c : kAllIntents) EXPECT_EQ(parse_intent(to_string(c)), c);
  for (auto c : kAllTriggers) EXPECT_EQ(parse_trigger(to_string(c)), c);
  for (auto c : kAllBehaviors) EXPECT_EQ(parse_behavior(to_string(c)), c);
  for (auto c : kAllAffects) EXPECT_EQ(parse_affect(to_string(c)), c);
  EXPECT_FALSE(parse_intent("greeting"));
  EXPECT_EQ(parse_card_module("animal_centric"), CardModule::kAnimalCentric);
  EXPECT_EQ(parse_species("dog"), Species::kDog);
}

TEST(CardsTest, EightCardsInThreeModules) {
  const KnowledgeBase& kb = KnowledgeBase::bundled();
  EXPECT_EQ(kb.cards().size(), 8u);
  EXPECT_EQ(kb.list_cards().size(), 8u);
  EXPECT_EQ(kb.list_cards(CardModule::kHumanCentric).size(), 3u);
  EXPECT_EQ(kb.list_cards(CardModule::kEnvironmental).size(), 1u);
  const auto animal = kb.list_cards(CardModule::kAnimalCentric);
  ASSERT_EQ(animal.size(), 4u);
  int cats = 0;
  int dogs = 0;
  for (const Card* c : animal) {
    ASSERT_TRUE(c->species.has_value());
    (*c->species == Species::kCat ? cats : dogs)++;
  }
  EXPECT_EQ(cats, 2);
  EXPECT_EQ(dogs, 2);
}

TEST(CardsTest, LookupByIdAndNotFound) {
  const KnowledgeBase& kb = KnowledgeBase::bundled();
  for (const Card& c : kb.cards()) {
    EXPECT_EQ(&kb.lookup_card(c.id), &c);
    EXPECT_FALSE(c.title.empty());
    EXPECT_FALSE(c.sections.empty()) << c.id;
    for (const CardSection& s : c.sections) EXPECT_FALSE(s.items.empty()) << c.id;
  }
  EXPECT_THROW(kb.lookup_card("no_such_card"), NotFoundError);
}

TEST(DatasetTest, BundledMatchesSourceFiles) {
  const KnowledgeBase kb = KnowledgeBase::from_json(kCards, kPatterns);
  ASSERT_EQ(kb.patterns().size(), KnowledgeBase::bundled().patterns().size());
  for (std::size_t i = 0; i < kb.patterns().size(); ++i) {
    EXPECT_EQ(kb.patterns()[i].id, KnowledgeBase::bundled().patterns()[i].id);
  }
}

TEST(DatasetTest, RejectsMalformedAndInconsistentData) {
  EXPECT_THROW(KnowledgeBase::from_json("{", kPatterns), DatasetError);
  EXPECT_THROW(KnowledgeBase::from_json(kCards, "[]"), DatasetError);

  json p = json::parse(kPatterns);
  json extra_key = p;
  extra_key["patterns"][0]["colour"] = "red";
  EXPECT_THROW(KnowledgeBase::from_json(kCards, extra_key.dump()), DatasetError);

  json bad_category = p;
  bad_category["patterns"][0]["intent"] = "greeting";
  EXPECT_THROW(KnowledgeBase::from_json(kCards, bad_category.dump()), DatasetError);

  json duplicate = p;
  duplicate["patterns"][1]["id"] = duplicate["patterns"][0]["id"];
  EXPECT_THROW(KnowledgeBase::from_json(kCards, duplicate.dump()), DatasetError);

  json short_list = p;
  short_list["patterns"].erase(short_list["patterns"].size() - 1);
  EXPECT_THROW(KnowledgeBase::from_json(kCards, short_list.dump()), DatasetError);

  json bad_id = p;
  bad_id["patterns"][0]["id"] = "X1";
  EXPECT_THROW(KnowledgeBase::from_json(kCards, bad_id.dump()), DatasetError);

  json no_behavior = p;
  no_behavior["patterns"][0]["behaviors"] = json::array();
  EXPECT_THROW(KnowledgeBase::from_json(kCards, no_behavior.dump()), DatasetError);

  json c = json::parse(kCards);
  json missing_card = c;
  missing_card["cards"].erase(0);
  EXPECT_THROW(KnowledgeBase::from_json(missing_card.dump(), kPatterns), DatasetError);
}

}  // namespace
}  // namespace mojikit
