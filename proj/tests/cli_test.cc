#include "mojikit/cli.h"

#include <sstream>

#include <gtest/gtest.h>

#include "mojikit/presets.h"
#include "mojikit/service.h"
#include "test_support.h"

namespace mojikit {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<double> fields(const std::string& line) {
  std::istringstream in(line);
  std::vector<double> v;
  for (double x; in >> x;) v.push_back(x);
  return v;
}

const std::string kRoot = MOJIKIT_SOURCE_DIR;

TEST(CliTest, StatsPrintsPublishedCounts) {
  const CliRun r = cli({"stats"});
  ASSERT_EQ(r.code, kExitOk);
  const std::vector<std::string> out = lines(r.out);
  EXPECT_EQ(out.front(), "patterns  35");
  auto has = [&](const std::string& l) { return std::find(out.begin(), out.end(), l) != out.end(); };
  EXPECT_TRUE(has("trigger  human_action  21  60.0%"));
  EXPECT_TRUE(has("intent  greeting_reunion  7  20.0%"));
  EXPECT_TRUE(has("affect  positive  25  71.4%"));
}

TEST(CliTest, PlayTailWagMovesOnlyTheTail) {
  const CliRun r = cli({"play", "tail_wag", "--ticks", "100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::vector<std::string> out = lines(r.out);
  ASSERT_EQ(out.size(), 100u);
  bool tail_moved = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::vector<double> f = fields(out[i]);
    ASSERT_EQ(f.size(), 17u);
    EXPECT_EQ(f[0], 20.0 * (i + 1));
    for (std::size_t j = 0; j < 14; ++j) EXPECT_EQ(f[1 + j], 0.0) << "joint " << j;
    tail_moved |= f[15] != 0.0;
  }
  EXPECT_TRUE(tail_moved);
  EXPECT_NE(r.err.find("sequence tail_wag: 100 ticks of 20 ms"), std::string::npos);
}

TEST(CliTest, PlayRunsToCompletionAndReportsDivergence) {
  const CliRun r = cli({"play", "nod"});
  ASSERT_EQ(r.code, kExitOk);
  const std::vector<double> last = fields(lines(r.out).back());
  for (std::size_t j = 1; j < last.size(); ++j) EXPECT_EQ(last[j], 0.0);
  EXPECT_NE(r.err.find("max divergence 0.0 deg"), std::string::npos) << r.err;
}

TEST(CliTest, PlayRejectsBadArguments) {
  EXPECT_EQ(cli({"play", "fly"}).code, kExitRuntime);
  EXPECT_EQ(cli({"play", "nod", "--loss", "1.5"}).code, kExitUsage);
  EXPECT_EQ(cli({"play", "nod", "--tick-ms", "0"}).code, kExitUsage);
  EXPECT_EQ(cli({"play", kRoot + "/conformance/invalid/overlap.json"}).code, kExitValidation);
  EXPECT_EQ(cli({"play", kRoot + "/conformance/malformed/truncated.json"}).code, kExitParse);
}

TEST(CliTest, ValidateExitCodes) {
  const CliRun ok = cli({"validate", kRoot + "/conformance/valid/back_to_back.json"});
  EXPECT_EQ(ok.code, kExitOk);
  EXPECT_NE(ok.out.find(": ok (2 blocks, 2000 ms)"), std::string::npos) << ok.out;

  const CliRun bad = cli({"validate", kRoot + "/conformance/invalid/overlap.json"});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.out.find("overlap: "), std::string::npos) << bad.out;

  const CliRun malformed = cli({"validate", kRoot + "/conformance/malformed/unknown_key.json"});
  EXPECT_EQ(malformed.code, kExitParse);
  EXPECT_NE(malformed.err.find("unknown key \"loop\""), std::string::npos) << malformed.err;

  EXPECT_EQ(cli({"validate", kRoot + "/conformance/none.json"}).code, kExitRuntime);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"dance"}).code, kExitUsage);
  EXPECT_EQ(cli({"validate"}).code, kExitUsage);
  EXPECT_EQ(cli({"cards", "--module", "plants"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(CliTest, PresetsListAndExport) {
  const CliRun list = cli({"presets"});
  ASSERT_EQ(list.code, kExitOk);
  EXPECT_EQ(lines(list.out).size(), load_presets().all().size());
  EXPECT_NE(("\n" + list.out).find("\npaw_lift  "), std::string::npos);

  const CliRun nod = cli({"presets", "--export", "nod"});
  ASSERT_EQ(nod.code, kExitOk);
  EXPECT_EQ(nod.out, export_sequence(*load_presets().find("nod")));
  EXPECT_EQ(cli({"presets", "--export", "fly"}).code, kExitRuntime);
}

TEST(CliTest, CardsListFilterAndShow) {
  EXPECT_EQ(lines(cli({"cards"}).out).size(), 8u);
  EXPECT_EQ(lines(cli({"cards", "--module", "animal_centric"}).out).size(), 4u);
  const CliRun one = cli({"cards", "human_interaction_intentions"});
  ASSERT_EQ(one.code, kExitOk);
  EXPECT_EQ(one.out.rfind("Human Interaction Intentions [human_centric]\n", 0), 0u) << one.out;
  EXPECT_EQ(cli({"cards", "nope"}).code, kExitRuntime);
}

TEST(CliTest, ServeRejectsBadFlags) {
  EXPECT_EQ(cli({"serve", "--clock", "lunar"}).code, kExitUsage);
  EXPECT_EQ(cli({"serve", "--target", "bluetooth"}).code, kExitUsage);
}

// The CLI and the service must put every corpus document in the same class.
TEST(CliTest, ConformanceCorpusClassifiesLikeService) {
  const auto corpus = testing::conformance_corpus(kRoot);
  ASSERT_GE(corpus.size(), 20u);
  PlaybackService service{ServiceOptions{}};
  for (const testing::CorpusFile& f : corpus) {
    const int code = cli({"validate", f.path}).code;
    testing::CorpusClass via_service;
    try {
      via_service = service.validate(testing::read_text(f.path)).ok()
                        ? testing::CorpusClass::kValid
                        : testing::CorpusClass::kInvalid;
    } catch (const SequenceParseError&) {
      via_service = testing::CorpusClass::kMalformed;
    }
    const testing::CorpusClass via_cli = code == kExitOk           ? testing::CorpusClass::kValid
                                         : code == kExitValidation ? testing::CorpusClass::kInvalid
                                         : code == kExitParse      ? testing::CorpusClass::kMalformed
                                                                   : testing::CorpusClass{-1};
    EXPECT_EQ(via_cli, f.expected) << f.path;
    EXPECT_EQ(via_service, f.expected) << f.path;
  }
  service.shutdown();
}

// Invalid documents are named after the violation they must raise.
TEST(CliTest, InvalidCorpusRaisesNamedViolation) {
  for (const testing::CorpusFile& f : testing::conformance_corpus(kRoot)) {
    if (f.expected != testing::CorpusClass::kInvalid) continue;
    const ValidationReport report =
        validate_sequence(parse_sequence_document(testing::read_text(f.path)));
    bool found = false;
    for (const Violation& v : report.violations) found |= f.stem.rfind(to_string(v.kind), 0) == 0;
    EXPECT_TRUE(found) << f.path << "\n" << describe(report);
  }
}

}  // namespace
}  // namespace mojikit
