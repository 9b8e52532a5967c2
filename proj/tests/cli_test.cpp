#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "ipthunt/core/store.hpp"
#include "ipthunt/report/cli.hpp"

namespace ipthunt {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ipthunt-cli-" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    RecordStore store(dir_ / "store");
    const auto t = parse_timestamp("2024-01-01T00:00:00Z");
    for (const auto& [text, cat] : std::vector<std::pair<std::string, CategoryLabel>>{
             {"赌场 a", CategoryLabel::Gambling}, {"赌场 b", CategoryLabel::Gambling},
             {"办证 c", CategoryLabel::FakeCertificate}}) {
      auto r = make_ipt_record(text, t);
      r.sources.push_back({"e", "u"});
      r.categories = {cat};
      store.append(r);
    }
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string store() const { return (dir_ / "store").string(); }

  fs::path dir_;
};

TEST_F(CliTest, CategoryReportOnStore) {
  const auto r = run({"--store", store(), "report", "--kind", "categories"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Gambling"), std::string::npos);
  EXPECT_NE(r.out.find("66.67%"), std::string::npos);
  const auto csv = run({"--store", store(), "--format", "csv", "report", "--kind", "categories"});
  EXPECT_EQ(csv.code, kExitOk);
  EXPECT_EQ(csv.out.rfind("Category,", 0), 0u);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"report", "--kind", "nonsense"}).code, kExitUsage);
  EXPECT_EQ(run({"--format", "xml", "report"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, MissingSeedsFileIsAnOperationalError) {
  const auto missing = (dir_ / "no-such-seeds.txt").string();
  const auto r = run({"--store", store(), "hunt", "--seed-keywords", missing});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find(missing), std::string::npos);
}

TEST_F(CliTest, EmptyStoreReportFails) {
  const auto r = run({"--store", (dir_ / "empty").string(), "report", "--kind", "categories"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

}  // namespace
}  // namespace ipthunt
