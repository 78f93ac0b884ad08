// Runs the criterion tests once and prints one PASS/FAIL line per criterion.
// A criterion passes when all of its tests pass within its time limit.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace {

struct Criterion {
  const char* name;
  std::vector<const char*> patterns;  // gtest filter patterns
  double limit_seconds;
};

const std::vector<Criterion> kCriteria{
    {"worked-examples", {"PublicationsTest.*", "HMapTest.*", "SetOpsTest.*", "VMapTest.*", "SliceTest.*"}, 1.0},
    {"case-study", {"Seeds/CaseStudy.ReviewScriptMatchesGroundTruth/0", "Seeds/CaseStudy.AlternativeRoutesAgree/0"}, 5.0},
    {"oracle-properties",
     {"SetOperationOracle.*", "RefineOracle.*", "GroupOracle.*", "RankProperty.*", "CorrelateOracle.*"}, 10.0},
    {"grammars", {"GrammarCriterion.*"}, 10.0},
    {"tactical-reports", {"ProfileCompare.*"}, 1.0},
    {"dsl-round-trip",
     {"DslRoundTrip.*", "SessionTest.SaveLoadRoundTrip", "Seeds/CaseStudy.SavedSessionReloads/0"}, 10.0},
};

struct Outcome {
  std::string name;
  bool passed = true;
  double seconds = 0;
};

class Collector : public ::testing::EmptyTestEventListener {
 public:
  std::vector<Outcome> outcomes;

  void OnTestStart(const ::testing::TestInfo& info) override {
    test_ = std::string(info.test_suite_name()) + "." + info.name();
    start_ = std::chrono::steady_clock::now();
  }

  void OnTestPartResult(const ::testing::TestPartResult& r) override {
    if (!r.failed()) return;
    std::printf("  failure in %s\n    %s\n", test_.c_str(), r.summary());
  }

  void OnTestEnd(const ::testing::TestInfo& info) override {
    std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    outcomes.push_back({test_, !info.result()->Failed(), d.count()});
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::string test_;
};

// gtest filter semantics for the patterns used above: '*' only.
bool matches(const char* pattern, const std::string& name) {
  const char* p = pattern;
  const char* n = name.c_str();
  const char* star = nullptr;
  const char* resume = nullptr;
  while (*n) {
    if (*p == '*') {
      star = p++;
      resume = n;
    } else if (*p == *n) {
      ++p;
      ++n;
    } else if (star) {
      p = star + 1;
      n = ++resume;
    } else {
      return false;
    }
  }
  while (*p == '*') ++p;
  return *p == '\0';
}

}  // namespace

int main(int argc, char** argv) {
  std::string filter;
  for (const auto& c : kCriteria)
    for (const char* p : c.patterns) filter += (filter.empty() ? "" : ":") + std::string(p);
  ::testing::GTEST_FLAG(filter) = filter;
  ::testing::InitGoogleTest(&argc, argv);

  auto& listeners = ::testing::UnitTest::GetInstance()->listeners();
  delete listeners.Release(listeners.default_result_printer());
  auto* collector = new Collector;
  listeners.Append(collector);
  [[maybe_unused]] int status = RUN_ALL_TESTS();

  int failed = 0;
  std::size_t index = 0;
  for (const auto& c : kCriteria) {
    ++index;
    std::size_t tests = 0, passed = 0;
    double seconds = 0;
    for (const auto& o : collector->outcomes) {
      bool mine = false;
      for (const char* p : c.patterns) mine = mine || matches(p, o.name);
      if (!mine) continue;
      ++tests;
      passed += o.passed;
      seconds += o.seconds;
    }
    bool ok = tests > 0 && passed == tests && seconds <= c.limit_seconds;
    failed += !ok;
    std::printf("%s  [%zu/%zu] %-18s %zu/%zu tests  %.3f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", index,
                kCriteria.size(), c.name, passed, tests, seconds, c.limit_seconds,
                seconds > c.limit_seconds ? "  over time" : "");
  }
  return failed == 0 ? 0 : 1;
}
