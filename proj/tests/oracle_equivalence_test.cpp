// Exhaustive comparison of the compiled transition relation with the
// interpreter on a bounded voting instance.
#include <gtest/gtest.h>

#include <chrono>
#include <iostream>

#include "support/oracle.hpp"

namespace dcv::testing {
namespace {

class FiniteVotingTest : public ::testing::Test {
protected:
  static void SetUpTestSuite() { instance = new FiniteVoting(); }
  static void TearDownTestSuite() {
    delete instance;
    instance = nullptr;
  }
  void SetUp() override { ASSERT_TRUE(instance->ok()); }
  static FiniteVoting* instance;
};

FiniteVoting* FiniteVotingTest::instance = nullptr;

TEST_F(FiniteVotingTest, CompiledTransitionsEqualInterpreterSteps) {
  auto started = std::chrono::steady_clock::now();
  std::size_t all = instance->states();
  // vote: 2^4, isVoter/voted: 2^2 each, votes: 4^2, wins: 2^2, singletons 2, 2, 1.
  ASSERT_EQ(all, 16u * 4 * 16 * 4 * 4 * 2 * 2 * 1 * 1);

  Comparison c = compareTransitions(*instance->compiled.system, *instance, all);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cout << "states " << c.states << ", transition pairs " << c.pairs << ", successors leaving the instance "
            << c.escaping << ", " << secs << " s\n";
  EXPECT_EQ(c.states, all);
  EXPECT_GT(c.pairs, c.states);
  EXPECT_EQ(c.undetermined, 0u);
  EXPECT_EQ(c.mismatches, 0u);
  EXPECT_LE(secs, 300.0);
}

// The comparison must notice a transition relation that drops a guard.
TEST_F(FiniteVotingTest, DetectsMissingGuard) {
  auto mutant = compileCorpus("mutants/voting_no_winner_guard.dcn");
  ASSERT_TRUE(mutant.ok());
  Comparison c = compareTransitions(*mutant.system, *instance, instance->states());
  EXPECT_GT(c.mismatches, 0u);
}

} // namespace
} // namespace dcv::testing
