#include "properties.hpp"

#include <gtest/gtest.h>

// Smaller runs with other seeds than the acceptance runner.
namespace {
constexpr std::size_t kRuns = 200;

void expect_ok(const props::Outcome& o) {
    EXPECT_TRUE(o.ok()) << o.failures << " failures, first: " << o.first_failure;
    EXPECT_EQ(o.runs, kRuns);
    EXPECT_GT(o.exercised, kRuns / 10) << "premise rarely held";
}
} // namespace

TEST(Properties, StepIffIntersection) { expect_ok(props::step_iff_intersection(kRuns, 101)); }
TEST(Properties, Dnlog2IffSatisfies) { expect_ok(props::dnlog2_iff_satisfies(kRuns, 102)); }
TEST(Properties, Lifting) { expect_ok(props::lifting(kRuns, 103)); }
TEST(Properties, DeltaMoreGeneralTransitive) { expect_ok(props::delta_transitive(kRuns, 104)); }
TEST(Properties, VariantInvariance) { expect_ok(props::variant_invariance(kRuns, 105)); }
TEST(Properties, EmptyPositionsAlwaysDnlog) { expect_ok(props::empty_positions_dnlog(kRuns, 106)); }
TEST(Properties, QuantifierEliminationOracle) { expect_ok(props::qe_oracle(kRuns, 107)); }
