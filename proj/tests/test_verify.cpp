#include <gtest/gtest.h>

#include "gma/verify.hpp"

using namespace gma;

// Trial counts here are scaled down from the certification defaults; the
// acceptance binary runs the full 200-trial versions.

TEST(PropertyReport, VerdictThreshold) {
    PropertyReport r;
    r.trials = 200;
    r.threshold = 0.9;
    r.passes = 180;
    EXPECT_TRUE(r.verdict());
    r.passes = 179;
    EXPECT_FALSE(r.verdict());
}

TEST(EmbeddingDim, FamilyRates) {
    // d=8, eps=0.5: sparse 4*64/.25, gaussian 8*8/.25, leverage 4*8*ln9/.25
    EXPECT_EQ(embedding_dim(SketchFamily::sparse_embedding, 8, 0.5), 1024u);
    EXPECT_EQ(embedding_dim(SketchFamily::gaussian, 8, 0.5), 256u);
    EXPECT_EQ(embedding_dim(SketchFamily::leverage, 8, 0.5), 282u);
    // explicit constant override
    EXPECT_EQ(embedding_dim(SketchFamily::gaussian, 8, 0.5, 4.0), 128u);
}

TEST(CheckEmbedding, SparseFamilyPasses) {
    auto r = check_embedding(SketchFamily::sparse_embedding, 600, 6, 0.5,
                             embedding_dim(SketchFamily::sparse_embedding, 6, 0.5), 50, 1);
    EXPECT_TRUE(r.verdict());
    EXPECT_EQ(r.trials, 50u);
}

TEST(CheckEmbedding, GaussianFamilyPassesAtDeclaredConstant) {
    auto r = check_embedding(SketchFamily::gaussian, 600, 6, 0.5,
                             embedding_dim(SketchFamily::gaussian, 6, 0.5), 50, 2);
    EXPECT_TRUE(r.verdict());
}

TEST(CheckEmbedding, MinimumSketchSizeDegradesPassRate) {
    // s = d leaves no room: the rate must drop well below the healthy one
    auto tight = check_embedding(SketchFamily::gaussian, 600, 6, 0.5, 6, 50, 3);
    auto healthy = check_embedding(SketchFamily::gaussian, 600, 6, 0.5,
                                   embedding_dim(SketchFamily::gaussian, 6, 0.5), 50, 3);
    EXPECT_LT(tight.passes + 10, healthy.passes);
    EXPECT_GT(tight.worst_violation, 0.0);
}

TEST(CheckEmbedding, LeverageFamilyPasses) {
    auto r = check_embedding(SketchFamily::leverage, 600, 6, 0.5,
                             embedding_dim(SketchFamily::leverage, 6, 0.5), 50, 4);
    EXPECT_TRUE(r.verdict());
}

TEST(CheckEmbedding, ComposedUsesDoubledInterval) {
    auto r = check_embedding(SketchFamily::composed, 600, 6, 0.5,
                             embedding_dim(SketchFamily::composed, 6, 0.5), 50, 5);
    EXPECT_TRUE(r.verdict());
}

TEST(CheckProduct, ZeroFactorAlwaysPasses) {
    // B = 0 makes the error exactly zero regardless of the sketch
    CounterRng rng(7);
    auto s = build_sparse_embedding(100, 16, 8);
    DenseMatrix a(100, 3);
    for (std::size_t k = 0; k < a.size(); ++k)
        a.data()[k] = rng.normal();
    DenseMatrix b(100, 2); // zero
    DenseMatrix lhs = matmul(s.apply_left(a).transposed(), s.apply_left(b));
    DenseMatrix rhs = matmul(a.transposed(), b);
    double err = 0.0;
    for (std::size_t k = 0; k < lhs.size(); ++k)
        err += std::pow(lhs.data()[k] - rhs.data()[k], 2);
    EXPECT_EQ(err, 0.0);
}

TEST(CheckProduct, FamiliesMeetTheBound) {
    const double eps = 0.5;
    const std::size_t s = 16; // ceil(4 / eps^2)
    for (SketchFamily f : {SketchFamily::sparse_embedding, SketchFamily::gaussian,
                           SketchFamily::leverage}) {
        auto r = check_product(f, 500, 6, 4, eps, s, 60, 11);
        EXPECT_TRUE(r.verdict()) << r.property;
    }
}

TEST(CheckProduct, ComposedMeetsFiveEpsBound) {
    auto r = check_product(SketchFamily::composed, 500, 6, 4, 0.5, 64, 60, 12);
    EXPECT_TRUE(r.verdict());
}

TEST(CheckFroNorm, FamiliesPreserveNorm) {
    const double eps = 0.5;
    const std::size_t s = 32; // ceil(8 / eps^2)
    for (SketchFamily f : {SketchFamily::sparse_embedding, SketchFamily::gaussian}) {
        auto r = check_fro_norm(f, 500, 6, eps, s, 60, 13);
        EXPECT_TRUE(r.verdict()) << r.property;
    }
}

TEST(CheckGmaRatio, IdentityControlAlwaysPasses) {
    SyntheticSpec inst{60, 55, 4, 4, 0.5, 0.0};
    SketchPlan plan;
    plan.epsilon = 0.25;
    auto r = check_gma_ratio(inst, RatioMethod::identity_control, plan, 20, 14);
    EXPECT_EQ(r.passes, 20u);
}

TEST(CheckGmaRatio, SketchPipelinesPass) {
    SyntheticSpec inst{120, 110, 5, 5, 0.5, 0.0};
    SketchPlan plan;
    plan.epsilon = 0.25;
    auto sg = check_gma_ratio(inst, RatioMethod::sparse_gaussian, plan, 25, 15);
    EXPECT_TRUE(sg.verdict());
    auto lev = check_gma_ratio(inst, RatioMethod::leverage, plan, 25, 16);
    EXPECT_TRUE(lev.verdict());
}

TEST(Checkers, DeterministicGivenSeed) {
    auto a = check_product(SketchFamily::gaussian, 200, 4, 3, 0.5, 16, 20, 77);
    auto b = check_product(SketchFamily::gaussian, 200, 4, 3, 0.5, 16, 20, 77);
    EXPECT_EQ(a.passes, b.passes);
    EXPECT_EQ(a.worst_violation, b.worst_violation);
}

TEST(DefaultSuite, SmallRunAllVerdictsPass) {
    auto reports = default_verification_suite(40, 5);
    ASSERT_FALSE(reports.empty());
    for (const auto &r : reports)
        EXPECT_TRUE(r.verdict()) << r.property << " " << r.passes << "/" << r.trials;
}
