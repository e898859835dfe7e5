#include <gtest/gtest.h>

#include <cstring>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bimeans/grid_verify.hpp"
#include "bimeans/lemma_analysis.hpp"
#include "bimeans/random_pairs.hpp"
#include "bimeans/sharp_bounds.hpp"

using namespace bimeans;

namespace {

class ParallelKernels : public ::testing::Test {
 protected:
  void SetUp() override {
#ifdef _OPENMP
    // Force a real split even on a single-core runner.
    saved_ = omp_get_max_threads();
    omp_set_num_threads(4);
#endif
  }
  void TearDown() override {
#ifdef _OPENMP
    omp_set_num_threads(saved_);
#endif
  }

 private:
  int saved_ = 1;
};

template <class T>
bool same_bytes(const T& a, const T& b) {
  return std::memcmp(&a, &b, sizeof(T)) == 0;
}

GridOptions default_options() {
  GridOptions o;
  o.p0 = sharp_constants().p0;
  return o;
}

}  // namespace

TEST_F(ParallelKernels, GridVerificationMatchesSerial) {
  const auto pairs = log_uniform_pairs(1, 20000);
  const auto kf = ky_fan_pairs(2, 20000);
  std::vector<PairCheck> rs, rp;
  std::vector<KyFanCheck> ks, kp;
  const GridSummary s = verify_grid(pairs, kf, default_options(), Execution::Serial, &rs, &ks);
  const GridSummary p = verify_grid(pairs, kf, default_options(), Execution::Parallel, &rp, &kp);
  ASSERT_EQ(rs.size(), rp.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    ASSERT_TRUE(same_bytes(rs[i], rp[i])) << i;
    ASSERT_TRUE(same_bytes(ks[i], kp[i])) << i;
  }
  EXPECT_EQ(s.total_violations(), p.total_violations());
  EXPECT_EQ(s.worst_chain_gap, p.worst_chain_gap);
  EXPECT_EQ(s.worst_qa_margin, p.worst_qa_margin);
  EXPECT_EQ(s.worst_ca_margin, p.worst_ca_margin);
  EXPECT_EQ(s.worst_ky_fan_gap, p.worst_ky_fan_gap);
  EXPECT_TRUE(s.pass());
}

TEST_F(ParallelKernels, GridReportsFirstFailureDeterministically) {
  // L_{2.5} > M, so every pair fails the lower L_p bound.
  GridOptions o = default_options();
  o.p0 = 2.5;
  const auto pairs = log_uniform_pairs(3, 5000);
  const GridSummary s = verify_grid(pairs, {}, o, Execution::Serial);
  const GridSummary p = verify_grid(pairs, {}, o, Execution::Parallel);
  EXPECT_FALSE(s.pass());
  EXPECT_EQ(s.lp_violations, pairs.size());
  EXPECT_EQ(s.lp_violations, p.lp_violations);
  ASSERT_TRUE(s.first_failure && p.first_failure);
  EXPECT_EQ(*s.first_failure, 0u);
  EXPECT_EQ(*p.first_failure, 0u);
}

TEST_F(ParallelKernels, LemmaVerificationMatchesSerial) {
  for (auto [id, p] : {std::pair{LemmaId::L21, alpha0_closed_form()},
                       std::pair{LemmaId::L22, 0.32}}) {
    const LemmaReport s = verify_lemma(id, p, 10000, Execution::Serial);
    const LemmaReport q = verify_lemma(id, p, 10000, Execution::Parallel);
    EXPECT_EQ(s.min_value, q.min_value);
    EXPECT_EQ(s.max_value, q.max_value);
    EXPECT_EQ(s.switch_point, q.switch_point);
    EXPECT_EQ(s.monotonicity_verified, q.monotonicity_verified);
    EXPECT_EQ(s.sign_verified, q.sign_verified);
  }
}

TEST_F(ParallelKernels, SharpnessScanMatchesSerial) {
  const RatioProfile s = sharpness_scan(RatioId::R2, 5000, Execution::Serial);
  const RatioProfile p = sharpness_scan(RatioId::R2, 5000, Execution::Parallel);
  ASSERT_EQ(s.samples.size(), p.samples.size());
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    ASSERT_EQ(s.samples[i].x, p.samples[i].x);
    ASSERT_EQ(s.samples[i].value, p.samples[i].value);
  }
  EXPECT_EQ(s.limit_at_0, p.limit_at_0);
  EXPECT_EQ(s.limit_at_1, p.limit_at_1);
}

TEST_F(ParallelKernels, SharpnessProbeMatchesSerial) {
  for (auto side : {BoundSide::Lower, BoundSide::Upper}) {
    const auto s = sharpness_probe(BoundFamily::QA, side, 1e-6, 4000, Execution::Serial);
    const auto p = sharpness_probe(BoundFamily::QA, side, 1e-6, 4000, Execution::Parallel);
    EXPECT_EQ(s.violations, p.violations);
    EXPECT_EQ(s.witness, p.witness);
  }
}

TEST(PairSampler, EngineIsTheStandardGenerator) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 engine;
  engine.discard(9999);
  EXPECT_EQ(engine(), 9981545732273789042ull);
}

TEST(PairSampler, DeterministicAndInRange) {
  const auto a = log_uniform_pairs(42, 10000);
  const auto b = log_uniform_pairs(42, 10000);
  const auto c = log_uniform_pairs(43, 10000);
  ASSERT_EQ(a.size(), 10000u);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].a(), b[i].a());
    ASSERT_EQ(a[i].b(), b[i].b());
    differs = differs || a[i].a() != c[i].a();
    for (double v : {a[i].a(), a[i].b()}) {
      ASSERT_GE(v, 1e-3 * (1 - 1e-15));
      ASSERT_LE(v, 1e3 * (1 + 1e-15));
    }
    ASSERT_FALSE(a[i].degenerate());
  }
  EXPECT_TRUE(differs);

  for (const auto& pr : ky_fan_pairs(42, 10000)) {
    ASSERT_GT(pr.a(), 0.0);
    ASSERT_LT(pr.a(), 0.5);
    ASSERT_GT(pr.b(), 0.0);
    ASSERT_LT(pr.b(), 0.5);
    ASSERT_FALSE(pr.degenerate());
  }
}

TEST(PairSampler, CoversBothDecadesEvenly) {
  const auto pairs = log_uniform_pairs(44, 100000);
  int below_one = 0;
  for (const auto& pr : pairs) below_one += pr.a() < 1.0;
  EXPECT_NEAR(below_one / 100000.0, 0.5, 0.01);
}
