#include <doctest.h>

#include <cmath>

#include "agmgan/discriminator.hpp"
#include "agmgan/errors.hpp"
#include "agmgan/random_util.hpp"
#include "oracles.hpp"

using namespace agmgan;

namespace {

MotifSample make_sample(std::vector<int> vertices) {
  MotifSample s;
  s.vertices = std::move(vertices);
  return s;
}

double batch_objective(const AffiliationMatrix& theta, const std::vector<MotifSample>& pos,
                       const std::vector<MotifSample>& neg) {
  double obj = 0.0;
  for (const auto& s : pos)
    obj += log_clique_prob_from_overlap(sum_entrywise_product(theta, s.vertices));
  for (const auto& s : neg) obj -= sum_entrywise_product(theta, s.vertices);
  return obj;
}

}  // namespace

TEST_CASE("scores: closed forms and clamping") {
  AffiliationMatrix zero = AffiliationMatrix::Zero(3, 2);
  const DiscriminatorScore z = score_subset(zero, std::vector<int>{0, 1});
  CHECK(z.score == 0.0);
  CHECK(std::isfinite(z.log_score));  // clamped, not -inf
  CHECK(z.log_one_minus == 0.0);

  AffiliationMatrix ones = AffiliationMatrix::Constant(2, 1, 1.0);
  const DiscriminatorScore s = score_subset(ones, std::vector<int>{0, 1});
  CHECK(s.score == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(s.log_one_minus == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("scores: permutation invariance") {
  std::mt19937_64 rng(13);
  const AffiliationMatrix theta = oracles::random_matrix(6, 4, 0.05, 2.0, rng);
  const double a = score_subset(theta, std::vector<int>{1, 3, 5}).score;
  const double b = score_subset(theta, std::vector<int>{5, 1, 3}).score;
  const double c = score_subset(theta, std::vector<int>{3, 5, 1}).score;
  CHECK(a == doctest::Approx(b).epsilon(1e-15));
  CHECK(a == doctest::Approx(c).epsilon(1e-15));
}

TEST_CASE("scores: invalid subsets") {
  AffiliationMatrix theta = AffiliationMatrix::Constant(4, 2, 0.5);
  CHECK_THROWS_AS(score_subset(theta, std::vector<int>{0}), InputError);
  CHECK_THROWS_AS(score_subset(theta, std::vector<int>{0, 0}), InputError);
  CHECK_THROWS_AS(score_subset(theta, std::vector<int>{0, 9}), InputError);
}

TEST_CASE("update: empty batch is a no-op") {
  std::mt19937_64 rng(19);
  AffiliationMatrix theta = oracles::random_matrix(4, 3, 0.05, 1.0, rng);
  const AffiliationMatrix before = theta;
  update_from_batch(theta, {}, {}, 1e-3);
  CHECK((theta == before).all());
}

TEST_CASE("update: a positive pair increases both rows") {
  AffiliationMatrix theta = AffiliationMatrix::Constant(2, 1, 0.8);
  std::vector<MotifSample> pos{make_sample({0, 1})};
  update_from_batch(theta, pos, {}, 1e-3);
  CHECK(theta(0, 0) > 0.8);
  CHECK(theta(1, 0) > 0.8);
}

TEST_CASE("update: one small step does not decrease the batch objective") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> pick_m(2, 4), pick_c(1, 6), pick_n(1, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const int c = pick_c(rng);
    AffiliationMatrix theta = oracles::random_matrix(10, c, 0.05, 2.0, rng);
    std::vector<MotifSample> pos, neg;
    for (int i = 0, n = pick_n(rng); i < n; ++i)
      pos.push_back(make_sample(agmgan::sample_distinct(10, pick_m(rng), rng)));
    for (int i = 0, n = pick_n(rng); i < n; ++i)
      neg.push_back(make_sample(agmgan::sample_distinct(10, pick_m(rng), rng)));

    const double before = batch_objective(theta, pos, neg);
    update_from_batch(theta, pos, neg, 1e-4);
    const double after = batch_objective(theta, pos, neg);
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("update: projection keeps every entry inside the box") {
  AffiliationMatrix theta = AffiliationMatrix::Constant(3, 2, 999.0);
  std::vector<MotifSample> pos{make_sample({0, 1, 2})};
  update_from_batch(theta, pos, {}, 10.0);
  CHECK((theta <= kAffiliationMax).all());
  std::vector<MotifSample> neg{make_sample({0, 1, 2})};
  update_from_batch(theta, {}, neg, 10.0);
  CHECK((theta >= 0.0).all());
}

TEST_CASE("update: learning rate must be positive") {
  AffiliationMatrix theta = AffiliationMatrix::Constant(2, 1, 0.5);
  std::vector<MotifSample> pos{make_sample({0, 1})};
  CHECK_THROWS_AS(update_from_batch(theta, pos, {}, 0.0), InputError);
}
