#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "lightdoa/angles.hpp"
#include "lightdoa/rng.hpp"

using namespace lightdoa::angles;

TEST_CASE("normalize_angle wraps into [0, 360)") {
  CHECK(normalize_angle(370.0) == doctest::Approx(10.0));
  CHECK(normalize_angle(-30.0) == doctest::Approx(330.0));
  CHECK(normalize_angle(180.0) == doctest::Approx(180.0));
  CHECK(normalize_angle(360.0) == doctest::Approx(0.0));
  CHECK(normalize_angle(-720.0) == doctest::Approx(0.0));
  CHECK(normalize_angle(0.0) == 0.0);

  CHECK_THROWS_AS(normalize_angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(normalize_angle(std::nan("")), std::invalid_argument);

  lightdoa::Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double r = normalize_angle(rng.uniform(-2000.0, 2000.0));
    CHECK(r >= 0.0);
    CHECK(r < 360.0);
  }
}

TEST_CASE("fold_front_back mirrors the rear half-circle") {
  CHECK(fold_front_back(300.0) == doctest::Approx(60.0));
  CHECK(fold_front_back(210.0) == doctest::Approx(150.0));
  CHECK(fold_front_back(90.0) == doctest::Approx(90.0));
  CHECK(fold_front_back(0.0) == 0.0);
  CHECK(fold_front_back(180.0) == 180.0);

  CHECK_THROWS_AS(fold_front_back(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(fold_front_back(360.0), std::invalid_argument);
}

TEST_CASE("folding is idempotent and front-back symmetric") {
  for (int d = -720; d <= 720; ++d) {
    const double theta = d * 0.5;
    const double once = fold_front_back(normalize_angle(theta));
    CHECK(fold_front_back(normalize_angle(once)) == doctest::Approx(once));
    CHECK(fold_front_back(normalize_angle(360.0 - theta)) == doctest::Approx(once));
  }
}

TEST_CASE("angle grid validation") {
  for (int k : {9, 13, 19, 37}) {
    const AngleGrid g = AngleGrid::from_k(k);
    CHECK(g.num_classes == k);
    CHECK(g.spacing_deg() == doctest::Approx(180.0 / (k - 1)));
  }
  CHECK_THROWS_AS(AngleGrid::from_k(7), std::invalid_argument);
  CHECK_THROWS_AS(AngleGrid::from_k(0), std::invalid_argument);
  CHECK_THROWS_AS(AngleGrid::from_k(36), std::invalid_argument);
}

TEST_CASE("angle_to_class picks the nearest center, midpoints round up") {
  const AngleGrid g37 = AngleGrid::from_k(37);
  CHECK(angle_to_class(0.0, g37) == 0);
  CHECK(angle_to_class(180.0, g37) == 36);
  CHECK(angle_to_class(92.4, g37) == 18);
  CHECK(angle_to_class(92.6, g37) == 19);
  CHECK(angle_to_class(2.5, g37) == 1);  // midpoint rounds up

  CHECK_THROWS_AS(angle_to_class(-0.1, g37), std::invalid_argument);
  CHECK_THROWS_AS(angle_to_class(180.1, g37), std::invalid_argument);
}

TEST_CASE("class_to_angle endpoints and round trips") {
  const AngleGrid g37 = AngleGrid::from_k(37);
  const AngleGrid g9 = AngleGrid::from_k(9);
  CHECK(class_to_angle(18, g37) == doctest::Approx(90.0));
  CHECK(class_to_angle(0, g9) == doctest::Approx(0.0));
  CHECK(class_to_angle(8, g9) == doctest::Approx(180.0));
  CHECK_THROWS_AS(class_to_angle(9, g9), std::invalid_argument);
  CHECK_THROWS_AS(class_to_angle(-1, g9), std::invalid_argument);

  for (int k : {9, 13, 19, 37}) {
    const AngleGrid g = AngleGrid::from_k(k);
    for (int c = 0; c < k; ++c) CHECK(angle_to_class(class_to_angle(c, g), g) == c);
  }
}

TEST_CASE("expected_angle") {
  const AngleGrid g37 = AngleGrid::from_k(37);
  const AngleGrid g19 = AngleGrid::from_k(19);

  std::vector<double> onehot(37, 0.0);
  onehot[18] = 1.0;
  CHECK(expected_angle(onehot, g37) == doctest::Approx(90.0));

  std::vector<double> uniform(37, 1.0 / 37.0);
  CHECK(expected_angle(uniform, g37) == doctest::Approx(90.0));

  std::vector<double> split(19, 0.0);
  split[0] = 0.5;
  split[2] = 0.5;
  CHECK(expected_angle(split, g19) == doctest::Approx(10.0));

  // one-hot expectation equals the class center exactly, all grids
  for (int k : {9, 13, 19, 37}) {
    const AngleGrid g = AngleGrid::from_k(k);
    for (int c = 0; c < k; ++c) {
      std::vector<double> p(static_cast<std::size_t>(k), 0.0);
      p[static_cast<std::size_t>(c)] = 1.0;
      CHECK(expected_angle(p, g) == class_to_angle(c, g));
    }
  }

  std::vector<double> bad_len(36, 1.0 / 36.0);
  CHECK_THROWS_AS(expected_angle(bad_len, g37), std::invalid_argument);
  std::vector<double> bad_sum(37, 0.5 / 37.0);
  CHECK_THROWS_AS(expected_angle(bad_sum, g37), std::invalid_argument);
  std::vector<double> negative(37, 1.0 / 37.0);
  negative[0] = -negative[0];
  CHECK_THROWS_AS(expected_angle(negative, g37), std::invalid_argument);
}
