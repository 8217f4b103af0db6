// Copyright 2026 The eegfeat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include "doctest.h"
#include "eegfeat/energy.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace eegfeat;

TEST_CASE("time energy of constant frames") {
  CHECK(time_energy(VectorXd::Ones(50)) == doctest::Approx(0.0));
  CHECK(time_energy(VectorXd::Constant(50, 2.0)) == doctest::Approx(1.386294).epsilon(1e-6));
  CHECK(time_energy(VectorXd::Zero(50)) == doctest::Approx(std::log(1e-10)));
  CHECK(time_energy(VectorXd::Zero(50), 1e-3) == doctest::Approx(std::log(1e-3)));
  CHECK_THROWS_AS(time_energy(VectorXd(0)), DataError);
}

TEST_CASE("time energy scales by 2 log alpha") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> alpha(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const VectorXd x = testing::random_vector(rng, 50);
    const double a = alpha(rng);
    CHECK(time_energy(VectorXd(a * x)) ==
          doctest::Approx(time_energy(x) + 2.0 * std::log(a)).epsilon(1e-12));
  }
}

TEST_CASE("frequency energy") {
  SpectralFrame sf;
  sf.filter_outputs = VectorXd::Ones(20);
  CHECK(freq_energy(sf) == doctest::Approx(std::log(20.0)));
  CHECK(freq_energy(sf) == doctest::Approx(2.9957).epsilon(1e-4));
  sf.filter_outputs = VectorXd::Zero(20);
  CHECK(freq_energy(sf) == doctest::Approx(std::log(1e-10)));

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    sf.filter_outputs = testing::random_vector(rng, 20, 0.0, 100.0);
    double sum = 0.0;
    for (int k = 0; k < 20; ++k) sum += sf.filter_outputs(k) * sf.filter_outputs(k);
    REQUIRE(testing::relative_error(freq_energy(sf), std::log(sum)) < 1e-12);
  }
}

TEST_CASE("differential energy examples") {
  CHECK(diff_energy(VectorXd::Constant(30, 3.5), 9).isZero(0.0));

  VectorXd spike = VectorXd::Zero(12);
  spike(3) = 5.0;
  const VectorXd out = diff_energy(spike, 9);
  REQUIRE(out.size() == 12);
  for (Index t = 0; t < 12; ++t) CHECK(out(t) == (t <= 7 ? 5.0 : 0.0));

  CHECK(diff_energy(VectorXd::Constant(1, 2.0), 9)(0) == 0.0);
  CHECK_THROWS_AS(diff_energy(spike, 4), ConfigError);
  CHECK_THROWS_AS(diff_energy(VectorXd(0), 9), DataError);
}

TEST_CASE("differential energy matches brute force") {
  std::mt19937_64 rng(3);
  for (Index window : {1, 3, 9, 15}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Index n = 1 + static_cast<Index>(rng() % 300);
      VectorXd x = testing::random_vector(rng, n, -20.0, 5.0);
      // Plateaus exercise the tie handling of the deques.
      if (trial % 3 == 0) x = x.array().round();
      const VectorXd got = diff_energy(x, window);
      const VectorXd want = testing::oracle_range(x, window);
      REQUIRE((got.array() == want.array()).all());
      REQUIRE((got.array() >= 0.0).all());
    }
  }
}

TEST_CASE("differential energy ignores offsets and scales linearly") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-100.0, 100.0), s(1.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd x = testing::random_vector(rng, 200, -10.0, 10.0);
    const double c = u(rng), a = s(rng);
    const VectorXd base = diff_energy(x, 9);
    const VectorXd shifted = diff_energy(VectorXd(x.array() + c), 9);
    const VectorXd scaled = diff_energy(VectorXd(a * x), 9);
    CHECK((shifted - base).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + std::abs(c)));
    CHECK((scaled - a * base).cwiseAbs().maxCoeff() < 1e-12 * a * (1.0 + base.maxCoeff()));
  }
}

TEST_CASE("differential energy window length") {
  CHECK(DiffEnergySpec{}.frames() == 9);
  CHECK(DiffEnergySpec{0.8, 0.1}.frames() == 9);
  CHECK(DiffEnergySpec{0.1, 0.1}.frames() == 1);
  CHECK(DiffEnergySpec{1.5, 0.1}.frames() == 15);
  CHECK(DiffEnergySpec{0.05, 0.1}.frames() == 1);
  CHECK_THROWS_AS((DiffEnergySpec{0.0, 0.1}.validate()), ConfigError);

  VectorXd spike = VectorXd::Zero(12);
  spike(3) = 5.0;
  CHECK((diff_energy(spike, DiffEnergySpec{}).array() == diff_energy(spike, 9).array()).all());
}
