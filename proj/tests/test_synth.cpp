#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <variant>

#include "kge/error.hpp"
#include "kge/synth.hpp"

TEST_CASE("ucube grammar and support") {
  kge::DistributionSpec spec = kge::parse_distribution("ucube:d=2,hw=1");
  const auto& cube = std::get<kge::UniformCube>(spec);
  CHECK(cube.dim == 2);
  CHECK(cube.half_width == 1.0);
  CHECK(kge::dimension(spec) == 2);

  kge::Sample X = kge::generate(spec, 500, 1);
  CHECK(X.rows() == 500);
  CHECK(X.cols() == 2);
  CHECK(X.maxCoeff() <= 1.0);
  CHECK(X.minCoeff() >= -1.0);
  CHECK(std::abs(X.col(0).mean()) <= 0.1);
  CHECK(std::abs(X.col(1).mean()) <= 0.1);

  kge::Sample narrow = kge::generate(kge::parse_distribution("ucube:d=1,hw=0.25"), 200, 2);
  CHECK(narrow.cwiseAbs().maxCoeff() <= 0.25);
}

TEST_CASE("tgauss grammar, truncation radius, and mean") {
  kge::DistributionSpec spec =
      kge::parse_distribution("tgauss:d=2,mean=0.5;0,scale=1,radius=3");
  const auto& tg = std::get<kge::TruncatedGaussian>(spec);
  REQUIRE(tg.mean.size() == 2);
  CHECK(tg.mean(0) == 0.5);
  CHECK(tg.mean(1) == 0.0);
  CHECK(tg.scale == Eigen::VectorXd::Ones(2));
  CHECK(tg.radius == 3.0);

  kge::Sample X = kge::generate(spec, 2000, 3);
  CHECK(std::abs(X.col(0).mean() - 0.5) <= 0.1);
  CHECK(std::abs(X.col(1).mean()) <= 0.1);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::Vector2d z = X.row(i).transpose() - tg.mean;
    CHECK(z.norm() <= 3.0);
  }
}

TEST_CASE("tgauss defaults and scalar broadcasting") {
  const auto tg = std::get<kge::TruncatedGaussian>(kge::parse_distribution("tgauss:d=3"));
  CHECK(tg.mean == Eigen::VectorXd::Zero(3));
  CHECK(tg.scale == Eigen::VectorXd::Ones(3));
  CHECK(tg.radius == 3.0);

  const auto bc =
      std::get<kge::TruncatedGaussian>(kge::parse_distribution("tgauss:d=3,mean=1,scale=2"));
  CHECK(bc.mean == Eigen::VectorXd::Constant(3, 1.0));
  CHECK(bc.scale == Eigen::VectorXd::Constant(3, 2.0));

  // Dimension can also come from the mean vector alone.
  const auto from_mean =
      std::get<kge::TruncatedGaussian>(kge::parse_distribution("tgauss:mean=1;2;3"));
  CHECK(from_mean.mean.size() == 3);
}

TEST_CASE("generate is bit-identical for identical inputs") {
  kge::DistributionSpec spec = kge::parse_distribution("tgauss:d=2,mean=0.5;0");
  kge::Sample a = kge::generate(spec, 100, 77);
  kge::Sample b = kge::generate(spec, 100, 77);
  CHECK(a == b);
  kge::Sample c = kge::generate(spec, 100, 78);
  CHECK(a != c);
}

TEST_CASE("gmix grammar, component support, and balance") {
  kge::DistributionSpec spec =
      kge::parse_distribution("gmix:d=1,means=-1|1,scale=0.3,weights=0.5;0.5");
  const auto& mix = std::get<kge::GaussianMixture>(spec);
  REQUIRE(mix.means.size() == 2);
  CHECK(mix.means[0](0) == -1.0);
  CHECK(mix.means[1](0) == 1.0);
  CHECK(mix.scale(0) == 0.3);
  CHECK(mix.weights == std::vector<double>{0.5, 0.5});

  // Components are truncated at three scale units, so supports stay disjoint.
  kge::Sample X = kge::generate(spec, 1000, 4);
  CHECK(X.cwiseAbs().maxCoeff() <= 1.9);
  CHECK(X.cwiseAbs().minCoeff() >= 0.1);
  int positive = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    if (X(i, 0) > 0.0) ++positive;
  CHECK(positive > 350);
  CHECK(positive < 650);
}

TEST_CASE("gmix weights default to uniform") {
  const auto mix =
      std::get<kge::GaussianMixture>(kge::parse_distribution("gmix:means=-2|2,scale=0.5"));
  CHECK(mix.weights == std::vector<double>{0.5, 0.5});
  CHECK(kge::dimension(kge::GaussianMixture(mix)) == 1);
}

TEST_CASE("shift wraps a base draw by a fixed translation") {
  kge::DistributionSpec spec =
      kge::parse_distribution("shift:shift=1;-0.5,base=(ucube:d=2,hw=1)");
  const auto& shift = std::get<kge::MeanShift>(spec);
  REQUIRE(shift.shift.size() == 2);
  CHECK(shift.shift(0) == 1.0);
  CHECK(shift.shift(1) == -0.5);

  kge::Sample shifted = kge::generate(spec, 60, 9);
  kge::Sample base = kge::generate(kge::UniformCube{2, 1.0}, 60, 9);
  kge::Sample expected = base.rowwise() + shift.shift.transpose();
  CHECK(shifted == expected);
}

TEST_CASE("scale wraps a base draw by a positive factor") {
  kge::DistributionSpec spec = kge::parse_distribution("scale:factor=2,base=(tgauss:d=2)");
  const auto& sc = std::get<kge::ScaleChange>(spec);
  CHECK(sc.factor == 2.0);
  CHECK(kge::dimension(spec) == 2);

  kge::Sample scaled = kge::generate(spec, 60, 10);
  kge::Sample base = kge::generate(*sc.base, 60, 10);
  CHECK(scaled == kge::Sample(base * 2.0));
}

TEST_CASE("wrappers nest through parenthesized bases") {
  kge::DistributionSpec spec =
      kge::parse_distribution("shift:shift=0.5,base=(scale:factor=2,base=(ucube:d=1,hw=1))");
  CHECK(kge::dimension(spec) == 1);
  kge::Sample X = kge::generate(spec, 100, 11);
  CHECK(X.minCoeff() >= -1.5);
  CHECK(X.maxCoeff() <= 2.5);
}

TEST_CASE("distribution grammar rejects malformed input") {
  CHECK_THROWS_AS(kge::parse_distribution("box:d=1"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("ucube"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("ucube:d=2"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("ucube:d=2,hw=1,extra=3"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("ucube:d=2,hw=abc"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("ucube:d=1.5,hw=1"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("ucube:d=2,,hw=1"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("shift:shift=1,base=(ucube:d=1,hw=1"),
                  kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("shift:shift=1,base=ucube:d=1,hw=1"),
                  kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("gmix:means=-1|1,weights=1"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("gmix:means=-1|1,weights=0.3;0.3"),
                  kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("tgauss:d=2,radius=-1"), kge::InputError);
  CHECK_THROWS_AS(kge::parse_distribution("tgauss:d=2,mean=1;2;3"), kge::InputError);
}

TEST_CASE("validate_spec rejects invalid structures") {
  CHECK_THROWS_AS(kge::validate_spec(kge::UniformCube{0, 1.0}), kge::InputError);
  CHECK_THROWS_AS(kge::validate_spec(kge::UniformCube{2, -1.0}), kge::InputError);
  CHECK_THROWS_AS(
      kge::validate_spec(kge::TruncatedGaussian{Eigen::VectorXd::Zero(2),
                                                Eigen::VectorXd::Ones(2), 0.0}),
      kge::InputError);
  CHECK_THROWS_AS(
      kge::validate_spec(kge::TruncatedGaussian{Eigen::VectorXd::Zero(2),
                                                Eigen::VectorXd::Ones(3), 1.0}),
      kge::InputError);
  CHECK_THROWS_AS(kge::validate_spec(kge::MeanShift{nullptr, Eigen::VectorXd::Ones(1)}),
                  kge::InputError);

  auto base = std::make_shared<kge::DistributionSpec>(kge::UniformCube{1, 1.0});
  CHECK_THROWS_AS(kge::validate_spec(kge::ScaleChange{base, 0.0}), kge::InputError);
  CHECK_THROWS_AS(kge::validate_spec(kge::MeanShift{base, Eigen::VectorXd::Ones(2)}),
                  kge::InputError);

  kge::GaussianMixture mix{{Eigen::VectorXd::Zero(1)}, Eigen::VectorXd::Ones(1), {-1.0}};
  CHECK_THROWS_AS(kge::validate_spec(mix), kge::InputError);
}

TEST_CASE("generate validates the draw count") {
  CHECK_THROWS_AS(kge::generate(kge::UniformCube{1, 1.0}, 0, 0), kge::InputError);
}

TEST_CASE("hopeless rejection regions abort with a budget error") {
  kge::DistributionSpec needle = kge::parse_distribution("tgauss:d=3,radius=0.001");
  CHECK_THROWS_AS(kge::generate(needle, 1, 0), kge::PathologicalSpecError);
}
