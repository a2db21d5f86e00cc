#include <gtest/gtest.h>

#include "densitop/material.hpp"

namespace densitop {
namespace {

const MaterialModel kModel{1.0, 1e-9, 3.0};

TEST(YoungModulus, Endpoints) {
  EXPECT_DOUBLE_EQ(young_modulus(0.0, kModel), 1e-9);
  EXPECT_DOUBLE_EQ(young_modulus(1.0, kModel), 1.0);
  EXPECT_NEAR(young_modulus(0.5, kModel), 0.125 + 0.875e-9, 1e-16);
}

TEST(YoungModulus, DerivativeValues) {
  EXPECT_EQ(young_modulus_derivative(0.0, kModel), 0.0);
  EXPECT_NEAR(young_modulus_derivative(1.0, kModel), 3.0 * (1 - 1e-9), 1e-15);
  EXPECT_NEAR(young_modulus_derivative(0.5, kModel), 0.75 * (1 - 1e-9), 1e-15);
}

TEST(YoungModulus, BoundedAndMonotone) {
  double prev = young_modulus(0.0, kModel);
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    const double e = young_modulus(x, kModel);
    EXPECT_GE(e, kModel.e_min);
    EXPECT_LE(e, kModel.e_0);
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(YoungModulus, DerivativeMatchesCentralDifference) {
  const double h = 1e-6;
  for (const MaterialModel m : {kModel, MaterialModel{2.0, 1e-3, 1.5}, MaterialModel{1.0, 1e-9, 4.0}}) {
    for (int i = 1; i < 100; ++i) {
      const double x = i / 100.0;
      const double fd = (young_modulus(x + h, m) - young_modulus(x - h, m)) / (2 * h);
      const double exact = young_modulus_derivative(x, m);
      EXPECT_LE(std::abs(fd - exact), 1e-6 * std::abs(exact)) << "x=" << x;
    }
  }
}

}  // namespace
}  // namespace densitop
