#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "endo/random.hpp"
#include "endo/sensor.hpp"

using namespace endo;

namespace {

const SensorParams kPaperParams{0.196, 16.0};

/// Random wrench whose deflections stay inside the saturation limit for the
/// given parameters: scale a raw draw down if any single-load contribution
/// budget is exceeded.
Wrench3 random_unsaturated_wrench(Rng& rng, const SensorParams& p) {
  const double fz = rng.uniform(-1.0, 1.0);
  const double mx = rng.uniform(-1.0, 1.0);
  const double my = rng.uniform(-1.0, 1.0);
  // worst-case |deflection| for a unit draw, from the superposition terms
  const double worst = std::abs(fz) / (3 * p.k) +
                       2 * std::abs(mx) / (3 * p.k * p.d) +
                       std::abs(my) / (std::sqrt(3.0) * p.k * p.d);
  const double scale = 0.9 * p.deflection_limit / std::max(worst, 1e-9);
  return {fz * scale, mx * scale, my * scale};
}

}  // namespace

TEST_CASE("forward deflections: zero load gives zero deflection") {
  const auto s = forward_deflections(Wrench3{0, 0, 0}, kPaperParams);
  CHECK(s.d1 == 0.0);
  CHECK(s.d2 == 0.0);
  CHECK(s.d3 == 0.0);
  CHECK_FALSE(s.saturated);
}

TEST_CASE("forward deflections: pure Fz deflects all springs equally") {
  // Independent evaluation: delta = Fz / (3k) = 3 / (3 * 0.196)
  const double expected = 5.10204081632653;
  const auto s = forward_deflections(Wrench3{3.0, 0, 0}, kPaperParams);
  CHECK(s.d1 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.d2 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.d3 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.d1 == doctest::Approx(5.102).epsilon(1e-4));
}

TEST_CASE("forward deflections: pure Mx splits 2:-1:-1") {
  // 2*Mx/(3kd) with Mx = 9.408, k = 0.196, d = 16 gives exactly 2 mm.
  const auto s = forward_deflections(Wrench3{0, 9.408, 0}, kPaperParams);
  CHECK(s.d1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.d2 == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.d3 == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("forward deflections: pure My leaves spring 1 untouched") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const double my = rng.uniform(-8.0, 8.0);
    const auto s = forward_deflections(Wrench3{0, 0, my}, kPaperParams);
    CHECK(s.d1 == 0.0);
    CHECK(s.d2 == doctest::Approx(-s.d3).epsilon(1e-12));
  }
}

TEST_CASE("forward deflections: moment balance recovers Mx") {
  // k*d1*d - k*d2*d/2 - k*d3*d/2 must reproduce the applied moment.
  Rng rng(12);
  const auto& p = kPaperParams;
  for (int i = 0; i < 100; ++i) {
    const double mx = rng.uniform(-8.0, 8.0);
    const auto s = forward_deflections(Wrench3{0, mx, 0}, p);
    const double recovered =
        p.k * s.d1 * p.d - p.k * s.d2 * p.d / 2 - p.k * s.d3 * p.d / 2;
    CHECK(recovered == doctest::Approx(mx).epsilon(1e-12));
  }
}

TEST_CASE("forward deflections: linearity under superposition") {
  Rng rng(13);
  const SensorParams p{0.5, 20.0, 100.0};  // roomy limit: no clamping
  for (int i = 0; i < 100; ++i) {
    const Wrench3 w1{rng.uniform(-2, 2), rng.uniform(-8, 8), rng.uniform(-8, 8)};
    const Wrench3 w2{rng.uniform(-2, 2), rng.uniform(-8, 8), rng.uniform(-8, 8)};
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    const Wrench3 combo{a * w1.fz + b * w2.fz, a * w1.mx + b * w2.mx,
                        a * w1.my + b * w2.my};
    const auto sc = forward_deflections(combo, p);
    const auto s1 = forward_deflections(w1, p);
    const auto s2 = forward_deflections(w2, p);
    CHECK(sc.d1 == doctest::Approx(a * s1.d1 + b * s2.d1).epsilon(1e-12));
    CHECK(sc.d2 == doctest::Approx(a * s1.d2 + b * s2.d2).epsilon(1e-12));
    CHECK(sc.d3 == doctest::Approx(a * s1.d3 + b * s2.d3).epsilon(1e-12));
  }
}

TEST_CASE("forward deflections: saturation clamps and flags") {
  const SensorParams p{0.196, 16.0, 5.6};
  const auto s = forward_deflections(Wrench3{10.0, 0, 0}, p);  // 17 mm raw
  CHECK(s.saturated);
  CHECK(s.d1 == 5.6);
  CHECK(s.d2 == 5.6);
  CHECK(s.d3 == 5.6);
}

TEST_CASE("forward deflections: non-finite wrench rejected") {
  CHECK_THROWS_AS(
      forward_deflections(Wrench3{std::nan(""), 0, 0}, kPaperParams),
      InvalidInput);
}

TEST_CASE("sensor params reject non-standard spring layout") {
  CHECK_THROWS_AS(SensorParams(0.196, 16.0, 5.6, {0.0, 120.0, 240.0}),
                  InvalidInput);
  CHECK_THROWS_AS(SensorParams(-1.0, 16.0), InvalidInput);
  CHECK_THROWS_AS(SensorParams(0.196, 0.0), InvalidInput);
}

TEST_CASE("photo readings negate deflections") {
  const auto r =
      photo_from_springs(SpringDeflections{1.0, -0.5, -0.5, false});
  CHECK(r.dA == -1.0);
  CHECK(r.dB == 0.5);
  CHECK(r.dC == 0.5);

  const auto zero = photo_from_springs(SpringDeflections{0, 0, 0, false});
  CHECK(zero.dA == 0.0);
  CHECK(zero.dB == 0.0);
  CHECK(zero.dC == 0.0);
}

TEST_CASE("photo noise: quantization rounds to the nearest step") {
  PhotoNoiseModel noise(0.0, 0.3, 42);
  const auto r =
      photo_from_springs(SpringDeflections{1.0, 0, 0, false}, noise);
  // round(-1.0 / 0.3) * 0.3 = -0.9
  CHECK(r.dA == doctest::Approx(-0.9).epsilon(1e-12));
  CHECK(r.dB == 0.0);
  CHECK(r.dC == 0.0);
}

TEST_CASE("photo noise: identical seeds give identical streams") {
  PhotoNoiseModel a(0.25, 0.01, 7);
  PhotoNoiseModel b(0.25, 0.01, 7);
  const SpringDeflections s{1.5, -0.3, 0.8, false};
  for (int i = 0; i < 20; ++i) {
    const auto ra = photo_from_springs(s, a);
    const auto rb = photo_from_springs(s, b);
    CHECK(ra.dA == rb.dA);
    CHECK(ra.dB == rb.dB);
    CHECK(ra.dC == rb.dC);
  }
}

TEST_CASE("photo noise: zero sigma and zero step is the identity") {
  PhotoNoiseModel noise(0.0, 0.0, 1);
  const SpringDeflections s{1.234567, -0.765, 0.1, false};
  const auto clean = photo_from_springs(s);
  const auto r = photo_from_springs(s, noise);
  CHECK(r.dA == clean.dA);
  CHECK(r.dB == clean.dB);
  CHECK(r.dC == clean.dC);
}

TEST_CASE("compliance matrix entries") {
  const auto C = compliance_matrix(kPaperParams);
  CHECK(C(0, 0) == doctest::Approx(1.7006802721088432).epsilon(1e-12));
  CHECK(C(0, 2) == 0.0);

  const SensorParams unit{1.0, 1.0};
  const auto Cu = compliance_matrix(unit);
  CHECK(Cu(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(Cu(0, 2) == 0.0);

  // structural zeros and symmetry hold for any parameters
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const SensorParams p{rng.uniform(0.05, 5.0), rng.uniform(5.0, 50.0)};
    const auto Cp = compliance_matrix(p);
    CHECK(Cp(0, 2) == 0.0);
    CHECK(Cp(1, 2) == -Cp(2, 2));
    CHECK(Cp(0, 0) == Cp(1, 0));
  }
}

TEST_CASE("calibration matrix matches the published inverse at paper params") {
  const auto cal = calibration_matrix(kPaperParams);
  // wrench = m * readings with the readings-model minus folded in, so -m is
  // the matrix as conventionally printed (positive Fz row).
  const Eigen::Matrix3d printed = (Eigen::Matrix3d() << 0.196, 0.196, 0.196,
                                   3.135, -1.567, -1.567,
                                   0.0, 2.717, -2.717).finished();
  const Eigen::Matrix3d neg_m = -cal.m;
  CHECK((neg_m - printed).cwiseAbs().maxCoeff() < 0.002);

  // exact arithmetic values
  CHECK(neg_m(0, 0) == doctest::Approx(0.196).epsilon(1e-12));
  CHECK(neg_m(1, 0) == doctest::Approx(3.136).epsilon(1e-12));
  CHECK(neg_m(1, 1) == doctest::Approx(-1.568).epsilon(1e-12));
  CHECK(neg_m(2, 1) == doctest::Approx(2.7158556662679993).epsilon(1e-12));
  CHECK(neg_m(2, 0) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(cal.condition_number > 1.0);
  CHECK(std::isfinite(cal.condition_number));
}

TEST_CASE("calibration matrix row one carries the equal-entry structure") {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const SensorParams p{rng.uniform(0.05, 5.0), rng.uniform(5.0, 50.0)};
    const auto cal = calibration_matrix(p);
    CHECK(cal.m(0, 0) == doctest::Approx(cal.m(0, 1)).epsilon(1e-12));
    CHECK(cal.m(0, 1) == doctest::Approx(cal.m(0, 2)).epsilon(1e-12));
    // m * (-C) = I by definition of the inverse
    const Eigen::Matrix3d prod = cal.m * (-compliance_matrix(p));
    CHECK((prod - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("estimate wrench: symmetric readings load only Fz") {
  const auto cal = calibration_matrix(kPaperParams);
  const auto w = estimate_wrench(PhotoReadings{-1.0, -1.0, -1.0}, cal);
  CHECK(w.fz == doctest::Approx(0.588).epsilon(1e-12));
  CHECK(w.mx == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.my == doctest::Approx(0.0).epsilon(1e-12));

  const auto zero = estimate_wrench(PhotoReadings{0, 0, 0}, cal);
  CHECK(zero.fz == 0.0);
  CHECK(zero.mx == 0.0);
  CHECK(zero.my == 0.0);
}

TEST_CASE("estimate wrench: inverse of the 3 N forward example") {
  const auto cal = calibration_matrix(kPaperParams);
  const auto w =
      estimate_wrench(PhotoReadings{-5.102, -5.102, -5.102}, cal);
  CHECK(w.fz == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("round trip: forward then inverse recovers the wrench") {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const SensorParams p{rng.uniform(0.05, 5.0), rng.uniform(5.0, 50.0)};
    const auto cal = calibration_matrix(p);
    const Wrench3 w = random_unsaturated_wrench(rng, p);

    const auto est = estimate_wrench(
        photo_from_springs(forward_deflections(w, p)), cal);

    const double scale = std::max(1.0, w.vec().cwiseAbs().maxCoeff());
    CHECK((est.vec() - w.vec()).cwiseAbs().maxCoeff() / scale < 1e-9);
  }
}

TEST_CASE("core math instantiates at float precision") {
  const SensorParamsT<float> p{0.196f, 16.0f};
  const auto s = forward_deflections(Wrench3T<float>{3.0f, 0.f, 0.f}, p);
  CHECK(s.d1 == doctest::Approx(5.102f).epsilon(1e-3));
  const auto cal = calibration_matrix(p);
  const auto w = estimate_wrench(photo_from_springs(s), cal);
  CHECK(w.fz == doctest::Approx(3.0f).epsilon(1e-4));
}
