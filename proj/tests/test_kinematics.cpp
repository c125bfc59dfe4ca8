#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "gearline/kinematics.hpp"

using gearline::fault_frequency_set;
using gearline::FaultFrequencyKind;
using gearline::GearTrain;
using gearline::mesh_fault_frequencies;
using gearline::reference_gear_train;
using gearline::shaft_fault_frequencies;

namespace {

bool contains_hz(const std::vector<gearline::FaultFrequency>& v, double hz, double tol = 1e-3) {
  for (const auto& f : v)
    if (std::abs(f.hz - hz) < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("shaft harmonics of the reference train") {
  auto train = reference_gear_train();
  auto ffs = shaft_fault_frequencies(train, 10.0, 555.5);
  CHECK(contains_hz(ffs, 22.917));
  CHECK(contains_hz(ffs, 45.833));
  CHECK(contains_hz(ffs, 68.750));
  // Shaft 3 never contributes: the harmonic set only covers shafts 1 and 2.
  for (const auto& f : ffs) {
    CHECK(f.label.find("shaft3") == std::string::npos);
    CHECK(f.hz >= 10.0);
  }
  CHECK(!contains_hz(ffs, train.shaft_hz(3)));
}

TEST_CASE("domain filter keeps exactly the in-range shaft lines") {
  auto train = reference_gear_train();
  auto ffs = shaft_fault_frequencies(train, 10.0, 30.0);
  REQUIRE(ffs.size() == 3);
  CHECK(ffs[0].hz == Catch::Approx(10.026).margin(1e-3));
  CHECK(ffs[1].hz == Catch::Approx(20.052).margin(1e-3));
  CHECK(ffs[2].hz == Catch::Approx(22.917).margin(1e-3));
}

TEST_CASE("mesh frequencies of the reference train") {
  auto train = reference_gear_train();
  CHECK(train.mesh_hz(1) == Catch::Approx(481.25));

  auto mesh = mesh_fault_frequencies(train, 10.0, 555.5);
  CHECK(mesh.size() == 26);
  int centers = 0;
  for (const auto& f : mesh)
    if (f.kind == FaultFrequencyKind::mesh_center) ++centers;
  CHECK(centers == 2);

  double top = 0.0;
  for (const auto& f : mesh) top = std::max(top, f.hz);
  CHECK(top == Catch::Approx(550.0));
  // One percent of tolerance on the highest sideband reaches the domain edge.
  CHECK(top * 1.01 == Catch::Approx(555.5));
}

TEST_CASE("full fault-frequency set has 32 entries over the paper domain") {
  auto train = reference_gear_train();
  auto ffs = fault_frequency_set(train, 10.0, 555.5);
  CHECK(ffs.size() == 32);
  CHECK(ffs.front().hz == Catch::Approx(481.25 / 48.0).margin(1e-6));
  for (std::size_t i = 1; i < ffs.size(); ++i) CHECK(ffs[i - 1].hz < ffs[i].hz);
  for (const auto& f : ffs) {
    CHECK(f.hz >= 10.0);
    CHECK(f.hz <= 555.5);
  }
  std::set<std::string> labels;
  for (const auto& f : ffs) labels.insert(f.label);
  CHECK(labels.size() == ffs.size());

  CHECK(fault_frequency_set(train, 600.0, 700.0).empty());
}

TEST_CASE("fault-frequency set is scale equivariant") {
  auto train = reference_gear_train();
  auto base = fault_frequency_set(train, 10.0, 555.5);
  const double alpha = 1.7;
  GearTrain scaled = train;
  scaled.motor_speed_hz *= alpha;
  auto up = fault_frequency_set(scaled, 10.0 * alpha, 555.5 * alpha);
  REQUIRE(up.size() == base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(up[i].hz == Catch::Approx(base[i].hz * alpha).epsilon(1e-12));
    CHECK(up[i].label == base[i].label);
  }
}

TEST_CASE("raising z2 pushes f2 below the domain and shrinks the set") {
  auto train = reference_gear_train();
  train.tooth_counts[1] = 69;
  CHECK(train.shaft_hz(2) < 10.0);
  auto ffs = fault_frequency_set(train, 10.0, 555.5);
  CHECK(ffs.size() < 32);
}

TEST_CASE("gear train validation") {
  GearTrain bad = reference_gear_train();
  bad.tooth_counts[2] = 3;
  CHECK_THROWS_AS(shaft_fault_frequencies(bad, 10.0, 100.0), std::invalid_argument);

  GearTrain tol = reference_gear_train();
  tol.speed_tolerance_frac = 0.2;
  CHECK_THROWS_AS(shaft_fault_frequencies(tol, 10.0, 100.0), std::invalid_argument);

  CHECK_THROWS_AS(shaft_fault_frequencies(reference_gear_train(), 100.0, 10.0),
                  std::invalid_argument);
}
