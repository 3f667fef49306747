#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "inekf/propagation.hpp"
#include "inekf/sim.hpp"
#include "oracles.hpp"

using namespace inekf;

TEST_CASE("line truth reaches speed * duration") {
  Scenario sc;
  sc.kind = TrajectoryKind::kLine;
  sc.speed_mps = 1.0;
  sc.duration_s = 10.0;
  sc.imu_rate_hz = 100.0;

  const Trajectory tr = generate_truth(sc);
  CHECK(tr.size() == 1001);
  CHECK(tr.front().t == 0.0);
  CHECK((tr.back().p - Vec3(10, 0, 0)).norm() < 1e-12);
  CHECK((tr.back().v - Vec3(1, 0, 0)).norm() == 0.0);
  for (size_t k = 1; k < tr.size(); ++k) CHECK(tr[k].t > tr[k - 1].t);
}

TEST_CASE("circle truth has constant yaw rate v/r") {
  Scenario sc;
  sc.kind = TrajectoryKind::kCircle;
  sc.radius_m = 20.0;
  sc.speed_mps = 2.0;
  sc.duration_s = 30.0;
  sc.imu_rate_hz = 100.0;

  const Trajectory tr = generate_truth(sc);
  for (size_t k = 1; k < tr.size(); k += 100) {
    const double dt = tr[k].t - tr[k - 1].t;
    const Vec3 w = so3_log((tr[k - 1].R.transpose() * tr[k].R).eval()) / dt;
    CHECK((w - Vec3(0, 0, 0.1)).norm() < 1e-12);
    CHECK(tr[k].v.norm() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs((tr[k].p - Vec3(0, 20, 0)).norm() - 20.0) < 1e-9);
    CHECK(is_rotation(tr[k].R, 1e-12));
  }
}

TEST_CASE("figure-eight closes after one period") {
  Scenario sc;
  sc.kind = TrajectoryKind::kFigureEight;
  sc.scale_m = 40.0;
  sc.speed_mps = 2.0;

  const double T = path_period(sc);
  CHECK(T > 0.0);
  const StateSnapshot s0 = sample_path(sc, 0.0);
  const StateSnapshot sT = sample_path(sc, T);
  CHECK((sT.p - s0.p).norm() < 1e-9);
  CHECK((sT.v - s0.v).norm() < 1e-9);

  // Average speed over the loop equals the configured speed.
  Scenario fine = sc;
  fine.duration_s = T;
  fine.imu_rate_hz = 400.0;
  const Trajectory tr = generate_truth(fine);
  double arc = 0.0;
  for (size_t k = 1; k < tr.size(); ++k) arc += (tr[k].p - tr[k - 1].p).norm();
  CHECK(arc / T == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("polyline legs, turns, and terminal loiter") {
  Scenario sc;
  sc.kind = TrajectoryKind::kWaypointPolyline;
  sc.speed_mps = 1.0;
  sc.turn_rate_rps = 0.5;
  sc.waypoints = {{0, 0}, {10, 0}, {10, 5}};
  sc.duration_s = 40.0;
  sc.imu_rate_hz = 50.0;

  const Trajectory tr = generate_truth(sc);
  // Leg 1 runs 10 s; the 90 degree turn takes pi/2 / 0.5 s; leg 2 runs 5 s.
  const double t_turn = M_PI / 2 / 0.5;
  const StateSnapshot mid = sample_path(sc, 5.0);
  CHECK((mid.p - Vec3(5, 0, 0)).norm() < 1e-12);
  CHECK(yaw_of(mid.R) == doctest::Approx(0.0));

  const StateSnapshot turning = sample_path(sc, 10.0 + 0.5 * t_turn);
  CHECK((turning.p - Vec3(10, 0, 0)).norm() < 1e-12);
  CHECK(turning.v.norm() == 0.0);
  CHECK(yaw_of(turning.R) == doctest::Approx(M_PI / 4));

  const StateSnapshot done = sample_path(sc, 39.0);
  CHECK((done.p - Vec3(10, 5, 0)).norm() < 1e-12);
  CHECK(done.v.norm() == 0.0);
  CHECK(yaw_of(done.R) == doctest::Approx(M_PI / 2));
  CHECK(tr.back().t == doctest::Approx(40.0));
}

TEST_CASE("zero-noise line imu is exactly gyro-silent and gravity-only") {
  Scenario sc;
  sc.kind = TrajectoryKind::kLine;
  sc.duration_s = 5.0;
  sc.imu_rate_hz = 100.0;

  const Trajectory tr = generate_truth(sc);
  const auto imu = synthesize_imu(tr, sc.imu_noise, Vec3::Zero(), Vec3::Zero(),
                                  sc.gravity, 1);
  CHECK(imu.size() == tr.size() - 1);
  for (const auto& u : imu) {
    CHECK(u.gyro.norm() == 0.0);
    CHECK((u.accel - Vec3(0, 0, 9.81)).norm() < 1e-12);
  }
}

TEST_CASE("zero-noise circle imu shows the constant turn rate") {
  Scenario sc;
  sc.kind = TrajectoryKind::kCircle;
  sc.radius_m = 20.0;
  sc.speed_mps = 2.0;
  sc.duration_s = 10.0;
  sc.imu_rate_hz = 200.0;

  const Trajectory tr = generate_truth(sc);
  const auto imu = synthesize_imu(tr, sc.imu_noise, Vec3::Zero(), Vec3::Zero(),
                                  sc.gravity, 1);
  for (const auto& u : imu) {
    CHECK((u.gyro - Vec3(0, 0, 0.1)).norm() < 1e-12);
    // Centripetal specific force: v^2/r toward the center (+y in body).
    CHECK(u.accel.y() == doctest::Approx(0.2).epsilon(1e-4));
    CHECK(std::abs(u.accel.x()) < 1e-3);
    CHECK(u.accel.z() == doctest::Approx(9.81));
  }
}

TEST_CASE("zero-noise imu integrates back to truth") {
  Scenario sc;
  sc.kind = TrajectoryKind::kCircle;
  sc.radius_m = 20.0;
  sc.speed_mps = 2.0;
  sc.duration_s = 60.0;
  sc.imu_rate_hz = 200.0;

  const Trajectory tr = generate_truth(sc);
  const auto imu = synthesize_imu(tr, sc.imu_noise, Vec3::Zero(), Vec3::Zero(),
                                  sc.gravity, 1);

  FilterConfig cfg;
  cfg.noise = NoiseParams{0.0, 0.0, 0.0, 0.0};
  RobotState s;
  s.R = tr.front().R;
  s.v = tr.front().v;
  s.p = tr.front().p;
  s.t = tr.front().t;
  Covariance15 P = Covariance15::Identity();
  for (const auto& u : imu) propagate(s, P, u, u.t - s.t, cfg);

  CHECK((s.p - tr.back().p).norm() < 1e-3);
  CHECK(std::abs(wrap_angle(s.yaw() - yaw_of(tr.back().R))) < 1e-5);
}

TEST_CASE("imu noise scales with the sampling rate and biases persist") {
  Scenario sc;
  sc.kind = TrajectoryKind::kLine;
  sc.duration_s = 50.0;
  sc.imu_rate_hz = 100.0;
  const Trajectory tr = generate_truth(sc);

  NoiseParams noise{0.01, 0.0, 0.0, 0.0};
  const Vec3 bg0(0.02, -0.01, 0.005);
  const auto imu = synthesize_imu(tr, noise, bg0, Vec3::Zero(), sc.gravity, 3);

  // White gyro noise: per-sample std = sigma * sqrt(rate) around the bias.
  Vec3 mean = Vec3::Zero();
  double var = 0.0;
  for (const auto& u : imu) mean += u.gyro;
  mean /= static_cast<double>(imu.size());
  for (const auto& u : imu) var += (u.gyro - mean).squaredNorm();
  var /= 3.0 * static_cast<double>(imu.size());
  // Sample mean std is 0.1 / sqrt(5000) = 1.4e-3 per axis; 6e-3 is > 4 sigma
  // on the norm.
  CHECK((mean - bg0).norm() < 6e-3);
  CHECK(std::sqrt(var) == doctest::Approx(0.01 * std::sqrt(100.0)).epsilon(0.05));
}

TEST_CASE("seeded synthesis is reproducible and seeds are independent") {
  Scenario sc;
  sc.kind = TrajectoryKind::kFigureEight;
  sc.duration_s = 20.0;
  sc.imu_noise = NoiseParams{1e-3, 1e-2, 1e-5, 1e-4};
  const Trajectory tr = generate_truth(sc);

  const auto a = synthesize_imu(tr, sc.imu_noise, Vec3::Zero(), Vec3::Zero(), sc.gravity, 11);
  const auto b = synthesize_imu(tr, sc.imu_noise, Vec3::Zero(), Vec3::Zero(), sc.gravity, 11);
  const auto c = synthesize_imu(tr, sc.imu_noise, Vec3::Zero(), Vec3::Zero(), sc.gravity, 12);
  REQUIRE(a.size() == b.size());
  bool identical = true, differs = false;
  for (size_t k = 0; k < a.size(); ++k) {
    identical = identical && a[k].gyro == b[k].gyro && a[k].accel == b[k].accel;
    differs = differs || a[k].gyro != c[k].gyro;
  }
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("gps downsampling, noise stats, and geodetic roundtrip") {
  Scenario sc;
  sc.kind = TrajectoryKind::kLine;
  sc.duration_s = 10.0;
  sc.imu_rate_hz = 100.0;
  const Trajectory tr = generate_truth(sc);

  // 5 Hz over 10 s: fixes at 0, 0.2, ..., 10.0.
  const auto clean = synthesize_gps_enu(tr, Vec3::Zero(), 5.0, 1);
  CHECK(clean.size() == 51);
  for (const auto& f : clean) {
    CHECK(std::abs(f.p.x() - 2.0 * f.t) < 1e-12);  // exact on a line
    CHECK(f.sigma.minCoeff() > 0.0);               // floored for zero noise
  }

  // Zero-noise geodetic fixes roundtrip through the tangent plane.
  const EnuOrigin origin{42.2936, -83.7128, 256.0};
  const auto geo = synthesize_gps(tr, Vec3::Zero(), 5.0, origin, 1);
  REQUIRE(geo.size() == clean.size());
  for (size_t j = 0; j < geo.size(); ++j) {
    const Vec3 back = geodetic_to_enu(geo[j], origin);
    CHECK((back - clean[j].p).norm() < 1e-6);
  }

  // Noise statistics over a long stream: sample std within 10% per axis.
  Scenario lsc = sc;
  lsc.duration_s = 2000.0;
  lsc.imu_rate_hz = 10.0;
  const Trajectory ltr = generate_truth(lsc);
  const Vec3 sigma(1.0, 1.0, 2.0);
  const auto noisy = synthesize_gps_enu(ltr, sigma, 5.0, 7);
  REQUIRE(noisy.size() == 10001);
  Vec3 acc = Vec3::Zero();
  for (const auto& f : noisy) {
    const Vec3 e = f.p - Vec3(2.0 * f.t, 0, 0);
    acc += e.cwiseProduct(e);
  }
  const Vec3 std_hat = (acc / static_cast<double>(noisy.size())).cwiseSqrt();
  CHECK(std_hat.x() == doctest::Approx(1.0).epsilon(0.1));
  CHECK(std_hat.y() == doctest::Approx(1.0).epsilon(0.1));
  CHECK(std_hat.z() == doctest::Approx(2.0).epsilon(0.1));

  // GPS delay shifts timestamps only.
  const auto delayed = synthesize_gps_enu(tr, Vec3::Zero(), 5.0, 1, 0.05);
  CHECK(delayed.front().t == doctest::Approx(0.05));
  CHECK((delayed.front().p - clean.front().p).norm() == 0.0);
}
