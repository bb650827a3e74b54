#include "doctest.h"
#include "grasshopper/analysis.hpp"
#include "grasshopper/errors.hpp"
#include "grasshopper/io.hpp"
#include "support.hpp"

using namespace grasshopper;
using testing::fibonacci;

namespace {

constexpr double kPi = std::numbers::pi;

// Applies a fixed rotation to every grid point and carries the lawn along.
Lawn rotated(const Lawn& lawn) {
  const double a = 0.7, b = 1.1;
  std::vector<Vec3> pts;
  for (const Vec3& p : lawn.grid().points()) {
    const Vec3 q{p.x, std::cos(a) * p.y - std::sin(a) * p.z, std::sin(a) * p.y + std::cos(a) * p.z};
    pts.push_back({std::cos(b) * q.x - std::sin(b) * q.y, std::sin(b) * q.x + std::cos(b) * q.y, q.z});
  }
  const auto g = std::make_shared<const SphericalGrid>(std::move(pts), "rotated");
  return Lawn::from_site_bits(g, lawn.site_bits());
}

SweepOptions quick_sweep(const std::filesystem::path& dir) {
  SweepOptions o;
  o.n_replicas = 2;
  o.schedule = AnnealSchedule{2e-3, 2e-6, 0.7, 3};
  o.base_seed = 5;
  o.output_dir = dir;
  return o;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("reference curves") {
    CHECK(quantum_probability(0.0) == 1.0);
    CHECK(quantum_probability(kPi / 2) == doctest::Approx(0.5));
    CHECK(quantum_probability(kPi) == doctest::Approx(0.0));
    CHECK(hemisphere_probability(kPi / 3) == doctest::Approx(2.0 / 3.0));
    CHECK(quantum_probability(kPi / 4) - hemisphere_probability(kPi / 4) == doctest::Approx(0.10355).epsilon(1e-4));
    CHECK(quantum_probability(kPi / 5) - hemisphere_probability(kPi / 5) == doctest::Approx(0.10451).epsilon(1e-4));
  }

  TEST_CASE("gap maximizer") {
    const double t = gap_maximizer_landmark();
    CHECK(std::abs(kPi / t - 4.5523) < 1e-3);
    const auto gap = [](double x) { return quantum_probability(x) - hemisphere_probability(x); };
    CHECK(gap(t) > gap(t - 1e-4));
    CHECK(gap(t) > gap(t + 1e-4));
  }

  TEST_CASE("special angles") {
    const auto s = special_angles(10);
    REQUIRE(s.size() == 9);
    for (const auto& a : s) {
      CHECK(a.theta == doctest::Approx(kPi / a.q));
      CHECK(a.one_lawn_hemisphere_optimal);
      CHECK(a.two_lawn_hemisphere_optimal == (a.q % 2 == 0));
    }
    CHECK_THROWS_AS(special_angles(1), InputError);
  }

  TEST_CASE("predicted cogs") {
    CHECK(predicted_cogs(0.3 * kPi, Setup::One) == 7);
    CHECK(predicted_cogs(0.3 * kPi, Setup::Two) == 3);
    CHECK(predicted_cogs(kPi / 5, Setup::Two) == 5);
    CHECK(predicted_cogs(kPi / 2, Setup::One) == 5);  // x = 4 is a tie between 3 and 5
    CHECK(predicted_cogs(kPi / 2, Setup::Two) == 3);  // x = 2
    CHECK(predicted_cogs(kPi, Setup::Two) == 1);
    CHECK(predicted_cogs(0.3 * kPi, Setup::One, 2) == 13);
    CHECK_THROWS_AS(predicted_cogs(0.0, Setup::One), InputError);
    CHECK_THROWS_AS(predicted_cogs(1.0, Setup::One, 0), InputError);
  }

  TEST_CASE("cog counting on constructed lawns") {
    const auto g = fibonacci(3000);
    for (int n : {3, 5, 7, 9}) {
      const Lawn cog = cogwheel_lawn(g, n, 0.5, 0.3);
      const CogCount c = count_cogs(cog);
      CHECK(c.n_cogs == n);
      CHECK(c.confidence >= kCogConfidenceThreshold);
      CHECK(count_cogs(rotated(cog)).n_cogs == n);
    }
    CHECK(count_cogs(hemisphere_lawn(g, {0, 0, 1})).n_cogs == 0);
    CHECK(count_cogs(random_lawn(g, 1)).n_cogs == 0);
  }

  TEST_CASE("reflection report") {
    const auto g = fibonacci(1000);
    const TwoLawnConfig c(random_lawn(g, 1), cogwheel_lawn(g, 3, 0.5));
    const ReflectionReport r = verify_reflection_symmetry(c, 0.3 * kPi);
    CHECK(r.theta == 0.3 * kPi);
    CHECK(r.difference < 1e-12);
    CHECK(r.probability > 0.0);
  }

  TEST_CASE("initializers") {
    const auto g = fibonacci(1000);
    const double theta = 0.3 * kPi;
    CHECK(std::get<Lawn>(make_initializer(g, theta, Setup::One, "hemisphere", 1)) == hemisphere_lawn(g, {0, 0, 1}));
    CHECK(std::get<Lawn>(make_initializer(g, theta, Setup::One, "cogwheel", 1)) == cogwheel_lawn(g, 7, 0.5));
    CHECK(std::get<Lawn>(make_initializer(g, theta, Setup::One, "random", 4)) == random_lawn(g, 4));
    const auto two = std::get<TwoLawnConfig>(make_initializer(g, theta, Setup::Two, "cogwheel", 1));
    CHECK(two.first == cogwheel_lawn(g, 3, 0.5));
    const auto far = std::get<TwoLawnConfig>(make_initializer(g, kPi - theta, Setup::Two, "hemisphere", 1));
    CHECK(far.second == complement(far.first));
    CHECK_THROWS_AS(make_initializer(g, theta, Setup::One, "stripes", 1), InputError);
    CHECK(default_initializers(g, theta, Setup::Two, 1).size() == 3);
  }

  TEST_CASE("default sweep grid") {
    const auto t = default_sweep_thetas();
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(std::adjacent_find(t.begin(), t.end()) == t.end());
    CHECK(t.front() == doctest::Approx(0.05 * kPi));
    CHECK(t.back() == doctest::Approx(0.95 * kPi));
    for (int q = 2; q <= 10; ++q) CHECK(std::find(t.begin(), t.end(), kPi / q) != t.end());
    CHECK(row_seed(5, 0) == 5);
    CHECK(row_seed(5, 3) == 3'000'005);
  }

  TEST_CASE("sweep rows") {
    const auto g = fibonacci(400);
    const auto dir = testing::scratch("sweep_rows");
    const auto curve = sweep(g, {kPi / 2, kPi / 5, kPi / 4}, quick_sweep(dir));
    REQUIRE(curve.rows.size() == 3);
    CHECK(curve.rows[0].theta == kPi / 5);
    CHECK(curve.rows[2].theta == kPi / 2);
    for (const auto& r : curve.rows) {
      REQUIRE(r.p_one.has_value());
      REQUIRE(r.p_two.has_value());
      CHECK(*r.gap_one == doctest::Approx(r.q - *r.p_one));
      CHECK(r.hemisphere == hemisphere_probability(r.theta));
    }
    CHECK(std::filesystem::exists(dir / "lawns"));
    CHECK(std::distance(std::filesystem::directory_iterator(dir / "lawns"), std::filesystem::directory_iterator{}) == 6);
    SweepOptions none = quick_sweep({});
    none.run_one = none.run_two = false;
    CHECK_THROWS_AS(sweep(g, {1.0}, none), InputError);
  }

  TEST_CASE("sweep resumes to the same curve at any thread count") {
    const auto g = fibonacci(300);
    const std::vector<double> thetas{0.6, 0.9, 1.2, 1.5};
    const auto full_dir = testing::scratch("sweep_full");
    const std::string full = format_curve_csv(sweep(g, thetas, quick_sweep(full_dir)));

    const auto dir = testing::scratch("sweep_interrupted");
    SweepOptions o = quick_sweep(dir);
    o.stop_after_rows = 1;
    CHECK(sweep(g, thetas, o).rows.size() == 1);
    CHECK(sweep(g, thetas, o).rows.size() == 2);
    o.stop_after_rows.reset();
    o.threads = 4;
    CHECK(format_curve_csv(sweep(g, thetas, o)) == full);
    CHECK(read_text_file(dir / "lawns" / ("theta_" + format_real(0.9) + "_one.json")) ==
          read_text_file(full_dir / "lawns" / ("theta_" + format_real(0.9) + "_one.json")));

    SweepOptions other = quick_sweep(dir);
    other.base_seed = 6;
    CHECK_THROWS_AS(sweep(g, thetas, other), InputError);
  }
}
