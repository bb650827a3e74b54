#include <random>

#include "doctest.h"
#include "grasshopper/errors.hpp"
#include "support.hpp"

using namespace grasshopper;
using testing::fibonacci;

TEST_SUITE("sphere_grid") {
  TEST_CASE("geodesic angle examples") {
    const Vec3 x{1, 0, 0}, y{0, 1, 0};
    CHECK(geodesic_angle(x, x) == 0.0);
    CHECK(geodesic_angle(x, -x) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(geodesic_angle(x, y) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(geodesic_angle(x, y) == geodesic_angle(y, x));
  }

  TEST_CASE("geodesic angle stays accurate near 0 and pi") {
    const double eps = 1e-9;
    const Vec3 u{1, 0, 0};
    const Vec3 v{std::cos(eps), std::sin(eps), 0};
    CHECK(geodesic_angle(u, v) == doctest::Approx(eps).epsilon(1e-6));
    CHECK(std::numbers::pi - geodesic_angle(u, -v) == doctest::Approx(eps).epsilon(1e-6));
  }

  TEST_CASE("antipodal reflection identity") {
    const auto g = fibonacci(1000);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, g->size() - 1);
    for (int t = 0; t < 5000; ++t) {
      const std::size_t i = pick(rng), j = pick(rng);
      const double a = geodesic_angle(g->point(i), g->point(j));
      const double b = geodesic_angle(g->point(i), g->point(g->antipode(j)));
      CHECK(std::abs(a + b - std::numbers::pi) < 1e-10);
    }
  }

  TEST_CASE("spacing definition") {
    for (std::size_t pairs : {3u, 100u, 3000u}) {
      const auto g = fibonacci(pairs);
      CHECK(g->size() == 2 * pairs);
      CHECK(std::abs(g->spacing() * g->spacing() * double(g->size()) - 4 * std::numbers::pi) < 1e-12);
    }
  }

  TEST_CASE("pairing and representatives") {
    const auto g = fibonacci(500);
    CHECK(g->pair_count() == 500);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const std::size_t a = g->antipode(i);
      CHECK(a != i);
      CHECK(g->antipode(a) == i);
      CHECK(g->pair_of(i) == g->pair_of(a));
      CHECK(norm(g->point(i) + g->point(a)) < 1e-12);
      CHECK(g->is_representative(i) != g->is_representative(a));
      if (g->is_representative(i)) CHECK(lex_greater(g->point(i), g->point(a)));
    }
  }

  TEST_CASE("fibonacci lattice is interleaved and deterministic") {
    const auto g = fibonacci(200);
    for (std::size_t k = 0; k < 200; ++k) {
      CHECK(g->point(2 * k).z > 0.0);
      CHECK(g->antipode(2 * k) == 2 * k + 1);
    }
    CHECK(format_grid(*g) == format_grid(generate_fibonacci_antipodal(200)));
    CHECK(g->content_hash() == fibonacci(200)->content_hash());
    CHECK(g->content_hash() != fibonacci(201)->content_hash());
  }

  TEST_CASE("fibonacci needs at least three pairs") {
    CHECK_THROWS_AS(generate_fibonacci_antipodal(2), InputError);
  }

  TEST_CASE("most nearest-neighbor distances lie within [h/2, 2h]") {
    const auto g = fibonacci(1000);
    const double h = g->spacing();
    std::size_t inside = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      double nearest = 10.0;
      for (std::size_t j = 0; j < g->size(); ++j) {
        if (j != i) nearest = std::min(nearest, geodesic_angle(g->point(i), g->point(j)));
      }
      if (nearest >= 0.5 * h && nearest <= 2.0 * h) ++inside;
    }
    CHECK(double(inside) >= 0.8 * double(g->size()));
  }

  TEST_CASE("text round trip is bit exact") {
    const auto g = fibonacci(777);
    const auto path = testing::scratch("grid_roundtrip") / "g.txt";
    save_grid(*g, path);
    const SphericalGrid back = load_grid(path);
    REQUIRE(back.size() == g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
      CHECK(back.point(i).x == g->point(i).x);
      CHECK(back.point(i).y == g->point(i).y);
      CHECK(back.point(i).z == g->point(i).z);
    }
    CHECK(back.content_hash() == g->content_hash());
    CHECK(format_grid(back) == format_grid(*g));
  }

  TEST_CASE("parser accepts comments and blank lines") {
    const SphericalGrid g = parse_grid("# octahedron\n\n1 0 0\n-1 0 0 # x\n0 1 0\n0 -1 0\n\t0 0 1\n0 0 -1\n");
    CHECK(g.size() == 6);
    CHECK(g.antipode(4) == 5);
  }

  TEST_CASE("parser errors") {
    CHECK_THROWS_AS(parse_grid("1 0 0\n-1 0 zero\n"), ParseError);
    CHECK_THROWS_AS(parse_grid("1 0 0\n-1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_grid("1 0 0 0\n-1 0 0\n"), ParseError);
    CHECK_THROWS_AS(load_grid("/nonexistent/grid.txt"), InputError);
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(parse_grid("1 0 0\n0 1 0\n"), GridNotAntipodal);
    CHECK_THROWS_AS(parse_grid("1.001 0 0\n-1.001 0 0\n"), InputError);
    const SphericalGrid g = parse_grid("1.0000000001 0 0\n-1.0000000001 0 0\n");
    CHECK(norm(g.point(0)) == doctest::Approx(1.0).epsilon(1e-15));
    try {
      parse_grid("1 0 0\n-1 0 0\n0 1 0\n0 0 1\n0 0 -1\n0 -0.6 0.8\n");
      FAIL("expected GridNotAntipodal");
    } catch (const GridNotAntipodal& e) {
      CHECK((e.index() == 2 || e.index() == 5));
    }
  }

  TEST_CASE("latitude bins return a superset of the true neighborhood") {
    const auto g = fibonacci(1500);
    const LatitudeBins bins(*g, g->spacing());
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, g->size() - 1);
    for (double max_angle : {0.05, 0.5, 1.5, 3.0}) {
      for (int t = 0; t < 20; ++t) {
        const Vec3& c = g->point(pick(rng));
        const auto [first, last] = bins.candidate_range(c, max_angle);
        std::vector<std::uint8_t> seen(g->size(), 0);
        for (std::size_t k = first; k < last; ++k) seen[bins.band_sites()[k]] = 1;
        for (std::size_t j = 0; j < g->size(); ++j) {
          if (geodesic_angle(c, g->point(j)) <= max_angle) CHECK(seen[j] == 1);
        }
      }
    }
  }
}
