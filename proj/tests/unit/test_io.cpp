#include <clocale>
#include <random>

#include "doctest.h"
#include "grasshopper/errors.hpp"
#include "grasshopper/io.hpp"
#include "support.hpp"

using namespace grasshopper;
using testing::fibonacci;

TEST_SUITE("io") {
  TEST_CASE("rle examples") {
    const std::vector<std::uint8_t> bits{1, 1, 1, 0, 0};
    CHECK(encode_rle(bits) == "1*3,0*2");
    CHECK(decode_rle("1*3,0*2", 5) == bits);
    CHECK(encode_rle(std::vector<std::uint8_t>{}) == "");
    CHECK(decode_rle("", 0).empty());
    CHECK(encode_rle(std::vector<std::uint8_t>{0}) == "0*1");
  }

  TEST_CASE("rle round trip") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
      std::vector<std::uint8_t> bits(rng() % 300);
      const unsigned bias = 1 + unsigned(rng() % 8);
      for (auto& b : bits) b = (rng() % bias) == 0 ? 1 : 0;
      const std::string text = encode_rle(bits);
      CHECK(decode_rle(text, bits.size()) == bits);
      CHECK(text.find("*0") == std::string::npos);
    }
  }

  TEST_CASE("rle errors") {
    CHECK_THROWS_AS(decode_rle("1*3,0*2", 6), ParseError);
    CHECK_THROWS_AS(decode_rle("1*3,0*2", 4), ParseError);
    CHECK_THROWS_AS(decode_rle("2*3", 3), ParseError);
    CHECK_THROWS_AS(decode_rle("1*x", 3), ParseError);
    CHECK_THROWS_AS(decode_rle("1*0", 0), ParseError);
    CHECK_THROWS_AS(decode_rle("1-3", 3), ParseError);
  }

  TEST_CASE("real formatting is locale independent") {
    std::setlocale(LC_ALL, "de_DE.UTF-8");
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(2.0) == "2");
    CHECK(format_real(std::numbers::pi) == "3.14159265359");
    CHECK(format_real(std::numbers::pi, 17) == "3.1415926535897931");
    std::setlocale(LC_ALL, "C");
  }

  TEST_CASE("lawn record round trip") {
    const auto g = fibonacci(500);
    const double theta = 0.3 * std::numbers::pi;
    for (const LawnState& s : {LawnState(random_lawn(g, 1)), LawnState(TwoLawnConfig(random_lawn(g, 2), cogwheel_lawn(g, 3, 0.5)))}) {
      const LawnRecord r = make_lawn_record(s, theta, DeltaKernel{KernelShape::Hat, 1.5}, 0.7123456789012345, 42);
      const auto j = lawn_to_json(r);
      CHECK(j["format"] == "grasshopper-lawn");
      CHECK(j["version"] == 1);
      CHECK(j["grid"]["N"] == 1000);
      CHECK(j["grid"]["content_hash"] == g->content_hash());
      CHECK(j["grid"]["source_tag"] == "fibonacci-antipodal");
      CHECK(j["setup"] == std::string(to_string(setup_of(s))));
      CHECK(j["kernel"]["shape"] == "hat");
      CHECK(j["bits"].size() == (setup_of(s) == Setup::One ? 1u : 2u));

      const auto path = testing::scratch("lawn_io") / "lawn.json";
      write_lawn_file(path, r);
      const LawnRecord back = read_lawn_file(path);
      CHECK(back.theta == theta);
      CHECK(back.probability == 0.7123456789012345);
      CHECK(back.seed == std::optional<std::uint64_t>(42));
      CHECK(back.kernel == r.kernel);
      const LawnState restored = state_from_record(back, g);
      CHECK(setup_of(restored) == setup_of(s));
      if (const auto* l = std::get_if<Lawn>(&s)) {
        CHECK(std::get<Lawn>(restored) == *l);
      } else {
        CHECK(std::get<TwoLawnConfig>(restored) == std::get<TwoLawnConfig>(s));
      }
      CHECK_THROWS_AS(state_from_record(back, fibonacci(501)), GridMismatch);
      CHECK(lawn_to_json(back).dump() == j.dump());
    }
  }

  TEST_CASE("malformed lawn files") {
    CHECK_THROWS_AS(lawn_from_json(nlohmann::json::array()), ParseError);
    CHECK_THROWS_AS(lawn_from_json(nlohmann::json{{"format", "other"}}), ParseError);
    auto j = nlohmann::json::parse(lawn_to_json(make_lawn_record(random_lawn(fibonacci(10), 1), 1.0, {}, 0.5)).dump());
    j["setup"] = "two";
    CHECK_THROWS_AS(lawn_from_json(j), ParseError);
    const auto path = testing::scratch("bad_lawn") / "bad.json";
    write_text_file(path, "{not json");
    CHECK_THROWS_AS(read_lawn_file(path), ParseError);
    CHECK_THROWS_AS(read_lawn_file(path.parent_path() / "absent.json"), InputError);
  }

  TEST_CASE("sweep csv") {
    ProbabilityCurve c;
    CurveRow a;
    a.theta = 0.5;
    a.p_one = 0.81;
    a.q = quantum_probability(0.5);
    a.hemisphere = hemisphere_probability(0.5);
    a.gap_one = a.q - 0.81;
    a.n_cogs_one = 7;
    a.seed = 12;
    c.rows.push_back(a);
    CurveRow b = a;
    b.theta = 1.0;
    b.p_one.reset();
    b.gap_one.reset();
    b.p_two = 0.6;
    b.gap_two = 0.1;
    b.n_cogs_one = 0;
    b.n_cogs_two = 3;
    c.rows.push_back(b);
    const std::string text = format_curve_csv(c);
    CHECK(text.starts_with("theta,p_one,p_two,q,hemisphere,gap_one,gap_two,n_cogs_one,n_cogs_two,seed\n"));
    CHECK(text.find("0.5,0.81,nan,") != std::string::npos);
    CHECK(text.find("1,nan,0.6,") != std::string::npos);
    const ProbabilityCurve back = parse_curve_csv(text);
    REQUIRE(back.rows.size() == 2);
    CHECK_FALSE(back.rows[0].p_two.has_value());
    CHECK(back.rows[1].n_cogs_two == 3);
    CHECK(format_curve_csv(back) == text);
    CHECK_THROWS_AS(parse_curve_csv("a,b\n"), ParseError);
    CHECK_THROWS_AS(parse_curve_csv("theta,p_one,p_two,q,hemisphere,gap_one,gap_two,n_cogs_one,n_cogs_two,seed\n1,2\n"),
                    ParseError);
  }

  TEST_CASE("curve row json") {
    CurveRow r;
    r.theta = 0.25;
    r.p_two = 0.123456789012345678;
    r.seed = 99;
    const CurveRow back = curve_row_from_json(nlohmann::json::parse(curve_row_to_json(r).dump()));
    CHECK(back.theta == r.theta);
    CHECK(back.p_two == r.p_two);
    CHECK_FALSE(back.p_one.has_value());
    CHECK(back.seed == 99);
  }

  TEST_CASE("checkpoint json") {
    const auto g = fibonacci(100);
    AnnealCheckpoint cp{AnnealSchedule{1e-3, 1e-6, 0.9, 3},
                        77,
                        12345,
                        4,
                        17,
                        LawnState(random_lawn(g, 1)),
                        0.61,
                        LawnState(random_lawn(g, 2)),
                        0.62,
                        {{1e-3, 0.5, 0.4, 0.6}}};
    const AnnealCheckpoint back = checkpoint_from_json(nlohmann::json::parse(checkpoint_to_json(cp).dump()), g);
    CHECK(back.seed == 77);
    CHECK(back.rng_counter == 12345);
    CHECK(back.next_level == 4);
    CHECK(back.sweeps_since_recompute == 17);
    CHECK(back.current_probability == 0.61);
    CHECK(std::get<Lawn>(back.best) == random_lawn(g, 2));
    CHECK(back.trace.size() == 1);
    CHECK(back.schedule.cooling_ratio == 0.9);
    CHECK_THROWS_AS(checkpoint_from_json(nlohmann::json::parse(checkpoint_to_json(cp).dump()), fibonacci(101)),
                    GridMismatch);
  }

  TEST_CASE("text files") {
    const auto dir = testing::scratch("text_files");
    write_text_file(dir / "a" / "b.txt", "hello\n");
    CHECK(read_text_file(dir / "a" / "b.txt") == "hello\n");
    write_text_file(dir / "a" / "b.txt", "bye\n");
    CHECK(read_text_file(dir / "a" / "b.txt") == "bye\n");
  }
}
