#include "grasshopper/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "grasshopper/errors.hpp"

namespace grasshopper {

namespace {

constexpr std::string_view kLawnFormat = "grasshopper-lawn";
constexpr int kLawnVersion = 1;
constexpr std::string_view kCheckpointFormat = "grasshopper-anneal-checkpoint";
constexpr int kCheckpointVersion = 1;
constexpr std::string_view kCsvHeader = "theta,p_one,p_two,q,hemisphere,gap_one,gap_two,n_cogs_one,n_cogs_two,seed";

template <typename T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string encode_rle(std::span<const std::uint8_t> bits) {
  std::string out;
  std::size_t k = 0;
  while (k < bits.size()) {
    const std::uint8_t bit = bits[k] ? 1 : 0;
    std::size_t run = 1;
    while (k + run < bits.size() && (bits[k + run] ? 1 : 0) == bit) ++run;
    if (!out.empty()) out += ',';
    out += bit ? '1' : '0';
    out += '*';
    out += std::to_string(run);
    k += run;
  }
  return out;
}

std::vector<std::uint8_t> decode_rle(std::string_view text, std::size_t expected_size) {
  std::vector<std::uint8_t> bits;
  bits.reserve(expected_size);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view token = text.substr(pos, end - pos);
    if (token.size() < 3 || (token[0] != '0' && token[0] != '1') || token[1] != '*') {
      throw ParseError("bad run '" + std::string(token) + "' in lawn bits");
    }
    std::size_t run = 0;
    auto [ptr, ec] = std::from_chars(token.data() + 2, token.data() + token.size(), run);
    if (ec != std::errc{} || ptr != token.data() + token.size() || run == 0) {
      throw ParseError("bad run length in '" + std::string(token) + "'");
    }
    if (bits.size() + run > expected_size) throw ParseError("lawn bits longer than the grid");
    bits.insert(bits.end(), run, static_cast<std::uint8_t>(token[0] - '0'));
    pos = end + 1;
  }
  if (bits.size() != expected_size) {
    throw ParseError("lawn bits cover " + std::to_string(bits.size()) + " sites, grid has " +
                     std::to_string(expected_size));
  }
  return bits;
}

LawnRecord make_lawn_record(const LawnState& state, double theta, const DeltaKernel& kernel, double probability,
                            std::optional<std::uint64_t> seed) {
  const SphericalGrid& grid = grid_of(state);
  LawnRecord r;
  r.source_tag = grid.source_tag();
  r.n = grid.size();
  r.content_hash = grid.content_hash();
  r.theta = theta;
  r.setup = setup_of(state);
  r.kernel = kernel;
  r.probability = probability;
  r.seed = seed;
  if (const auto* lawn = std::get_if<Lawn>(&state)) {
    r.lawns.emplace_back(lawn->site_bits().begin(), lawn->site_bits().end());
  } else {
    const auto& c = std::get<TwoLawnConfig>(state);
    r.lawns.emplace_back(c.first.site_bits().begin(), c.first.site_bits().end());
    r.lawns.emplace_back(c.second.site_bits().begin(), c.second.site_bits().end());
  }
  return r;
}

ordered_json lawn_to_json(const LawnRecord& record) {
  ordered_json j;
  j["format"] = kLawnFormat;
  j["version"] = kLawnVersion;
  j["grid"] = {{"source_tag", record.source_tag}, {"N", record.n}, {"content_hash", record.content_hash}};
  j["theta"] = record.theta;
  j["setup"] = to_string(record.setup);
  j["kernel"] = {{"shape", to_string(record.kernel.shape)}, {"half_width", record.kernel.half_width}};
  ordered_json bits = ordered_json::array();
  for (const auto& lawn : record.lawns) bits.push_back(encode_rle(lawn));
  j["bits"] = std::move(bits);
  j["probability"] = record.probability;
  if (record.seed) j["seed"] = *record.seed;
  return j;
}

LawnRecord lawn_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("lawn file is not a JSON object");
  if (j.contains("format") && j["format"] != kLawnFormat) throw ParseError("not a lawn file");
  LawnRecord r;
  const auto& grid = j.contains("grid") ? j["grid"] : throw ParseError("missing field 'grid'");
  r.source_tag = grid.value("source_tag", "");
  r.n = require<std::size_t>(grid, "N");
  r.content_hash = require<std::string>(grid, "content_hash");
  r.theta = require<double>(j, "theta");
  r.setup = setup_from_string(require<std::string>(j, "setup"));
  if (j.contains("kernel")) {
    r.kernel.shape = kernel_shape_from_string(require<std::string>(j["kernel"], "shape"));
    r.kernel.half_width = require<double>(j["kernel"], "half_width");
  }
  const auto bits = require<std::vector<std::string>>(j, "bits");
  const std::size_t expected = r.setup == Setup::One ? 1 : 2;
  if (bits.size() != expected) {
    throw ParseError("setup '" + std::string(to_string(r.setup)) + "' needs " + std::to_string(expected) +
                     " bit strings");
  }
  for (const auto& b : bits) r.lawns.push_back(decode_rle(b, r.n));
  r.probability = j.value("probability", std::nan(""));
  if (j.contains("seed")) r.seed = require<std::uint64_t>(j, "seed");
  return r;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_lawn_file(const std::filesystem::path& path, const LawnRecord& record) {
  write_text_file(path, lawn_to_json(record).dump(2) + "\n");
}

LawnRecord read_lawn_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return lawn_from_json(j);
}

LawnState state_from_record(const LawnRecord& record, const GridPtr& grid) {
  if (record.n != grid->size() || record.content_hash != grid->content_hash()) {
    throw GridMismatch("lawn was saved for grid " + record.content_hash + " (N=" + std::to_string(record.n) +
                       "), not " + grid->content_hash() + " (N=" + std::to_string(grid->size()) + ")");
  }
  if (record.setup == Setup::One) return Lawn::from_site_bits(grid, record.lawns.at(0));
  return TwoLawnConfig(Lawn::from_site_bits(grid, record.lawns.at(0)), Lawn::from_site_bits(grid, record.lawns.at(1)));
}

std::string format_real(double value, int significant_digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, significant_digits);
  return std::string(buf, ptr);
}

std::string format_curve_csv(const ProbabilityCurve& curve) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("nan"); };
  std::string out(kCsvHeader);
  out += '\n';
  for (const CurveRow& r : curve.rows) {
    out += format_real(r.theta) + ',' + opt(r.p_one) + ',' + opt(r.p_two) + ',' + format_real(r.q) + ',' +
           format_real(r.hemisphere) + ',' + opt(r.gap_one) + ',' + opt(r.gap_two) + ',' +
           std::to_string(r.n_cogs_one) + ',' + std::to_string(r.n_cogs_two) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

ProbabilityCurve parse_curve_csv(std::string_view text) {
  ProbabilityCurve curve;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("sweep CSV: unexpected header");
  auto real = [](const std::string& s) -> std::optional<double> {
    if (s == "nan") return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("sweep CSV: bad number '" + s + "'");
    return v;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw ParseError("sweep CSV: expected 10 columns");
    CurveRow r;
    r.theta = real(cells[0]).value_or(std::nan(""));
    r.p_one = real(cells[1]);
    r.p_two = real(cells[2]);
    r.q = real(cells[3]).value_or(std::nan(""));
    r.hemisphere = real(cells[4]).value_or(std::nan(""));
    r.gap_one = real(cells[5]);
    r.gap_two = real(cells[6]);
    r.n_cogs_one = std::stoi(cells[7]);
    r.n_cogs_two = std::stoi(cells[8]);
    r.seed = std::stoull(cells[9]);
    curve.rows.push_back(r);
  }
  return curve;
}

ordered_json curve_row_to_json(const CurveRow& row) {
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  return ordered_json{{"theta", row.theta},       {"p_one", opt(row.p_one)},     {"p_two", opt(row.p_two)},
                      {"q", row.q},               {"hemisphere", row.hemisphere}, {"gap_one", opt(row.gap_one)},
                      {"gap_two", opt(row.gap_two)}, {"n_cogs_one", row.n_cogs_one}, {"n_cogs_two", row.n_cogs_two},
                      {"seed", row.seed}};
}

CurveRow curve_row_from_json(const nlohmann::json& j) {
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  CurveRow r;
  r.theta = require<double>(j, "theta");
  r.p_one = opt("p_one");
  r.p_two = opt("p_two");
  r.q = require<double>(j, "q");
  r.hemisphere = require<double>(j, "hemisphere");
  r.gap_one = opt("gap_one");
  r.gap_two = opt("gap_two");
  r.n_cogs_one = require<int>(j, "n_cogs_one");
  r.n_cogs_two = require<int>(j, "n_cogs_two");
  r.seed = require<std::uint64_t>(j, "seed");
  return r;
}

namespace {

ordered_json state_bits_json(const LawnState& state) {
  ordered_json bits = ordered_json::array();
  if (const auto* lawn = std::get_if<Lawn>(&state)) {
    bits.push_back(encode_rle(lawn->site_bits()));
  } else {
    const auto& c = std::get<TwoLawnConfig>(state);
    bits.push_back(encode_rle(c.first.site_bits()));
    bits.push_back(encode_rle(c.second.site_bits()));
  }
  return bits;
}

LawnState state_from_bits_json(const nlohmann::json& bits, const GridPtr& grid) {
  const auto strings = bits.get<std::vector<std::string>>();
  if (strings.size() == 1) return Lawn::from_site_bits(grid, decode_rle(strings[0], grid->size()));
  if (strings.size() == 2) {
    return TwoLawnConfig(Lawn::from_site_bits(grid, decode_rle(strings[0], grid->size())),
                         Lawn::from_site_bits(grid, decode_rle(strings[1], grid->size())));
  }
  throw ParseError("checkpoint state must hold one or two lawns");
}

}  // namespace

ordered_json checkpoint_to_json(const AnnealCheckpoint& cp) {
  const SphericalGrid& grid = grid_of(cp.current);
  ordered_json trace = ordered_json::array();
  for (const TracePoint& t : cp.trace) {
    trace.push_back({t.temperature, t.mean_probability, t.acceptance_rate, t.best_probability});
  }
  return ordered_json{
      {"format", kCheckpointFormat},
      {"version", kCheckpointVersion},
      {"grid", {{"N", grid.size()}, {"content_hash", grid.content_hash()}}},
      {"schedule",
       {{"t_initial", cp.schedule.t_initial},
        {"t_final", cp.schedule.t_final},
        {"cooling_ratio", cp.schedule.cooling_ratio},
        {"sweeps_per_temperature", cp.schedule.sweeps_per_temperature}}},
      {"seed", cp.seed},
      {"rng_counter", cp.rng_counter},
      {"next_level", cp.next_level},
      {"sweeps_since_recompute", cp.sweeps_since_recompute},
      {"current", state_bits_json(cp.current)},
      {"current_probability", cp.current_probability},
      {"best", state_bits_json(cp.best)},
      {"best_probability", cp.best_probability},
      {"trace", std::move(trace)},
  };
}

AnnealCheckpoint checkpoint_from_json(const nlohmann::json& j, const GridPtr& grid) {
  if (require<std::string>(j, "format") != kCheckpointFormat) throw ParseError("not an annealing checkpoint");
  const auto& g = j.at("grid");
  if (require<std::string>(g, "content_hash") != grid->content_hash()) {
    throw GridMismatch("checkpoint was written for a different grid");
  }
  const auto& s = j.at("schedule");
  AnnealSchedule schedule{require<double>(s, "t_initial"), require<double>(s, "t_final"),
                          require<double>(s, "cooling_ratio"), require<int>(s, "sweeps_per_temperature")};
  std::vector<TracePoint> trace;
  for (const auto& t : j.at("trace")) {
    trace.push_back({t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>(), t.at(3).get<double>()});
  }
  return AnnealCheckpoint{schedule,
                          require<std::uint64_t>(j, "seed"),
                          require<std::uint64_t>(j, "rng_counter"),
                          require<std::size_t>(j, "next_level"),
                          require<std::size_t>(j, "sweeps_since_recompute"),
                          state_from_bits_json(j.at("current"), grid),
                          require<double>(j, "current_probability"),
                          state_from_bits_json(j.at("best"), grid),
                          require<double>(j, "best_probability"),
                          std::move(trace)};
}

}  // namespace grasshopper
