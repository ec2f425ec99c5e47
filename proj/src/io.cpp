#include "intake/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "intake/error.hpp"

namespace intake {

namespace fs = std::filesystem;
using json = nlohmann::json;

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  return in;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// fs_hz=<num>,hand=<L|R>,units=<text>
void parse_header(std::string_view line, double& fs, Hand& hand, std::string& units) {
  const Error bad(Errc::bad_header, "bad header");
  line = trim(line);
  constexpr std::string_view k_fs = "fs_hz=", k_hand = ",hand=", k_units = ",units=";
  if (!line.starts_with(k_fs)) throw bad;
  const auto hand_pos = line.find(k_hand);
  if (hand_pos == std::string_view::npos) throw bad;
  if (!parse_double(line.substr(k_fs.size(), hand_pos - k_fs.size()), fs) || !(fs > 0.0)) throw bad;
  const auto rest = line.substr(hand_pos + k_hand.size());
  if (rest.size() < 1 || (rest[0] != 'L' && rest[0] != 'R')) throw bad;
  hand = rest[0] == 'L' ? Hand::Left : Hand::Right;
  const auto after = rest.substr(1);
  if (!after.starts_with(k_units)) throw bad;
  units = std::string(after.substr(k_units.size()));
}

}  // namespace

ImuRecording parse_recording(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::bad_header, "bad header");
  double fs = 0.0;
  Hand hand = Hand::Right;
  std::string units;
  parse_header(line, fs, hand, units);

  std::vector<ImuSample> samples;
  std::vector<double> times;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto view = trim(line);
    if (view.empty()) continue;
    ++row;
    const auto fields = split(view, ',');
    const Error malformed(Errc::malformed_row, "malformed row " + std::to_string(row));
    if (fields.size() != 1 + kChannels) throw malformed;
    double t = 0.0;
    if (!parse_double(fields[0], t)) throw malformed;
    ImuSample s{};
    for (std::size_t c = 0; c < kChannels; ++c)
      if (!parse_double(fields[c + 1], s[c])) throw malformed;
    times.push_back(t);
    samples.push_back(s);
  }
  // ordering problems are reported before spacing problems
  for (std::size_t n = 1; n < times.size(); ++n)
    if (!(times[n] > times[n - 1])) throw Error(Errc::non_monotone, "non-monotone timestamps");
  for (std::size_t n = 1; n < times.size(); ++n)
    if (std::abs(times[n] - times[0] - static_cast<double>(n) / fs) > 1e-6)
      throw Error(Errc::non_uniform, "non-uniform timestamps at row " + std::to_string(n + 1));
  if (samples.empty()) throw Error(Errc::malformed_row, "recording has no samples");
  return ImuRecording(std::move(samples), fs, hand, std::move(units));
}

ImuRecording load_recording(const fs::path& path) {
  auto in = open_input(path);
  return parse_recording(in);
}

std::string format_recording(const ImuRecording& rec) {
  std::string out = "fs_hz=";
  append_double(out, rec.sample_rate_hz());
  out += ",hand=";
  out += hand_code(rec.handedness());
  out += ",units=";
  out += rec.units();
  out += '\n';
  for (std::size_t n = 0; n < rec.size(); ++n) {
    append_double(out, static_cast<double>(n) / rec.sample_rate_hz());
    for (double v : rec[n]) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_recording(const fs::path& path, const ImuRecording& rec) { write_file_atomic(path, format_recording(rec)); }

// ---------------------------------------------------------------------------

BiteSet Events::bite_moments() const {
  BiteSet b;
  for (const auto& e : records)
    if (e.kind == Event::Kind::Bite && !e.end_s) b.timestamps_s.push_back(e.start_s);
  return b;
}

std::vector<BiteAnnotation> Events::bite_intervals() const {
  std::vector<BiteAnnotation> out;
  for (const auto& e : records)
    if (e.kind == Event::Kind::Bite && e.end_s) out.push_back({e.start_s, *e.end_s});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.end_s < b.end_s; });
  return out;
}

std::vector<MealAnnotation> Events::meals() const {
  std::vector<MealAnnotation> out;
  for (const auto& e : records)
    if (e.kind == Event::Kind::Meal) out.push_back({e.start_s, *e.end_s});
  return out;
}

MealIntervalSet Events::meal_intervals() const {
  MealIntervalSet out;
  for (const auto& m : meals()) out.push_back({m.start_s, m.end_s});
  return out;
}

Events Events::from(const BiteSet& bites) {
  Events ev;
  for (double t : bites.timestamps_s) ev.records.push_back({Event::Kind::Bite, t, std::nullopt});
  return ev;
}

Events Events::from(std::span<const BiteAnnotation> bites, std::span<const MealAnnotation> meals) {
  Events ev;
  for (const auto& b : bites) ev.records.push_back({Event::Kind::Bite, b.start_s, b.end_s});
  for (const auto& m : meals) ev.records.push_back({Event::Kind::Meal, m.start_s, m.end_s});
  return normalize_events(std::move(ev));
}

Events Events::from(std::span<const Interval> meals) {
  Events ev;
  for (const auto& m : meals) ev.records.push_back({Event::Kind::Meal, m.start_s, m.end_s});
  return ev;
}

namespace {

void validate_events(const Events& ev) {
  double last_meal_end = -INFINITY;
  for (std::size_t i = 0; i < ev.records.size(); ++i) {
    const auto& e = ev.records[i];
    if (i > 0 && e.start_s < ev.records[i - 1].start_s)
      throw Error(Errc::non_monotone, "events are not sorted by time");
    if (e.kind == Event::Kind::Meal && !e.end_s) throw Error(Errc::invalid_argument, "meal event without end_s");
    if (e.end_s && !(*e.end_s > e.start_s))
      throw Error(Errc::invalid_argument, "event end must be after its start");
    if (e.kind == Event::Kind::Meal) {
      if (e.start_s < last_meal_end) throw Error(Errc::overlapping_intervals, "meals overlap");
      last_meal_end = *e.end_s;
    }
  }
}

}  // namespace

Events normalize_events(Events ev) {
  std::stable_sort(ev.records.begin(), ev.records.end(),
                   [](const Event& a, const Event& b) { return a.start_s < b.start_s; });
  validate_events(ev);
  return ev;
}

Events parse_events(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kEventsHeader) throw Error(Errc::bad_header, "bad header");
  Events ev;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const Error malformed(Errc::malformed_row, "malformed row " + std::to_string(row));
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("kind") || !j.contains("start_s")) throw malformed;
    if (!j["kind"].is_string() || !j["start_s"].is_number()) throw malformed;
    const auto kind = j["kind"].get<std::string>();
    Event e{};
    if (kind == "bite") e.kind = Event::Kind::Bite;
    else if (kind == "meal") e.kind = Event::Kind::Meal;
    else throw malformed;
    e.start_s = j["start_s"].get<double>();
    if (j.contains("end_s")) {
      if (!j["end_s"].is_number()) throw malformed;
      e.end_s = j["end_s"].get<double>();
    }
    ev.records.push_back(e);
  }
  validate_events(ev);
  return ev;
}

Events load_events(const fs::path& path) {
  auto in = open_input(path);
  return parse_events(in);
}

std::string format_events(const Events& ev) {
  validate_events(ev);
  std::string out = kEventsHeader;
  out += '\n';
  for (const auto& e : ev.records) {
    json j;
    j["kind"] = e.kind == Event::Kind::Bite ? "bite" : "meal";
    j["start_s"] = e.start_s;
    if (e.end_s) j["end_s"] = *e.end_s;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_events(const fs::path& path, const Events& ev) { write_file_atomic(path, format_events(ev)); }

// ---------------------------------------------------------------------------

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  auto in = open_input(path);
  const fs::path base = path.parent_path();
  std::string line;
  if (!std::getline(in, line) || trim(line) != "subject,kind,recording,events")
    throw Error(Errc::bad_header, "bad header");
  std::vector<ManifestEntry> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto view = trim(line);
    if (view.empty()) continue;
    ++row;
    const auto f = split(view, ',');
    const Error malformed(Errc::malformed_row, "malformed row " + std::to_string(row));
    if (f.size() != 4) throw malformed;
    ManifestEntry e;
    e.subject = std::string(trim(f[0]));
    const auto kind = trim(f[1]);
    if (kind == "meal") e.kind = ManifestEntry::Kind::Meal;
    else if (kind == "free") e.kind = ManifestEntry::Kind::FreeLiving;
    else throw malformed;
    auto resolve = [&](std::string_view p) {
      fs::path q{std::string(trim(p))};
      return q.is_absolute() ? q : base / q;
    };
    e.recording = resolve(f[2]);
    e.events = resolve(f[3]);
    out.push_back(std::move(e));
  }
  return out;
}

void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
  std::string out = "subject,kind,recording,events\n";
  for (const auto& e : entries) {
    out += e.subject + ',' + (e.kind == ManifestEntry::Kind::Meal ? "meal" : "free") + ',' + e.recording.string() +
           ',' + e.events.string() + '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace intake
