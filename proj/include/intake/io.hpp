#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "intake/bite_detect.hpp"
#include "intake/imu.hpp"
#include "intake/meal_localize.hpp"
#include "intake/windowing.hpp"

namespace intake {

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Recording file:
//   fs_hz=<num>,hand=<L|R>,units=<text>
//   t,ax,ay,az,gx,gy,gz          (one row per sample, t in seconds)
ImuRecording parse_recording(std::istream& in);
ImuRecording load_recording(const std::filesystem::path& path);
std::string format_recording(const ImuRecording& rec);
void write_recording(const std::filesystem::path& path, const ImuRecording& rec);

// Events file: a header line followed by one JSON object per line,
//   {"kind":"bite","start_s":4.0}                 detected bite
//   {"kind":"bite","start_s":3.1,"end_s":7.6}     annotated bite interval
//   {"kind":"meal","start_s":100.0,"end_s":900.0}
inline constexpr const char* kEventsHeader = "# intake-events v1";

struct Event {
  enum class Kind { Bite, Meal };
  Kind kind;
  double start_s;
  std::optional<double> end_s;

  friend bool operator==(const Event&, const Event&) = default;
};

struct Events {
  std::vector<Event> records;

  BiteSet bite_moments() const;                      // bites without an end
  std::vector<BiteAnnotation> bite_intervals() const;  // bites with an end
  std::vector<MealAnnotation> meals() const;
  MealIntervalSet meal_intervals() const;

  static Events from(const BiteSet& bites);
  static Events from(std::span<const BiteAnnotation> bites, std::span<const MealAnnotation> meals);
  static Events from(std::span<const Interval> meals);
};

/// Sorts by start time and validates (meal end after start, meals disjoint).
Events normalize_events(Events ev);
Events parse_events(std::istream& in);
Events load_events(const std::filesystem::path& path);
std::string format_events(const Events& ev);
void write_events(const std::filesystem::path& path, const Events& ev);

// LOSO manifest (CSV with header `subject,kind,recording,events`); kind is
// `meal` for in-meal sessions and `free` for free-living ones. Relative
// paths resolve against the manifest's directory.
struct ManifestEntry {
  std::string subject;
  enum class Kind { Meal, FreeLiving } kind;
  std::filesystem::path recording;
  std::filesystem::path events;
};

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

}  // namespace intake
