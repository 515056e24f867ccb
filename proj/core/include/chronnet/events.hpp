#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chronnet {

/// One timestamped spatial occurrence. Integer ticks are stored exactly in `t`
/// (doubles represent integers up to 2^53 without loss).
struct Event {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  std::map<std::string, std::string> attrs;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Time-ordered (or not yet ordered) collection of events.
class EventSet {
 public:
  EventSet() = default;
  /// Validates finiteness and records whether the sequence is already
  /// non-decreasing in t.
  explicit EventSet(std::vector<Event> events);

  [[nodiscard]] const std::vector<Event>& events() const noexcept { return events_; }
  [[nodiscard]] std::size_t size() const noexcept { return events_.size(); }
  [[nodiscard]] bool empty() const noexcept { return events_.empty(); }
  [[nodiscard]] bool sorted() const noexcept { return sorted_; }
  [[nodiscard]] const Event& operator[](std::size_t i) const { return events_[i]; }

  /// max(t) - min(t); 0 for fewer than two events.
  [[nodiscard]] double time_span() const;
  [[nodiscard]] std::size_t distinct_timestamps() const;
  /// True when at least two events share a timestamp.
  [[nodiscard]] bool has_parallel_events() const;

  friend bool operator==(const EventSet&, const EventSet&) = default;

 private:
  std::vector<Event> events_;
  bool sorted_ = true;
};

enum class EventFormat { GenericCsv, Mcd14mlCsv };

/// Parses "generic-csv" / "mcd14ml-csv".
EventFormat parse_event_format(const std::string& name);

enum class TimeGranularity { Day, Minute };

struct FilterSpec {
  /// Rows with confidence <= this value are dropped (mcd14ml only).
  double min_confidence = 75.0;
  TimeGranularity granularity = TimeGranularity::Day;
  /// Optional "type" whitelist; empty keeps every type.
  std::vector<std::string> keep_types;
};

/// Reads events from a CSV file. The generic schema is `t,x,y[,attrs...]`;
/// the MCD14ML schema maps acq_date/acq_time to t, longitude to x and
/// latitude to y, and keeps confidence and type as attributes.
EventSet load_events(const std::filesystem::path& path, EventFormat format,
                     const FilterSpec& filters = {});
EventSet parse_events(std::istream& in, EventFormat format, const FilterSpec& filters = {},
                      const std::string& source = "<stream>");

/// Writes the generic CSV schema. The attribute columns are the union of all
/// attribute keys in sorted order.
void write_events(const EventSet& es, const std::filesystem::path& path);
void write_events(const EventSet& es, std::ostream& out);

/// Stable sort by t.
EventSet sort_events(EventSet es);

/// Run of events sharing one timestamp: indices [first, first + count).
struct TimeGroup {
  double t = 0.0;
  std::size_t first = 0;
  std::size_t count = 0;

  friend bool operator==(const TimeGroup&, const TimeGroup&) = default;
};

/// Collapses consecutive equal timestamps. Throws if `es` is not sorted.
std::vector<TimeGroup> group_parallel(const EventSet& es);

/// Days since 1970-01-01 for a "YYYY-MM-DD" or "YYYYMMDD" date.
long long parse_civil_day(const std::string& date);

}  // namespace chronnet
